#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "interpres/signature.hpp"

namespace interpres {

// Relation table over the domain {0..n-1}. Small tables also keep a dense
// bit index for constant-time lookup.
class Relation {
 public:
  Relation(int arity, int domain_size);

  int arity() const noexcept { return arity_; }
  int domain_size() const noexcept { return domain_size_; }
  std::size_t size() const noexcept { return tuples_.size(); }

  void insert(std::span<const int> tuple);
  bool contains(std::span<const int> tuple) const;
  const std::set<Tuple>& tuples() const noexcept { return tuples_; }

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.arity_ == b.arity_ && a.domain_size_ == b.domain_size_ && a.tuples_ == b.tuples_;
  }

 private:
  std::size_t index(std::span<const int> tuple) const;

  int arity_;
  int domain_size_;
  std::set<Tuple> tuples_;
  std::vector<bool> dense_;
};

// Finite first-order structure. Every relation symbol of the signature has a
// table and every constant symbol has a value.
class FinStructure {
 public:
  FinStructure() = default;
  FinStructure(int size, Signature signature);

  int size() const noexcept { return size_; }
  const Signature& signature() const noexcept { return signature_; }

  void add_tuple(const std::string& relation, std::span<const int> tuple);
  void add_tuple(const std::string& relation, std::initializer_list<int> tuple) {
    add_tuple(relation, std::span<const int>(tuple.begin(), tuple.size()));
  }
  void set_constant(const std::string& name, int element);

  const Relation& relation(std::string_view name) const;
  const Relation* find_relation(std::string_view name) const;
  int constant(std::string_view name) const;
  const std::map<std::string, Relation, std::less<>>& relations() const { return relations_; }
  const std::map<std::string, int, std::less<>>& constants() const { return constants_; }

  // Copy with extra constant symbols naming the given elements.
  FinStructure with_constants(const std::vector<std::pair<std::string, int>>& named) const;

  friend bool operator==(const FinStructure&, const FinStructure&) = default;

 private:
  int size_ = 0;
  Signature signature_;
  std::map<std::string, Relation, std::less<>> relations_;
  std::map<std::string, int, std::less<>> constants_;
};

// Binary relation as an edge list; (i, j) reads "i E j".
struct BinaryRelation {
  int size = 0;
  std::vector<std::pair<int, int>> edges;

  friend bool operator==(const BinaryRelation&, const BinaryRelation&) = default;
};

FinStructure to_structure(const BinaryRelation& rel, const std::string& symbol = "E");
BinaryRelation binary_relation(const FinStructure& m, std::string_view symbol);
// The unique binary relation symbol of m; throws ValidationError otherwise.
std::string sole_binary_symbol(const FinStructure& m);

}  // namespace interpres
