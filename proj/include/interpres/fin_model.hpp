#pragma once

#include <limits>
#include <vector>

#include "interpres/structure.hpp"

namespace interpres {

// Binary relation on a domain, intended to be an equivalence. Validity is
// checked on use, not on construction.
class EqRelation {
 public:
  explicit EqRelation(int size = 0);

  static EqRelation identity(int size);
  static EqRelation from_classes(int size, const std::vector<std::vector<int>>& classes);
  // Exactly the given pairs, no closure.
  static EqRelation from_pairs(int size, const std::vector<std::pair<int, int>>& pairs);

  int size() const noexcept { return size_; }
  void relate(int a, int b);
  bool related(int a, int b) const;

  bool is_equivalence() const;
  bool is_identity() const;
  // Class number per element; classes numbered in order of least member.
  // Requires an equivalence.
  std::vector<int> class_index() const;
  std::vector<std::pair<int, int>> pairs() const;

  friend bool operator==(const EqRelation&, const EqRelation&) = default;

 private:
  int size_;
  std::vector<char> table_;
};

bool check_congruence(const FinStructure& m, const EqRelation& eq);

struct Quotient {
  FinStructure structure;
  std::vector<int> projection;  // element -> class index
};

// Classes indexed by least representative. Throws ValidationError unless eq is
// a congruence.
Quotient quotient(const FinStructure& m, const EqRelation& eq);

struct IsoLimits {
  int max_size = 8;
  std::size_t max_results = std::numeric_limits<std::size_t>::max();  // stop after this many
};

// All isomorphisms A -> B as arrays f with f[a] = b, in lexicographic order.
std::vector<std::vector<int>> find_isomorphisms(const FinStructure& a, const FinStructure& b,
                                                const IsoLimits& limits = {});

bool is_wellfounded(const BinaryRelation& rel);
bool is_extensional(const BinaryRelation& rel, const EqRelation& eq);
bool is_extensional(const BinaryRelation& rel);

}  // namespace interpres
