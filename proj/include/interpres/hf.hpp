#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "interpres/fin_model.hpp"
#include "interpres/structure.hpp"

namespace interpres {

using BigNat = boost::multiprecision::cpp_int;

// Hereditarily finite set. Children are kept sorted by Ackermann code and
// deduplicated, so structural equality is code equality.
class HFSet {
 public:
  HFSet();  // the empty set
  static HFSet of(std::vector<HFSet> elements);
  static HFSet singleton(const HFSet& x) { return of({x}); }

  const std::vector<HFSet>& elements() const noexcept;
  std::size_t size() const noexcept { return elements().size(); }
  bool empty() const noexcept { return elements().empty(); }
  int rank() const noexcept;
  std::size_t hash() const noexcept;
  // Ackermann code when it is below 2^64.
  std::optional<std::uint64_t> small_code() const noexcept;
  bool contains(const HFSet& y) const;

  friend std::strong_ordering operator<=>(const HFSet& a, const HFSet& b);
  friend bool operator==(const HFSet& a, const HFSet& b);

 private:
  struct Node;
  static const std::shared_ptr<const Node>& empty_node();
  explicit HFSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct HFSetHash {
  std::size_t operator()(const HFSet& x) const noexcept { return x.hash(); }
};

// "{}" for the empty set, "{{},{{}}}" for {0, 1}; whitespace is ignored.
HFSet parse_hf(std::string_view text);
std::string render_hf(const HFSet& x);

constexpr std::size_t kDefaultEncodeBits = std::size_t{1} << 24;
constexpr std::uint64_t kDefaultDecodeCap = std::uint64_t{1} << 20;

BigNat ack_encode(const HFSet& x, std::size_t max_bits = kDefaultEncodeBits);
// Requires n < cap; bit positions of n are decoded recursively.
HFSet ack_decode(const BigNat& n, std::uint64_t cap = kDefaultDecodeCap);
HFSet ack_decode(std::uint64_t n, std::uint64_t cap = kDefaultDecodeCap);

// Elements of x, their elements, and so on (x itself excluded), ascending.
std::vector<HFSet> transitive_closure(const HFSet& x);
// TC({x}): the closure together with x.
std::vector<HFSet> closure_with(const HFSet& x);
int rank(const HFSet& x);
bool is_transitive(const HFSet& x);
bool is_ordinal(const HFSet& x);
HFSet von_neumann(int m);
HFSet hf_union(const HFSet& x, const HFSet& y);
// V_n listed in ascending code order, i.e. ack_decode(0 .. |V_n| - 1). n <= 5.
std::vector<HFSet> v_stage(int n);
HFSet v_stage_set(int n);

// Collapse of a well-founded relation, extensional modulo eq, where i E j
// means edge (i, j). Equivalent points collapse to the same set.
std::vector<HFSet> mostowski_collapse(const BinaryRelation& rel, const std::optional<EqRelation>& eq = std::nullopt);

struct CodedPair {
  int n = 1;
  std::vector<std::pair<int, int>> edges;
  int alpha = 0;
  BinaryRelation relation() const { return {n, edges}; }
};

CodedPair encode_coded_pair(const HFSet& x);
HFSet decode_coded_pair(const CodedPair& c);
bool coded_equiv(const CodedPair& c1, const CodedPair& c2);
bool coded_member(const CodedPair& c1, const CodedPair& c2);

struct DoubleStructure {
  int size = 0;
  std::vector<std::pair<int, int>> e1;
  std::vector<std::pair<int, int>> e2;
};

// The isomorphism <M,E1> -> <M,E2> matching equal collapse values, if any.
std::optional<std::vector<int>> canonical_double_iso(const DoubleStructure& d);

}  // namespace interpres

template <>
struct std::hash<interpres::HFSet> {
  std::size_t operator()(const interpres::HFSet& x) const noexcept { return x.hash(); }
};
