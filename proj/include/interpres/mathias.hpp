#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "interpres/hf.hpp"

namespace interpres {

constexpr unsigned kDefaultTowerCapBits = 4096;

// Natural number that is either exact (below 2^cap_bits) or a power tower
// 2^2^...^2^top with `depth` twos. Towers are kept in normal form
// cap_bits <= top < 2^cap_bits, which makes (depth, top) order the values.
class TowerInt {
 public:
  TowerInt() = default;
  static TowerInt exact(BigNat value, unsigned cap_bits = kDefaultTowerCapBits);
  static TowerInt tower(int depth, BigNat top, unsigned cap_bits = kDefaultTowerCapBits);

  TowerInt pow2() const;

  bool is_exact() const noexcept { return depth_ == 0; }
  int depth() const noexcept { return depth_; }
  const BigNat& top() const noexcept { return top_; }
  unsigned cap_bits() const noexcept { return cap_bits_; }

  // Decimal when exact, else "2^^d(top)".
  std::string render() const;

  friend std::strong_ordering operator<=>(const TowerInt& a, const TowerInt& b);
  friend bool operator==(const TowerInt& a, const TowerInt& b) { return (a <=> b) == 0; }

 private:
  int depth_ = 0;
  BigNat top_ = 0;
  unsigned cap_bits_ = kDefaultTowerCapBits;
};

std::strong_ordering tower_cmp(const TowerInt& a, const TowerInt& b);

// b_k(n): k twos stacked on n; b_0(n) = n.
TowerInt tower_b(int k, const BigNat& n, unsigned cap_bits = kDefaultTowerCapBits);
// |V_n|: 0, 1, 2, 4, 16, 65536, 2^65536, ...
TowerInt vcard(int n, unsigned cap_bits = kDefaultTowerCapBits);

struct GrowthProfile {
  std::vector<std::size_t> counts;  // counts[n] = |TC({x}) ∩ V_n| for n <= rank(x) + 1
  std::size_t constant = 0;         // |TC({x})|
  std::size_t at(std::size_t n) const { return n < counts.size() ? counts[n] : constant; }
};

GrowthProfile growth_profile(const HFSet& x);
// Least k with profile(n) <= b_k(n) for every n >= 1.
int min_depth(const HFSet& x);
int min_depth(const GrowthProfile& p);
// min_depth(V_m) computed from |V_n| without materializing V_m.
int min_depth_vstage(int m, unsigned cap_bits = kDefaultTowerCapBits);

struct ClosureReport {
  std::size_t checks = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

struct ClosureLimits {
  std::size_t max_subsets = 1 << 16;  // subsets y of P(x) tried per x
};

// Checks the closure clauses for C = {transitive x : min_depth(x) <= k} on
// the sample, keeping only results inside V_5.
ClosureReport fruitful_closure_check(int k, const std::vector<HFSet>& sample, const ClosureLimits& limits = {});

// x^(a): the empty set goes to a, x to {y^(a) : y in x}.
HFSet tower_sub(const HFSet& x, const HFSet& a);
// V^(a)_alpha; alpha <= 5.
std::vector<HFSet> zermelo_stage(const HFSet& a, int alpha);

constexpr std::size_t kDefaultDescentCap = 100000;

// Chains x = x_n, ..., x_0 = {} with each link a member of the previous one.
std::vector<std::vector<HFSet>> terminal_descents(const HFSet& x, std::size_t cap = kDefaultDescentCap);
// Every terminal descent from x passes through a.
bool in_tower(const HFSet& x, const HFSet& a);

}  // namespace interpres
