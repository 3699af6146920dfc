#include "interpres/mathias.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "interpres/error.hpp"

namespace interpres {

namespace {

bool is_power_of_two(const BigNat& v) { return v > 0 && (v & (v - 1)) == 0; }

BigNat two_to(const BigNat& e) {
  BigNat out = 0;
  boost::multiprecision::bit_set(out, e.convert_to<unsigned>());
  return out;
}

// v >= 2^bits
bool at_least_pow2(const BigNat& v, unsigned bits) { return v > 0 && boost::multiprecision::msb(v) >= bits; }

}  // namespace

TowerInt TowerInt::exact(BigNat value, unsigned cap_bits) {
  if (value < 0) throw std::invalid_argument("TowerInt: negative value");
  if (cap_bits == 0) throw std::invalid_argument("TowerInt: cap must be positive");
  if (at_least_pow2(value, cap_bits)) {
    if (!is_power_of_two(value)) throw CapExceeded("TowerInt: exact value above the cap is not a power of two");
    return tower(1, BigNat(boost::multiprecision::msb(value)), cap_bits);
  }
  TowerInt t;
  t.top_ = std::move(value);
  t.cap_bits_ = cap_bits;
  return t;
}

TowerInt TowerInt::tower(int depth, BigNat top, unsigned cap_bits) {
  if (depth < 0 || top < 0) throw std::invalid_argument("TowerInt: negative depth or top");
  if (cap_bits == 0) throw std::invalid_argument("TowerInt: cap must be positive");
  if (depth == 0) return exact(std::move(top), cap_bits);
  while (at_least_pow2(top, cap_bits)) {
    if (!is_power_of_two(top)) throw CapExceeded("TowerInt: tower top above the cap is not a power of two");
    top = BigNat(boost::multiprecision::msb(top));
    ++depth;
  }
  while (depth > 0 && top < cap_bits) {
    top = two_to(top);
    --depth;
  }
  TowerInt t;
  t.depth_ = depth;
  t.top_ = std::move(top);
  t.cap_bits_ = cap_bits;
  return t;
}

TowerInt TowerInt::pow2() const {
  if (depth_ == 0) {
    if (top_ < cap_bits_) return exact(two_to(top_), cap_bits_);
    return tower(1, top_, cap_bits_);
  }
  TowerInt t = *this;
  ++t.depth_;
  return t;
}

std::string TowerInt::render() const {
  if (depth_ == 0) return top_.str();
  return "2^^" + std::to_string(depth_) + "(" + top_.str() + ")";
}

std::strong_ordering operator<=>(const TowerInt& a, const TowerInt& b) {
  if (a.cap_bits_ != b.cap_bits_) throw std::invalid_argument("TowerInt: comparing values with different caps");
  if (a.depth_ != b.depth_) return a.depth_ <=> b.depth_;
  if (a.top_ == b.top_) return std::strong_ordering::equal;
  return a.top_ < b.top_ ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::strong_ordering tower_cmp(const TowerInt& a, const TowerInt& b) { return a <=> b; }

TowerInt tower_b(int k, const BigNat& n, unsigned cap_bits) {
  if (k < 0) throw std::invalid_argument("tower_b: negative k");
  TowerInt x = TowerInt::exact(n, cap_bits);
  for (int i = 0; i < k; ++i) x = x.pow2();
  return x;
}

TowerInt vcard(int n, unsigned cap_bits) {
  if (n < 0) throw std::invalid_argument("vcard: negative stage");
  TowerInt x = TowerInt::exact(0, cap_bits);
  for (int i = 0; i < n; ++i) x = x.pow2();
  return x;
}

// ------------------------------------------------------------- profiles

GrowthProfile growth_profile(const HFSet& x) {
  const auto items = closure_with(x);
  GrowthProfile p;
  p.constant = items.size();
  p.counts.assign(static_cast<std::size_t>(x.rank()) + 2, 0);
  for (const auto& y : items)
    for (std::size_t n = static_cast<std::size_t>(y.rank()) + 1; n < p.counts.size(); ++n) ++p.counts[n];
  return p;
}

int min_depth(const GrowthProfile& p) {
  for (int k = 0;; ++k) {
    bool ok = true;
    for (std::size_t n = 1; n < p.counts.size() && ok; ++n)
      ok = tower_b(k, n) >= TowerInt::exact(p.counts[n]);
    if (ok) return k;
  }
}

int min_depth(const HFSet& x) { return min_depth(growth_profile(x)); }

int min_depth_vstage(int m, unsigned cap_bits) {
  if (m < 0) throw std::invalid_argument("min_depth_vstage: negative stage");
  if (m == 0) return 0;
  const TowerInt last = vcard(m, cap_bits);
  for (int k = 0;; ++k) {
    bool ok = last < tower_b(k, m + 1, cap_bits);
    for (int n = 1; n <= m && ok; ++n) ok = vcard(n, cap_bits) <= tower_b(k, n, cap_bits);
    if (ok) return k;
  }
}

// ------------------------------------------------------------ fruitful

ClosureReport fruitful_closure_check(int k, const std::vector<HFSet>& sample, const ClosureLimits& limits) {
  for (const auto& x : sample) {
    if (x.rank() >= 5) throw ValidationError("sample member " + render_hf(x) + " is not in V_5");
    if (!is_transitive(x)) throw ValidationError("sample member " + render_hf(x) + " is not transitive");
  }
  std::map<HFSet, bool> memo;
  auto in_c = [&](const HFSet& x) {
    auto it = memo.find(x);
    if (it != memo.end()) return it->second;
    bool v = is_transitive(x) && min_depth(x) <= k;
    memo.emplace(x, v);
    return v;
  };
  ClosureReport r;
  for (int m = 0; m < 5; ++m) {
    ++r.checks;
    if (!in_c(von_neumann(m))) r.violations.push_back("clause 2: ordinal " + std::to_string(m) + " is not in C");
  }
  std::vector<HFSet> members;
  for (const auto& x : sample)
    if (in_c(x)) members.push_back(x);
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i; j < members.size(); ++j) {
      HFSet u = hf_union(members[i], members[j]);
      if (u.rank() >= 5) continue;
      ++r.checks;
      if (!in_c(u))
        r.violations.push_back("clause 3: " + render_hf(members[i]) + " ∪ " + render_hf(members[j]) + " is not in C");
    }

  for (const auto& x : members) {
    const auto& xs = x.elements();
    std::vector<HFSet> power;
    const std::size_t subsets_of_x = std::size_t{1} << xs.size();
    for (std::size_t mask = 0; mask < subsets_of_x; ++mask) {
      std::vector<HFSet> kids;
      for (std::size_t b = 0; b < xs.size(); ++b)
        if (mask >> b & 1U) kids.push_back(xs[b]);
      power.push_back(HFSet::of(std::move(kids)));
    }
    std::size_t tries = limits.max_subsets;
    if (power.size() < 63) tries = std::min<std::size_t>(tries, std::size_t{1} << power.size());
    for (std::size_t mask = 0; mask < tries; ++mask) {
      std::vector<HFSet> kids(xs.begin(), xs.end());
      for (std::size_t b = 0; b < power.size() && b < 64; ++b)
        if (mask >> b & 1U) kids.push_back(power[b]);
      HFSet u = HFSet::of(std::move(kids));
      if (u.rank() >= 5) continue;
      ++r.checks;
      if (!in_c(u)) r.violations.push_back("clause 4: " + render_hf(u) + " built from " + render_hf(x) + " is not in C");
    }
  }
  return r;
}

// ------------------------------------------------------- Zermelo tower

HFSet tower_sub(const HFSet& x, const HFSet& a) {
  std::map<HFSet, HFSet> memo;
  std::function<HFSet(const HFSet&)> go = [&](const HFSet& y) -> HFSet {
    if (y.empty()) return a;
    auto it = memo.find(y);
    if (it != memo.end()) return it->second;
    std::vector<HFSet> kids;
    for (const auto& z : y.elements()) kids.push_back(go(z));
    HFSet out = HFSet::of(std::move(kids));
    memo.emplace(y, out);
    return out;
  };
  return go(x);
}

std::vector<HFSet> zermelo_stage(const HFSet& a, int alpha) {
  if (alpha < 0) throw std::invalid_argument("zermelo_stage: negative stage");
  if (alpha > 5) throw CapExceeded("zermelo_stage is materialized only for alpha <= 5");
  std::vector<HFSet> cur;
  for (int i = 0; i < alpha; ++i) {
    if (cur.size() > 16) throw CapExceeded("zermelo_stage: stage too large to take its power set");
    std::vector<HFSet> next{a};
    const std::size_t count = std::size_t{1} << cur.size();
    for (std::size_t mask = 1; mask < count; ++mask) {
      std::vector<HFSet> kids;
      for (std::size_t b = 0; b < cur.size(); ++b)
        if (mask >> b & 1U) kids.push_back(cur[b]);
      next.push_back(HFSet::of(std::move(kids)));
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    cur = std::move(next);
  }
  return cur;
}

std::vector<std::vector<HFSet>> terminal_descents(const HFSet& x, std::size_t cap) {
  std::map<HFSet, std::size_t> count;
  std::function<std::size_t(const HFSet&)> how_many = [&](const HFSet& y) -> std::size_t {
    if (y.empty()) return 1;
    auto it = count.find(y);
    if (it != count.end()) return it->second;
    std::size_t total = 0;
    for (const auto& z : y.elements()) total = std::min(total + how_many(z), cap + 1);
    count.emplace(y, total);
    return total;
  };
  if (how_many(x) > cap) throw CapExceeded("more than " + std::to_string(cap) + " terminal descents");

  std::vector<std::vector<HFSet>> out;
  std::vector<HFSet> chain;
  std::function<void(const HFSet&)> walk = [&](const HFSet& y) {
    chain.push_back(y);
    if (y.empty()) out.push_back(chain);
    for (const auto& z : y.elements()) walk(z);
    chain.pop_back();
  };
  walk(x);
  return out;
}

bool in_tower(const HFSet& x, const HFSet& a) {
  std::map<HFSet, bool> memo;
  std::function<bool(const HFSet&)> go = [&](const HFSet& y) -> bool {
    if (y == a) return true;
    if (y.empty()) return false;
    auto it = memo.find(y);
    if (it != memo.end()) return it->second;
    bool v = std::all_of(y.elements().begin(), y.elements().end(), go);
    memo.emplace(y, v);
    return v;
  };
  return go(x);
}

}  // namespace interpres
