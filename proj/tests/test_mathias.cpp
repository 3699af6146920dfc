#include <doctest.h>

#include "interpres/error.hpp"
#include "interpres/hf.hpp"
#include "interpres/mathias.hpp"
#include "support.hpp"

using namespace interpres;
namespace t = interpres::testing;

namespace {

// 2^2^...^n by plain bignum arithmetic; nullopt once past 2^4096.
std::optional<BigNat> exact_b(int k, BigNat n) {
  for (int i = 0; i < k; ++i) {
    if (n >= 4096) return std::nullopt;
    n = BigNat(1) << static_cast<unsigned>(n);
  }
  return n;
}

std::size_t naive_profile(const HFSet& x, int n) {
  std::size_t c = 0;
  for (const auto& y : closure_with(x)) c += rank(y) < n;
  return c;
}

}  // namespace

TEST_CASE("b_k: examples") {
  CHECK(tower_b(0, 5) == TowerInt::exact(5));
  CHECK(tower_b(1, 3) == TowerInt::exact(8));
  CHECK(tower_b(2, 2) == TowerInt::exact(16));
  for (int n = 0; n <= 100; ++n) CHECK(tower_b(0, n) == TowerInt::exact(n));
  // 2^(2^64) is past the exact range, and its normal form keeps the exponent
  TowerInt b36 = tower_b(3, 6);
  CHECK(b36.depth() == 1);
  CHECK(b36.top() == BigNat(1) << 64);
  CHECK(b36.render() == "2^^1(18446744073709551616)");
}

TEST_CASE("b_k matches plain arithmetic where it is exact") {
  for (int k = 0; k <= 4; ++k)
    for (int n = 0; n <= 20; ++n) {
      auto want = exact_b(k, n);
      TowerInt got = tower_b(k, n);
      if (want && *want < BigNat(1) << 4096) {
        CHECK(got.is_exact());
        CHECK(got == TowerInt::exact(*want));
      } else {
        CHECK_FALSE(got.is_exact());
      }
    }
}

TEST_CASE("b_k is strictly increasing in k") {
  for (int k = 0; k <= 5; ++k)
    for (int n = 1; n <= 20; ++n) CHECK(tower_b(k, n) < tower_b(k + 1, n));
}

TEST_CASE("vcard") {
  CHECK(vcard(0) == TowerInt::exact(0));
  CHECK(vcard(1) == TowerInt::exact(1));
  CHECK(vcard(5) == TowerInt::exact(65536));
  CHECK(vcard(6) == TowerInt::tower(1, 65536));
  CHECK(vcard(7) == TowerInt::tower(2, 65536));
  CHECK(vcard(7).render() == "2^^2(65536)");
  for (int n = 0; n <= 5; ++n) CHECK(vcard(n) == TowerInt::exact(v_stage(n).size()));
}

TEST_CASE("tower_cmp: examples") {
  CHECK(tower_cmp(TowerInt::exact(65536), TowerInt::tower(1, 16)) == std::strong_ordering::equal);
  CHECK(tower_cmp(vcard(6), tower_b(3, 6)) == std::strong_ordering::less);
  CHECK(tower_cmp(TowerInt::tower(2, 5000), TowerInt::tower(3, 4096)) == std::strong_ordering::less);
  CHECK(tower_cmp(TowerInt::exact(BigNat(1) << 4095), TowerInt::tower(1, 4096)) == std::strong_ordering::less);
}

TEST_CASE("tower_cmp is reflexive and agrees with exact arithmetic") {
  t::Rng rng(97);
  auto random_big = [&]() -> BigNat {
    BigNat v = 0;
    const int words = t::uniform(rng, 0, 64);
    for (int w = 0; w < words; ++w) v = (v << 64) + rng();
    return v >> t::uniform(rng, 0, 63);
  };
  for (int i = 0; i < 500; ++i) {
    BigNat a = random_big(), b = t::coin(rng, 0.1) ? a : random_big();
    TowerInt ta = TowerInt::exact(a), tb = TowerInt::exact(b);
    CHECK(tower_cmp(ta, tb) == (a.compare(b) <=> 0));
    TowerInt deep = TowerInt::tower(t::uniform(rng, 1, 4), 4096 + (random_big() >> 128));
    CHECK(tower_cmp(deep, deep) == std::strong_ordering::equal);
    CHECK(tower_cmp(ta, deep) == std::strong_ordering::less);
  }
  // pow2 of an exact value below the cap equals the shifted exact value
  for (unsigned e = 0; e < 4096; e += 97) CHECK(TowerInt::exact(e).pow2() == TowerInt::exact(BigNat(1) << e));
}

TEST_CASE("growth profile: examples") {
  GrowthProfile empty = growth_profile(HFSet());
  CHECK(empty.counts == std::vector<std::size_t>{0, 1});
  CHECK(empty.constant == 1);
  CHECK(empty.at(7) == 1);

  GrowthProfile three = growth_profile(von_neumann(3));
  for (int n = 0; n <= 4; ++n) CHECK(three.at(n) == std::min<std::size_t>(4, n));

  GrowthProfile v4 = growth_profile(v_stage_set(4));
  CHECK(v4.at(5) == 17);
  CHECK(v4.at(4) == 16);
}

TEST_CASE("growth profile matches counting and is bounded by the power set") {
  t::Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    HFSet x = t::random_transitive(rng, 20);
    GrowthProfile p = growth_profile(x);
    for (int n = 0; n <= rank(x) + 2; ++n) {
      CHECK(p.at(n) == naive_profile(x, n));
      if (n >= 1) CHECK(p.at(n) >= p.at(n - 1));
      if (p.at(n) < 20) CHECK(p.at(n + 1) <= (std::size_t{1} << p.at(n)));
    }
  }
}

TEST_CASE("min_depth: examples") {
  CHECK(min_depth(HFSet()) == 0);
  for (int m = 0; m <= 6; ++m) CHECK(min_depth(von_neumann(m)) == 0);
  CHECK(min_depth(v_stage_set(4)) == 1);
  CHECK(min_depth_vstage(4) == 1);
  CHECK(min_depth(v_stage_set(3)) == min_depth_vstage(3));
  CHECK(min_depth(v_stage_set(5)) == min_depth_vstage(5));
}

TEST_CASE("min_depth against a brute-force search over k") {
  t::Rng rng(103);
  for (int i = 0; i < 200; ++i) {
    HFSet x = t::random_transitive(rng, 24);
    GrowthProfile p = growth_profile(x);
    int k = 0;
    for (;; ++k) {
      bool ok = true;
      for (int n = 1; n <= rank(x) + 2; ++n) {
        auto b = exact_b(k, n);
        ok = ok && (!b || BigNat(p.at(n)) <= *b);
      }
      if (ok) break;
    }
    CHECK(min_depth(x) == k);
  }
}

TEST_CASE("min_depth of V_m never decreases") {
  int previous = 0;
  for (int m = 3; m <= 9; ++m) {
    const int d = min_depth_vstage(m);
    CHECK(d >= previous);
    previous = d;
  }
  CHECK(min_depth_vstage(6) == 3);
}

TEST_CASE("closure clauses") {
  CHECK(fruitful_closure_check(0, {HFSet()}).ok());
  std::vector<HFSet> transitive;
  for (const auto& x : v_stage(4))
    if (is_transitive(x)) transitive.push_back(x);
  CHECK(transitive.size() == 6);
  ClosureReport r = fruitful_closure_check(2, transitive);
  CHECK(r.ok());
  CHECK(r.checks > 1000);
  // with K = 0 only the power-set clause can fail: 2 u {{0}} already has depth 1
  ClosureReport ordinals = fruitful_closure_check(0, {von_neumann(2), von_neumann(4)});
  CHECK_FALSE(ordinals.ok());
  for (const auto& v : ordinals.violations) CHECK(v.rfind("clause 4", 0) == 0);
  CHECK(min_depth(hf_union(von_neumann(2), von_neumann(4))) == 0);
  CHECK_THROWS_AS(fruitful_closure_check(2, {parse_hf("{{{}}}")}), ValidationError);
}

TEST_CASE("tower substitution: examples") {
  const auto v3 = v_stage(3), v4 = v_stage(4);
  for (const auto& a : v3) CHECK(tower_sub(HFSet(), a) == a);
  for (const auto& x : v4) CHECK(tower_sub(x, HFSet()) == x);
  HFSet one = HFSet::singleton(HFSet());
  CHECK(tower_sub(one, one) == HFSet::singleton(one));
}

TEST_CASE("tower substitution is an injective membership embedding on V4") {
  const auto v3 = v_stage(3), v4 = v_stage(4);
  for (const auto& a : v3) {
    std::set<HFSet> image;
    for (const auto& x : v4) {
      HFSet xa = tower_sub(x, a);
      image.insert(xa);
      CHECK(in_tower(xa, a));
      for (const auto& y : v4) CHECK(x.contains(y) == xa.contains(tower_sub(y, a)));
    }
    CHECK(image.size() == v4.size());
  }
}

TEST_CASE("zermelo stages") {
  HFSet one = HFSet::singleton(HFSet());
  CHECK(zermelo_stage(one, 0).empty());
  CHECK(zermelo_stage(one, 1) == std::vector<HFSet>{one});
  for (const auto& a : v_stage(3))
    for (int alpha = 0; alpha <= 4; ++alpha) {
      auto stage = zermelo_stage(a, alpha);
      CHECK(stage.size() == v_stage(alpha).size());
      std::vector<HFSet> image;
      for (const auto& x : v_stage(alpha)) image.push_back(tower_sub(x, a));
      std::sort(image.begin(), image.end());
      std::sort(stage.begin(), stage.end());
      CHECK(stage == image);
    }
}

TEST_CASE("terminal descents: examples") {
  HFSet zero;
  HFSet one = HFSet::singleton(zero);
  HFSet single_one = HFSet::singleton(one);
  HFSet two = HFSet::of({zero, one});
  CHECK(in_tower(two, two));
  CHECK(in_tower(single_one, one));
  CHECK(terminal_descents(single_one) == std::vector<std::vector<HFSet>>{{single_one, one, zero}});
  CHECK_FALSE(in_tower(two, one));
  CHECK(terminal_descents(two).size() == 2);
  CHECK(terminal_descents(zero) == std::vector<std::vector<HFSet>>{{zero}});
  CHECK_THROWS_AS(terminal_descents(von_neumann(12), 100), CapExceeded);
}

TEST_CASE("in_tower agrees with enumerated descents") {
  const auto v4 = v_stage(4);
  for (const auto& x : v4)
    for (const auto& a : v_stage(3)) {
      bool every = true;
      for (const auto& chain : terminal_descents(x)) every = every && std::find(chain.begin(), chain.end(), a) != chain.end();
      CHECK(in_tower(x, a) == every);
    }
  // descents from the ordinal m number 2^(m-1)
  for (int m = 1; m <= 8; ++m) CHECK(terminal_descents(von_neumann(m)).size() == (std::size_t{1} << (m - 1)));
}
