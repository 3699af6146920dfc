#include <doctest.h>

#include "interpres/error.hpp"
#include "interpres/fin_model.hpp"
#include "interpres/hf.hpp"
#include "support.hpp"

using namespace interpres;
namespace t = interpres::testing;

namespace {

const HFSet kEmpty;
const HFSet kOne = HFSet::singleton(kEmpty);             // {0}
const HFSet kTwo = HFSet::of({kEmpty, kOne});           // {0,{0}}
const HFSet kSingleOne = HFSet::singleton(kOne);        // {{0}}

BinaryRelation ackermann_relation(int n) {
  BinaryRelation r{n, {}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if ((j >> i) & 1) r.edges.emplace_back(i, j);
  return r;
}

// Collapse by plain recursion on predecessor sets.
HFSet naive_collapse(const BinaryRelation& r, int i) {
  std::vector<HFSet> kids;
  for (auto [a, b] : r.edges)
    if (b == i) kids.push_back(naive_collapse(r, a));
  return HFSet::of(kids);
}

}  // namespace

TEST_CASE("literals") {
  CHECK(parse_hf("{}") == kEmpty);
  CHECK(parse_hf(" { {} , {{}} } ") == kTwo);
  CHECK(parse_hf("{{},{}}") == kOne);
  CHECK(render_hf(kTwo) == "{{},{{}}}");
  CHECK_THROWS_AS(parse_hf("{{}"), ParseError);
  CHECK_THROWS_AS(parse_hf("{x}"), ParseError);
}

TEST_CASE("ackermann: examples") {
  CHECK(ack_encode(kEmpty) == 0);
  CHECK(ack_decode(std::uint64_t{0}) == kEmpty);
  CHECK(ack_decode(std::uint64_t{3}) == kTwo);
  CHECK(ack_encode(kOne) == 1);
  CHECK(ack_encode(kSingleOne) == 2);
  CHECK(ack_encode(parse_hf("{{},{{}}}")) == 3);
  CHECK(ack_encode(HFSet::singleton(kTwo)) == 8);
  CHECK(ack_encode(v_stage_set(4)) == 65535);
  CHECK(ack_encode(v_stage_set(5)) == (BigNat(1) << 65536) - 1);
  CHECK_THROWS_AS(ack_decode(std::uint64_t{1} << 20), CapExceeded);
  CHECK_THROWS_AS(ack_encode(HFSet::singleton(v_stage_set(5)), 1 << 16), CapExceeded);
}

TEST_CASE("ackermann: round trips and the bit rule") {
  for (std::uint64_t n = 0; n < (1u << 12); ++n) {
    HFSet x = ack_decode(n);
    REQUIRE(ack_encode(x) == n);
    REQUIRE(x.small_code() == n);
    BigNat sum = 0;
    for (const auto& y : x.elements()) sum += BigNat(1) << static_cast<unsigned>(*y.small_code());
    REQUIRE(sum == n);
  }
  const auto v4 = v_stage(4);
  for (const auto& x : v4)
    for (const auto& y : v4) {
      const auto cx = *x.small_code(), cy = *y.small_code();
      CHECK(x.contains(y) == (((cx >> cy) & 1) == 1));
    }
}

TEST_CASE("ordering follows the code") {
  const auto v4 = v_stage(4);
  for (std::size_t i = 0; i + 1 < v4.size(); ++i) CHECK(v4[i] < v4[i + 1]);
  t::Rng rng(71);
  for (int i = 0; i < 500; ++i) {
    HFSet a = t::random_transitive(rng, 12), b = t::random_transitive(rng, 12);
    CHECK(((a <=> b) == 0) == (a == b));
    CHECK(((a <=> b) < 0) == (ack_encode(a) < ack_encode(b)));
  }
}

TEST_CASE("closure and rank: examples") {
  CHECK(transitive_closure(kTwo) == std::vector<HFSet>{kEmpty, kOne});
  CHECK(rank(kTwo) == 2);
  CHECK(transitive_closure(kEmpty).empty());
  CHECK(rank(kEmpty) == 0);
  for (int m = 0; m <= 6; ++m) {
    CHECK(rank(von_neumann(m)) == m);
    CHECK(is_ordinal(von_neumann(m)));
  }
  CHECK(closure_with(kSingleOne) == std::vector<HFSet>{kEmpty, kOne, kSingleOne});
  CHECK(is_transitive(kTwo));
  CHECK_FALSE(is_transitive(kSingleOne));
  CHECK_FALSE(is_ordinal(parse_hf("{{},{{}},{{{}}}}")));
}

TEST_CASE("closure is the least transitive superset") {
  t::Rng rng(73);
  for (int i = 0; i < 300; ++i) {
    HFSet x = ack_decode(static_cast<std::uint64_t>(t::uniform(rng, 0, 65535)));
    auto tc = transitive_closure(x);
    HFSet as_set = HFSet::of(tc);
    CHECK(is_transitive(as_set));
    for (const auto& y : x.elements()) CHECK(as_set.contains(y));
    // removing any member that is not an element of x breaks transitivity
    for (const auto& z : tc) {
      if (x.contains(z)) continue;
      std::vector<HFSet> fewer;
      for (const auto& w : tc)
        if (!(w == z)) fewer.push_back(w);
      HFSet smaller = HFSet::of(fewer);
      bool still = is_transitive(smaller);
      for (const auto& y : x.elements()) still = still && smaller.contains(y);
      CHECK_FALSE(still);
    }
  }
}

TEST_CASE("stages") {
  CHECK(v_stage(0).empty());
  CHECK(v_stage(2) == std::vector<HFSet>{kEmpty, kOne});
  const std::size_t sizes[] = {0, 1, 2, 4, 16, 65536};
  for (int n = 0; n <= 5; ++n) CHECK(v_stage(n).size() == sizes[n]);
  for (int n = 0; n <= 4; ++n) {
    auto a = v_stage(n), b = t::stage_by_powerset(n);
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
  CHECK_THROWS_AS(v_stage(6), CapExceeded);
}

TEST_CASE("collapse: examples") {
  auto pi = mostowski_collapse(BinaryRelation{3, {{0, 1}, {0, 2}, {1, 2}}});
  CHECK(pi == std::vector<HFSet>{kEmpty, kOne, kTwo});
  auto ack = mostowski_collapse(ackermann_relation(16));
  for (int i = 0; i < 16; ++i) CHECK(ack[i] == ack_decode(static_cast<std::uint64_t>(i)));
  CHECK(mostowski_collapse(BinaryRelation{1, {}}) == std::vector<HFSet>{kEmpty});

  CHECK_THROWS_AS(mostowski_collapse(BinaryRelation{2, {{0, 1}, {1, 0}}}), ValidationError);
  CHECK_THROWS_AS(mostowski_collapse(BinaryRelation{2, {}}), ValidationError);
}

TEST_CASE("collapse modulo an equivalence") {
  BinaryRelation r{3, {{0, 1}, {0, 2}}};
  auto pi = mostowski_collapse(r, EqRelation::from_classes(3, {{0}, {1, 2}}));
  CHECK(pi == std::vector<HFSet>{kEmpty, kOne, kOne});
  // predecessors of 3 and 0 are matched class by class, so this is fine
  BinaryRelation s{4, {{0, 1}, {3, 2}}};
  CHECK(mostowski_collapse(s, EqRelation::from_classes(4, {{0, 3}, {1, 2}})) ==
        std::vector<HFSet>{kEmpty, kOne, kOne, kEmpty});
  // 1 and 2 have predecessors in different classes
  BinaryRelation u{3, {{0, 1}}};
  CHECK_THROWS_AS(mostowski_collapse(u, EqRelation::from_classes(3, {{0}, {1, 2}})), ValidationError);
}

TEST_CASE("collapse is the unique embedding onto its image") {
  t::Rng rng(79);
  int tested = 0;
  for (int trial = 0; trial < 3000 && tested < 300; ++trial) {
    const int n = t::uniform(rng, 1, 6);
    BinaryRelation r{n, {}};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && t::coin(rng, 0.4)) r.edges.emplace_back(i, j);
    if (t::has_cycle(r) || !t::naive_extensional(r)) {
      CHECK_THROWS_AS(mostowski_collapse(r), ValidationError);
      continue;
    }
    ++tested;
    auto pi = mostowski_collapse(r);
    for (int i = 0; i < n; ++i) CHECK(pi[i] == naive_collapse(r, i));
    std::set<HFSet> image(pi.begin(), pi.end());
    CHECK(static_cast<int>(image.size()) == n);
    std::vector<HFSet> listed(image.begin(), image.end());
    FinStructure target = t::membership_structure(listed);
    CHECK(t::brute_iso_count(to_structure(r), target) == 1);
  }
  CHECK(tested >= 100);
}

TEST_CASE("coded pairs: examples") {
  CodedPair one = encode_coded_pair(kOne);
  CHECK(one.n == 2);
  CHECK(one.edges == std::vector<std::pair<int, int>>{{0, 1}});
  CHECK(one.alpha == 1);
  CodedPair zero = encode_coded_pair(kEmpty);
  CHECK(zero.n == 1);
  CHECK(zero.edges.empty());
  CHECK(zero.alpha == 0);
  for (const auto& x : v_stage(4)) CHECK(decode_coded_pair(encode_coded_pair(x)) == x);

  CodedPair two = encode_coded_pair(kTwo);
  CodedPair shuffled{3, {{2, 0}, {2, 1}, {0, 1}}, 1};  // 2 is the empty set, 0 is {2}
  CHECK(decode_coded_pair(shuffled) == kTwo);
  CHECK(coded_equiv(two, shuffled));
  CHECK(coded_equiv(two, two));
  CHECK_FALSE(coded_equiv(zero, one));
  CHECK(coded_member(zero, one));
  CHECK_FALSE(coded_member(one, zero));
  CHECK(coded_member(one, shuffled));
  CHECK_THROWS_AS(decode_coded_pair(CodedPair{2, {}, 0}), ValidationError);
  CHECK_THROWS_AS(decode_coded_pair(CodedPair{1, {}, 3}), ValidationError);
}

TEST_CASE("coded pairs agree with decoding") {
  t::Rng rng(83);
  auto v5 = v_stage(5);
  for (int i = 0; i < 100; ++i) {
    const HFSet& x = v5[t::uniform(rng, 0, 65535)];
    CHECK(decode_coded_pair(encode_coded_pair(x)) == x);
  }
  auto v4 = v_stage(4);
  for (int i = 0; i < 200; ++i) {
    const HFSet& x = v4[t::uniform(rng, 0, 15)];
    const HFSet& y = v4[t::uniform(rng, 0, 15)];
    CodedPair cx = encode_coded_pair(x), cy = encode_coded_pair(y);
    CHECK(coded_member(cx, cy) == y.contains(x));
    CHECK(coded_equiv(cx, cy) == (x == y));
  }
}

TEST_CASE("double membership: examples") {
  CHECK(canonical_double_iso({3, {{0, 1}, {1, 2}, {0, 2}}, {{0, 1}, {1, 2}, {0, 2}}}) == std::vector<int>{0, 1, 2});
  CHECK(canonical_double_iso({2, {{0, 1}}, {{1, 0}}}) == std::vector<int>{1, 0});
  // {0,{0},{{0}}} against {0,{0},{0,{0}}}
  DoubleStructure d{3, {{0, 1}, {1, 2}}, {{0, 1}, {0, 2}, {1, 2}}};
  CHECK_FALSE(canonical_double_iso(d).has_value());
  CHECK_THROWS_AS(canonical_double_iso({2, {}, {{0, 1}}}), ValidationError);
}

TEST_CASE("double membership: agrees with the isomorphism oracle") {
  t::Rng rng(89);
  int tested = 0;
  auto random_wfe = [&](int n) {
    for (;;) {
      BinaryRelation r{n, {}};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j && t::coin(rng, 0.45)) r.edges.emplace_back(i, j);
      if (!t::has_cycle(r) && t::naive_extensional(r)) return r;
    }
  };
  for (int trial = 0; trial < 400; ++trial) {
    const int n = t::uniform(rng, 1, 6);
    BinaryRelation a = random_wfe(n);
    BinaryRelation b = random_wfe(n);
    if (t::coin(rng)) {
      auto p = t::random_permutation(rng, n);
      b.edges.clear();
      for (auto [x, y] : a.edges) b.edges.emplace_back(p[x], p[y]);
    }
    auto iso = canonical_double_iso({n, a.edges, b.edges});
    const std::size_t count = t::brute_iso_count(to_structure(a), to_structure(b));
    CHECK(count <= 1);
    CHECK(iso.has_value() == (count == 1));
    if (iso) CHECK(t::is_isomorphism(to_structure(a), to_structure(b), *iso));
    tested += iso.has_value();
  }
  CHECK(tested > 100);
}
