#include "interpres/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_set>

#include "interpres/error.hpp"
#include "interpres/hf.hpp"
#include "interpres/interp.hpp"
#include "interpres/mathias.hpp"
#include "support.hpp"

namespace interpres {

namespace {

using testing::Rng;
using testing::coin;
using testing::uniform;

struct Tally {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first;

  void expect(bool ok, const std::function<std::string()>& what) {
    ++cases;
    if (ok) return;
    if (failures++ == 0) first = what();
  }
  void fill(CriterionResult& r) const {
    r.cases = cases;
    r.pass = failures == 0;
    if (failures) r.detail = std::to_string(failures) + " failing case(s); first: " + first;
  }
};

Rng seeded(const AcceptanceOptions& o, int id) { return Rng(o.seed * 1000003ULL + static_cast<std::uint64_t>(id)); }

std::string show(const FinStructure& m) {
  std::ostringstream out;
  out << "size " << m.size();
  for (const auto& [name, rel] : m.relations()) {
    out << " " << name << "{";
    for (const auto& t : rel.tuples()) {
      out << "(";
      for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << t[i];
      out << ")";
    }
    out << "}";
  }
  return out.str();
}

std::string show(const Interpretation& in) {
  std::ostringstream out;
  out << "k=" << in.dimension << " U=" << render(in.domain) << " eq=" << render(in.equality);
  for (const auto& [name, rf] : in.relations) out << " " << name << "=" << render(rf.formula);
  for (const auto& p : in.params) out << " " << p.name << "=" << p.element;
  return out.str();
}

// Draws interpretations until apply succeeds (the domain may come out empty).
std::pair<Interpretation, Applied> valid_interpretation(Rng& rng, const Signature& source, const FinStructure& host,
                                                        int k, bool params, std::size_t max_classes = SIZE_MAX) {
  for (int attempt = 0;; ++attempt) {
    Interpretation in = testing::random_interpretation(rng, source, host.signature(), k, host.size(), params);
    try {
      Applied a = apply(in, host);
      if (static_cast<std::size_t>(a.structure.size()) <= max_classes) return {std::move(in), std::move(a)};
    } catch (const ValidationError& e) {
      if (std::string(e.what()).find("empty") == std::string::npos)
        throw Error("generated interpretation rejected: " + std::string(e.what()) + " for " + show(in));
    }
    if (attempt > 1000) throw Error("could not generate a valid interpretation");
  }
}

// ------------------------------------------------------------ criteria

void translation_semantics(const AcceptanceOptions& o, Tally& t) {
  Rng rng = seeded(o, 1);
  const Signature sig = testing::graph_signature();
  for (int i = 0; i < 1000; ++i) {
    const int n = uniform(rng, 1, 5);
    FinStructure m = testing::random_structure(rng, n, sig, 0.2 + 0.1 * uniform(rng, 0, 4));
    const int k = uniform(rng, 1, 2);
    auto [in, applied] = valid_interpretation(rng, sig, m, k, true);
    Formula phi = testing::random_sentence(rng, sig, uniform(rng, 1, 3));
    const bool inside = evaluate(applied.structure, phi);
    const bool reference = testing::naive_eval(applied.structure, phi);
    const bool translated = evaluate(in.bind_params(m), translate(phi, in));
    t.expect(inside == translated && inside == reference, [&] {
      return "phi=" + render(phi) + " M: " + show(m) + " I: " + show(in);
    });
  }
}

void functoriality(const AcceptanceOptions& o, Tally& t) {
  Rng rng = seeded(o, 2);
  const Signature sig = testing::graph_signature();
  static constexpr std::pair<int, int> kDims[] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  for (int i = 0; i < 200; ++i) {
    const auto [ko, ki] = kDims[i % 4];
    const int n = uniform(rng, 1, ko * ki == 4 ? 3 : 4);
    FinStructure m = testing::random_structure(rng, n, sig, 0.2 + 0.1 * uniform(rng, 0, 4));
    auto [inner, step] = valid_interpretation(rng, sig, m, ki, true, 8);
    Interpretation outer;
    Applied twice;
    for (int attempt = 0;; ++attempt) {
      auto drawn = valid_interpretation(rng, sig, step.structure, ko, false);
      if (drawn.second.structure.size() <= 8) {
        outer = std::move(drawn.first);
        twice = std::move(drawn.second);
        break;
      }
      if (attempt > 100) throw Error("functoriality: could not keep the iterated structure small");
    }
    Applied direct = apply(compose(outer, inner), m);
    const std::size_t oracle = testing::brute_iso_count(direct.structure, twice.structure, 1);
    const bool library = !find_isomorphisms(direct.structure, twice.structure, {8, 1}).empty();
    t.expect(oracle == 1 && library, [&] {
      return "M: " + show(m) + " outer: " + show(outer) + " inner: " + show(inner) + " composite: " +
             show(direct.structure) + " iterated: " + show(twice.structure);
    });
  }
}

void ackermann(const AcceptanceOptions&, Tally& t) {
  for (std::uint64_t n = 0; n < (1U << 16); ++n) {
    BigNat back = ack_encode(ack_decode(n));
    t.expect(back == n, [&] { return "encode(decode(" + std::to_string(n) + ")) = " + back.str(); });
  }
  const auto v5 = testing::stage_by_powerset(5);
  t.expect(v5.size() == 65536, [&] { return "|V_5| built by power sets = " + std::to_string(v5.size()); });
  std::unordered_set<HFSet> distinct(v5.begin(), v5.end());
  t.expect(distinct.size() == v5.size(), [] { return "power-set construction of V_5 repeated a set"; });
  for (const auto& x : v5) {
    BigNat code = ack_encode(x);
    t.expect(code < 65536 && ack_decode(code) == x, [&] { return "round trip failed for " + render_hf(x); });
  }
  const auto v4 = testing::stage_by_powerset(4);
  for (const auto& x : v4)
    for (const auto& y : v4) {
      const bool member = std::find(x.elements().begin(), x.elements().end(), y) != x.elements().end();
      const auto cx = ack_encode(x).convert_to<unsigned>();
      const auto cy = ack_encode(y).convert_to<unsigned>();
      t.expect(member == ((cx >> cy & 1U) != 0), [&] { return render_hf(y) + " in " + render_hf(x) + " disagrees with bit test"; });
    }
}

std::vector<BinaryRelation> all_relations(int n) {
  std::vector<BinaryRelation> out;
  const int cells = n * n;
  for (std::uint32_t mask = 0; mask < (1U << cells); ++mask) {
    BinaryRelation r{n, {}};
    for (int c = 0; c < cells; ++c)
      if (mask >> c & 1U) r.edges.emplace_back(c / n, c % n);
    out.push_back(std::move(r));
  }
  return out;
}

std::string show(const BinaryRelation& r) {
  std::string s = "n=" + std::to_string(r.size) + " E={";
  for (auto [a, b] : r.edges) s += "(" + std::to_string(a) + "," + std::to_string(b) + ")";
  return s + "}";
}

void check_collapse(const BinaryRelation& r, Tally& t) {
  const bool valid = !testing::has_cycle(r) && testing::naive_extensional(r);
  if (!valid) {
    bool rejected = false;
    try {
      mostowski_collapse(r);
    } catch (const ValidationError&) {
      rejected = true;
    }
    t.expect(rejected, [&] { return "invalid relation accepted: " + show(r); });
    return;
  }
  std::vector<HFSet> pi;
  try {
    pi = mostowski_collapse(r);
  } catch (const Error& e) {
    t.expect(false, [&] { return "valid relation rejected: " + show(r) + ": " + e.what(); });
    return;
  }
  bool preserving = true;
  for (int i = 0; i < r.size; ++i)
    for (int j = 0; j < r.size; ++j) {
      const bool edge = std::find(r.edges.begin(), r.edges.end(), std::pair{i, j}) != r.edges.end();
      const auto& kids = pi[static_cast<std::size_t>(j)].elements();
      const bool member = std::find(kids.begin(), kids.end(), pi[static_cast<std::size_t>(i)]) != kids.end();
      preserving = preserving && edge == member;
    }
  std::unordered_set<HFSet> image(pi.begin(), pi.end());
  bool transitive = true;
  for (const auto& x : pi)
    for (const auto& y : x.elements()) transitive = transitive && image.count(y) == 1;
  const std::size_t isos = testing::brute_iso_count(to_structure(r), testing::membership_structure(pi));
  t.expect(preserving && image.size() == pi.size() && transitive && isos == 1, [&] {
    return "collapse of " + show(r) + ": preserving=" + std::to_string(preserving) +
           " injective=" + std::to_string(image.size() == pi.size()) + " isomorphisms=" + std::to_string(isos);
  });
}

void mostowski(const AcceptanceOptions& o, Tally& t) {
  for (int n = 1; n <= 4; ++n)
    for (const auto& r : all_relations(n)) check_collapse(r, t);
  Rng rng = seeded(o, 4);
  for (int i = 0; i < 500; ++i) {
    if (i % 2 == 0) {
      // A valid instance: a relabelled transitive set.
      HFSet x = testing::random_transitive(rng, 6);
      std::vector<HFSet> items = x.elements();
      if (items.empty()) items.push_back(HFSet());
      const auto perm = testing::random_permutation(rng, static_cast<int>(items.size()));
      std::vector<HFSet> placed(items.size());
      for (std::size_t j = 0; j < items.size(); ++j) placed[static_cast<std::size_t>(perm[j])] = items[j];
      check_collapse(binary_relation(testing::membership_structure(placed), "E"), t);
    } else {
      const int n = uniform(rng, 1, 6);
      BinaryRelation r{n, {}};
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (coin(rng, 0.25)) r.edges.emplace_back(a, b);
      check_collapse(r, t);
    }
  }
}

void scott(const AcceptanceOptions& o, Tally& t) {
  Rng rng = seeded(o, 5);
  Signature source;
  source.add_relation("E", 2);
  for (int i = 0; i < 50; ++i) {
    const int stage = i % 2 == 0 ? 3 : 4;
    const std::vector<HFSet> sets = v_stage(stage);
    const FinStructure m = testing::membership_structure(sets);
    Interpretation in;
    Applied before;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 5000) throw Error("scott: no suitable interpretation drawn");
      auto drawn = valid_interpretation(rng, source, m, 1, false);
      if (drawn.second.structure.size() == static_cast<int>(drawn.second.domain_tuples)) continue;  // trivial eq
      bool coded = true;
      for (const auto& sc : scott_classes(drawn.first, m, "E")) coded = coded && sc.code.has_value();
      if (!coded) continue;
      in = std::move(drawn.first);
      before = std::move(drawn.second);
      break;
    }
    const Interpretation reduced = scott_reduce(in, m);
    const Applied after = apply(reduced, m);
    const bool identity = after.structure.size() == static_cast<int>(after.domain_tuples);
    // Oracle map: each class goes to the set of its members of least rank.
    std::vector<int> f(static_cast<std::size_t>(before.structure.size()), -1);
    for (int c = 0; c < before.structure.size(); ++c) {
      std::vector<HFSet> members;
      for (int v = 0; v < m.size(); ++v)
        if (before.class_of[static_cast<std::size_t>(v)] == c) members.push_back(sets[static_cast<std::size_t>(v)]);
      int low = members.front().rank();
      for (const auto& s : members) low = std::min(low, s.rank());
      std::vector<HFSet> minimal;
      for (const auto& s : members)
        if (s.rank() == low) minimal.push_back(s);
      auto it = std::find(sets.begin(), sets.end(), HFSet::of(minimal));
      if (it != sets.end()) f[static_cast<std::size_t>(c)] = after.class_of[static_cast<std::size_t>(it - sets.begin())];
    }
    const bool iso = std::find(f.begin(), f.end(), -1) == f.end() &&
                     testing::is_isomorphism(before.structure, after.structure, f);
    t.expect(identity && iso, [&] {
      return "V_" + std::to_string(stage) + " I: " + show(in) + " identity=" + std::to_string(identity) +
             " iso=" + std::to_string(iso);
    });
  }
}

CodedPair relabel(const CodedPair& c, const std::vector<int>& p) {
  CodedPair out;
  out.n = c.n;
  out.alpha = p[static_cast<std::size_t>(c.alpha)];
  for (auto [a, b] : c.edges) out.edges.emplace_back(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(b)]);
  return out;
}

// The hereditary predecessors of alpha with alpha named by a constant.
FinStructure pointed(const CodedPair& c) {
  Signature sig;
  sig.add_relation("E", 2).add_constant("a");
  std::set<int> keep{c.alpha};
  std::vector<int> todo{c.alpha};
  while (!todo.empty()) {
    int v = todo.back();
    todo.pop_back();
    for (auto [a, b] : c.edges)
      if (b == v && keep.insert(a).second) todo.push_back(a);
  }
  std::vector<int> index(static_cast<std::size_t>(c.n), -1);
  int next = 0;
  for (int v : keep) index[static_cast<std::size_t>(v)] = next++;
  FinStructure m(next, sig);
  for (auto [a, b] : c.edges)
    if (keep.count(a) && keep.count(b)) m.add_tuple("E", {index[static_cast<std::size_t>(a)], index[static_cast<std::size_t>(b)]});
  m.set_constant("a", index[static_cast<std::size_t>(c.alpha)]);
  return m;
}

void coded_pairs(const AcceptanceOptions& o, Tally& t) {
  Rng rng = seeded(o, 6);
  const auto v4 = testing::stage_by_powerset(4);
  auto shuffled = [&](const HFSet& x) {
    CodedPair c = encode_coded_pair(x);
    return relabel(c, testing::random_permutation(rng, c.n));
  };
  for (const auto& x : v4) {
    t.expect(decode_coded_pair(encode_coded_pair(x)) == x, [&] { return "round trip of " + render_hf(x); });
    t.expect(decode_coded_pair(shuffled(x)) == x, [&] { return "relabelled round trip of " + render_hf(x); });
  }
  auto pick = [&] { return v4[static_cast<std::size_t>(uniform(rng, 0, 15))]; };
  for (int i = 0; i < 200; ++i) {
    HFSet y = pick();
    HFSet x = (coin(rng) && !y.empty()) ? y.elements()[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(y.size()) - 1))] : pick();
    const bool truth = std::find(y.elements().begin(), y.elements().end(), x) != y.elements().end();
    t.expect(coded_member(shuffled(x), shuffled(y)) == truth, [&] { return "member " + render_hf(x) + " " + render_hf(y); });
  }
  for (int i = 0; i < 200; ++i) {
    HFSet x = pick();
    HFSet y = coin(rng) ? x : pick();
    CodedPair cx = shuffled(x);
    CodedPair cy = shuffled(y);
    const bool equiv = coded_equiv(cx, cy);
    const bool iso = !find_isomorphisms(pointed(cx), pointed(cy), {64, 1}).empty();
    t.expect(equiv == (x == y) && iso == equiv, [&] { return "equiv " + render_hf(x) + " " + render_hf(y); });
  }
}

void double_membership(const AcceptanceOptions&, Tally& t) {
  for (int n = 1; n <= 4; ++n) {
    std::vector<BinaryRelation> valid;
    for (auto& r : all_relations(n))
      if (!testing::has_cycle(r) && testing::naive_extensional(r)) valid.push_back(std::move(r));
    std::vector<FinStructure> as;
    for (const auto& r : valid) as.push_back(to_structure(r));
    for (std::size_t i = 0; i < valid.size(); ++i)
      for (std::size_t j = 0; j < valid.size(); ++j) {
        auto f = canonical_double_iso({n, valid[i].edges, valid[j].edges});
        const std::size_t count = testing::brute_iso_count(as[i], as[j]);
        const bool ok = f ? (count == 1 && testing::is_isomorphism(as[i], as[j], *f)) : count == 0;
        t.expect(ok, [&] { return show(valid[i]) + " vs " + show(valid[j]) + " oracle count " + std::to_string(count); });
      }
  }
}

void mathias_numbers(const AcceptanceOptions&, Tally& t) {
  t.expect(vcard(5) == TowerInt::exact(65536), [] { return "vcard(5) = " + vcard(5).render(); });
  t.expect(v_stage(5).size() == 65536 && testing::stage_by_powerset(5).size() == 65536,
           [] { return "|v_stage(5)| differs from 65536"; });
  for (int m = 0; m <= 6; ++m)
    t.expect(min_depth(von_neumann(m)) == 0, [&] { return "min_depth(ordinal " + std::to_string(m) + ") != 0"; });
  t.expect(min_depth(HFSet::of(testing::stage_by_powerset(4))) == 1, [] { return "min_depth(V_4) != 1"; });
  for (int m = 3; m <= 5; ++m)
    t.expect(min_depth_vstage(m) == min_depth(HFSet::of(testing::stage_by_powerset(m))),
             [&] { return "symbolic and materialized min_depth(V_" + std::to_string(m) + ") differ"; });
  for (int m = 3; m < 9; ++m)
    t.expect(min_depth_vstage(m) <= min_depth_vstage(m + 1), [&] {
      return "min_depth(V_" + std::to_string(m) + ") > min_depth(V_" + std::to_string(m + 1) + ")";
    });
  t.expect(tower_cmp(vcard(6), tower_b(3, 6)) == std::strong_ordering::less,
           [] { return "vcard(6) = " + vcard(6).render() + " not below b_3(6) = " + tower_b(3, 6).render(); });
}

void zermelo(const AcceptanceOptions&, Tally& t) {
  const auto v4 = testing::stage_by_powerset(4);
  for (const auto& x : v4) t.expect(tower_sub(x, HFSet()) == x, [&] { return "tower_sub(x, {}) != x for " + render_hf(x); });
  for (const auto& a : testing::stage_by_powerset(3)) {
    std::vector<HFSet> image;
    for (const auto& x : v4) image.push_back(tower_sub(x, a));
    std::set<HFSet> distinct(image.begin(), image.end());
    t.expect(distinct.size() == v4.size(), [&] { return "tower_sub(., " + render_hf(a) + ") not injective"; });
    for (std::size_t i = 0; i < v4.size(); ++i)
      for (std::size_t j = 0; j < v4.size(); ++j) {
        const bool before = v4[j].contains(v4[i]);
        const bool after = image[j].contains(image[i]);
        t.expect(before == after, [&] { return "membership not preserved under tower_sub with a = " + render_hf(a); });
      }
    // Materialized universe: V_4, the stage V^(a)_4 and TC({a}).
    std::set<HFSet> universe(v4.begin(), v4.end());
    for (const auto& s : zermelo_stage(a, 4)) universe.insert(s);
    for (const auto& s : closure_with(a)) universe.insert(s);
    std::set<HFSet> characterized;
    for (const auto& s : universe)
      if (in_tower(s, a)) characterized.insert(s);
    t.expect(characterized == distinct, [&] { return "in_tower range characterization fails for a = " + render_hf(a); });
  }
}

void selftest_timing(const AcceptanceOptions& o, Tally& t, CriterionResult& r) {
  if (o.cli_path.empty()) {
    t.expect(false, [] { return "no CLI path configured"; });
    return;
  }
  const std::string cmd = "\"" + o.cli_path + "\" selftest --seed " + std::to_string(o.seed) + " > /dev/null 2>&1";
  const auto start = std::chrono::steady_clock::now();
  const int status = std::system(cmd.c_str());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  t.expect(status == 0, [&] { return "selftest exited with status " + std::to_string(status); });
  r.detail = "selftest wall time " + std::to_string(secs) + " s";
}

struct CriterionInfo {
  int id;
  const char* name;
  double limit;
  void (*run)(const AcceptanceOptions&, Tally&);
};

constexpr CriterionInfo kCriteria[] = {
    {1, "translation semantics", 30, translation_semantics},
    {2, "functoriality of composition", 30, functoriality},
    {3, "ackermann coding", 20, ackermann},
    {4, "mostowski collapse", 60, mostowski},
    {5, "scott reduction", 0, scott},
    {6, "coded pairs", 0, coded_pairs},
    {7, "double-membership kernel", 0, double_membership},
    {8, "mathias numbers", 0, mathias_numbers},
    {9, "zermelo tower", 0, zermelo},
};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  CriterionResult r;
  r.id = id;
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (id == 10) {
      r.name = "selftest end to end";
      r.limit_seconds = 180;
      selftest_timing(options, t, r);
    } else {
      auto it = std::find_if(std::begin(kCriteria), std::end(kCriteria), [&](const CriterionInfo& s) { return s.id == id; });
      if (it == std::end(kCriteria)) throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
      r.name = it->name;
      r.limit_seconds = it->limit;
      it->run(options, t);
    }
    t.fill(r);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    t.fill(r);
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.limit_seconds > 0 && r.seconds >= r.limit_seconds) {
    r.pass = false;
    r.detail = "took " + std::to_string(r.seconds) + " s, limit " + std::to_string(r.limit_seconds) + " s. " + r.detail;
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<int> ids;
  if (options.only.empty())
    for (const auto& s : kCriteria) ids.push_back(s.id);
  else
    ids.assign(options.only.begin(), options.only.end());
  std::vector<CriterionResult> out;
  for (int id : ids) out.push_back(run_criterion(id, options));
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream out;
  out << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name << ": " << r.cases << " cases, ";
  out.precision(2);
  out << std::fixed << r.seconds << " s";
  if (r.limit_seconds > 0) out << " (limit " << static_cast<int>(r.limit_seconds) << " s)";
  if (!r.detail.empty()) out << " -- " << r.detail;
  return out.str();
}

}  // namespace interpres
