#include <doctest.h>

#include <functional>

#include "interpres/error.hpp"
#include "interpres/fin_model.hpp"
#include "interpres/hf.hpp"
#include "interpres/interp.hpp"
#include "interpres/io.hpp"
#include "support.hpp"

using namespace interpres;
namespace t = interpres::testing;
using io::json;

namespace {

const std::string kData = INTERPRES_TEST_DATA;

FinStructure load(const std::string& name) { return io::structure_from_json(io::read_json_file(kData + "/" + name)); }
Interpretation load_interp(const std::string& name, const Signature& target) {
  return io::interpretation_from_json(io::read_json_file(kData + "/" + name), target);
}

Signature edge_sig() {
  Signature s;
  s.add_relation("E", 2);
  return s;
}

Interpretation reversal() { return io::interpretation_from_json(json{{"relations", {{"E", "E(y,x)"}}}}, edge_sig()); }

bool isomorphic(const FinStructure& a, const FinStructure& b) {
  return a.size() == b.size() && !find_isomorphisms(a, b, IsoLimits{8, 1}).empty();
}

// Every structure over {E/2} with at most `max_n` points.
std::vector<FinStructure> all_graphs(int max_n) {
  std::vector<FinStructure> out;
  for (int n = 1; n <= max_n; ++n)
    for (unsigned mask = 0; mask < (1u << (n * n)); ++mask) {
      FinStructure m(n, edge_sig());
      for (int b = 0; b < n * n; ++b)
        if ((mask >> b) & 1) m.add_tuple("E", {b / n, b % n});
      out.push_back(std::move(m));
    }
  return out;
}

std::pair<Interpretation, Applied> valid_random(t::Rng& rng, const FinStructure& host, int k) {
  for (;;) {
    Interpretation in = t::random_interpretation(rng, t::graph_signature(), host.signature(), k, host.size(), true);
    try {
      Applied a = apply(in, host);
      return {in, a};
    } catch (const ValidationError&) {
    }
  }
}

}  // namespace

TEST_CASE("translate: negation commutes") {
  Interpretation rev = reversal();
  Formula phi = parse_formula("~E(x,y)", edge_sig());
  Formula tr = translate(phi, rev);
  CHECK(tr == Formula::negation(translate(phi.left(), rev)));
  CHECK(render(tr) == "~E(y__1,x__1)");
}

TEST_CASE("translate: existential relativizes to the domain") {
  Interpretation in = io::interpretation_from_json(
      json{{"dimension", 2}, {"domain", "E(x1,x2)"}, {"equality", "(x1=y1 & x2=y2)"}, {"source", json::object()}},
      edge_sig());
  Formula tr = translate(parse_formula("Ex.(x=x)", Signature{}), in);
  const std::vector<std::string> xs{"x__1", "x__2"};
  Formula u = Formula::atom("E", {"x__1", "x__2"});
  Formula eq = Formula::conjunction(Formula::equal("x__1", "x__1"), Formula::equal("x__2", "x__2"));
  CHECK(tr == Formula::exists_all(xs, Formula::conjunction(u, eq)));
}

TEST_CASE("translate: identity interpretation preserves truth") {
  t::Rng rng(41);
  Signature sig = t::graph_signature();
  Interpretation id = Interpretation::identity(sig);
  for (int i = 0; i < 300; ++i) {
    FinStructure m = t::random_structure(rng, t::uniform(rng, 1, 4), sig, 0.4);
    Formula phi = t::random_sentence(rng, sig, 3);
    CHECK(evaluate(m, translate(phi, id)) == evaluate(m, phi));
  }
  // quantifier-free formulas come back renamed
  Formula qf = parse_formula("(E(x,y) -> ~P(x))", sig);
  CHECK(translate(qf, id) == rename_free(qf, {{"x", "x__1"}, {"y", "y__1"}}));
}

TEST_CASE("translate: missing relation formula") {
  CHECK_THROWS_AS(io::interpretation_from_json(json{{"source", {{"E", 2}, {"P", 1}}}, {"relations", {{"E", "E(x,y)"}}}},
                                               edge_sig()),
                  ValidationError);
  Interpretation in = reversal();
  in.source.add_relation("P", 1);
  CHECK_THROWS_AS(translate(parse_formula("Ex.P(x)", t::graph_signature()), in), SignatureError);
}

TEST_CASE("translate: universal agrees with the dual of the existential") {
  t::Rng rng(43);
  Signature sig = t::graph_signature();
  for (int i = 0; i < 200; ++i) {
    FinStructure m = t::random_structure(rng, t::uniform(rng, 1, 4), sig, 0.4);
    auto [in, applied] = valid_random(rng, m, t::uniform(rng, 1, 2));
    Formula body = t::random_formula(rng, sig, {"x"}, 2);
    Formula all = Formula::forall("x", body);
    Formula dual = Formula::negation(Formula::exists("x", Formula::negation(body)));
    FinStructure host = in.bind_params(m);
    CHECK(evaluate(host, translate(all, in)) == evaluate(host, translate(dual, in)));
  }
}

TEST_CASE("translation semantics on every graph with at most two points") {
  Signature sig = edge_sig();
  std::vector<Interpretation> interps{Interpretation::identity(sig), reversal(),
                                      io::interpretation_from_json(json{{"domain", "E(x,x)"}, {"relations", {{"E", "~E(x,y)"}}}}, sig),
                                      io::interpretation_from_json(json{{"dimension", 2},
                                                                        {"equality", "((x1=y1 & x2=y2) | (x1=y2 & x2=y1))"},
                                                                        {"relations", {{"E", "(E(x1,y1) | x1=y2)"}}}},
                                                                   sig)};
  std::vector<Formula> sentences;
  for (const char* s : {"Ax.Ey.E(x,y)", "Ex.E(x,x)", "Ax.Ay.(E(x,y) -> E(y,x))", "Ex.Ay.(x=y | E(x,y))",
                        "Ax.Ay.Az.((E(x,y) & E(y,z)) -> E(x,z))", "~Ex.Ey.(~(x=y) & E(x,y))"})
    sentences.push_back(parse_formula(s, sig));
  int cases = 0;
  for (const auto& m : all_graphs(2))
    for (const auto& in : interps) {
      Applied a;
      try {
        a = apply(in, m);
      } catch (const ValidationError&) {
        continue;
      }
      for (const auto& phi : sentences) {
        CHECK(evaluate(a.structure, phi) == evaluate(m, translate(phi, in)));
        ++cases;
      }
    }
  CHECK(cases > 200);
}

TEST_CASE("apply: examples") {
  FinStructure path = load("path3.json");
  CHECK(isomorphic(apply(Interpretation::identity(path.signature()), path).structure, path));

  Applied rev = apply(reversal(), path);
  CHECK(rev.structure == load("path3_reversed.json"));

  Interpretation pairs = load_interp("multiset_pairs.json", path.signature());
  Applied a = apply(pairs, load("v2.json"));
  CHECK(a.structure.size() == 3);
  CHECK(a.representatives == std::vector<Tuple>{{0, 0}, {0, 1}, {1, 1}});
  CHECK(a.domain_tuples == 4);
  CHECK(a.class_of_tuple(std::vector<int>{1, 0}, 2) == 1);
}

TEST_CASE("apply: validation") {
  FinStructure path = load("path3.json");
  Signature sig = edge_sig();
  auto make = [&](json j) { return io::interpretation_from_json(j, sig); };
  CHECK_THROWS_AS(apply(make({{"domain", "~(x=x)"}}), path), ValidationError);
  // E(x,y) is not symmetric, so not an equivalence
  CHECK_THROWS_AS(apply(make({{"equality", "(x=y | E(x,y))"}}), path), ValidationError);
  // merging the endpoints of the path breaks E
  CHECK_THROWS_AS(apply(make({{"equality", "(x=y | (~Ez.E(z,x) & ~Ez.E(x,z)) | x=x)"}}), path), ParseError);
  CHECK_THROWS_AS(apply(make({{"equality", "(x=y | (Ez.E(x,z) & (Ez.E(y,z) | ~Ez.E(y,z))))"}, {"relations", {{"E", "E(x,y)"}}}}),
                        path),
                  ValidationError);
}

TEST_CASE("apply: parameters") {
  FinStructure path = load("path3.json");
  Interpretation in = io::interpretation_from_json(json{{"params", {1}}, {"domain", "~(x=p0)"}}, path.signature());
  Applied a = apply(in, path);
  CHECK(a.structure.size() == 2);
  CHECK(a.representatives == std::vector<Tuple>{{0}, {2}});
}

TEST_CASE("compose: examples") {
  t::Rng rng(47);
  Signature sig = t::graph_signature();
  Interpretation id = Interpretation::identity(sig);
  for (int i = 0; i < 40; ++i) {
    FinStructure m = t::random_structure(rng, t::uniform(rng, 1, 3), sig, 0.4);
    auto [j, applied] = valid_random(rng, m, t::uniform(rng, 1, 2));
    if (applied.structure.size() > 8) continue;
    Interpretation c = compose(id, j);
    CHECK(c.dimension == j.dimension);
    CHECK(isomorphic(apply(c, m).structure, applied.structure));
  }

  FinStructure path = load("path3.json");
  Interpretation rr = compose(reversal(), reversal());
  CHECK(isomorphic(apply(rr, path).structure, path));
  CHECK(apply(rr, path).structure == path);
}

TEST_CASE("compose: dimensions multiply and functoriality holds") {
  t::Rng rng(53);
  Signature sig = t::graph_signature();
  for (int i = 0; i < 40; ++i) {
    FinStructure m = t::random_structure(rng, t::uniform(rng, 1, 3), sig, 0.4);
    auto [inner, a1] = valid_random(rng, m, t::uniform(rng, 1, 2));
    if (a1.structure.size() > 4) continue;
    Interpretation outer;
    Applied a2;
    for (;;) {
      outer = t::random_interpretation(rng, sig, sig, t::uniform(rng, 1, 2), a1.structure.size(), false);
      try {
        a2 = apply(outer, a1.structure);
        if (a2.structure.size() <= 8) break;
      } catch (const ValidationError&) {
      }
    }
    Interpretation c = compose(outer, inner);
    CHECK(c.dimension == outer.dimension * inner.dimension);
    CHECK(isomorphic(apply(c, m).structure, a2.structure));
  }
}

TEST_CASE("compose: outer with parameters is rejected") {
  Interpretation outer = io::interpretation_from_json(json{{"params", {0}}, {"relations", {{"E", "E(x,y)"}}}}, edge_sig());
  CHECK_THROWS_AS(compose(outer, reversal()), ValidationError);
}

TEST_CASE("theory interpretation: examples") {
  Signature sig = edge_sig();
  FinStructure path = load("path3.json");
  Theory refl{"refl", sig, {parse_formula("Ax.(x=x)", sig)}};
  CHECK(check_theory_interpretation(reversal(), refl, path).all_hold());

  Interpretation one_class = io::interpretation_from_json(json{{"equality", "x=x"}, {"relations", {{"E", "x=x"}}}}, sig);
  Theory two{"two", sig, {parse_formula("Ex.Ey.~(x=y)", sig)}};
  TheoryReport r = check_theory_interpretation(one_class, two, path);
  REQUIRE(r.axioms.size() == 1);
  CHECK_FALSE(r.axioms[0].holds);
  CHECK_FALSE(r.all_hold());

  t::Rng rng(59);
  Interpretation id = Interpretation::identity(sig);
  for (int i = 0; i < 50; ++i) {
    Theory th{"random", sig, {}};
    for (int a = 0; a < 3; ++a) th.axioms.push_back(t::random_sentence(rng, sig, 3));
    FinStructure m = t::random_structure(rng, 3, sig, 0.4);
    TheoryReport rep = check_theory_interpretation(id, th, m);
    for (std::size_t a = 0; a < th.axioms.size(); ++a) CHECK(rep.axioms[a].holds == evaluate(m, th.axioms[a]));
  }
}

TEST_CASE("mutual: examples") {
  FinStructure path = load("path3.json");
  Interpretation id = Interpretation::identity(path.signature());
  MutualReport r = check_mutual(path, path, id, id);
  CHECK(r.mutual());
  CHECK(isomorphic(r.m_bar, path));

  FinStructure reversed = load("path3_reversed.json");
  r = check_mutual(path, reversed, reversal(), reversal());
  CHECK(r.mutual());
  CHECK(r.n_in_m == std::vector<int>{0, 1, 2});
}

TEST_CASE("mutual: V2 and the edgeless pair never are") {
  // Exhaust the extensions available to a k = 1 interpretation of <V2,E> in
  // the edgeless 2-point structure.
  FinStructure v2 = load("v2.json");
  FinStructure edgeless = load("edgeless2.json");
  auto domains = definable_relations(edgeless, 1, 2, {});
  auto binaries = definable_relations(edgeless, 2, 2, {});
  int candidates = 0;
  for (const auto& u : domains) {
    if (u.empty()) continue;
    for (const auto& eqt : binaries) {
      EqRelation eq(2);
      for (const auto& p : eqt) eq.relate(p[0], p[1]);
      std::vector<int> dom;
      for (const auto& p : u) dom.push_back(p[0]);
      bool equivalence = true;
      for (int a : dom)
        for (int b : dom) {
          equivalence = equivalence && eq.related(a, a) && (eq.related(a, b) == eq.related(b, a));
          for (int c : dom) equivalence = equivalence && !(eq.related(a, b) && eq.related(b, c) && !eq.related(a, c));
        }
      if (!equivalence) continue;
      for (const auto& e : binaries) {
        ++candidates;
        FinStructure sub(static_cast<int>(dom.size()), v2.signature());
        for (std::size_t i = 0; i < dom.size(); ++i)
          for (std::size_t j = 0; j < dom.size(); ++j)
            if (e.count(Tuple{dom[i], dom[j]})) sub.add_tuple("E", {static_cast<int>(i), static_cast<int>(j)});
        EqRelation restricted(static_cast<int>(dom.size()));
        for (std::size_t i = 0; i < dom.size(); ++i)
          for (std::size_t j = 0; j < dom.size(); ++j)
            if (eq.related(dom[i], dom[j])) restricted.relate(static_cast<int>(i), static_cast<int>(j));
        if (!check_congruence(sub, restricted)) continue;
        CHECK_FALSE(isomorphic(quotient(sub, restricted).structure, v2));
      }
    }
  }
  CHECK(candidates == 8);

  Interpretation swapless = io::interpretation_from_json(json{{"relations", {{"E", "~(x=y)"}}}}, edge_sig());
  CHECK_FALSE(check_mutual(v2, edgeless, swapless, Interpretation::identity(edge_sig())).mutual());
}

TEST_CASE("bi-interpretation and synonymy: examples") {
  FinStructure path = load("path3.json");
  auto bi_of = [&](const std::string& file, const FinStructure& m, const FinStructure& n) {
    return io::bi_from_json(io::read_json_file(kData + "/" + file), m.signature(), n.signature());
  };
  BiInterpretation ident = bi_of("bi_identity.json", path, path);
  BiReport r = check_bi(ident, path, path);
  CHECK(r.holds);
  CHECK(r.m_to_m_bar == std::vector<int>{0, 1, 2});
  CHECK(check_synonymy(ident, path, path).holds);

  FinStructure c3 = load("cycle3.json");
  FinStructure c3r = load("cycle3_reversed.json");
  BiInterpretation rev = bi_of("bi_reversal.json", c3, c3r);
  CHECK(check_bi(rev, c3, c3r).holds);
  CHECK(check_synonymy(rev, c3, c3r).holds);

  BiInterpretation wrong = bi_of("bi_constant.json", c3, c3r);
  BiReport w = check_bi(wrong, c3, c3r);
  CHECK(w.mutual.mutual());
  CHECK_FALSE(w.holds);
  CHECK_FALSE(w.diagnostic.empty());
}

TEST_CASE("synonymy fails for a two-dimensional bi-interpretation") {
  FinStructure path = load("path3.json");
  json doc{{"I",
            {{"dimension", 2}, {"domain", "x1=x2"}, {"relations", {{"E", "E(x1,y1)"}}}}},
           {"J", {{"relations", {{"E", "E(x,y)"}}}}},
           {"iso_m", "(x=y1 & x=y2)"},
           {"iso_n", "(x=y1 & x=y2)"}};
  BiInterpretation bi = io::bi_from_json(doc, path.signature(), path.signature());
  SynonymyReport s = check_synonymy(bi, path, path);
  CHECK(s.bi.holds);
  CHECK_FALSE(s.holds);
}

TEST_CASE("synonymy implies bi-interpretation implies mutual") {
  t::Rng rng(61);
  Signature sig = edge_sig();
  const char* isos[] = {"x=y", "x=x", "E(x,y)", "~(x=y)"};
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    FinStructure m = t::random_structure(rng, t::uniform(rng, 2, 3), sig, 0.4);
    const bool flip = t::coin(rng);
    FinStructure n = flip ? apply(reversal(), m).structure : m;
    json inner = flip ? json{{"E", "E(y,x)"}} : json{{"E", "E(x,y)"}};
    json doc{{"I", {{"relations", inner}}},
             {"J", {{"relations", inner}}},
             {"iso_m", isos[t::uniform(rng, 0, 3)]},
             {"iso_n", isos[t::uniform(rng, 0, 3)]}};
    BiInterpretation bi = io::bi_from_json(doc, sig, sig);
    SynonymyReport s = check_synonymy(bi, m, n);
    if (s.holds) CHECK(s.bi.holds);
    if (s.bi.holds) CHECK(s.bi.mutual.mutual());
    checked += s.holds;
  }
  CHECK(checked > 0);
}

TEST_CASE("scott: identity equality is kept") {
  FinStructure v3 = load("v3.json");
  Interpretation id = Interpretation::identity(v3.signature());
  Interpretation red = scott_reduce(id, v3);
  CHECK(isomorphic(apply(red, v3).structure, v3));
  CHECK(red.equality == Formula::equal("x", "y"));
}

TEST_CASE("scott: equal cardinality on V3 and V4") {
  FinStructure v3 = load("v3.json");
  Interpretation card = load_interp("card_eq.json", v3.signature());
  auto classes = scott_classes(card, v3, "E");
  // elements in Ackermann order: {} {{}} {{{}}} {{},{{}}}
  REQUIRE(classes.size() == 3);
  CHECK(classes[1].members == std::vector<int>{1, 2});
  CHECK(classes[1].minimal == std::vector<int>{1});
  CHECK(classes[1].code == 2);
  // the class of {{},{{}}} would need {{{},{{}}}}, which has rank 3
  CHECK_FALSE(classes[2].code.has_value());
  CHECK_THROWS_AS(scott_reduce(card, v3), ValidationError);

  FinStructure v4 = load("v4.json");
  Interpretation small = load_interp("card_eq_small.json", v4.signature());
  Interpretation red = scott_reduce(small, v4);
  Applied before = apply(small, v4);
  Applied after = apply(red, v4);
  CHECK(before.structure.size() == 3);
  CHECK(static_cast<std::size_t>(after.structure.size()) == after.domain_tuples);
  CHECK(isomorphic(before.structure, after.structure));
}

TEST_CASE("scott: host must be well-founded and extensional") {
  FinStructure loop = load("cycle2.json");
  CHECK_THROWS_AS(scott_reduce(Interpretation::identity(loop.signature()), loop), ValidationError);
}

TEST_CASE("theory disjunction") {
  Signature sig = edge_sig();
  Theory loops = io::theory_from_json(io::read_json_file(kData + "/loops.json"));
  Theory loopless = io::theory_from_json(io::read_json_file(kData + "/loopless.json"));
  Theory both = theory_disjunction(loops, loopless);
  CHECK(both.axioms.size() == 1);
  auto models = [](const FinStructure& m, const Theory& th) {
    for (const auto& ax : th.axioms)
      if (!evaluate(m, ax)) return false;
    return true;
  };
  const auto graphs = all_graphs(3);
  for (const auto& m : graphs) CHECK(models(m, both));

  t::Rng rng(67);
  for (int i = 0; i < 20; ++i) {
    Theory a{"a", sig, {}}, b{"b", sig, {}};
    for (int j = t::uniform(rng, 1, 3); j > 0; --j) a.axioms.push_back(t::random_sentence(rng, sig, 2));
    for (int j = t::uniform(rng, 1, 3); j > 0; --j) b.axioms.push_back(t::random_sentence(rng, sig, 2));
    Theory d = theory_disjunction(a, b);
    CHECK(d.axioms.size() == a.axioms.size() * b.axioms.size());
    Theory self = theory_disjunction(a, a);
    for (const auto& m : graphs) {
      CHECK(models(m, d) == (models(m, a) || models(m, b)));
      CHECK(models(m, self) == models(m, a));
    }
  }

  Theory other{"other", t::graph_signature(), {}};
  CHECK_THROWS_AS(theory_disjunction(loops, other), SignatureError);
}
