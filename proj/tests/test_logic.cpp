#include <doctest.h>

#include "interpres/error.hpp"
#include "interpres/logic.hpp"
#include "support.hpp"

using namespace interpres;
namespace t = interpres::testing;

namespace {

Signature graph_c() {
  Signature s;
  s.add_relation("E", 2).add_constant("c");
  return s;
}

FinStructure graph(int n, std::initializer_list<std::pair<int, int>> edges) {
  Signature s;
  s.add_relation("E", 2);
  FinStructure m(n, s);
  for (auto [a, b] : edges) m.add_tuple("E", {a, b});
  return m;
}

}  // namespace

TEST_CASE("parse: grammar cases") {
  Signature sig = graph_c();
  Formula f = parse_formula("Ax.(x=x)", sig);
  CHECK(f == Formula::forall("x", Formula::equal("x", "x")));

  f = parse_formula("Ex.E(x,c)", sig);
  CHECK(f.kind() == Connective::Exists);
  CHECK(f.body() == Formula::atom("E", {Term::var("x"), Term::constant("c")}));

  f = parse_formula("~(E(x,y) & E(y,x))", sig);
  CHECK(f.kind() == Connective::Not);
  CHECK(f.left().kind() == Connective::And);
  CHECK(free_variables(f) == std::set<std::string>{"x", "y"});
}

TEST_CASE("parse: whitespace and implication") {
  Signature sig = graph_c();
  Formula a = parse_formula("A x . ( E(x , c) -> E(c,x) )", sig);
  Formula b = parse_formula("Ax.(E(x,c)->E(c,x))", sig);
  CHECK(a == b);
  CHECK(render(a) == "Ax.(E(x,c) -> E(c,x))");
  CHECK(depth(a) == 2);
}

TEST_CASE("parse: errors") {
  Signature sig = graph_c();
  CHECK_THROWS_AS(parse_formula("(E(x,y) & )", sig), ParseError);
  try {
    parse_formula("Ax.E(x)", sig);
    FAIL("expected an arity error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::ArityMismatch);
  }
  try {
    parse_formula("Ax.F(x,x)", sig);
    FAIL("expected an unknown symbol");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::UnknownSymbol);
  }
  CHECK_THROWS_AS(parse_formula("E(x,y) junk", sig), ParseError);
  try {
    parse_formula("(x=y & ?)", sig);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 7);
  }
}

TEST_CASE("render then parse is the identity on random formulas") {
  t::Rng rng(7);
  Signature sig = t::graph_signature();
  sig.add_constant("c");
  for (int i = 0; i < 500; ++i) {
    Formula f = t::random_formula(rng, sig, {"x", "y"}, t::uniform(rng, 0, 4), {"c"});
    CAPTURE(render(f));
    CHECK(parse_formula(render(f), sig) == f);
  }
}

TEST_CASE("evaluate: examples") {
  FinStructure cycle = graph(2, {{0, 1}, {1, 0}});
  Signature sig = cycle.signature();
  CHECK(evaluate(cycle, parse_formula("Ax.Ey.E(x,y)", sig)));
  CHECK(evaluate(cycle, parse_formula("Ax.(x=x)", sig)));
  FinStructure edgeless = graph(2, {});
  CHECK_FALSE(evaluate(edgeless, parse_formula("Ex.E(x,x)", sig)));
  CHECK(evaluate(graph(0, {}), parse_formula("Ax.E(x,x)", sig)));
}

TEST_CASE("evaluate: errors") {
  FinStructure m = graph(2, {});
  CHECK_THROWS_AS(evaluate(m, parse_formula("E(x,y)", m.signature()), {{"x", 0}}), EvaluationError);
  Signature other;
  other.add_relation("R", 1);
  CHECK_THROWS_AS(evaluate(m, parse_formula("Ex.R(x)", other)), EvaluationError);
}

TEST_CASE("evaluate agrees with the naive evaluator") {
  t::Rng rng(11);
  Signature sig = t::graph_signature();
  int trues = 0;
  for (int i = 0; i < 1000; ++i) {
    FinStructure m = t::random_structure(rng, t::uniform(rng, 1, 5), sig, 0.4);
    Formula f = t::random_formula(rng, sig, {"x", "y"}, t::uniform(rng, 0, 4));
    Assignment a{{"x", t::uniform(rng, 0, m.size() - 1)}, {"y", t::uniform(rng, 0, m.size() - 1)}};
    const bool fast = evaluate(m, f, a);
    CAPTURE(render(f));
    CHECK(fast == t::naive_eval(m, f, {{"x", a["x"]}, {"y", a["y"]}}));
    trues += fast;
  }
  CHECK(trues > 100);
  CHECK(trues < 900);
}

TEST_CASE("evaluate is invariant under renaming bound variables") {
  t::Rng rng(3);
  Signature sig = t::graph_signature();
  for (int i = 0; i < 300; ++i) {
    FinStructure m = t::random_structure(rng, t::uniform(rng, 1, 4), sig, 0.5);
    Formula f = t::random_sentence(rng, sig, 4);
    // rename every bound variable v to v_r
    std::function<Formula(const Formula&)> re = [&](const Formula& g) -> Formula {
      switch (g.kind()) {
        case Connective::Atom:
        case Connective::Equal: {
          std::map<std::string, Term> sub;
          for (const auto& term : g.terms())
            if (term.is_variable()) sub[term.name] = Term::var(term.name + "_r");
          return substitute(g, sub);
        }
        case Connective::Not:
          return Formula::negation(re(g.left()));
        case Connective::Exists:
        case Connective::Forall:
          return Formula::quantifier(g.kind(), g.variable() + "_r", re(g.body()));
        default:
          return Formula::binary(g.kind(), re(g.left()), re(g.right()));
      }
    };
    Formula r = re(f);
    CHECK(all_variables(r) != all_variables(f));
    CHECK(evaluate(m, f) == evaluate(m, r));
  }
}

TEST_CASE("substitute avoids capture") {
  Signature sig;
  sig.add_relation("E", 2);
  Formula f = parse_formula("Ey.E(x,y)", sig);
  Formula g = substitute(f, {{"x", Term::var("y")}});
  CHECK(free_variables(g) == std::set<std::string>{"y"});
  FinStructure m = graph(2, {{0, 1}});
  CHECK(evaluate(m, g, {{"y", 0}}));
  CHECK_FALSE(evaluate(m, g, {{"y", 1}}));
}

TEST_CASE("definable: examples") {
  Signature sig;
  sig.add_relation("E", 2);
  FinStructure v2 = graph(2, {{0, 1}});
  auto d0 = definable_relations(v2, 1, 0, {});
  CHECK(d0.count(TupleSet{{0}, {1}}) == 1);

  Signature lt;
  lt.add_relation("L", 2);
  FinStructure order(3, lt);
  order.add_tuple("L", {0, 1});
  order.add_tuple("L", {0, 2});
  order.add_tuple("L", {1, 2});
  auto d2 = definable_relations(order, 1, 2, {});
  CHECK(d2.count(TupleSet{{0}}) == 1);
  CHECK(d2.count(TupleSet{{2}}) == 1);
}

TEST_CASE("definable: empty signature") {
  FinStructure m(3, Signature{});
  // depth 0 admits only x=x; its negation costs one connective
  CHECK(definable_relations(m, 1, 0, {}) == std::set<TupleSet>{TupleSet{{0}, {1}, {2}}});
  CHECK(definable_relations(m, 1, 1, {}) == std::set<TupleSet>{TupleSet{}, TupleSet{{0}, {1}, {2}}});
}

TEST_CASE("definable: parameters name points") {
  FinStructure m(3, Signature{});
  std::vector<int> p{1};
  auto d = definable_relations(m, 1, 1, p);
  CHECK(d.count(TupleSet{{1}}) == 1);
  CHECK(d.count(TupleSet{{0}, {2}}) == 1);
}

TEST_CASE("definable: monotone in depth") {
  t::Rng rng(5);
  Signature sig;
  sig.add_relation("E", 2);
  for (int i = 0; i < 6; ++i) {
    FinStructure m = t::random_structure(rng, t::uniform(rng, 2, 3), sig, 0.4);
    for (int d = 0; d < 2; ++d) {
      auto lo = definable_relations(m, 1, d, {});
      auto hi = definable_relations(m, 1, d + 1, {});
      for (const auto& r : lo) CHECK(hi.count(r) == 1);
    }
  }
}

TEST_CASE("definable: every extension is closed under automorphisms") {
  // 2-cycle: swapping the points is an automorphism, so no singleton is definable
  FinStructure cycle = graph(2, {{0, 1}, {1, 0}});
  auto d = definable_relations(cycle, 1, 2, {});
  CHECK(d.count(TupleSet{{0}}) == 0);
  CHECK(d.count(TupleSet{{1}}) == 0);
  auto d2 = definable_relations(cycle, 2, 1, {});
  CHECK(d2.count(TupleSet{{0, 1}, {1, 0}}) == 1);
}
