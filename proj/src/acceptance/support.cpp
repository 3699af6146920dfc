#include "support.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "interpres/error.hpp"

namespace interpres::testing {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// ------------------------------------------------------------- oracles

namespace {

int term_value(const FinStructure& m, const Term& t, const std::map<std::string, int>& env) {
  if (!t.is_variable()) return m.constant(t.name);
  auto it = env.find(t.name);
  if (it == env.end()) throw EvaluationError("naive_eval: unbound " + t.name);
  return it->second;
}

}  // namespace

bool naive_eval(const FinStructure& m, const Formula& f, std::map<std::string, int> env) {
  switch (f.kind()) {
    case Connective::Atom: {
      Tuple t;
      for (const auto& term : f.terms()) t.push_back(term_value(m, term, env));
      const auto& tuples = m.relation(f.relation()).tuples();
      return std::find(tuples.begin(), tuples.end(), t) != tuples.end();
    }
    case Connective::Equal:
      return term_value(m, f.terms()[0], env) == term_value(m, f.terms()[1], env);
    case Connective::Not:
      return !naive_eval(m, f.left(), env);
    case Connective::And:
      return naive_eval(m, f.left(), env) && naive_eval(m, f.right(), env);
    case Connective::Or:
      return naive_eval(m, f.left(), env) || naive_eval(m, f.right(), env);
    case Connective::Implies:
      return !naive_eval(m, f.left(), env) || naive_eval(m, f.right(), env);
    case Connective::Exists:
    case Connective::Forall: {
      const bool want = f.kind() == Connective::Exists;
      for (int v = 0; v < m.size(); ++v) {
        env[f.variable()] = v;
        if (naive_eval(m, f.body(), env) == want) return want;
      }
      return !want;
    }
  }
  return false;
}

bool has_cycle(const BinaryRelation& rel) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(rel.size));
  for (auto [a, b] : rel.edges) out[static_cast<std::size_t>(a)].push_back(b);
  std::vector<int> colour(static_cast<std::size_t>(rel.size), 0);
  std::function<bool(int)> visit = [&](int v) {
    colour[static_cast<std::size_t>(v)] = 1;
    for (int w : out[static_cast<std::size_t>(v)]) {
      if (colour[static_cast<std::size_t>(w)] == 1) return true;
      if (colour[static_cast<std::size_t>(w)] == 0 && visit(w)) return true;
    }
    colour[static_cast<std::size_t>(v)] = 2;
    return false;
  };
  for (int v = 0; v < rel.size; ++v)
    if (colour[static_cast<std::size_t>(v)] == 0 && visit(v)) return true;
  return false;
}

bool naive_extensional(const BinaryRelation& rel) {
  std::vector<std::vector<int>> preds(static_cast<std::size_t>(rel.size));
  for (auto [a, b] : rel.edges) preds[static_cast<std::size_t>(b)].push_back(a);
  for (auto& p : preds) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }
  for (int a = 0; a < rel.size; ++a)
    for (int b = a + 1; b < rel.size; ++b)
      if (preds[static_cast<std::size_t>(a)] == preds[static_cast<std::size_t>(b)]) return false;
  return true;
}

bool is_isomorphism(const FinStructure& a, const FinStructure& b, const std::vector<int>& f) {
  if (a.size() != b.size() || static_cast<int>(f.size()) != a.size()) return false;
  if (!(a.signature() == b.signature())) return false;
  std::vector<int> hit(f.size(), 0);
  for (int v : f) {
    if (v < 0 || v >= b.size() || hit[static_cast<std::size_t>(v)]++) return false;
  }
  for (const auto& [name, rel] : a.relations()) {
    const Relation& other = b.relation(name);
    if (rel.size() != other.size()) return false;
    for (const auto& t : rel.tuples()) {
      Tuple img;
      for (int v : t) img.push_back(f[static_cast<std::size_t>(v)]);
      if (!other.contains(img)) return false;
    }
  }
  for (const auto& [name, value] : a.constants())
    if (f[static_cast<std::size_t>(value)] != b.constant(name)) return false;
  return true;
}

std::size_t brute_iso_count(const FinStructure& a, const FinStructure& b, std::size_t stop_after) {
  if (a.size() != b.size()) return 0;
  std::vector<int> f(static_cast<std::size_t>(a.size()));
  std::iota(f.begin(), f.end(), 0);
  std::size_t count = 0;
  do {
    if (is_isomorphism(a, b, f) && ++count >= stop_after) break;
  } while (std::next_permutation(f.begin(), f.end()));
  return count;
}

// ---------------------------------------------------------- generators

Signature graph_signature() {
  Signature s;
  s.add_relation("E", 2).add_relation("P", 1);
  return s;
}

FinStructure random_structure(Rng& rng, int n, const Signature& sig, double density) {
  FinStructure m(n, sig);
  for (const auto& [name, arity] : sig.relations()) {
    Tuple t(static_cast<std::size_t>(arity), 0);
    std::size_t total = 1;
    for (int i = 0; i < arity; ++i) total *= static_cast<std::size_t>(n);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      for (int i = arity - 1; i >= 0; --i) {
        t[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(n));
        rest /= static_cast<std::size_t>(n);
      }
      if (coin(rng, density)) m.add_tuple(name, t);
    }
  }
  return m;
}

namespace {

const std::vector<std::string> kBoundPool{"u", "v", "x", "y"};

Term pick_term(Rng& rng, const std::vector<std::string>& scope, const std::vector<std::string>& constants) {
  int total = static_cast<int>(scope.size() + constants.size());
  int i = uniform(rng, 0, total - 1);
  if (i < static_cast<int>(scope.size())) return Term::var(scope[static_cast<std::size_t>(i)]);
  return Term::constant(constants[static_cast<std::size_t>(i) - scope.size()]);
}

Formula random_atom(Rng& rng, const Signature& sig, const std::vector<std::string>& scope,
                    const std::vector<std::string>& constants) {
  const auto& rels = sig.relations();
  if (rels.empty() || coin(rng, 0.2)) return Formula::equal(pick_term(rng, scope, constants), pick_term(rng, scope, constants));
  auto it = rels.begin();
  std::advance(it, uniform(rng, 0, static_cast<int>(rels.size()) - 1));
  std::vector<Term> args;
  for (int i = 0; i < it->second; ++i) args.push_back(pick_term(rng, scope, constants));
  return Formula::atom(it->first, std::move(args));
}

}  // namespace

Formula random_formula(Rng& rng, const Signature& sig, const std::vector<std::string>& scope, int depth,
                       const std::vector<std::string>& constants) {
  const bool have_terms = !scope.empty() || !constants.empty();
  if (!have_terms && depth < 1) throw std::logic_error("random_formula: nothing to build an atom from");
  if (have_terms && (depth == 0 || coin(rng, 0.25))) return random_atom(rng, sig, scope, constants);
  int choice = uniform(rng, 0, 5);
  // Without terms both sides of a binary connective need their own quantifier.
  if (!have_terms && depth < 3 && choice >= 1 && choice <= 3) choice = 4;
  if (!have_terms && depth < 2 && choice == 0) choice = 5;
  switch (choice) {
    case 0:
      return Formula::negation(random_formula(rng, sig, scope, depth - 1, constants));
    case 1:
    case 2:
    case 3: {
      const int budget = depth - 1;
      const int lo = have_terms ? 0 : 1;
      const int left = uniform(rng, lo, budget - lo);
      const int right = uniform(rng, lo, budget - left);
      static constexpr Connective kinds[] = {Connective::And, Connective::Or, Connective::Implies};
      return Formula::binary(kinds[choice - 1], random_formula(rng, sig, scope, left, constants),
                             random_formula(rng, sig, scope, right, constants));
    }
    default: {
      std::string var = kBoundPool[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(kBoundPool.size()) - 1))];
      std::vector<std::string> inner = scope;
      if (std::find(inner.begin(), inner.end(), var) == inner.end()) inner.push_back(var);
      Formula body = random_formula(rng, sig, inner, depth - 1, constants);
      return choice == 4 ? Formula::exists(var, body) : Formula::forall(var, body);
    }
  }
}

Formula random_sentence(Rng& rng, const Signature& sig, int depth) {
  return random_formula(rng, sig, {}, std::max(depth, 1));
}

namespace {

Formula iff(const Formula& a, const Formula& b) {
  return Formula::conjunction(Formula::implication(a, b), Formula::implication(b, a));
}

Formula rename_to(const Formula& f, const std::vector<std::string>& from, const std::vector<std::string>& to) {
  std::map<std::string, Term> sigma;
  for (std::size_t i = 0; i < from.size(); ++i) sigma.emplace(from[i], Term::var(to[i]));
  return substitute(f, sigma);
}

Formula conj(const std::vector<Formula>& parts) { return Formula::conjunction_of(parts); }

Formula random_combination(Rng& rng, const std::vector<Formula>& atoms, int depth) {
  if (depth == 0 || coin(rng, 0.3)) return atoms[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(atoms.size()) - 1))];
  switch (uniform(rng, 0, 3)) {
    case 0:
      return Formula::negation(random_combination(rng, atoms, depth - 1));
    case 1:
      return Formula::conjunction(random_combination(rng, atoms, depth - 1), random_combination(rng, atoms, depth - 1));
    case 2:
      return Formula::disjunction(random_combination(rng, atoms, depth - 1), random_combination(rng, atoms, depth - 1));
    default:
      return Formula::implication(random_combination(rng, atoms, depth - 1), random_combination(rng, atoms, depth - 1));
  }
}

enum class EqPart { Identity, Kernel, Multiset, FirstCoordinate };

}  // namespace

Interpretation random_interpretation(Rng& rng, const Signature& source, const Signature& target, int k,
                                     int host_size, bool allow_params) {
  Interpretation in;
  in.source = source;
  in.target = target;
  in.dimension = k;
  std::vector<std::string> consts;
  if (allow_params && coin(rng, 0.3)) {
    in.params.push_back({"p0", uniform(rng, 0, host_size - 1)});
    consts.push_back("p0");
  }
  const int feature_depth = k == 1 ? 2 : 1;
  const auto xs = default_vars(0, k);
  const auto ys = default_vars(1, k);

  in.domain_vars = xs;
  in.domain = coin(rng, 0.4) ? Formula::equal(xs[0], xs[0]) : random_formula(rng, target, xs, 1, consts);

  std::vector<EqPart> parts;
  std::vector<Formula> features;  // over xs
  int menu = uniform(rng, 0, k == 1 ? 2 : 5);
  if (menu == 0) parts.push_back(EqPart::Identity);
  if (menu == 1 || menu == 2 || menu == 5) parts.push_back(EqPart::Kernel);
  if (menu == 3) parts.push_back(EqPart::Multiset);
  if (menu == 4 || menu == 5) parts.push_back(EqPart::FirstCoordinate);
  if (std::find(parts.begin(), parts.end(), EqPart::Kernel) != parts.end()) {
    int count = uniform(rng, 1, 2);
    for (int i = 0; i < count; ++i) features.push_back(random_formula(rng, target, xs, feature_depth, consts));
  }

  std::vector<Formula> eq_parts;
  for (EqPart p : parts) {
    switch (p) {
      case EqPart::Identity: {
        std::vector<Formula> eqs;
        for (int i = 0; i < k; ++i) eqs.push_back(Formula::equal(xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(i)]));
        eq_parts.push_back(conj(eqs));
        break;
      }
      case EqPart::Kernel:
        for (const auto& f : features) eq_parts.push_back(iff(f, rename_to(f, xs, ys)));
        break;
      case EqPart::Multiset:
        eq_parts.push_back(Formula::disjunction(
            Formula::conjunction(Formula::equal(xs[0], ys[0]), Formula::equal(xs[1], ys[1])),
            Formula::conjunction(Formula::equal(xs[0], ys[1]), Formula::equal(xs[1], ys[0]))));
        break;
      case EqPart::FirstCoordinate:
        eq_parts.push_back(Formula::equal(xs[0], ys[0]));
        break;
    }
  }
  in.eq_left = xs;
  in.eq_right = ys;
  in.equality = conj(eq_parts);

  const bool saturate = k == 1 && coin(rng, 0.2);
  for (const auto& [name, arity] : source.relations()) {
    RelationFormula rf;
    std::vector<std::vector<std::string>> groups;
    for (int g = 0; g < arity; ++g) {
      groups.push_back(default_vars(g, k));
      rf.vars.insert(rf.vars.end(), groups.back().begin(), groups.back().end());
    }
    if (saturate) {
      // R(x̄) := Ex̄'.(U(x̄') & eq(x̄, x̄') & psi(x̄')): invariant for any psi.
      std::vector<std::string> primed;
      std::vector<Formula> guard;
      for (int g = 0; g < arity; ++g) {
        std::string p = rf.vars[static_cast<std::size_t>(g)] + "_s";
        primed.push_back(p);
        guard.push_back(rename_to(in.domain, xs, {p}));
        guard.push_back(rename_to(in.equality, {xs[0], ys[0]}, {rf.vars[static_cast<std::size_t>(g)], p}));
      }
      guard.push_back(random_formula(rng, target, primed, 2, consts));
      rf.formula = Formula::exists_all(primed, conj(guard));
      in.relations.emplace(name, std::move(rf));
      continue;
    }
    std::vector<Formula> pieces;
    for (EqPart p : parts) {
      switch (p) {
        case EqPart::Identity:
          pieces.push_back(random_formula(rng, target, rf.vars, feature_depth, consts));
          break;
        case EqPart::Kernel: {
          std::vector<Formula> atoms;
          for (const auto& f : features)
            for (const auto& grp : groups) atoms.push_back(rename_to(f, xs, grp));
          pieces.push_back(random_combination(rng, atoms, 2));
          break;
        }
        case EqPart::Multiset: {
          Formula base = random_formula(rng, target, rf.vars, 1, consts);
          // Disjunction over every choice of swapping inside each argument.
          std::vector<Formula> swaps;
          for (int mask = 0; mask < (1 << arity); ++mask) {
            std::vector<std::string> to = rf.vars;
            for (int g = 0; g < arity; ++g)
              if (mask >> g & 1) std::swap(to[static_cast<std::size_t>(2 * g)], to[static_cast<std::size_t>(2 * g + 1)]);
            swaps.push_back(rename_to(base, rf.vars, to));
          }
          Formula f = swaps.front();
          for (std::size_t i = 1; i < swaps.size(); ++i) f = Formula::disjunction(f, swaps[i]);
          pieces.push_back(f);
          break;
        }
        case EqPart::FirstCoordinate: {
          std::vector<std::string> firsts;
          for (const auto& grp : groups) firsts.push_back(grp[0]);
          pieces.push_back(random_formula(rng, target, firsts, 1, consts));
          break;
        }
      }
    }
    rf.formula = random_combination(rng, pieces, pieces.size() > 1 ? 1 : 0);
    in.relations.emplace(name, std::move(rf));
  }
  return in;
}

// ------------------------------------------------------------ HF helpers

FinStructure membership_structure(const std::vector<HFSet>& sets, const std::string& symbol) {
  Signature sig;
  sig.add_relation(symbol, 2);
  FinStructure m(static_cast<int>(sets.size()), sig);
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = 0; j < sets.size(); ++j)
      if (std::find(sets[j].elements().begin(), sets[j].elements().end(), sets[i]) != sets[j].elements().end())
        m.add_tuple(symbol, {static_cast<int>(i), static_cast<int>(j)});
  return m;
}

std::vector<HFSet> stage_by_powerset(int n) {
  std::vector<HFSet> cur;
  for (int i = 0; i < n; ++i) {
    std::vector<HFSet> next;
    const std::size_t count = std::size_t{1} << cur.size();
    for (std::size_t mask = 0; mask < count; ++mask) {
      std::vector<HFSet> kids;
      for (std::size_t b = 0; b < cur.size(); ++b)
        if (mask >> b & 1U) kids.push_back(cur[b]);
      next.push_back(HFSet::of(std::move(kids)));
    }
    cur = std::move(next);
  }
  return cur;
}

HFSet random_transitive(Rng& rng, int max_size) {
  // Grow by adjoining random subsets of the current set; each step keeps
  // the set transitive.
  std::vector<HFSet> members;
  const int target = uniform(rng, 0, max_size);
  int guard = 0;
  while (static_cast<int>(members.size()) < target && guard++ < 100) {
    std::vector<HFSet> kids;
    for (const auto& m : members)
      if (coin(rng)) kids.push_back(m);
    HFSet s = HFSet::of(std::move(kids));
    if (s.rank() >= 4) continue;
    if (std::find(members.begin(), members.end(), s) == members.end()) members.push_back(s);
  }
  return HFSet::of(std::move(members));
}

std::vector<int> random_permutation(Rng& rng, int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace interpres::testing
