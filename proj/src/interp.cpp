#include "interpres/interp.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "interpres/error.hpp"

namespace interpres {

std::vector<std::string> default_vars(int group, int dimension) {
  static constexpr std::string_view kLetters = "xyzwuvst";
  if (group < 0 || group >= static_cast<int>(kLetters.size()))
    throw std::invalid_argument("default variable names cover at most 8 argument groups");
  std::string stem(1, kLetters[static_cast<std::size_t>(group)]);
  if (dimension == 1) return {stem};
  std::vector<std::string> out;
  for (int j = 1; j <= dimension; ++j) out.push_back(stem + std::to_string(j));
  return out;
}

std::string translated_var(const std::string& var, int component) {
  return var + "__" + std::to_string(component);
}

namespace {

std::vector<std::string> concat(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void check_distinct(const std::vector<std::string>& vars, const std::string& what) {
  std::set<std::string> seen(vars.begin(), vars.end());
  if (seen.size() != vars.size()) throw ValidationError(what + ": variable names must be distinct");
  for (const auto& v : vars)
    if (!is_identifier(v)) throw ValidationError(what + ": malformed variable name '" + v + "'");
}

void check_free(const Formula& f, const std::vector<std::string>& allowed, const std::string& what) {
  for (const auto& v : free_variables(f))
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
      throw ValidationError(what + ": undeclared free variable '" + v + "'");
}

Formula instantiate(const Formula& f, const std::vector<std::string>& from, const std::vector<std::string>& to) {
  std::map<std::string, Term> sigma;
  for (std::size_t i = 0; i < from.size(); ++i) sigma.emplace(from[i], Term::var(to[i]));
  return substitute(f, sigma);
}

std::vector<std::string> translated_tuple(const std::string& var, int k) {
  std::vector<std::string> out;
  for (int j = 1; j <= k; ++j) out.push_back(translated_var(var, j));
  return out;
}

std::size_t checked_power(int base, int exponent, std::size_t cap, const std::string& what) {
  std::size_t total = 1;
  for (int i = 0; i < exponent; ++i) {
    total *= static_cast<std::size_t>(base);
    if (total > cap) throw CapExceeded(what + ": more than " + std::to_string(cap) + " tuples");
  }
  return total;
}

void decode_lex(std::size_t idx, int base, std::span<int> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<int>(idx % static_cast<std::size_t>(base));
    idx /= static_cast<std::size_t>(base);
  }
}

std::size_t encode_lex(std::span<const int> tuple, int base) {
  std::size_t idx = 0;
  for (int v : tuple) idx = idx * static_cast<std::size_t>(base) + static_cast<std::size_t>(v);
  return idx;
}

constexpr std::size_t kTupleCap = std::size_t{1} << 22;

}  // namespace

// ----------------------------------------------------------- Interpretation

Signature Interpretation::host_signature() const {
  std::vector<std::string> names;
  for (const auto& c : target.constants()) names.push_back(c);
  for (const auto& p : params) names.push_back(p.name);
  return target.with_constants(names);
}

FinStructure Interpretation::bind_params(const FinStructure& host) const {
  std::vector<std::pair<std::string, int>> named;
  for (const auto& p : params) named.emplace_back(p.name, p.element);
  return host.with_constants(named);
}

void Interpretation::validate() const {
  if (dimension < 1) throw ValidationError("interpretation dimension must be >= 1");
  if (!source.relational()) throw ValidationError("interpretations need a relational source signature");
  const Signature host = host_signature();
  if (static_cast<int>(domain_vars.size()) != dimension)
    throw ValidationError("domain formula needs exactly k variables");
  check_distinct(domain_vars, "domain");
  check_free(domain, domain_vars, "domain");
  check_signature(domain, host);
  if (static_cast<int>(eq_left.size()) != dimension || static_cast<int>(eq_right.size()) != dimension)
    throw ValidationError("equality formula needs exactly 2k variables");
  const auto eq_vars = concat(eq_left, eq_right);
  check_distinct(eq_vars, "equality");
  check_free(equality, eq_vars, "equality");
  check_signature(equality, host);
  for (const auto& [name, arity] : source.relations()) {
    auto it = relations.find(name);
    if (it == relations.end()) throw ValidationError("no formula for source relation '" + name + "'");
    if (static_cast<int>(it->second.vars.size()) != arity * dimension)
      throw ValidationError("formula for '" + name + "' needs arity * k variables");
    check_distinct(it->second.vars, "relation '" + name + "'");
    check_free(it->second.formula, it->second.vars, "relation '" + name + "'");
    check_signature(it->second.formula, host);
  }
  for (const auto& [name, rf] : relations)
    if (!source.has_relation(name)) throw ValidationError("formula for unknown source relation '" + name + "'");
}

Interpretation Interpretation::identity(const Signature& sig) {
  if (!sig.relational()) throw ValidationError("interpretations need a relational source signature");
  Interpretation out;
  out.source = sig;
  out.target = sig;
  out.dimension = 1;
  out.domain_vars = {"x"};
  out.domain = Formula::equal("x", "x");
  out.eq_left = {"x"};
  out.eq_right = {"y"};
  out.equality = Formula::equal("x", "y");
  for (const auto& [name, arity] : sig.relations()) {
    RelationFormula rf;
    std::vector<Term> args;
    for (int i = 0; i < arity; ++i) {
      rf.vars.push_back(default_vars(i, 1).front());
      args.push_back(Term::var(rf.vars.back()));
    }
    rf.formula = Formula::atom(name, std::move(args));
    out.relations.emplace(name, std::move(rf));
  }
  return out;
}

void Theory::validate() const {
  for (const auto& ax : axioms) {
    check_signature(ax, signature);
    if (!is_sentence(ax)) throw ValidationError("axiom '" + render(ax) + "' is not a sentence");
  }
}

// ---------------------------------------------------------------- translate

namespace {

Formula translate_rec(const Formula& phi, const Interpretation& in) {
  const int k = in.dimension;
  auto expand = [&](const Term& t) {
    if (!t.is_variable())
      throw SignatureError("cannot translate constant '" + t.name + "': source signatures are relational");
    return translated_tuple(t.name, k);
  };
  switch (phi.kind()) {
    case Connective::Atom: {
      auto it = in.relations.find(phi.relation());
      if (it == in.relations.end())
        throw SignatureError("no translation for relation '" + phi.relation() + "'");
      std::vector<std::string> to;
      for (const auto& t : phi.terms()) {
        auto part = expand(t);
        to.insert(to.end(), part.begin(), part.end());
      }
      if (to.size() != it->second.vars.size())
        throw SignatureError("arity mismatch translating '" + phi.relation() + "'");
      return instantiate(it->second.formula, it->second.vars, to);
    }
    case Connective::Equal:
      return instantiate(in.equality, concat(in.eq_left, in.eq_right),
                         concat(expand(phi.terms()[0]), expand(phi.terms()[1])));
    case Connective::Not:
      return Formula::negation(translate_rec(phi.left(), in));
    case Connective::And:
    case Connective::Or:
    case Connective::Implies:
      return Formula::binary(phi.kind(), translate_rec(phi.left(), in), translate_rec(phi.right(), in));
    case Connective::Exists:
    case Connective::Forall: {
      auto vars = translated_tuple(phi.variable(), k);
      Formula guard = instantiate(in.domain, in.domain_vars, vars);
      Formula body = translate_rec(phi.body(), in);
      if (phi.kind() == Connective::Exists)
        return Formula::exists_all(vars, Formula::conjunction(guard, body));
      return Formula::forall_all(vars, Formula::implication(guard, body));
    }
  }
  return phi;
}

}  // namespace

Formula translate(const Formula& phi, const Interpretation& interp) { return translate_rec(phi, interp); }

// -------------------------------------------------------------------- apply

int Applied::class_of_tuple(std::span<const int> tuple, int host_size) const {
  for (int v : tuple)
    if (v < 0 || v >= host_size) return -1;
  return class_of[encode_lex(tuple, host_size)];
}

Applied apply(const Interpretation& in, const FinStructure& host_in) {
  in.validate();
  for (const auto& [name, arity] : in.target.relations()) {
    auto a = host_in.signature().arity(name);
    if (!a || *a != arity) throw ValidationError("host structure lacks target relation '" + name + "'");
  }
  const FinStructure host = in.bind_params(host_in);
  const int n = host.size();
  const int k = in.dimension;
  const std::size_t total = checked_power(n, k, kTupleCap, "interpretation domain");

  CompiledFormula dom(host, in.domain, in.domain_vars);
  std::vector<Tuple> members;
  Tuple t(static_cast<std::size_t>(k));
  for (std::size_t idx = 0; idx < total; ++idx) {
    decode_lex(idx, n, t);
    if (dom(t)) members.push_back(t);
  }
  if (members.empty()) throw ValidationError("interpretation domain is empty");

  const auto eq_vars = concat(in.eq_left, in.eq_right);
  CompiledFormula eq(host, in.equality, eq_vars);
  const std::size_t u = members.size();
  checked_power(static_cast<int>(u), 2, kTupleCap * 4, "equality table");
  std::vector<char> table(u * u);
  Tuple pair(2 * static_cast<std::size_t>(k));
  for (std::size_t a = 0; a < u; ++a) {
    std::copy(members[a].begin(), members[a].end(), pair.begin());
    for (std::size_t b = 0; b < u; ++b) {
      std::copy(members[b].begin(), members[b].end(), pair.begin() + k);
      table[a * u + b] = eq(pair) ? 1 : 0;
    }
  }
  // Classes by first member; eq is an equivalence on U iff it is exactly
  // "same class" for this assignment.
  std::vector<int> cls(u, -1);
  int classes = 0;
  for (std::size_t a = 0; a < u; ++a) {
    if (cls[a] >= 0) continue;
    if (!table[a * u + a]) throw ValidationError("interpreted equality is not reflexive on the domain");
    for (std::size_t b = a; b < u; ++b)
      if (table[a * u + b] && cls[b] < 0) cls[b] = classes;
    ++classes;
  }
  for (std::size_t a = 0; a < u; ++a)
    for (std::size_t b = 0; b < u; ++b)
      if ((table[a * u + b] != 0) != (cls[a] == cls[b]))
        throw ValidationError("interpreted equality is not an equivalence relation on the domain");

  Applied out;
  out.domain_tuples = u;
  out.class_of.assign(total, -1);
  out.representatives.resize(static_cast<std::size_t>(classes));
  for (std::size_t a = 0; a < u; ++a) {
    out.class_of[encode_lex(members[a], n)] = cls[a];
    if (out.representatives[static_cast<std::size_t>(cls[a])].empty())
      out.representatives[static_cast<std::size_t>(cls[a])] = members[a];
  }

  FinStructure result(classes, in.source);
  for (const auto& [name, arity] : in.source.relations()) {
    const RelationFormula& rf = in.relations.at(name);
    CompiledFormula r(host, rf.formula, rf.vars);
    const std::size_t combos = checked_power(static_cast<int>(u), arity, kTupleCap * 4, "relation '" + name + "'");
    std::map<Tuple, char> verdict;  // class tuple -> 1 true, 2 false
    std::vector<std::size_t> pick(static_cast<std::size_t>(arity));
    Tuple args(static_cast<std::size_t>(arity * k));
    Tuple classes_of(static_cast<std::size_t>(arity));
    for (std::size_t c = 0; c < combos; ++c) {
      std::size_t rest = c;
      for (std::size_t i = pick.size(); i-- > 0;) {
        pick[i] = rest % u;
        rest /= u;
      }
      for (std::size_t i = 0; i < pick.size(); ++i) {
        std::copy(members[pick[i]].begin(), members[pick[i]].end(), args.begin() + static_cast<std::ptrdiff_t>(i) * k);
        classes_of[i] = cls[pick[i]];
      }
      const char v = r(args) ? 1 : 2;
      auto [it, fresh] = verdict.emplace(classes_of, v);
      if (!fresh && it->second != v)
        throw ValidationError("interpreted equality is not a congruence for '" + name + "'");
    }
    for (const auto& [ct, v] : verdict)
      if (v == 1) result.add_tuple(name, ct);
  }
  out.structure = std::move(result);
  return out;
}

// ------------------------------------------------------------------ compose

Interpretation compose(const Interpretation& outer, const Interpretation& inner) {
  if (outer.target.relations() != inner.source.relations())
    throw SignatureError("compose: outer target signature differs from inner source signature");
  if (!outer.params.empty())
    throw ValidationError("compose: the outer interpretation must not carry parameters");
  outer.validate();
  inner.validate();
  const int ki = inner.dimension;

  auto spread = [&](const std::vector<std::string>& vars) {
    std::vector<std::string> out;
    for (const auto& v : vars) {
      auto part = translated_tuple(v, ki);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  };

  Interpretation out;
  out.source = outer.source;
  out.target = inner.target;
  out.dimension = outer.dimension * ki;
  out.params = inner.params;

  out.domain_vars = spread(outer.domain_vars);
  std::vector<Formula> guards;
  for (const auto& v : outer.domain_vars)
    guards.push_back(instantiate(inner.domain, inner.domain_vars, translated_tuple(v, ki)));
  guards.push_back(translate(outer.domain, inner));
  out.domain = Formula::conjunction_of(guards);

  out.eq_left = spread(outer.eq_left);
  out.eq_right = spread(outer.eq_right);
  out.equality = translate(outer.equality, inner);

  for (const auto& [name, rf] : outer.relations)
    out.relations.emplace(name, RelationFormula{spread(rf.vars), translate(rf.formula, inner)});
  return out;
}

// ---------------------------------------------------------- theory checking

bool TheoryReport::all_hold() const {
  return std::all_of(axioms.begin(), axioms.end(), [](const AxiomVerdict& v) { return v.holds; });
}

TheoryReport check_theory_interpretation(const Interpretation& in, const Theory& theory, const FinStructure& host) {
  theory.validate();
  in.validate();
  const FinStructure h = in.bind_params(host);
  TheoryReport report;
  for (const auto& ax : theory.axioms) {
    Formula tr = translate(ax, in);
    report.axioms.push_back({ax, tr, evaluate(h, tr)});
  }
  return report;
}

Theory theory_disjunction(const Theory& t1, const Theory& t2) {
  if (!(t1.signature == t2.signature)) throw SignatureError("theory_disjunction: signatures differ");
  Theory out;
  out.name = "(" + t1.name + " | " + t2.name + ")";
  out.signature = t1.signature;
  for (const auto& a : t1.axioms)
    for (const auto& b : t2.axioms) out.axioms.push_back(Formula::disjunction(a, b));
  return out;
}

// ------------------------------------------------- mutual / bi / synonymy

MutualReport check_mutual(const FinStructure& m, const FinStructure& n, const Interpretation& i,
                          const Interpretation& j, const IsoLimits& limits) {
  MutualReport r;
  Applied n_star = apply(j, m);
  Applied m_star = apply(i, n);
  IsoLimits first = limits;
  first.max_results = 1;
  auto n_iso = find_isomorphisms(n, n_star.structure, first);
  auto m_iso = find_isomorphisms(m, m_star.structure, first);
  if (!n_iso.empty()) r.n_in_m = n_iso.front();
  if (!m_iso.empty()) r.m_in_n = m_iso.front();
  r.m_bar = apply(i, n_star.structure).structure;
  r.n_bar = apply(j, m_star.structure).structure;
  r.n_star = std::move(n_star.structure);
  r.m_star = std::move(m_star.structure);
  return r;
}

namespace {

// Checks that `iso` defines, in `host`, the graph of an isomorphism of host
// onto apply(second, apply(first, host)), modulo the interpreted equalities.
// Returns an empty string and fills `map` on success.
std::string check_iso_side(const FinStructure& host, const Interpretation& first, const Interpretation& second,
                           const IsoFormula& iso, const std::string& label, std::vector<int>& map) {
  const Applied inner = apply(first, host);
  const Applied outer = apply(second, inner.structure);
  const int k1 = first.dimension;
  const int k2 = second.dimension;
  const int width = k1 * k2;
  if (static_cast<int>(iso.tuple_vars.size()) != width)
    return label + ": iso formula needs " + std::to_string(width) + " tuple variables";
  const FinStructure h = first.bind_params(host);
  std::vector<std::string> vars{iso.point_var};
  vars.insert(vars.end(), iso.tuple_vars.begin(), iso.tuple_vars.end());
  check_free(iso.formula, vars, label + " iso formula");
  CompiledFormula graph(h, iso.formula, vars);

  const int n = host.size();
  const std::size_t total = checked_power(n, width, kTupleCap, label + " iso tuples");
  std::vector<int> composite(total, -1);
  Tuple t(static_cast<std::size_t>(width));
  Tuple mid(static_cast<std::size_t>(k2));
  for (std::size_t idx = 0; idx < total; ++idx) {
    decode_lex(idx, n, t);
    bool inside = true;
    for (int g = 0; g < k2 && inside; ++g) {
      int c = inner.class_of_tuple(std::span<const int>(t).subspan(static_cast<std::size_t>(g * k1), static_cast<std::size_t>(k1)), n);
      if (c < 0) inside = false;
      mid[static_cast<std::size_t>(g)] = c;
    }
    if (inside) composite[idx] = outer.class_of_tuple(mid, inner.structure.size());
  }

  map.assign(static_cast<std::size_t>(n), -1);
  Tuple args(static_cast<std::size_t>(width + 1));
  for (int a = 0; a < n; ++a) {
    std::set<int> targets;
    args[0] = a;
    for (std::size_t idx = 0; idx < total; ++idx) {
      if (composite[idx] < 0) continue;
      decode_lex(idx, n, std::span<int>(args).subspan(1));
      if (graph(args)) targets.insert(composite[idx]);
    }
    if (targets.size() != 1)
      return label + ": point " + std::to_string(a) + " is related to " + std::to_string(targets.size()) +
             " classes of the double interpretation";
    map[static_cast<std::size_t>(a)] = *targets.begin();
  }
  const FinStructure& bar = outer.structure;
  if (bar.size() != n) return label + ": double interpretation has a different size";
  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  for (int v : map) {
    if (hit[static_cast<std::size_t>(v)]) return label + ": iso relation is not injective";
    hit[static_cast<std::size_t>(v)] = 1;
  }
  for (const auto& [name, rel] : bar.relations()) {
    const Relation* mine = host.find_relation(name);
    if (!mine || mine->size() != rel.size()) return label + ": relation '" + name + "' is not preserved";
    for (const auto& tuple : mine->tuples()) {
      Tuple image;
      for (int v : tuple) image.push_back(map[static_cast<std::size_t>(v)]);
      if (!rel.contains(image)) return label + ": relation '" + name + "' is not preserved";
    }
  }
  return {};
}

}  // namespace

BiReport check_bi(const BiInterpretation& bi, const FinStructure& m, const FinStructure& n, const IsoLimits& limits) {
  BiReport r;
  r.mutual = check_mutual(m, n, bi.i, bi.j, limits);
  if (!r.mutual.mutual()) {
    r.diagnostic = "not mutually interpretable";
    return r;
  }
  r.diagnostic = check_iso_side(m, bi.j, bi.i, bi.iso_m, "M", r.m_to_m_bar);
  if (r.diagnostic.empty()) r.diagnostic = check_iso_side(n, bi.i, bi.j, bi.iso_n, "N", r.n_to_n_bar);
  r.holds = r.diagnostic.empty();
  return r;
}

SynonymyReport check_synonymy(const BiInterpretation& bi, const FinStructure& m, const FinStructure& n,
                              const IsoLimits& limits) {
  SynonymyReport r;
  r.bi = check_bi(bi, m, n, limits);
  if (!r.bi.holds) {
    r.diagnostic = "not a bi-interpretation: " + r.bi.diagnostic;
    return r;
  }
  auto trivial = [](const Interpretation& in, const FinStructure& host, const std::string& label) -> std::string {
    if (in.dimension != 1) return label + " has dimension " + std::to_string(in.dimension);
    Applied a = apply(in, host);
    if (a.domain_tuples != static_cast<std::size_t>(host.size())) return label + " domain is not the whole structure";
    if (a.structure.size() != host.size()) return label + " equality is not the identity";
    return {};
  };
  r.diagnostic = trivial(bi.i, n, "I");
  if (r.diagnostic.empty()) r.diagnostic = trivial(bi.j, m, "J");
  r.holds = r.diagnostic.empty();
  return r;
}

// -------------------------------------------------------------------- Scott

namespace {

std::vector<int> member_ranks(const BinaryRelation& rel) {
  std::vector<std::vector<int>> preds(static_cast<std::size_t>(rel.size));
  for (const auto& [a, b] : rel.edges) preds[static_cast<std::size_t>(b)].push_back(a);
  std::vector<int> rank(static_cast<std::size_t>(rel.size), -1);
  // Well-foundedness is checked by the caller, so repeated passes terminate.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < rel.size; ++v) {
      if (rank[static_cast<std::size_t>(v)] >= 0) continue;
      int r = 0;
      bool ready = true;
      for (int p : preds[static_cast<std::size_t>(v)]) {
        if (rank[static_cast<std::size_t>(p)] < 0) { ready = false; break; }
        r = std::max(r, rank[static_cast<std::size_t>(p)] + 1);
      }
      if (ready) { rank[static_cast<std::size_t>(v)] = r; changed = true; }
    }
  }
  return rank;
}

}  // namespace

std::vector<ScottClass> scott_classes(const Interpretation& in, const FinStructure& host,
                                      const std::string& membership) {
  if (in.dimension != 1) throw ValidationError("Scott reduction needs a one-dimensional interpretation");
  const BinaryRelation rel = binary_relation(host, membership);
  if (!is_wellfounded(rel)) throw ValidationError("membership relation is not well-founded");
  if (!is_extensional(rel)) throw ValidationError("membership relation is not extensional");
  const std::vector<int> rank = member_ranks(rel);
  const Applied a = apply(in, host);

  std::vector<std::set<int>> preds(static_cast<std::size_t>(rel.size));
  for (const auto& [x, y] : rel.edges) preds[static_cast<std::size_t>(y)].insert(x);

  std::vector<ScottClass> out(a.representatives.size());
  for (int v = 0; v < host.size(); ++v) {
    int c = a.class_of[static_cast<std::size_t>(v)];
    if (c >= 0) out[static_cast<std::size_t>(c)].members.push_back(v);
  }
  for (auto& sc : out) {
    int low = rank[static_cast<std::size_t>(sc.members.front())];
    for (int v : sc.members) low = std::min(low, rank[static_cast<std::size_t>(v)]);
    for (int v : sc.members)
      if (rank[static_cast<std::size_t>(v)] == low) sc.minimal.push_back(v);
    const std::set<int> want(sc.minimal.begin(), sc.minimal.end());
    for (int s = 0; s < host.size(); ++s)
      if (preds[static_cast<std::size_t>(s)] == want) { sc.code = s; break; }
  }
  return out;
}

Interpretation scott_reduce(const Interpretation& in, const FinStructure& host, std::optional<std::string> membership) {
  const std::string e = membership ? *membership : sole_binary_symbol(host);
  const auto classes = scott_classes(in, host, e);
  const Applied a = apply(in, host);

  Interpretation out = in;
  out.eq_left = {"x"};
  out.eq_right = {"y"};
  out.equality = Formula::equal("x", "y");
  if (a.structure.size() == static_cast<int>(a.domain_tuples)) {
    out.domain_vars = in.domain_vars;
    out.eq_left = in.domain_vars;
    out.eq_right = {in.domain_vars.front() == "y" ? "x" : "y"};
    out.equality = Formula::equal(out.eq_left.front(), out.eq_right.front());
    return out;
  }
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (!classes[c].code)
      throw ValidationError("Scott class " + std::to_string(c) + " is not an element of the host");

  int max_rank = 0;
  {
    const auto ranks = member_ranks(binary_relation(host, e));
    for (int r : ranks) max_rank = std::max(max_rank, r);
  }

  FreshNames fresh;
  fresh.reserve(in.domain);
  fresh.reserve(in.equality);
  for (const auto& v : concat(in.domain_vars, concat(in.eq_left, in.eq_right))) fresh.reserve(v);
  for (const auto& [name, rf] : in.relations) {
    fresh.reserve(rf.formula);
    for (const auto& v : rf.vars) fresh.reserve(v);
  }
  for (const auto& p : in.params) fresh.reserve(p.name);
  for (int g = 0; g < 8; ++g) fresh.reserve(default_vars(g, 1).front());

  auto mem = [&](const std::string& x, const std::string& y) { return Formula::atom(e, {x, y}); };
  auto dom = [&](const std::string& v) { return instantiate(in.domain, in.domain_vars, {v}); };
  auto same = [&](const std::string& l, const std::string& r) {
    return instantiate(in.equality, concat(in.eq_left, in.eq_right), {l, r});
  };

  // rho(r, v): v has rank at most r.
  std::function<Formula(int, const std::string&)> rho = [&](int r, const std::string& v) {
    std::string w = fresh.make("w");
    if (r == 0) return Formula::negation(Formula::exists(w, mem(w, v)));
    return Formula::forall(w, Formula::implication(mem(w, v), rho(r - 1, w)));
  };
  // lower(w, z): rank(w) < rank(z).
  auto lower = [&](const std::string& w, const std::string& z) {
    std::vector<Formula> parts;
    for (int r = 0; r < max_rank; ++r) parts.push_back(Formula::conjunction(rho(r, w), Formula::negation(rho(r, z))));
    if (parts.empty()) return Formula::negation(Formula::equal(w, w));
    Formula f = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) f = Formula::disjunction(f, parts[i]);
    return f;
  };
  // minimal(z, c): z is in the class of c and no member of that class has lower rank.
  auto minimal = [&](const std::string& z, const std::string& c) {
    std::string w = fresh.make("w");
    Formula in_class = Formula::conjunction(dom(z), same(z, c));
    Formula none_lower = Formula::forall(
        w, Formula::implication(Formula::conjunction(dom(w), same(w, c)), Formula::negation(lower(w, z))));
    return Formula::conjunction(in_class, none_lower);
  };

  const std::string c = fresh.make("c");
  const std::string z = fresh.make("z");
  out.domain_vars = {"x"};
  out.domain = Formula::exists(
      c, Formula::conjunction(
             dom(c), Formula::forall(z, Formula::conjunction(Formula::implication(mem(z, "x"), minimal(z, c)),
                                                             Formula::implication(minimal(z, c), mem(z, "x"))))));

  out.relations.clear();
  for (const auto& [name, rf] : in.relations) {
    RelationFormula nr;
    std::vector<std::string> picks;
    std::vector<Formula> parts;
    for (std::size_t i = 0; i < rf.vars.size(); ++i) {
      nr.vars.push_back(default_vars(static_cast<int>(i), 1).front());
      picks.push_back(fresh.make("z"));
      parts.push_back(mem(picks.back(), nr.vars.back()));
    }
    parts.push_back(instantiate(rf.formula, rf.vars, picks));
    nr.formula = Formula::exists_all(picks, Formula::conjunction_of(parts));
    out.relations.emplace(name, std::move(nr));
  }
  return out;
}

}  // namespace interpres
