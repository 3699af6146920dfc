#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "interpres/fin_model.hpp"
#include "interpres/logic.hpp"

namespace interpres {

// Default free-variable names for argument `group` of a k-dimensional
// interpretation: group 0 is x (k = 1) or x1..xk, then y, z, w, u, v, s, t.
std::vector<std::string> default_vars(int group, int dimension);

struct RelationFormula {
  std::vector<std::string> vars;  // arity * dimension names, argument-major
  Formula formula = Formula::equal("x", "x");
};

struct Parameter {
  std::string name;  // constant symbol usable in the formulas
  int element;       // element of the host structure
};

// A k-dimensional interpretation of the (relational) source signature in the
// target signature. Formulas may also use the parameter names as constants.
struct Interpretation {
  Signature source;
  Signature target;
  int dimension = 1;
  std::vector<std::string> domain_vars;
  Formula domain = Formula::equal("x", "x");
  std::vector<std::string> eq_left;
  std::vector<std::string> eq_right;
  Formula equality = Formula::equal("x", "y");
  std::map<std::string, RelationFormula> relations;
  std::vector<Parameter> params;

  // Target signature extended with the parameter names.
  Signature host_signature() const;
  // Host structure with parameters bound as constants.
  FinStructure bind_params(const FinStructure& host) const;
  // Shape checks: variable counts, signatures, free variables declared.
  void validate() const;

  // k = 1, domain x=x, equality x=y, each relation interpreted by itself.
  static Interpretation identity(const Signature& sig);
};

struct Theory {
  std::string name;
  Signature signature;
  std::vector<Formula> axioms;

  void validate() const;
};

Formula translate(const Formula& phi, const Interpretation& interp);
// Renamed free variable of a translated formula: x -> x__j (1-based).
std::string translated_var(const std::string& var, int component);

struct Applied {
  FinStructure structure;
  std::vector<Tuple> representatives;  // class -> lexicographically least tuple
  std::vector<int> class_of;           // lex index of a host k-tuple -> class, -1 outside domain
  std::size_t domain_tuples = 0;       // |U|

  int class_of_tuple(std::span<const int> tuple, int host_size) const;
};

Applied apply(const Interpretation& interp, const FinStructure& host);

// Composite interpretation: apply(compose(outer, inner), M) is isomorphic to
// apply(outer, apply(inner, M)). Requires outer.target == inner.source and
// outer without parameters.
Interpretation compose(const Interpretation& outer, const Interpretation& inner);

struct AxiomVerdict {
  Formula axiom;
  Formula translated;
  bool holds;
};

struct TheoryReport {
  std::vector<AxiomVerdict> axioms;
  bool all_hold() const;
};

TheoryReport check_theory_interpretation(const Interpretation& interp, const Theory& theory,
                                         const FinStructure& host);

// I interprets M's language in N, J interprets N's language in M.
struct MutualReport {
  std::optional<std::vector<int>> n_in_m;  // isomorphism N -> apply(J, M)
  std::optional<std::vector<int>> m_in_n;  // isomorphism M -> apply(I, N)
  FinStructure n_star;                     // apply(J, M)
  FinStructure m_star;                     // apply(I, N)
  FinStructure m_bar;                      // apply(I, apply(J, M))
  FinStructure n_bar;                      // apply(J, apply(I, N))
  bool mutual() const { return n_in_m.has_value() && m_in_n.has_value(); }
};

MutualReport check_mutual(const FinStructure& m, const FinStructure& n, const Interpretation& i,
                          const Interpretation& j, const IsoLimits& limits = {});

// Formula relating a point to a tuple of k_I * k_J host elements.
struct IsoFormula {
  std::string point_var = "x";
  std::vector<std::string> tuple_vars;
  Formula formula = Formula::equal("x", "y");
};

struct BiInterpretation {
  Interpretation i;  // M's language interpreted in N
  Interpretation j;  // N's language interpreted in M
  IsoFormula iso_m;  // over M: point of M vs. tuple naming a point of M-bar
  IsoFormula iso_n;  // over N
};

struct BiReport {
  bool holds = false;
  std::string diagnostic;
  MutualReport mutual;
  std::vector<int> m_to_m_bar;
  std::vector<int> n_to_n_bar;
};

BiReport check_bi(const BiInterpretation& bi, const FinStructure& m, const FinStructure& n,
                  const IsoLimits& limits = {});

struct SynonymyReport {
  bool holds = false;
  std::string diagnostic;
  BiReport bi;
};

SynonymyReport check_synonymy(const BiInterpretation& bi, const FinStructure& m, const FinStructure& n,
                              const IsoLimits& limits = {});

// Members of each interpreted equivalence class having least rank.
struct ScottClass {
  std::vector<int> members;  // the whole class
  std::vector<int> minimal;  // members of minimal rank
  std::optional<int> code;   // element of the host whose members are exactly `minimal`
};

std::vector<ScottClass> scott_classes(const Interpretation& interp, const FinStructure& host,
                                      const std::string& membership);

// Equivalent interpretation whose domain is the set of codes of Scott classes
// and whose equality is identity. The host must be a well-founded
// extensional membership structure in which every Scott class is an element.
Interpretation scott_reduce(const Interpretation& interp, const FinStructure& host,
                            std::optional<std::string> membership = std::nullopt);

Theory theory_disjunction(const Theory& t1, const Theory& t2);

}  // namespace interpres
