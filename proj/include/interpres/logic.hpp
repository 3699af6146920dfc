#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "interpres/signature.hpp"
#include "interpres/structure.hpp"

namespace interpres {

struct Term {
  enum class Kind { Variable, Constant };

  Kind kind = Kind::Variable;
  std::string name;

  static Term var(std::string name) { return {Kind::Variable, std::move(name)}; }
  static Term constant(std::string name) { return {Kind::Constant, std::move(name)}; }
  bool is_variable() const noexcept { return kind == Kind::Variable; }

  friend auto operator<=>(const Term&, const Term&) = default;
};

enum class Connective { Atom, Equal, Not, And, Or, Implies, Exists, Forall };

// Immutable first-order formula with named variables. Copies share structure.
class Formula {
 public:
  static Formula atom(std::string relation, std::vector<Term> args);
  static Formula equal(Term lhs, Term rhs);
  static Formula negation(Formula f);
  static Formula conjunction(Formula a, Formula b);
  static Formula disjunction(Formula a, Formula b);
  static Formula implication(Formula a, Formula b);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);
  static Formula binary(Connective c, Formula a, Formula b);
  static Formula quantifier(Connective c, std::string var, Formula body);

  // Convenience: variables only.
  static Formula atom(std::string relation, std::initializer_list<std::string_view> vars);
  static Formula equal(std::string_view lhs, std::string_view rhs) {
    return equal(Term::var(std::string(lhs)), Term::var(std::string(rhs)));
  }

  // Left fold; `parts` must be nonempty.
  static Formula conjunction_of(std::span<const Formula> parts);
  static Formula exists_all(std::span<const std::string> vars, Formula body);
  static Formula forall_all(std::span<const std::string> vars, Formula body);

  Connective kind() const noexcept;
  bool is_quantifier() const noexcept;
  bool is_binary() const noexcept;

  const std::string& relation() const;         // Atom
  const std::string& variable() const;         // Exists, Forall
  std::span<const Term> terms() const;         // Atom args, Equal sides
  const Formula& left() const;                 // Not operand, binary left, quantifier body
  const Formula& right() const;                // binary right
  const Formula& body() const { return left(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

using Assignment = std::map<std::string, int, std::less<>>;

Formula parse_formula(std::string_view text, const Signature& sig);
std::string render(const Formula& f);

std::set<std::string> free_variables(const Formula& f);
std::set<std::string> all_variables(const Formula& f);
bool is_sentence(const Formula& f);
// Connectives plus quantifiers.
int depth(const Formula& f);
// Throws SignatureError on unknown symbols or arity mismatch.
void check_signature(const Formula& f, const Signature& sig);

// Capture-avoiding substitution of terms for free variables.
Formula substitute(const Formula& f, const std::map<std::string, Term>& replacement);
Formula rename_free(const Formula& f, const std::map<std::string, std::string>& renaming);

// Produces names that avoid a growing set of used identifiers.
class FreshNames {
 public:
  FreshNames() = default;
  explicit FreshNames(std::set<std::string> used) : used_(std::move(used)) {}
  void reserve(const std::string& name) { used_.insert(name); }
  void reserve(const Formula& f);
  std::string make(const std::string& stem);

 private:
  std::set<std::string> used_;
};

// Classical Tarskian satisfaction. Throws EvaluationError when a free
// variable is unassigned or a symbol is missing from the structure.
bool evaluate(const FinStructure& m, const Formula& f, const Assignment& a = {});

// Formula compiled against one structure with a fixed order of free
// variables. The structure must outlive the compiled form.
class CompiledFormula {
 public:
  CompiledFormula(const FinStructure& m, const Formula& f, std::span<const std::string> free_vars);

  bool operator()(std::span<const int> values) const;
  std::size_t arity() const noexcept { return free_count_; }

  struct Op {
    Connective kind;
    int a = -1;
    int b = -1;
    int slot = -1;                  // quantifier binding slot
    const Relation* rel = nullptr;  // Atom
    std::vector<int> args;          // slot index, or -(element + 1) for constants
  };

 private:
  bool run(int op, int* env) const;

  const FinStructure* structure_;
  std::vector<Op> ops_;
  int root_ = -1;
  std::size_t free_count_ = 0;
  std::size_t slot_count_ = 0;
};

struct DefinabilityLimits {
  std::size_t max_candidates = 5'000'000;
};

using TupleSet = std::set<Tuple>;

// Relations of the given arity defined by some formula of depth <= `depth`,
// with parameters available as extra constant terms. Deduplicated by extension.
std::set<TupleSet> definable_relations(const FinStructure& m, int arity, int depth,
                                       std::span<const int> params,
                                       const DefinabilityLimits& limits = {});

}  // namespace interpres
