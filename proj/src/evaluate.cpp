#include <algorithm>
#include <array>

#include "interpres/error.hpp"
#include "interpres/logic.hpp"

namespace interpres {

namespace {

struct Compiler {
  const FinStructure& m;
  std::vector<CompiledFormula::Op>& ops;
  std::vector<std::pair<std::string, int>> scope;  // innermost binding last
  int next_slot;

  int lookup(const Term& t) const {
    if (!t.is_variable()) return -(m.constant(t.name) + 1);
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == t.name) return it->second;
    throw EvaluationError("free variable '" + t.name + "' is not assigned");
  }

  int compile(const Formula& f) {
    CompiledFormula::Op op{f.kind()};
    switch (f.kind()) {
      case Connective::Atom: {
        const Relation* rel = m.find_relation(f.relation());
        if (!rel) throw EvaluationError("structure has no relation '" + f.relation() + "'");
        if (rel->arity() != static_cast<int>(f.terms().size()))
          throw EvaluationError("arity mismatch for '" + f.relation() + "'");
        op.rel = rel;
        for (const auto& t : f.terms()) op.args.push_back(lookup(t));
        break;
      }
      case Connective::Equal:
        for (const auto& t : f.terms()) op.args.push_back(lookup(t));
        break;
      case Connective::Not:
        op.a = compile(f.left());
        break;
      case Connective::And:
      case Connective::Or:
      case Connective::Implies:
        op.a = compile(f.left());
        op.b = compile(f.right());
        break;
      case Connective::Exists:
      case Connective::Forall:
        op.slot = next_slot++;
        scope.emplace_back(f.variable(), op.slot);
        op.a = compile(f.body());
        scope.pop_back();
        break;
    }
    ops.push_back(std::move(op));
    return static_cast<int>(ops.size()) - 1;
  }
};

inline int value_of(int code, const int* env) { return code >= 0 ? env[code] : -code - 1; }

}  // namespace

CompiledFormula::CompiledFormula(const FinStructure& m, const Formula& f,
                                 std::span<const std::string> free_vars)
    : structure_(&m), free_count_(free_vars.size()) {
  Compiler c{m, ops_, {}, static_cast<int>(free_vars.size())};
  for (std::size_t i = 0; i < free_vars.size(); ++i) c.scope.emplace_back(free_vars[i], static_cast<int>(i));
  root_ = c.compile(f);
  slot_count_ = static_cast<std::size_t>(c.next_slot);
}

bool CompiledFormula::run(int index, int* env) const {
  const Op& op = ops_[static_cast<std::size_t>(index)];
  switch (op.kind) {
    case Connective::Atom: {
      std::array<int, 16> small;
      std::vector<int> large;
      int* buf = small.data();
      if (op.args.size() > small.size()) {
        large.resize(op.args.size());
        buf = large.data();
      }
      for (std::size_t i = 0; i < op.args.size(); ++i) buf[i] = value_of(op.args[i], env);
      return op.rel->contains(std::span<const int>(buf, op.args.size()));
    }
    case Connective::Equal:
      return value_of(op.args[0], env) == value_of(op.args[1], env);
    case Connective::Not:
      return !run(op.a, env);
    case Connective::And:
      return run(op.a, env) && run(op.b, env);
    case Connective::Or:
      return run(op.a, env) || run(op.b, env);
    case Connective::Implies:
      return !run(op.a, env) || run(op.b, env);
    case Connective::Exists:
      for (int v = 0; v < structure_->size(); ++v) {
        env[op.slot] = v;
        if (run(op.a, env)) return true;
      }
      return false;
    case Connective::Forall:
      for (int v = 0; v < structure_->size(); ++v) {
        env[op.slot] = v;
        if (!run(op.a, env)) return false;
      }
      return true;
  }
  return false;
}

bool CompiledFormula::operator()(std::span<const int> values) const {
  if (values.size() != free_count_) throw EvaluationError("wrong number of values for compiled formula");
  std::array<int, 64> small;
  std::vector<int> large;
  int* env = small.data();
  if (slot_count_ > small.size()) {
    large.resize(slot_count_);
    env = large.data();
  }
  std::copy(values.begin(), values.end(), env);
  return run(root_, env);
}

bool evaluate(const FinStructure& m, const Formula& f, const Assignment& a) {
  std::vector<std::string> names;
  std::vector<int> values;
  for (const auto& v : free_variables(f)) {
    auto it = a.find(v);
    if (it == a.end()) throw EvaluationError("free variable '" + v + "' is not assigned");
    if (it->second < 0 || it->second >= m.size())
      throw EvaluationError("variable '" + v + "' assigned outside the domain");
    names.push_back(v);
    values.push_back(it->second);
  }
  return CompiledFormula(m, f, names)(values);
}

}  // namespace interpres
