#include "interpres/structure.hpp"

#include <algorithm>
#include <cctype>

#include "interpres/error.hpp"

namespace interpres {

bool is_identifier(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

namespace {

void check_symbol_name(const std::string& name) {
  if (!is_identifier(name)) throw SignatureError("malformed symbol name '" + name + "'");
  if (name.find("__") != std::string::npos)
    throw SignatureError("symbol name '" + name + "' uses the reserved '__'");
}

constexpr std::size_t kDenseLimit = std::size_t{1} << 22;

}  // namespace

Signature& Signature::add_relation(const std::string& name, int arity) {
  check_symbol_name(name);
  if (arity < 1) throw SignatureError("relation '" + name + "' needs arity >= 1");
  if (relations_.count(name) || constants_.count(name))
    throw SignatureError("duplicate symbol '" + name + "'");
  relations_.emplace(name, arity);
  return *this;
}

Signature& Signature::add_constant(const std::string& name) {
  check_symbol_name(name);
  if (relations_.count(name) || constants_.count(name))
    throw SignatureError("duplicate symbol '" + name + "'");
  constants_.insert(name);
  return *this;
}

std::optional<int> Signature::arity(std::string_view relation) const {
  auto it = relations_.find(relation);
  if (it == relations_.end()) return std::nullopt;
  return it->second;
}

Signature Signature::with_constants(const std::vector<std::string>& names) const {
  Signature out;
  out.relations_ = relations_;
  for (const auto& n : names) out.add_constant(n);
  return out;
}

Relation::Relation(int arity, int domain_size) : arity_(arity), domain_size_(domain_size) {
  std::size_t cells = 1;
  for (int i = 0; i < arity; ++i) {
    cells *= static_cast<std::size_t>(std::max(domain_size, 1));
    if (cells > kDenseLimit) return;
  }
  dense_.assign(cells, false);
}

std::size_t Relation::index(std::span<const int> tuple) const {
  std::size_t idx = 0;
  for (int v : tuple) idx = idx * static_cast<std::size_t>(domain_size_) + static_cast<std::size_t>(v);
  return idx;
}

void Relation::insert(std::span<const int> tuple) {
  if (static_cast<int>(tuple.size()) != arity_)
    throw ValidationError("tuple of length " + std::to_string(tuple.size()) +
                          " in relation of arity " + std::to_string(arity_));
  for (int v : tuple)
    if (v < 0 || v >= domain_size_)
      throw ValidationError("tuple entry " + std::to_string(v) + " outside domain of size " +
                            std::to_string(domain_size_));
  tuples_.emplace(tuple.begin(), tuple.end());
  if (!dense_.empty()) dense_[index(tuple)] = true;
}

bool Relation::contains(std::span<const int> tuple) const {
  if (!dense_.empty()) return dense_[index(tuple)];
  return tuples_.count(Tuple(tuple.begin(), tuple.end())) > 0;
}

FinStructure::FinStructure(int size, Signature signature)
    : size_(size), signature_(std::move(signature)) {
  if (size < 0) throw ValidationError("negative domain size");
  for (const auto& [name, arity] : signature_.relations()) relations_.emplace(name, Relation(arity, size));
}

void FinStructure::add_tuple(const std::string& relation, std::span<const int> tuple) {
  auto it = relations_.find(relation);
  if (it == relations_.end()) throw ValidationError("no relation '" + relation + "' in structure");
  it->second.insert(tuple);
}

void FinStructure::set_constant(const std::string& name, int element) {
  if (!signature_.has_constant(name)) throw ValidationError("no constant '" + name + "' in signature");
  if (element < 0 || element >= size_)
    throw ValidationError("constant '" + name + "' outside domain");
  constants_[name] = element;
}

const Relation& FinStructure::relation(std::string_view name) const {
  const Relation* r = find_relation(name);
  if (!r) throw EvaluationError("structure has no relation '" + std::string(name) + "'");
  return *r;
}

const Relation* FinStructure::find_relation(std::string_view name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

int FinStructure::constant(std::string_view name) const {
  auto it = constants_.find(name);
  if (it == constants_.end())
    throw EvaluationError("structure does not interpret constant '" + std::string(name) + "'");
  return it->second;
}

FinStructure FinStructure::with_constants(const std::vector<std::pair<std::string, int>>& named) const {
  FinStructure out = *this;
  for (const auto& [name, element] : named) {
    out.signature_.add_constant(name);
    out.set_constant(name, element);
  }
  return out;
}

FinStructure to_structure(const BinaryRelation& rel, const std::string& symbol) {
  Signature sig;
  sig.add_relation(symbol, 2);
  FinStructure m(rel.size, sig);
  for (auto [i, j] : rel.edges) m.add_tuple(symbol, {i, j});
  return m;
}

BinaryRelation binary_relation(const FinStructure& m, std::string_view symbol) {
  const Relation& r = m.relation(symbol);
  if (r.arity() != 2) throw ValidationError("relation '" + std::string(symbol) + "' is not binary");
  BinaryRelation out{m.size(), {}};
  for (const auto& t : r.tuples()) out.edges.emplace_back(t[0], t[1]);
  return out;
}

std::string sole_binary_symbol(const FinStructure& m) {
  std::string found;
  for (const auto& [name, arity] : m.signature().relations()) {
    if (arity != 2) continue;
    if (!found.empty()) throw ValidationError("structure has more than one binary relation");
    found = name;
  }
  if (found.empty()) throw ValidationError("structure has no binary relation");
  return found;
}

}  // namespace interpres
