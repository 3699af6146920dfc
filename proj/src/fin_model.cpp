#include "interpres/fin_model.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "interpres/error.hpp"

namespace interpres {

EqRelation::EqRelation(int size) : size_(size), table_(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 0) {
  if (size < 0) throw ValidationError("negative domain size");
}

EqRelation EqRelation::identity(int size) {
  EqRelation eq(size);
  for (int i = 0; i < size; ++i) eq.relate(i, i);
  return eq;
}

EqRelation EqRelation::from_classes(int size, const std::vector<std::vector<int>>& classes) {
  EqRelation eq = identity(size);
  for (const auto& cls : classes)
    for (int a : cls)
      for (int b : cls) eq.relate(a, b);
  return eq;
}

EqRelation EqRelation::from_pairs(int size, const std::vector<std::pair<int, int>>& pairs) {
  EqRelation eq(size);
  for (auto [a, b] : pairs) eq.relate(a, b);
  return eq;
}

void EqRelation::relate(int a, int b) {
  if (a < 0 || b < 0 || a >= size_ || b >= size_) throw ValidationError("equivalence pair outside domain");
  table_[static_cast<std::size_t>(a) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(b)] = 1;
}

bool EqRelation::related(int a, int b) const {
  return table_[static_cast<std::size_t>(a) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(b)] != 0;
}

bool EqRelation::is_equivalence() const {
  for (int a = 0; a < size_; ++a) {
    if (!related(a, a)) return false;
    for (int b = 0; b < size_; ++b) {
      if (!related(a, b)) continue;
      if (!related(b, a)) return false;
      for (int c = 0; c < size_; ++c)
        if (related(b, c) && !related(a, c)) return false;
    }
  }
  return true;
}

bool EqRelation::is_identity() const {
  for (int a = 0; a < size_; ++a)
    for (int b = 0; b < size_; ++b)
      if (related(a, b) != (a == b)) return false;
  return true;
}

std::vector<int> EqRelation::class_index() const {
  std::vector<int> cls(static_cast<std::size_t>(size_), -1);
  int next = 0;
  for (int a = 0; a < size_; ++a) {
    if (cls[static_cast<std::size_t>(a)] >= 0) continue;
    for (int b = a; b < size_; ++b)
      if (related(a, b)) cls[static_cast<std::size_t>(b)] = next;
    ++next;
  }
  return cls;
}

std::vector<std::pair<int, int>> EqRelation::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < size_; ++a)
    for (int b = 0; b < size_; ++b)
      if (related(a, b)) out.emplace_back(a, b);
  return out;
}

namespace {

void require_equivalence(const FinStructure& m, const EqRelation& eq) {
  if (eq.size() != m.size()) throw ValidationError("equivalence and structure have different domains");
  if (!eq.is_equivalence()) throw ValidationError("relation is not an equivalence relation");
}

}  // namespace

bool check_congruence(const FinStructure& m, const EqRelation& eq) {
  require_equivalence(m, eq);
  for (const auto& [name, rel] : m.relations()) {
    for (const auto& t : rel.tuples()) {
      Tuple moved = t;
      for (std::size_t pos = 0; pos < t.size(); ++pos) {
        for (int other = 0; other < m.size(); ++other) {
          if (!eq.related(t[pos], other)) continue;
          moved[pos] = other;
          if (!rel.contains(moved)) return false;
        }
        moved[pos] = t[pos];
      }
    }
  }
  return true;
}

Quotient quotient(const FinStructure& m, const EqRelation& eq) {
  if (!check_congruence(m, eq)) throw ValidationError("equivalence is not a congruence");
  std::vector<int> proj = eq.class_index();
  int classes = proj.empty() ? 0 : *std::max_element(proj.begin(), proj.end()) + 1;
  FinStructure q(classes, m.signature());
  for (const auto& [name, rel] : m.relations()) {
    for (const auto& t : rel.tuples()) {
      Tuple image;
      image.reserve(t.size());
      for (int v : t) image.push_back(proj[static_cast<std::size_t>(v)]);
      q.add_tuple(name, image);
    }
  }
  for (const auto& [name, value] : m.constants()) q.set_constant(name, proj[static_cast<std::size_t>(value)]);
  return {std::move(q), std::move(proj)};
}

// ------------------------------------------------------------- isomorphisms

namespace {

// Per-element invariant: for each relation and position, how many tuples
// carry the element there, plus how many tuples are constant on it.
std::vector<std::vector<int>> profiles(const FinStructure& s) {
  std::vector<std::vector<int>> prof(static_cast<std::size_t>(s.size()));
  for (const auto& [name, rel] : s.relations()) {
    const std::size_t base = prof.empty() ? 0 : prof[0].size();
    for (auto& p : prof) p.resize(base + static_cast<std::size_t>(rel.arity()) + 1, 0);
    for (const auto& t : rel.tuples()) {
      for (std::size_t i = 0; i < t.size(); ++i) ++prof[static_cast<std::size_t>(t[i])][base + i];
      if (std::all_of(t.begin(), t.end(), [&](int v) { return v == t[0]; }))
        ++prof[static_cast<std::size_t>(t[0])][base + t.size()];
    }
  }
  for (const auto& [name, value] : s.constants()) prof[static_cast<std::size_t>(value)].push_back(-1);
  return prof;
}

struct TupleRef {
  const Relation* rel;
  const Relation* other;
  const Tuple* tuple;
};

class IsoSearch {
 public:
  IsoSearch(const FinStructure& a, const FinStructure& b, std::size_t max_results)
      : a_(a), b_(b), max_results_(max_results) {
    const auto n = static_cast<std::size_t>(a.size());
    prof_a_ = profiles(a);
    prof_b_ = profiles(b);
    forward_.assign(n, -1);
    backward_.assign(n, -1);
    by_element_a_.resize(n);
    by_element_b_.resize(n);
    for (const auto& [name, rel] : a.relations()) {
      const Relation& other = b.relation(name);
      for (const auto& t : rel.tuples()) {
        std::set<int> seen(t.begin(), t.end());
        for (int v : seen) by_element_a_[static_cast<std::size_t>(v)].push_back({&rel, &other, &t});
      }
      for (const auto& t : other.tuples()) {
        std::set<int> seen(t.begin(), t.end());
        for (int v : seen) by_element_b_[static_cast<std::size_t>(v)].push_back({&other, &rel, &t});
      }
    }
    for (const auto& [name, value] : a.constants()) forced_.emplace_back(value, b.constant(name));
  }

  std::vector<std::vector<int>> run() {
    for (auto [x, y] : forced_) {
      if (forward_[static_cast<std::size_t>(x)] >= 0 && forward_[static_cast<std::size_t>(x)] != y) return {};
      if (backward_[static_cast<std::size_t>(y)] >= 0 && backward_[static_cast<std::size_t>(y)] != x) return {};
      forward_[static_cast<std::size_t>(x)] = y;
      backward_[static_cast<std::size_t>(y)] = x;
    }
    for (auto [x, y] : forced_)
      if (!consistent(x, y)) return {};
    extend(0);
    return std::move(found_);
  }

 private:
  bool consistent(int x, int y) const {
    Tuple image;
    for (const auto& ref : by_element_a_[static_cast<std::size_t>(x)]) {
      image.clear();
      bool complete = true;
      for (int v : *ref.tuple) {
        int w = forward_[static_cast<std::size_t>(v)];
        if (w < 0) {
          complete = false;
          break;
        }
        image.push_back(w);
      }
      if (complete && !ref.other->contains(image)) return false;
    }
    for (const auto& ref : by_element_b_[static_cast<std::size_t>(y)]) {
      image.clear();
      bool complete = true;
      for (int v : *ref.tuple) {
        int w = backward_[static_cast<std::size_t>(v)];
        if (w < 0) {
          complete = false;
          break;
        }
        image.push_back(w);
      }
      if (complete && !ref.other->contains(image)) return false;
    }
    return true;
  }

  void extend(int x) {
    const int n = a_.size();
    if (found_.size() >= max_results_) return;
    if (x == n) {
      found_.push_back(forward_);
      return;
    }
    if (forward_[static_cast<std::size_t>(x)] >= 0) {
      extend(x + 1);
      return;
    }
    for (int y = 0; y < n; ++y) {
      if (backward_[static_cast<std::size_t>(y)] >= 0) continue;
      if (prof_a_[static_cast<std::size_t>(x)] != prof_b_[static_cast<std::size_t>(y)]) continue;
      forward_[static_cast<std::size_t>(x)] = y;
      backward_[static_cast<std::size_t>(y)] = x;
      if (consistent(x, y)) extend(x + 1);
      forward_[static_cast<std::size_t>(x)] = -1;
      backward_[static_cast<std::size_t>(y)] = -1;
    }
  }

  const FinStructure& a_;
  const FinStructure& b_;
  std::vector<std::vector<int>> prof_a_, prof_b_;
  std::vector<int> forward_, backward_;
  std::vector<std::vector<TupleRef>> by_element_a_, by_element_b_;
  std::vector<std::pair<int, int>> forced_;
  std::vector<std::vector<int>> found_;
  std::size_t max_results_;
};

}  // namespace

std::vector<std::vector<int>> find_isomorphisms(const FinStructure& a, const FinStructure& b,
                                                const IsoLimits& limits) {
  if (a.size() > limits.max_size || b.size() > limits.max_size)
    throw CapExceeded("isomorphism search capped at domain size " + std::to_string(limits.max_size));
  if (a.size() != b.size() || !(a.signature() == b.signature())) return {};
  for (const auto& [name, rel] : a.relations())
    if (rel.size() != b.relation(name).size()) return {};
  return IsoSearch(a, b, limits.max_results).run();
}

// ------------------------------------------------- foundation, extensionality

bool is_wellfounded(const BinaryRelation& rel) {
  // Kahn's algorithm; on finite domains well-founded means acyclic.
  const auto n = static_cast<std::size_t>(rel.size);
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> out(n);
  for (auto [i, j] : rel.edges) {
    if (i < 0 || j < 0 || i >= rel.size || j >= rel.size) throw ValidationError("edge outside domain");
    out[static_cast<std::size_t>(i)].push_back(j);
    ++indegree[static_cast<std::size_t>(j)];
  }
  std::vector<int> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push_back(static_cast<int>(v));
  std::size_t removed = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++removed;
    for (int w : out[static_cast<std::size_t>(v)])
      if (--indegree[static_cast<std::size_t>(w)] == 0) ready.push_back(w);
  }
  return removed == n;
}

bool is_extensional(const BinaryRelation& rel, const EqRelation& eq) {
  if (eq.size() != rel.size) throw ValidationError("equivalence and relation have different domains");
  if (!eq.is_equivalence()) throw ValidationError("relation is not an equivalence relation");
  std::vector<int> cls = eq.class_index();
  std::vector<std::set<int>> preds(static_cast<std::size_t>(rel.size));
  for (auto [i, j] : rel.edges) preds[static_cast<std::size_t>(j)].insert(cls[static_cast<std::size_t>(i)]);
  for (int a = 0; a < rel.size; ++a)
    for (int b = a + 1; b < rel.size; ++b)
      if (!eq.related(a, b) && preds[static_cast<std::size_t>(a)] == preds[static_cast<std::size_t>(b)]) return false;
  return true;
}

bool is_extensional(const BinaryRelation& rel) { return is_extensional(rel, EqRelation::identity(rel.size)); }

}  // namespace interpres
