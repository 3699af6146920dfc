// Definable relations computed semantically: each formula is represented by
// its extension over assignments to a context of variables v0..v(m-1), so
// formulas with equal extensions are merged as soon as they are produced.

#include <map>
#include <unordered_set>

#include "interpres/error.hpp"
#include "interpres/logic.hpp"

namespace interpres {

namespace {

using Bits = std::vector<std::uint64_t>;

struct BitsHash {
  std::size_t operator()(const Bits& b) const noexcept {
    std::size_t h = b.size();
    for (auto w : b) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

using Family = std::unordered_set<Bits, BitsHash>;

class Enumerator {
 public:
  Enumerator(const FinStructure& m, std::span<const int> params, const DefinabilityLimits& limits)
      : m_(m), limits_(limits) {
    for (const auto& [name, value] : m.constants()) fixed_terms_.push_back(value);
    fixed_terms_.insert(fixed_terms_.end(), params.begin(), params.end());
  }

  const Family& level(int depth, int context) {
    auto key = std::make_pair(depth, context);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Family out = depth == 0 ? atoms(context) : compose(depth, context);
    return memo_.emplace(key, std::move(out)).first->second;
  }

  std::size_t cells(int context) const {
    std::size_t c = 1;
    for (int i = 0; i < context; ++i) c *= static_cast<std::size_t>(m_.size());
    return c;
  }

 private:
  void count(std::size_t n = 1) {
    candidates_ += n;
    if (candidates_ > limits_.max_candidates)
      throw CapExceeded("definable_relations: more than " + std::to_string(limits_.max_candidates) +
                        " candidate formulas");
  }

  Bits empty_bits(int context) const { return Bits((cells(context) + 63) / 64, 0); }

  static void set_bit(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }
  static bool get_bit(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1U; }

  // Assignment decoded from a cell index: v_i = (idx / n^i) % n.
  void decode(std::size_t idx, int context, std::vector<int>& values) const {
    values.resize(static_cast<std::size_t>(context));
    for (int i = 0; i < context; ++i) {
      values[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(m_.size()));
      idx /= static_cast<std::size_t>(m_.size());
    }
  }

  // Term codes: 0..context-1 are variables, then fixed terms.
  int term_value(int code, const std::vector<int>& values) const {
    if (code < static_cast<int>(values.size())) return values[static_cast<std::size_t>(code)];
    return fixed_terms_[static_cast<std::size_t>(code) - values.size()];
  }

  Family atoms(int context) {
    Family out;
    const int terms = context + static_cast<int>(fixed_terms_.size());
    const std::size_t total = cells(context);
    std::vector<int> values;
    auto add = [&](auto&& holds) {
      count();
      Bits b = empty_bits(context);
      for (std::size_t idx = 0; idx < total; ++idx) {
        decode(idx, context, values);
        if (holds(values)) set_bit(b, idx);
      }
      out.insert(std::move(b));
    };
    for (int s = 0; s < terms; ++s)
      for (int t = 0; t < terms; ++t)
        add([&](const std::vector<int>& v) { return term_value(s, v) == term_value(t, v); });
    for (const auto& [name, rel] : m_.relations()) {
      const int arity = rel.arity();
      std::vector<int> choice(static_cast<std::size_t>(arity), 0);
      std::vector<int> args(static_cast<std::size_t>(arity));
      while (true) {
        add([&](const std::vector<int>& v) {
          for (int i = 0; i < arity; ++i)
            args[static_cast<std::size_t>(i)] = term_value(choice[static_cast<std::size_t>(i)], v);
          return rel.contains(args);
        });
        int i = arity - 1;
        while (i >= 0 && ++choice[static_cast<std::size_t>(i)] == terms) choice[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
      }
    }
    return out;
  }

  Family compose(int depth, int context) {
    Family out = level(depth - 1, context);
    const Bits full = [&] {
      Bits b = empty_bits(context);
      for (std::size_t i = 0; i < cells(context); ++i) set_bit(b, i);
      return b;
    }();
    {
      const Family& prev = level(depth - 1, context);
      count(prev.size());
      for (const auto& x : prev) {
        Bits neg(x.size());
        for (std::size_t w = 0; w < x.size(); ++w) neg[w] = ~x[w] & full[w];
        out.insert(std::move(neg));
      }
    }
    for (int a = 0; a <= depth - 1; ++a) {
      const int b = depth - 1 - a;
      const Family& left = level(a, context);
      const Family& right = level(b, context);
      count(3 * left.size() * right.size());
      for (const auto& x : left) {
        for (const auto& y : right) {
          Bits conj(x.size()), disj(x.size()), impl(x.size());
          for (std::size_t w = 0; w < x.size(); ++w) {
            conj[w] = x[w] & y[w];
            disj[w] = x[w] | y[w];
            impl[w] = (~x[w] | y[w]) & full[w];
          }
          out.insert(std::move(conj));
          out.insert(std::move(disj));
          out.insert(std::move(impl));
        }
      }
    }
    const Family& inner = level(depth - 1, context + 1);
    count(2 * inner.size());
    const std::size_t block = cells(context);
    const std::size_t n = static_cast<std::size_t>(m_.size());
    for (const auto& x : inner) {
      Bits some = empty_bits(context);
      Bits every = empty_bits(context);
      for (std::size_t idx = 0; idx < block; ++idx) {
        bool any = false;
        bool all = true;
        for (std::size_t v = 0; v < n; ++v) {
          bool bit = get_bit(x, idx + v * block);
          any = any || bit;
          all = all && bit;
        }
        if (any) set_bit(some, idx);
        if (all) set_bit(every, idx);
      }
      out.insert(std::move(some));
      out.insert(std::move(every));
    }
    return out;
  }

  const FinStructure& m_;
  DefinabilityLimits limits_;
  std::vector<int> fixed_terms_;
  std::map<std::pair<int, int>, Family> memo_;
  std::size_t candidates_ = 0;
};

}  // namespace

std::set<TupleSet> definable_relations(const FinStructure& m, int arity, int depth,
                                       std::span<const int> params, const DefinabilityLimits& limits) {
  if (arity < 1) throw std::invalid_argument("definable_relations: arity must be >= 1");
  if (depth < 0) throw std::invalid_argument("definable_relations: negative depth");
  for (int p : params)
    if (p < 0 || p >= m.size()) throw ValidationError("parameter outside the domain");
  std::set<TupleSet> out;
  if (m.size() == 0) {
    out.insert(TupleSet{});
    return out;
  }
  Enumerator e(m, params, limits);
  const std::size_t total = e.cells(arity);
  for (const auto& bits : e.level(depth, arity)) {
    TupleSet rel;
    for (std::size_t idx = 0; idx < total; ++idx) {
      if (!((bits[idx / 64] >> (idx % 64)) & 1U)) continue;
      Tuple t(static_cast<std::size_t>(arity));
      std::size_t rest = idx;
      for (int i = 0; i < arity; ++i) {
        t[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(m.size()));
        rest /= static_cast<std::size_t>(m.size());
      }
      rel.insert(std::move(t));
    }
    out.insert(std::move(rel));
  }
  return out;
}

}  // namespace interpres
