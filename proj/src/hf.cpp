#include "interpres/hf.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <unordered_map>

#include "interpres/error.hpp"

namespace interpres {

struct HFSet::Node {
  std::vector<HFSet> children;
  int rank = 0;
  std::size_t hash = 0x9e3779b97f4a7c15ULL;
  std::optional<std::uint64_t> code = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

HFSet::HFSet() : node_(empty_node()) {}

const std::shared_ptr<const HFSet::Node>& HFSet::empty_node() {
  static const std::shared_ptr<const Node> node = std::make_shared<const Node>();
  return node;
}

HFSet HFSet::of(std::vector<HFSet> elements) {
  if (elements.empty()) return HFSet();
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  auto node = std::make_shared<Node>();
  std::uint64_t code = 0;
  bool small = true;
  for (const auto& e : elements) {
    node->rank = std::max(node->rank, e.rank() + 1);
    node->hash = mix(node->hash, e.hash());
    auto c = e.small_code();
    if (small && c && *c < 64)
      code |= std::uint64_t{1} << *c;
    else
      small = false;
  }
  node->hash = mix(node->hash, elements.size());
  node->code = small ? std::optional<std::uint64_t>(code) : std::nullopt;
  node->children = std::move(elements);
  return HFSet(std::move(node));
}

const std::vector<HFSet>& HFSet::elements() const noexcept { return node_->children; }
int HFSet::rank() const noexcept { return node_->rank; }
std::size_t HFSet::hash() const noexcept { return node_->hash; }
std::optional<std::uint64_t> HFSet::small_code() const noexcept { return node_->code; }

bool HFSet::contains(const HFSet& y) const {
  return std::binary_search(elements().begin(), elements().end(), y);
}

std::strong_ordering operator<=>(const HFSet& a, const HFSet& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  // Sets of rank r have codes in [|V_r|, |V_{r+1}|).
  if (a.rank() != b.rank()) return a.rank() <=> b.rank();
  const auto ca = a.small_code();
  const auto cb = b.small_code();
  if (ca && cb) return *ca <=> *cb;
  if (ca) return std::strong_ordering::less;
  if (cb) return std::strong_ordering::greater;
  const auto& xa = a.elements();
  const auto& xb = b.elements();
  for (std::size_t i = 1; i <= std::min(xa.size(), xb.size()); ++i) {
    auto c = xa[xa.size() - i] <=> xb[xb.size() - i];
    if (c != 0) return c;
  }
  return xa.size() <=> xb.size();
}

bool operator==(const HFSet& a, const HFSet& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return (a <=> b) == 0;
}

// ------------------------------------------------------------------ text

namespace {

struct HFParser {
  std::string_view text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& what) { throw ParseError(ParseError::Kind::Syntax, pos, what); }

  HFSet set(int depth) {
    if (depth > 10000) fail("nesting too deep");
    skip();
    if (pos >= text.size() || text[pos] != '{') fail("expected '{'");
    ++pos;
    std::vector<HFSet> kids;
    skip();
    if (pos < text.size() && text[pos] == '}') {
      ++pos;
      return HFSet();
    }
    while (true) {
      kids.push_back(set(depth + 1));
      skip();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == '}') {
        ++pos;
        return HFSet::of(std::move(kids));
      }
      fail("expected ',' or '}'");
    }
  }
};

void render_into(const HFSet& x, std::string& out) {
  out += '{';
  bool first = true;
  for (const auto& e : x.elements()) {
    if (!first) out += ',';
    first = false;
    render_into(e, out);
  }
  out += '}';
}

}  // namespace

HFSet parse_hf(std::string_view text) {
  HFParser p{text};
  HFSet x = p.set(0);
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return x;
}

std::string render_hf(const HFSet& x) {
  std::string out;
  render_into(x, out);
  return out;
}

// -------------------------------------------------------------- Ackermann

BigNat ack_encode(const HFSet& x, std::size_t max_bits) {
  if (auto c = x.small_code()) {
    if (max_bits < 64 && *c >> max_bits) throw CapExceeded("Ackermann code exceeds the bit cap");
    return BigNat(*c);
  }
  BigNat out = 0;
  for (const auto& e : x.elements()) {
    BigNat bit = ack_encode(e, max_bits);
    if (bit >= max_bits) throw CapExceeded("Ackermann code exceeds the bit cap of " + std::to_string(max_bits));
    boost::multiprecision::bit_set(out, bit.convert_to<unsigned>());
  }
  return out;
}

namespace {

const std::array<HFSet, 16>& small_table() {
  static const std::array<HFSet, 16> table = [] {
    std::array<HFSet, 16> t;
    for (unsigned n = 1; n < 16; ++n) {
      std::vector<HFSet> kids;
      for (unsigned i = 0; i < 4; ++i)
        if (n >> i & 1U) kids.push_back(t[i]);
      t[n] = HFSet::of(std::move(kids));
    }
    return t;
  }();
  return table;
}

HFSet decode_rec(std::uint64_t n) {
  if (n < 16) return small_table()[n];
  std::vector<HFSet> kids;
  for (unsigned i = 0; i < 64; ++i)
    if (n >> i & 1U) kids.push_back(decode_rec(i));
  return HFSet::of(std::move(kids));
}

}  // namespace

HFSet ack_decode(std::uint64_t n, std::uint64_t cap) {
  if (n >= cap) throw CapExceeded("ack_decode: " + std::to_string(n) + " is not below the cap " + std::to_string(cap));
  return decode_rec(n);
}

HFSet ack_decode(const BigNat& n, std::uint64_t cap) {
  if (n < 0 || n >= cap) throw CapExceeded("ack_decode: argument is not below the cap " + std::to_string(cap));
  return decode_rec(n.convert_to<std::uint64_t>());
}

// ---------------------------------------------------------- set utilities

std::vector<HFSet> transitive_closure(const HFSet& x) {
  std::set<HFSet> seen;
  std::vector<HFSet> todo(x.elements().begin(), x.elements().end());
  while (!todo.empty()) {
    HFSet y = todo.back();
    todo.pop_back();
    if (!seen.insert(y).second) continue;
    for (const auto& z : y.elements()) todo.push_back(z);
  }
  return {seen.begin(), seen.end()};
}

std::vector<HFSet> closure_with(const HFSet& x) {
  auto out = transitive_closure(x);
  out.push_back(x);  // x is above all its hereditary elements
  return out;
}

int rank(const HFSet& x) { return x.rank(); }

bool is_transitive(const HFSet& x) {
  for (const auto& y : x.elements())
    for (const auto& z : y.elements())
      if (!x.contains(z)) return false;
  return true;
}

bool is_ordinal(const HFSet& x) {
  if (!is_transitive(x)) return false;
  for (const auto& y : x.elements())
    if (!is_transitive(y)) return false;
  return true;
}

HFSet von_neumann(int m) {
  if (m < 0) throw std::invalid_argument("von_neumann: negative ordinal");
  std::vector<HFSet> kids;
  HFSet cur;
  for (int i = 0; i < m; ++i) {
    kids.push_back(cur);
    cur = HFSet::of(kids);
  }
  return cur;
}

HFSet hf_union(const HFSet& x, const HFSet& y) {
  std::vector<HFSet> kids(x.elements().begin(), x.elements().end());
  kids.insert(kids.end(), y.elements().begin(), y.elements().end());
  return HFSet::of(std::move(kids));
}

std::vector<HFSet> v_stage(int n) {
  static constexpr std::array<std::uint64_t, 6> kSizes{0, 1, 2, 4, 16, 65536};
  if (n < 0 || n > 5) throw CapExceeded("v_stage is materialized only for n <= 5");
  std::vector<HFSet> out;
  out.reserve(kSizes[static_cast<std::size_t>(n)]);
  for (std::uint64_t c = 0; c < kSizes[static_cast<std::size_t>(n)]; ++c) out.push_back(decode_rec(c));
  return out;
}

HFSet v_stage_set(int n) { return HFSet::of(v_stage(n)); }

// --------------------------------------------------------------- collapse

std::vector<HFSet> mostowski_collapse(const BinaryRelation& rel, const std::optional<EqRelation>& eq_in) {
  const EqRelation eq = eq_in ? *eq_in : EqRelation::identity(rel.size);
  if (eq.size() != rel.size) throw ValidationError("equivalence and relation have different domains");
  if (!eq.is_equivalence()) throw ValidationError("eq is not an equivalence relation");
  if (!is_wellfounded(rel)) throw ValidationError("relation is not well-founded");
  if (!is_extensional(rel, eq)) throw ValidationError("relation is not extensional modulo eq");
  const auto n = static_cast<std::size_t>(rel.size);
  const std::vector<int> cls = eq.class_index();
  std::vector<std::vector<int>> preds(n);
  std::vector<std::set<int>> pred_classes(n);
  for (auto [i, j] : rel.edges) {
    preds[static_cast<std::size_t>(j)].push_back(i);
    pred_classes[static_cast<std::size_t>(j)].insert(cls[static_cast<std::size_t>(i)]);
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (cls[a] == cls[b] && pred_classes[a] != pred_classes[b])
        throw ValidationError("eq is not a congruence for the relation");

  // Least index of each class stands for the class.
  std::vector<int> rep(n, -1);
  for (std::size_t v = 0; v < n; ++v)
    if (rep[static_cast<std::size_t>(cls[v])] < 0) rep[static_cast<std::size_t>(cls[v])] = static_cast<int>(v);

  std::vector<std::optional<HFSet>> value(n);
  std::vector<std::pair<int, bool>> stack;
  for (std::size_t root = 0; root < n; ++root) {
    int r = rep[static_cast<std::size_t>(cls[root])];
    stack.push_back({r, false});
    while (!stack.empty()) {
      auto [v, expanded] = stack.back();
      stack.pop_back();
      const auto vi = static_cast<std::size_t>(v);
      if (value[vi]) continue;
      if (expanded) {
        std::vector<HFSet> kids;
        for (int u : preds[vi]) kids.push_back(*value[static_cast<std::size_t>(rep[static_cast<std::size_t>(cls[static_cast<std::size_t>(u)])])]);
        value[vi] = HFSet::of(std::move(kids));
        continue;
      }
      stack.push_back({v, true});
      for (int u : preds[vi]) {
        int ru = rep[static_cast<std::size_t>(cls[static_cast<std::size_t>(u)])];
        if (!value[static_cast<std::size_t>(ru)]) stack.push_back({ru, false});
      }
    }
  }
  std::vector<HFSet> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v] = *value[static_cast<std::size_t>(rep[static_cast<std::size_t>(cls[v])])];
  return out;
}

// ------------------------------------------------------------ coded pairs

CodedPair encode_coded_pair(const HFSet& x) {
  const std::vector<HFSet> items = closure_with(x);
  std::unordered_map<HFSet, int, HFSetHash> index;
  for (std::size_t i = 0; i < items.size(); ++i) index.emplace(items[i], static_cast<int>(i));
  CodedPair c;
  c.n = static_cast<int>(items.size());
  for (std::size_t j = 0; j < items.size(); ++j)
    for (const auto& e : items[j].elements()) c.edges.emplace_back(index.at(e), static_cast<int>(j));
  std::sort(c.edges.begin(), c.edges.end());
  c.alpha = c.n - 1;
  return c;
}

namespace {

std::vector<HFSet> checked_collapse(const CodedPair& c) {
  if (c.n < 1) throw ValidationError("invalid coded pair: empty domain");
  if (c.alpha < 0 || c.alpha >= c.n) throw ValidationError("invalid coded pair: alpha outside the domain");
  try {
    return mostowski_collapse(c.relation());
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("invalid coded pair: ") + e.what());
  }
}

}  // namespace

HFSet decode_coded_pair(const CodedPair& c) { return checked_collapse(c)[static_cast<std::size_t>(c.alpha)]; }

bool coded_equiv(const CodedPair& c1, const CodedPair& c2) { return decode_coded_pair(c1) == decode_coded_pair(c2); }

bool coded_member(const CodedPair& c1, const CodedPair& c2) {
  const HFSet target = decode_coded_pair(c1);
  const auto values = checked_collapse(c2);
  for (auto [g, b] : c2.edges)
    if (b == c2.alpha && values[static_cast<std::size_t>(g)] == target) return true;
  return false;
}

std::optional<std::vector<int>> canonical_double_iso(const DoubleStructure& d) {
  const auto p1 = mostowski_collapse({d.size, d.e1});
  const auto p2 = mostowski_collapse({d.size, d.e2});
  std::unordered_map<HFSet, int, HFSetHash> where;
  for (std::size_t j = 0; j < p2.size(); ++j) where.emplace(p2[j], static_cast<int>(j));
  std::vector<int> f;
  for (const auto& v : p1) {
    auto it = where.find(v);
    if (it == where.end()) return std::nullopt;
    f.push_back(it->second);
  }
  return f;
}

}  // namespace interpres
