#include <algorithm>
#include <cctype>

#include "interpres/error.hpp"
#include "interpres/logic.hpp"

namespace interpres {

struct Formula::Node {
  Connective kind;
  std::string name;  // relation for Atom, bound variable for quantifiers
  std::vector<Term> terms;
  std::vector<Formula> subs;
};

Formula Formula::atom(std::string relation, std::vector<Term> args) {
  return Formula(std::make_shared<const Node>(Node{Connective::Atom, std::move(relation), std::move(args), {}}));
}

Formula Formula::atom(std::string relation, std::initializer_list<std::string_view> vars) {
  std::vector<Term> args;
  for (auto v : vars) args.push_back(Term::var(std::string(v)));
  return atom(std::move(relation), std::move(args));
}

Formula Formula::equal(Term lhs, Term rhs) {
  return Formula(std::make_shared<const Node>(Node{Connective::Equal, {}, {std::move(lhs), std::move(rhs)}, {}}));
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Connective::Not, {}, {}, {std::move(f)}}));
}

Formula Formula::binary(Connective c, Formula a, Formula b) {
  if (c != Connective::And && c != Connective::Or && c != Connective::Implies)
    throw std::invalid_argument("not a binary connective");
  return Formula(std::make_shared<const Node>(Node{c, {}, {}, {std::move(a), std::move(b)}}));
}

Formula Formula::quantifier(Connective c, std::string var, Formula body) {
  if (c != Connective::Exists && c != Connective::Forall) throw std::invalid_argument("not a quantifier");
  return Formula(std::make_shared<const Node>(Node{c, std::move(var), {}, {std::move(body)}}));
}

Formula Formula::conjunction(Formula a, Formula b) { return binary(Connective::And, std::move(a), std::move(b)); }
Formula Formula::disjunction(Formula a, Formula b) { return binary(Connective::Or, std::move(a), std::move(b)); }
Formula Formula::implication(Formula a, Formula b) { return binary(Connective::Implies, std::move(a), std::move(b)); }
Formula Formula::exists(std::string var, Formula body) { return quantifier(Connective::Exists, std::move(var), std::move(body)); }
Formula Formula::forall(std::string var, Formula body) { return quantifier(Connective::Forall, std::move(var), std::move(body)); }

Formula Formula::conjunction_of(std::span<const Formula> parts) {
  if (parts.empty()) throw std::invalid_argument("empty conjunction");
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = conjunction(acc, parts[i]);
  return acc;
}

Formula Formula::exists_all(std::span<const std::string> vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = exists(*it, std::move(body));
  return body;
}

Formula Formula::forall_all(std::span<const std::string> vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = forall(*it, std::move(body));
  return body;
}

Connective Formula::kind() const noexcept { return node_->kind; }

bool Formula::is_quantifier() const noexcept {
  return node_->kind == Connective::Exists || node_->kind == Connective::Forall;
}

bool Formula::is_binary() const noexcept {
  return node_->kind == Connective::And || node_->kind == Connective::Or ||
         node_->kind == Connective::Implies;
}

const std::string& Formula::relation() const { return node_->name; }
const std::string& Formula::variable() const { return node_->name; }
std::span<const Term> Formula::terms() const { return node_->terms; }
const Formula& Formula::left() const { return node_->subs.at(0); }
const Formula& Formula::right() const { return node_->subs.at(1); }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.name == y.name && x.terms == y.terms && x.subs == y.subs;
}

// ---------------------------------------------------------------- rendering

namespace {

void render_into(const Formula& f, std::string& out);

void render_operand(const Formula& f, std::string& out) {
  // "~x=y" and "Ax.x=y" read badly; parenthesize equalities in operand slots.
  if (f.kind() == Connective::Equal) {
    out += '(';
    render_into(f, out);
    out += ')';
  } else {
    render_into(f, out);
  }
}

void render_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Connective::Atom: {
      out += f.relation();
      out += '(';
      bool first = true;
      for (const auto& t : f.terms()) {
        if (!first) out += ',';
        first = false;
        out += t.name;
      }
      out += ')';
      return;
    }
    case Connective::Equal:
      out += f.terms()[0].name;
      out += '=';
      out += f.terms()[1].name;
      return;
    case Connective::Not:
      out += '~';
      render_operand(f.left(), out);
      return;
    case Connective::And:
    case Connective::Or:
    case Connective::Implies: {
      const char* op = f.kind() == Connective::And ? " & " : f.kind() == Connective::Or ? " | " : " -> ";
      out += '(';
      render_into(f.left(), out);
      out += op;
      render_into(f.right(), out);
      out += ')';
      return;
    }
    case Connective::Exists:
    case Connective::Forall:
      out += f.kind() == Connective::Exists ? 'E' : 'A';
      out += f.variable();
      out += '.';
      render_operand(f.body(), out);
      return;
  }
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  render_into(f, out);
  return out;
}

// ------------------------------------------------------------------ parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

  Formula parse_all() {
    Formula f = formula();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what, ParseError::Kind kind = ParseError::Kind::Syntax) const {
    throw ParseError(kind, pos_, what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool at_identifier_start() {
    skip_ws();
    return pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]));
  }

  void expect(char c) {
    if (!at(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier() {
    if (!at_identifier_start()) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Term term(const std::string& name) const {
    if (std::find(bound_.begin(), bound_.end(), name) != bound_.end()) return Term::var(name);
    if (sig_.has_constant(name)) return Term::constant(name);
    return Term::var(name);
  }

  Formula quantified(Connective q, std::string var) {
    expect('.');
    bound_.push_back(var);
    Formula body = formula();
    bound_.pop_back();
    return Formula::quantifier(q, std::move(var), std::move(body));
  }

  Formula formula() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] == '~') {
      ++pos_;
      return Formula::negation(formula());
    }
    if (text_[pos_] == '(') {
      ++pos_;
      Formula lhs = formula();
      if (at(')')) {
        ++pos_;
        return lhs;
      }
      Connective op;
      if (at('&')) {
        op = Connective::And;
        ++pos_;
      } else if (at('|')) {
        op = Connective::Or;
        ++pos_;
      } else if (at('-') && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        op = Connective::Implies;
        pos_ += 2;
      } else {
        fail("expected '&', '|', '->' or ')'");
      }
      Formula rhs = formula();
      expect(')');
      return Formula::binary(op, std::move(lhs), std::move(rhs));
    }

    std::size_t ident_pos = pos_;
    std::string ident = identifier();
    if (ident.size() > 1 && (ident[0] == 'A' || ident[0] == 'E') && at('.')) {
      return quantified(ident[0] == 'A' ? Connective::Forall : Connective::Exists, ident.substr(1));
    }
    if ((ident == "A" || ident == "E") && at_identifier_start()) {
      std::size_t save = pos_;
      std::string var = identifier();
      if (at('.')) return quantified(ident == "A" ? Connective::Forall : Connective::Exists, var);
      pos_ = save;
    }
    if (at('(')) {
      ++pos_;
      std::vector<Term> args;
      args.push_back(term(identifier()));
      while (at(',')) {
        ++pos_;
        args.push_back(term(identifier()));
      }
      expect(')');
      auto arity = sig_.arity(ident);
      if (!arity) {
        pos_ = ident_pos;
        fail("unknown relation symbol '" + ident + "'", ParseError::Kind::UnknownSymbol);
      }
      if (*arity != static_cast<int>(args.size())) {
        pos_ = ident_pos;
        fail("relation '" + ident + "' expects " + std::to_string(*arity) + " arguments, got " +
                 std::to_string(args.size()),
             ParseError::Kind::ArityMismatch);
      }
      return Formula::atom(std::move(ident), std::move(args));
    }
    if (at('=')) {
      ++pos_;
      std::string rhs = identifier();
      return Formula::equal(term(ident), term(rhs));
    }
    fail("expected '(', '=' or '.' after identifier '" + ident + "'");
  }

  std::string_view text_;
  const Signature& sig_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;
};

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig) { return Parser(text, sig).parse_all(); }

// --------------------------------------------------------- syntactic queries

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::Equal:
      for (const auto& t : f.terms())
        if (t.is_variable() && std::find(bound.begin(), bound.end(), t.name) == bound.end())
          out.insert(t.name);
      return;
    case Connective::Not:
      collect_free(f.left(), bound, out);
      return;
    case Connective::And:
    case Connective::Or:
    case Connective::Implies:
      collect_free(f.left(), bound, out);
      collect_free(f.right(), bound, out);
      return;
    case Connective::Exists:
    case Connective::Forall:
      bound.push_back(f.variable());
      collect_free(f.body(), bound, out);
      bound.pop_back();
      return;
  }
}

void collect_all(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::Equal:
      for (const auto& t : f.terms())
        if (t.is_variable()) out.insert(t.name);
      return;
    case Connective::Not:
      collect_all(f.left(), out);
      return;
    case Connective::Exists:
    case Connective::Forall:
      out.insert(f.variable());
      collect_all(f.body(), out);
      return;
    default:
      collect_all(f.left(), out);
      collect_all(f.right(), out);
  }
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> all_variables(const Formula& f) {
  std::set<std::string> out;
  collect_all(f, out);
  return out;
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

int depth(const Formula& f) {
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::Equal:
      return 0;
    case Connective::Not:
    case Connective::Exists:
    case Connective::Forall:
      return 1 + depth(f.left());
    default:
      return 1 + depth(f.left()) + depth(f.right());
  }
}

void check_signature(const Formula& f, const Signature& sig) {
  switch (f.kind()) {
    case Connective::Atom: {
      auto arity = sig.arity(f.relation());
      if (!arity) throw SignatureError("unknown relation symbol '" + f.relation() + "'");
      if (*arity != static_cast<int>(f.terms().size()))
        throw SignatureError("arity mismatch for '" + f.relation() + "'");
      for (const auto& t : f.terms())
        if (!t.is_variable() && !sig.has_constant(t.name))
          throw SignatureError("unknown constant '" + t.name + "'");
      return;
    }
    case Connective::Equal:
      for (const auto& t : f.terms())
        if (!t.is_variable() && !sig.has_constant(t.name))
          throw SignatureError("unknown constant '" + t.name + "'");
      return;
    case Connective::Not:
    case Connective::Exists:
    case Connective::Forall:
      check_signature(f.left(), sig);
      return;
    default:
      check_signature(f.left(), sig);
      check_signature(f.right(), sig);
  }
}

// ------------------------------------------------------------- substitution

void FreshNames::reserve(const Formula& f) {
  for (auto& v : all_variables(f)) used_.insert(v);
}

std::string FreshNames::make(const std::string& stem) {
  if (used_.insert(stem).second) return stem;
  for (int i = 1;; ++i) {
    std::string candidate = stem + "_" + std::to_string(i);
    if (used_.insert(candidate).second) return candidate;
  }
}

namespace {

Formula subst(const Formula& f, const std::map<std::string, Term>& sigma) {
  if (sigma.empty()) return f;
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::Equal: {
      std::vector<Term> terms(f.terms().begin(), f.terms().end());
      bool changed = false;
      for (auto& t : terms) {
        if (!t.is_variable()) continue;
        auto it = sigma.find(t.name);
        if (it != sigma.end()) {
          t = it->second;
          changed = true;
        }
      }
      if (!changed) return f;
      if (f.kind() == Connective::Atom) return Formula::atom(f.relation(), std::move(terms));
      return Formula::equal(terms[0], terms[1]);
    }
    case Connective::Not:
      return Formula::negation(subst(f.left(), sigma));
    case Connective::And:
    case Connective::Or:
    case Connective::Implies:
      return Formula::binary(f.kind(), subst(f.left(), sigma), subst(f.right(), sigma));
    case Connective::Exists:
    case Connective::Forall: {
      const std::string& v = f.variable();
      std::map<std::string, Term> inner = sigma;
      inner.erase(v);
      std::set<std::string> body_free = free_variables(f.body());
      for (auto it = inner.begin(); it != inner.end();) {
        if (!body_free.count(it->first))
          it = inner.erase(it);
        else
          ++it;
      }
      if (inner.empty()) return f;
      bool captures = false;
      for (const auto& [from, to] : inner)
        if (to.is_variable() && to.name == v) captures = true;
      if (!captures) return Formula::quantifier(f.kind(), v, subst(f.body(), inner));
      FreshNames fresh;
      fresh.reserve(f.body());
      for (const auto& [from, to] : inner) {
        fresh.reserve(from);
        fresh.reserve(to.name);
      }
      std::string renamed = fresh.make(v);
      inner[v] = Term::var(renamed);
      return Formula::quantifier(f.kind(), renamed, subst(f.body(), inner));
    }
  }
  return f;
}

}  // namespace

Formula substitute(const Formula& f, const std::map<std::string, Term>& replacement) {
  return subst(f, replacement);
}

Formula rename_free(const Formula& f, const std::map<std::string, std::string>& renaming) {
  std::map<std::string, Term> sigma;
  for (const auto& [from, to] : renaming) sigma.emplace(from, Term::var(to));
  return subst(f, sigma);
}

}  // namespace interpres
