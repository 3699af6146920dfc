#include "interpres/io.hpp"

#include <fstream>
#include <sstream>

#include "interpres/error.hpp"

namespace interpres::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ValidationError(what); }

const json& field(const json& j, const char* key, const std::string& doc) {
  if (!j.is_object() || !j.contains(key)) bad(doc + ": missing \"" + key + "\"");
  return j.at(key);
}

int as_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) bad(what + ": expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& what) {
  if (!j.is_string()) bad(what + ": expected a string");
  return j.get<std::string>();
}

std::vector<std::string> as_strings(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what + ": expected an array of names");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(as_string(e, what));
  return out;
}

std::vector<int> as_ints(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what + ": expected an array of integers");
  std::vector<int> out;
  for (const auto& e : j) out.push_back(as_int(e, what));
  return out;
}

Signature relations_signature(const json& j, const std::string& what) {
  if (!j.is_object()) bad(what + ": expected a map from relation names to arities");
  Signature s;
  for (const auto& [name, arity] : j.items()) s.add_relation(name, as_int(arity, what));
  return s;
}

json relations_json(const Signature& s) {
  json out = json::object();
  for (const auto& [name, arity] : s.relations()) out[name] = arity;
  return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Formula identity_equality(const std::vector<std::string>& l, const std::vector<std::string>& r) {
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < l.size(); ++i) parts.push_back(Formula::equal(l[i], r[i]));
  return Formula::conjunction_of(parts);
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::exception& e) {
    bad(path + ": " + e.what());
  }
}

// ------------------------------------------------------------ structure

FinStructure structure_from_json(const json& j) {
  const std::string doc = "structure";
  const int n = as_int(field(j, "domain", doc), "domain");
  if (n < 0) bad("structure: negative domain size");
  Signature sig;
  std::map<std::string, int> arities;
  if (j.contains("arities")) {
    if (!j["arities"].is_object()) bad("structure: \"arities\" must be an object");
    for (const auto& [name, a] : j["arities"].items()) arities[name] = as_int(a, "arities");
  }
  const json rels = j.contains("relations") ? j["relations"] : json::object();
  if (!rels.is_object()) bad("structure: \"relations\" must be an object");
  std::map<std::string, std::vector<std::vector<int>>> tables;
  for (const auto& [name, table] : rels.items()) {
    if (!table.is_array()) bad("structure: table of " + name + " must be an array");
    auto& rows = tables[name];
    for (const auto& row : table) rows.push_back(as_ints(row, "tuple of " + name));
    if (!arities.count(name)) arities[name] = rows.empty() ? 2 : static_cast<int>(rows.front().size());
  }
  for (const auto& [name, a] : arities) sig.add_relation(name, a);
  const json consts = j.contains("constants") ? j["constants"] : json::object();
  if (!consts.is_object()) bad("structure: \"constants\" must be an object");
  for (const auto& [name, v] : consts.items()) sig.add_constant(name);
  FinStructure m(n, sig);
  for (const auto& [name, rows] : tables)
    for (const auto& row : rows) m.add_tuple(name, row);
  for (const auto& [name, v] : consts.items()) m.set_constant(name, as_int(v, "constant " + name));
  return m;
}

json to_json(const FinStructure& m) {
  json out;
  out["domain"] = m.size();
  out["relations"] = json::object();
  out["arities"] = json::object();
  for (const auto& [name, rel] : m.relations()) {
    json rows = json::array();
    for (const auto& t : rel.tuples()) rows.push_back(t);
    out["relations"][name] = rows;
    out["arities"][name] = rel.arity();
  }
  out["constants"] = json::object();
  for (const auto& [name, v] : m.constants()) out["constants"][name] = v;
  return out;
}

// ------------------------------------------------------------ signatures

Signature signature_from_json(const json& j) {
  Signature s = j.contains("relations") ? relations_signature(j["relations"], "signature") : Signature();
  if (j.contains("constants"))
    for (const auto& c : as_strings(j["constants"], "signature constants")) s.add_constant(c);
  return s;
}

json to_json(const Signature& sig) {
  json out;
  out["relations"] = relations_json(sig);
  out["constants"] = json::array();
  for (const auto& c : sig.constants()) out["constants"].push_back(c);
  return out;
}

// -------------------------------------------------------- interpretation

Interpretation interpretation_from_json(const json& j, const std::optional<Signature>& target) {
  const std::string doc = "interpretation";
  if (!j.is_object()) bad("interpretation: expected an object");
  Interpretation in;
  in.dimension = j.contains("dimension") ? as_int(j["dimension"], "dimension") : 1;
  if (in.dimension < 1) bad("interpretation: dimension must be >= 1");
  const int k = in.dimension;
  if (j.contains("target"))
    in.target = relations_signature(j["target"], "target");
  else if (target)
    in.target = *target;
  else
    bad("interpretation: no target signature (give \"target\" or a host structure)");

  if (j.contains("params")) {
    if (!j["params"].is_array()) bad("interpretation: \"params\" must be an array");
    int index = 0;
    for (const auto& p : j["params"]) {
      if (p.is_object())
        in.params.push_back({as_string(field(p, "name", "parameter"), "parameter name"),
                             as_int(field(p, "element", "parameter"), "parameter element")});
      else
        in.params.push_back({"p" + std::to_string(index), as_int(p, "parameter")});
      ++index;
    }
  }
  const Signature host = in.host_signature();

  in.domain_vars = j.contains("domain_vars") ? as_strings(j["domain_vars"], "domain_vars") : default_vars(0, k);
  in.domain = j.contains("domain") ? parse_formula(as_string(j["domain"], "domain"), host)
                                   : Formula::equal(in.domain_vars.front(), in.domain_vars.front());
  if (j.contains("equality_vars")) {
    const json& ev = j["equality_vars"];
    if (!ev.is_array() || ev.size() != 2) bad("interpretation: \"equality_vars\" must hold two lists");
    in.eq_left = as_strings(ev[0], "equality_vars");
    in.eq_right = as_strings(ev[1], "equality_vars");
  } else {
    in.eq_left = default_vars(0, k);
    in.eq_right = default_vars(1, k);
  }
  in.equality = j.contains("equality") ? parse_formula(as_string(j["equality"], "equality"), host)
                                       : identity_equality(in.eq_left, in.eq_right);

  const bool explicit_source = j.contains("source");
  if (explicit_source) in.source = relations_signature(j["source"], "source");
  const json rels = j.contains("relations") ? j["relations"] : json::object();
  if (!rels.is_object()) bad("interpretation: \"relations\" must be an object");
  for (const auto& [name, entry] : rels.items()) {
    RelationFormula rf;
    std::string text;
    if (entry.is_object()) {
      text = as_string(field(entry, "formula", "relation " + name), "relation formula");
      if (entry.contains("vars")) rf.vars = as_strings(entry["vars"], "relation vars");
    } else {
      text = as_string(entry, "relation " + name);
    }
    rf.formula = parse_formula(text, host);
    int arity = 0;
    if (explicit_source) {
      auto a = in.source.arity(name);
      if (!a) bad("interpretation: relation " + name + " is not in the source signature");
      arity = *a;
    } else if (!rf.vars.empty()) {
      if (rf.vars.size() % static_cast<std::size_t>(k) != 0) bad("interpretation: vars of " + name + " not a multiple of k");
      arity = static_cast<int>(rf.vars.size()) / k;
    } else {
      // Highest default argument group mentioned.
      const auto free = free_variables(rf.formula);
      for (int g = 0; g < 8; ++g)
        for (const auto& v : default_vars(g, k))
          if (free.count(v)) arity = std::max(arity, g + 1);
      arity = std::max(arity, 1);
    }
    if (rf.vars.empty())
      for (int g = 0; g < arity; ++g) rf.vars = concat(rf.vars, default_vars(g, k));
    if (!explicit_source) in.source.add_relation(name, arity);
    in.relations.emplace(name, std::move(rf));
  }
  in.validate();
  return in;
}

json to_json(const Interpretation& in) {
  json out;
  out["dimension"] = in.dimension;
  out["source"] = relations_json(in.source);
  out["target"] = relations_json(in.target);
  out["domain_vars"] = in.domain_vars;
  out["domain"] = render(in.domain);
  out["equality_vars"] = json::array({in.eq_left, in.eq_right});
  out["equality"] = render(in.equality);
  out["relations"] = json::object();
  for (const auto& [name, rf] : in.relations) out["relations"][name] = {{"vars", rf.vars}, {"formula", render(rf.formula)}};
  out["params"] = json::array();
  for (const auto& p : in.params) out["params"].push_back({{"name", p.name}, {"element", p.element}});
  return out;
}

// ----------------------------------------------------------------- theory

Theory theory_from_json(const json& j) {
  Theory t;
  t.name = j.contains("name") ? as_string(j["name"], "theory name") : "T";
  t.signature = signature_from_json(field(j, "signature", "theory"));
  const json& axioms = field(j, "axioms", "theory");
  if (!axioms.is_array()) bad("theory: \"axioms\" must be an array");
  for (const auto& a : axioms) t.axioms.push_back(parse_formula(as_string(a, "axiom"), t.signature));
  t.validate();
  return t;
}

json to_json(const Theory& t) {
  json out;
  out["name"] = t.name;
  out["signature"] = to_json(t.signature);
  out["axioms"] = json::array();
  for (const auto& a : t.axioms) out["axioms"].push_back(render(a));
  return out;
}

// --------------------------------------------------------- bi-interpretation

namespace {

IsoFormula iso_from_json(const json& j, const Signature& host, int width) {
  IsoFormula iso;
  iso.tuple_vars = default_vars(1, width);
  std::string text;
  if (j.is_object()) {
    if (j.contains("point")) iso.point_var = as_string(j["point"], "iso point");
    if (j.contains("tuple")) iso.tuple_vars = as_strings(j["tuple"], "iso tuple");
    text = as_string(field(j, "formula", "iso formula"), "iso formula");
  } else {
    text = as_string(j, "iso formula");
  }
  iso.formula = parse_formula(text, host);
  return iso;
}

}  // namespace

BiInterpretation bi_from_json(const json& j, const std::optional<Signature>& m_sig,
                              const std::optional<Signature>& n_sig) {
  BiInterpretation bi;
  bi.i = interpretation_from_json(field(j, "I", "bi-interpretation"), n_sig);
  bi.j = interpretation_from_json(field(j, "J", "bi-interpretation"), m_sig);
  const int width = bi.i.dimension * bi.j.dimension;
  bi.iso_m = iso_from_json(field(j, "iso_m", "bi-interpretation"), bi.j.host_signature(), width);
  bi.iso_n = iso_from_json(field(j, "iso_n", "bi-interpretation"), bi.i.host_signature(), width);
  return bi;
}

// ------------------------------------------------------------- misc

EqRelation eq_from_json(const json& j, int size) {
  if (j.contains("classes")) {
    std::vector<std::vector<int>> classes;
    for (const auto& c : j["classes"]) classes.push_back(as_ints(c, "class"));
    return EqRelation::from_classes(size, classes);
  }
  if (j.contains("pairs")) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : j["pairs"]) {
      auto v = as_ints(p, "pair");
      if (v.size() != 2) bad("equivalence: pairs need two entries");
      pairs.emplace_back(v[0], v[1]);
    }
    return EqRelation::from_pairs(size, pairs);
  }
  bad("equivalence: expected \"classes\" or \"pairs\"");
}

CodedPair coded_pair_from_json(const json& j) {
  CodedPair c;
  c.n = as_int(field(j, "n", "coded pair"), "n");
  c.alpha = as_int(field(j, "alpha", "coded pair"), "alpha");
  const json& e = field(j, "E", "coded pair");
  if (!e.is_array()) bad("coded pair: \"E\" must be an array");
  for (const auto& p : e) {
    auto v = as_ints(p, "edge");
    if (v.size() != 2) bad("coded pair: edges need two entries");
    if (v[0] < 0 || v[1] < 0 || v[0] >= c.n || v[1] >= c.n) bad("coded pair: edge outside the domain");
    c.edges.emplace_back(v[0], v[1]);
  }
  return c;
}

json to_json(const CodedPair& c) {
  json edges = json::array();
  for (auto [a, b] : c.edges) edges.push_back({a, b});
  return {{"n", c.n}, {"E", edges}, {"alpha", c.alpha}};
}

json to_json(const GrowthProfile& p) { return {{"counts", p.counts}, {"constant", p.constant}}; }

}  // namespace interpres::io
