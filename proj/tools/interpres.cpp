// interpres: command-line front end for the interpretation workbench.
#include <chrono>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "interpres/acceptance.hpp"
#include "interpres/error.hpp"
#include "interpres/fin_model.hpp"
#include "interpres/hf.hpp"
#include "interpres/interp.hpp"
#include "interpres/io.hpp"
#include "interpres/logic.hpp"
#include "interpres/mathias.hpp"

namespace {

using namespace interpres;
using io::json;

enum class Verdict { Pass, Fail, Error };

struct Check {
  std::string name;
  Verdict verdict = Verdict::Pass;
  json witness;            // null when absent
  std::string diagnostic;  // empty when absent
};

struct Report {
  std::string command;
  json inputs = json::object();
  json result;
  std::vector<Check> checks;
};

struct Settings {
  bool json_out = false;
  int max_size = 8;
  std::optional<int> max_depth;
  std::uint64_t seed = 0;
  std::uint64_t decode_cap = kDefaultDecodeCap;
  std::size_t encode_bits = kDefaultEncodeBits;
  unsigned tower_cap = kDefaultTowerCapBits;
  std::size_t descent_cap = kDefaultDescentCap;
};

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Error:
      return "error";
  }
  return "error";
}

Check verdict(std::string name, bool ok, std::string diagnostic = {}, json witness = nullptr) {
  return {std::move(name), ok ? Verdict::Pass : Verdict::Fail, std::move(witness), std::move(diagnostic)};
}

FinStructure load_structure(const std::string& path) { return io::structure_from_json(io::read_json_file(path)); }

Formula checked_formula(const std::string& text, const Signature& sig, const Settings& s) {
  Formula f = parse_formula(text, sig);
  if (s.max_depth && depth(f) > *s.max_depth)
    throw ValidationError("formula depth " + std::to_string(depth(f)) + " exceeds --depth " + std::to_string(*s.max_depth));
  return f;
}

// "E/2,P/1,c": relations with arities, bare names are constants.
Signature parse_sig_flag(const std::string& text) {
  Signature sig;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    auto slash = item.find('/');
    if (slash == std::string::npos)
      sig.add_constant(item);
    else
      sig.add_relation(item.substr(0, slash), std::stoi(item.substr(slash + 1)));
  }
  return sig;
}

HFSet hf_arg(const std::string& text) { return parse_hf(text); }

json tuples_json(const TupleSet& s) {
  json out = json::array();
  for (const auto& t : s) out.push_back(t);
  return out;
}

std::string text_of(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return {};
  return j.dump(2);
}

void print_report(const Report& r, const Settings& s, double seconds) {
  if (s.json_out) {
    json out;
    out["command"] = r.command;
    out["inputs"] = r.inputs;
    out["result"] = r.result;
    out["checks"] = json::array();
    for (const auto& c : r.checks) {
      json jc{{"name", c.name}, {"verdict", verdict_name(c.verdict)}};
      if (!c.witness.is_null()) jc["witness"] = c.witness;
      if (!c.diagnostic.empty()) jc["diagnostic"] = c.diagnostic;
      out["checks"].push_back(jc);
    }
    out["timing"] = {{"seconds", seconds}};
    std::cout << out.dump(2) << "\n";
    return;
  }
  const std::string body = text_of(r.result);
  if (!body.empty()) std::cout << body << "\n";
  for (const auto& c : r.checks) {
    std::cout << c.name << ": " << verdict_name(c.verdict);
    if (!c.diagnostic.empty()) std::cout << " (" << c.diagnostic << ")";
    if (!c.witness.is_null()) std::cout << " " << c.witness.dump();
    std::cout << "\n";
  }
}

json maybe_map(const std::optional<std::vector<int>>& f) { return f ? json(*f) : json(nullptr); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interpres: interpretations between finite structures and hereditarily finite sets"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  app.add_flag("--json", s.json_out, "Emit the report as JSON");
  app.add_option("--max-size", s.max_size, "Domain size cap for isomorphism search")->capture_default_str();
  app.add_option("--depth", s.max_depth, "Reject formulas deeper than this");
  app.add_option("--seed", s.seed, "Seed for randomized runs")->capture_default_str();
  app.add_option("--decode-cap", s.decode_cap, "Ackermann decode bound")->capture_default_str();
  app.add_option("--encode-bits", s.encode_bits, "Ackermann encode bit cap")->capture_default_str();
  app.add_option("--tower-cap", s.tower_cap, "Exact/tower boundary in bits")->capture_default_str();
  app.add_option("--descent-cap", s.descent_cap, "Cap on enumerated terminal descents")->capture_default_str();

  std::function<Report()> action;
  auto iso_limits = [&] { return IsoLimits{s.max_size}; };

  // ---------------------------------------------------------------- logic
  auto* logic = app.add_subcommand("logic", "Formulas and evaluation");
  logic->require_subcommand(1);
  std::string a1, a2, a3, a4;
  std::string sig_flag, host_path, eq_path, symbol;
  std::vector<std::string> assigns;

  auto* parse = logic->add_subcommand("parse", "Parse and render a formula");
  parse->add_option("formula", a1)->required();
  parse->add_option("--sig", sig_flag, "Signature such as E/2,P/1,c");
  parse->add_option("--structure", host_path, "Take the signature from a structure file");
  parse->callback([&] {
    action = [&] {
      Signature sig = host_path.empty() ? parse_sig_flag(sig_flag) : load_structure(host_path).signature();
      Formula f = checked_formula(a1, sig, s);
      Report r{"logic parse", {{"formula", a1}}};
      json fv = json::array();
      for (const auto& v : free_variables(f)) fv.push_back(v);
      r.result = s.json_out ? json{{"formula", render(f)}, {"depth", depth(f)}, {"free", fv}} : json(render(f));
      return r;
    };
  });

  auto* eval = logic->add_subcommand("eval", "Evaluate a formula in a structure");
  eval->add_option("structure", a1)->required();
  eval->add_option("formula", a2)->required();
  eval->add_option("--assign", assigns, "Variable assignment var=element");
  eval->callback([&] {
    action = [&] {
      FinStructure m = load_structure(a1);
      Formula f = checked_formula(a2, m.signature(), s);
      Assignment env;
      for (const auto& as : assigns) {
        auto eq = as.find('=');
        if (eq == std::string::npos) throw ValidationError("--assign expects var=element");
        env[as.substr(0, eq)] = std::stoi(as.substr(eq + 1));
      }
      const bool value = evaluate(m, f, env);
      Report r{"logic eval", {{"structure", a1}, {"formula", a2}}};
      r.result = value;
      r.checks.push_back(verdict("holds", value));
      return r;
    };
  });

  int arity = 1;
  int def_depth = 1;
  std::vector<int> params;
  auto* definable = logic->add_subcommand("definable", "Enumerate definable relations");
  definable->add_option("structure", a1)->required();
  definable->add_option("--arity", arity)->capture_default_str();
  definable->add_option("--formula-depth", def_depth, "Depth bound for the enumeration")->capture_default_str();
  definable->add_option("--params", params, "Parameter elements")->delimiter(',');
  definable->callback([&] {
    action = [&] {
      FinStructure m = load_structure(a1);
      auto rels = definable_relations(m, arity, def_depth, params);
      Report r{"logic definable", {{"structure", a1}, {"arity", arity}, {"depth", def_depth}, {"params", params}}};
      json out = json::array();
      for (const auto& rel : rels) out.push_back(tuples_json(rel));
      r.result = {{"count", rels.size()}, {"relations", out}};
      return r;
    };
  });

  // ---------------------------------------------------------------- model
  auto* model = app.add_subcommand("model", "Finite structures");
  model->require_subcommand(1);

  auto* quot = model->add_subcommand("quotient", "Quotient by an equivalence");
  quot->add_option("structure", a1)->required();
  quot->add_option("eq", a2)->required();
  quot->callback([&] {
    action = [&] {
      FinStructure m = load_structure(a1);
      EqRelation eq = io::eq_from_json(io::read_json_file(a2), m.size());
      Report r{"model quotient", {{"structure", a1}, {"eq", a2}}};
      const bool ok = check_congruence(m, eq);
      r.checks.push_back(verdict("congruence", ok));
      if (ok) {
        Quotient q = quotient(m, eq);
        r.result = {{"structure", io::to_json(q.structure)}, {"projection", q.projection}};
      }
      return r;
    };
  });

  bool all_isos = false;
  auto* iso = model->add_subcommand("iso", "Isomorphisms between two structures");
  iso->add_option("a", a1)->required();
  iso->add_option("b", a2)->required();
  iso->add_flag("--all", all_isos, "List every isomorphism");
  iso->callback([&] {
    action = [&] {
      IsoLimits lim = iso_limits();
      if (!all_isos) lim.max_results = 1;
      auto found = find_isomorphisms(load_structure(a1), load_structure(a2), lim);
      Report r{"model iso", {{"a", a1}, {"b", a2}}};
      r.result = {{"isomorphisms", found}};
      r.checks.push_back(verdict("isomorphic", !found.empty(), {}, found.empty() ? json(nullptr) : json(found.front())));
      return r;
    };
  });

  auto* wf = model->add_subcommand("wf", "Well-foundedness of a binary relation");
  wf->add_option("structure", a1)->required();
  wf->add_option("--symbol", symbol, "Binary relation symbol (default: the only one)");
  wf->callback([&] {
    action = [&] {
      FinStructure m = load_structure(a1);
      const std::string sym = symbol.empty() ? sole_binary_symbol(m) : symbol;
      Report r{"model wf", {{"structure", a1}, {"symbol", sym}}};
      r.checks.push_back(verdict("well-founded", is_wellfounded(binary_relation(m, sym))));
      return r;
    };
  });

  auto* ext = model->add_subcommand("ext", "Extensionality of a binary relation");
  ext->add_option("structure", a1)->required();
  ext->add_option("--eq", eq_path, "Equivalence file (default identity)");
  ext->add_option("--symbol", symbol, "Binary relation symbol (default: the only one)");
  ext->callback([&] {
    action = [&] {
      FinStructure m = load_structure(a1);
      const std::string sym = symbol.empty() ? sole_binary_symbol(m) : symbol;
      EqRelation eq = eq_path.empty() ? EqRelation::identity(m.size()) : io::eq_from_json(io::read_json_file(eq_path), m.size());
      Report r{"model ext", {{"structure", a1}, {"symbol", sym}}};
      r.checks.push_back(verdict("extensional", is_extensional(binary_relation(m, sym), eq)));
      return r;
    };
  });

  // --------------------------------------------------------------- interp
  auto* interp = app.add_subcommand("interp", "Interpretations");
  interp->require_subcommand(1);
  auto host_sig = [&]() -> std::optional<Signature> {
    if (host_path.empty()) return std::nullopt;
    return load_structure(host_path).signature();
  };

  auto* tr = interp->add_subcommand("translate", "Translate a source formula");
  tr->add_option("interpretation", a1)->required();
  tr->add_option("formula", a2)->required();
  tr->add_option("--host", host_path, "Structure supplying the target signature");
  tr->callback([&] {
    action = [&] {
      Interpretation in = io::interpretation_from_json(io::read_json_file(a1), host_sig());
      Formula f = checked_formula(a2, in.source, s);
      Report r{"interp translate", {{"interpretation", a1}, {"formula", a2}}};
      r.result = render(translate(f, in));
      return r;
    };
  });

  auto* ap = interp->add_subcommand("apply", "Build the interpreted structure");
  ap->add_option("interpretation", a1)->required();
  ap->add_option("structure", a2)->required();
  ap->callback([&] {
    action = [&] {
      FinStructure m = load_structure(a2);
      Interpretation in = io::interpretation_from_json(io::read_json_file(a1), m.signature());
      Applied a = apply(in, m);
      Report r{"interp apply", {{"interpretation", a1}, {"structure", a2}}};
      r.result = {{"structure", io::to_json(a.structure)}, {"representatives", a.representatives}};
      return r;
    };
  });

  auto* comp = interp->add_subcommand("compose", "Compose two interpretations");
  comp->add_option("outer", a1)->required();
  comp->add_option("inner", a2)->required();
  comp->add_option("--host", host_path, "Structure supplying the inner target signature");
  comp->callback([&] {
    action = [&] {
      Interpretation inner = io::interpretation_from_json(io::read_json_file(a2), host_sig());
      Interpretation outer = io::interpretation_from_json(io::read_json_file(a1), inner.source);
      Interpretation c = compose(outer, inner);
      Report r{"interp compose", {{"outer", a1}, {"inner", a2}}};
      r.result = io::to_json(c);
      return r;
    };
  });

  auto* mut = interp->add_subcommand("check-mutual", "Mutual interpretability of two structures");
  mut->add_option("m", a1)->required();
  mut->add_option("n", a2)->required();
  mut->add_option("i", a3, "Interpretation of M's language in N")->required();
  mut->add_option("j", a4, "Interpretation of N's language in M")->required();
  mut->callback([&] {
    action = [&] {
      FinStructure m = load_structure(a1);
      FinStructure n = load_structure(a2);
      Interpretation i = io::interpretation_from_json(io::read_json_file(a3), n.signature());
      Interpretation j = io::interpretation_from_json(io::read_json_file(a4), m.signature());
      MutualReport mr = check_mutual(m, n, i, j, iso_limits());
      Report r{"interp check-mutual", {{"m", a1}, {"n", a2}, {"i", a3}, {"j", a4}}};
      r.result = {{"m_bar", io::to_json(mr.m_bar)}, {"n_bar", io::to_json(mr.n_bar)}};
      r.checks.push_back(verdict("N isomorphic to J(M)", mr.n_in_m.has_value(), {}, maybe_map(mr.n_in_m)));
      r.checks.push_back(verdict("M isomorphic to I(N)", mr.m_in_n.has_value(), {}, maybe_map(mr.m_in_n)));
      return r;
    };
  });

  auto load_bi = [&](const FinStructure& m, const FinStructure& n) {
    return io::bi_from_json(io::read_json_file(a3), m.signature(), n.signature());
  };

  auto* bi = interp->add_subcommand("check-bi", "Bi-interpretation check");
  bi->add_option("m", a1)->required();
  bi->add_option("n", a2)->required();
  bi->add_option("bi", a3)->required();
  bi->callback([&] {
    action = [&] {
      FinStructure m = load_structure(a1);
      FinStructure n = load_structure(a2);
      BiReport br = check_bi(load_bi(m, n), m, n, iso_limits());
      Report r{"interp check-bi", {{"m", a1}, {"n", a2}, {"bi", a3}}};
      r.checks.push_back(verdict("mutual", br.mutual.mutual()));
      json w = br.holds ? json{{"m_to_m_bar", br.m_to_m_bar}, {"n_to_n_bar", br.n_to_n_bar}} : json(nullptr);
      r.checks.push_back(verdict("bi-interpretation", br.holds, br.diagnostic, w));
      return r;
    };
  });

  auto* syn = interp->add_subcommand("check-syn", "Synonymy check");
  syn->add_option("m", a1)->required();
  syn->add_option("n", a2)->required();
  syn->add_option("bi", a3)->required();
  syn->callback([&] {
    action = [&] {
      FinStructure m = load_structure(a1);
      FinStructure n = load_structure(a2);
      SynonymyReport sr = check_synonymy(load_bi(m, n), m, n, iso_limits());
      Report r{"interp check-syn", {{"m", a1}, {"n", a2}, {"bi", a3}}};
      r.checks.push_back(verdict("bi-interpretation", sr.bi.holds, sr.bi.diagnostic));
      r.checks.push_back(verdict("synonymy", sr.holds, sr.holds ? std::string() : sr.diagnostic));
      return r;
    };
  });

  auto* th = interp->add_subcommand("check-theory", "Translate a theory and evaluate it in a host");
  th->add_option("interpretation", a1)->required();
  th->add_option("theory", a2)->required();
  th->add_option("structure", a3)->required();
  th->callback([&] {
    action = [&] {
      FinStructure m = load_structure(a3);
      Interpretation in = io::interpretation_from_json(io::read_json_file(a1), m.signature());
      Theory t = io::theory_from_json(io::read_json_file(a2));
      TheoryReport tr = check_theory_interpretation(in, t, m);
      Report r{"interp check-theory", {{"interpretation", a1}, {"theory", a2}, {"structure", a3}}};
      for (const auto& v : tr.axioms) r.checks.push_back(verdict(render(v.axiom), v.holds, {}, json(render(v.translated))));
      return r;
    };
  });

  auto* sc = interp->add_subcommand("scott", "Scott reduction of an interpretation in a membership structure");
  sc->add_option("interpretation", a1)->required();
  sc->add_option("structure", a2)->required();
  sc->add_option("--symbol", symbol, "Membership symbol (default: the only binary one)");
  sc->callback([&] {
    action = [&] {
      FinStructure m = load_structure(a2);
      Interpretation in = io::interpretation_from_json(io::read_json_file(a1), m.signature());
      std::optional<std::string> sym = symbol.empty() ? std::nullopt : std::optional<std::string>(symbol);
      Interpretation red = scott_reduce(in, m, sym);
      Applied before = apply(in, m);
      Applied after = apply(red, m);
      IsoLimits lim = iso_limits();
      lim.max_results = 1;
      auto isos = find_isomorphisms(before.structure, after.structure, lim);
      Report r{"interp scott", {{"interpretation", a1}, {"structure", a2}}};
      r.result = io::to_json(red);
      r.checks.push_back(verdict("reduced equality is identity", after.structure.size() == static_cast<int>(after.domain_tuples)));
      r.checks.push_back(verdict("isomorphic to the original", !isos.empty(), {}, isos.empty() ? json(nullptr) : json(isos.front())));
      return r;
    };
  });

  auto* tor = interp->add_subcommand("theory-or", "Pairwise disjunction of two theories");
  tor->add_option("t1", a1)->required();
  tor->add_option("t2", a2)->required();
  tor->add_option("--structure", host_path, "Also evaluate the result in this structure");
  tor->callback([&] {
    action = [&] {
      Theory t = theory_disjunction(io::theory_from_json(io::read_json_file(a1)), io::theory_from_json(io::read_json_file(a2)));
      Report r{"interp theory-or", {{"t1", a1}, {"t2", a2}}};
      r.result = io::to_json(t);
      if (!host_path.empty()) {
        FinStructure m = load_structure(host_path);
        bool all = true;
        for (const auto& ax : t.axioms) all = all && evaluate(m, ax);
        r.checks.push_back(verdict("models", all));
      }
      return r;
    };
  });

  // ------------------------------------------------------------------- hf
  auto* hf = app.add_subcommand("hf", "Hereditarily finite sets");
  hf->require_subcommand(1);

  auto* enc = hf->add_subcommand("encode", "Ackermann code of a set literal");
  enc->add_option("set", a1)->required();
  enc->callback([&] {
    action = [&] {
      Report r{"hf encode", {{"set", a1}}};
      r.result = ack_encode(hf_arg(a1), s.encode_bits).str();
      return r;
    };
  });

  auto* dec = hf->add_subcommand("decode", "Set with the given Ackermann code");
  dec->add_option("code", a1)->required();
  dec->callback([&] {
    action = [&] {
      BigNat n;
      try {
        n = BigNat(a1);
      } catch (const std::exception&) {
        throw ValidationError("not a natural number: " + a1);
      }
      Report r{"hf decode", {{"code", a1}}};
      r.result = render_hf(ack_decode(n, s.decode_cap));
      return r;
    };
  });

  auto* col = hf->add_subcommand("collapse", "Mostowski collapse of a membership structure");
  col->add_option("structure", a1)->required();
  col->add_option("--eq", eq_path, "Equivalence file (default identity)");
  col->add_option("--symbol", symbol, "Binary relation symbol (default: the only one)");
  col->callback([&] {
    action = [&] {
      FinStructure m = load_structure(a1);
      const std::string sym = symbol.empty() ? sole_binary_symbol(m) : symbol;
      std::optional<EqRelation> eq;
      if (!eq_path.empty()) eq = io::eq_from_json(io::read_json_file(eq_path), m.size());
      auto pi = mostowski_collapse(binary_relation(m, sym), eq);
      Report r{"hf collapse", {{"structure", a1}}};
      json out = json::array();
      for (const auto& x : pi) out.push_back(render_hf(x));
      r.result = s.json_out ? out : json(out.dump());
      return r;
    };
  });

  bool decode_pair = false;
  auto* code = hf->add_subcommand("code", "Coded pair (n, E, alpha) of a set, or decode one");
  code->add_option("input", a1, "Set literal, or a coded-pair file with --decode")->required();
  code->add_flag("--decode", decode_pair, "Decode a coded-pair file");
  code->callback([&] {
    action = [&] {
      Report r{"hf code", {{"input", a1}}};
      if (decode_pair)
        r.result = render_hf(decode_coded_pair(io::coded_pair_from_json(io::read_json_file(a1))));
      else
        r.result = s.json_out ? io::to_json(encode_coded_pair(hf_arg(a1))) : json(io::to_json(encode_coded_pair(hf_arg(a1))).dump());
      return r;
    };
  });

  auto coded_arg = [](const std::string& text) {
    if (!text.empty() && text.front() == '{' && text.find('"') == std::string::npos) return encode_coded_pair(parse_hf(text));
    return io::coded_pair_from_json(io::read_json_file(text));
  };
  auto* mem = hf->add_subcommand("member", "Membership between coded pairs (files or set literals)");
  mem->add_option("element", a1)->required();
  mem->add_option("set", a2)->required();
  mem->callback([&] {
    action = [&] {
      Report r{"hf member", {{"element", a1}, {"set", a2}}};
      r.checks.push_back(verdict("member", coded_member(coded_arg(a1), coded_arg(a2))));
      return r;
    };
  });

  // -------------------------------------------------------------- mathias
  auto* ma = app.add_subcommand("mathias", "Growth rates and the Zermelo tower");
  ma->require_subcommand(1);

  auto* bk = ma->add_subcommand("b", "The bound b_k(n)");
  bk->add_option("k", arity)->required();
  bk->add_option("n", a1)->required();
  bk->callback([&] {
    action = [&] {
      Report r{"mathias b", {{"k", arity}, {"n", a1}}};
      r.result = tower_b(arity, BigNat(a1), s.tower_cap).render();
      return r;
    };
  });

  int stage = -1;
  auto* vc = ma->add_subcommand("vcard", "|V_n|");
  vc->add_option("n", stage)->required();
  vc->callback([&] {
    action = [&] {
      Report r{"mathias vcard", {{"n", stage}}};
      r.result = vcard(stage, s.tower_cap).render();
      return r;
    };
  });

  auto set_or_stage = [&](const std::string& literal) {
    if (stage >= 0) return v_stage_set(stage);
    if (literal.empty()) throw ValidationError("give a set literal or --vstage");
    return hf_arg(literal);
  };

  auto* prof = ma->add_subcommand("profile", "Growth profile |TC({x}) ∩ V_n|");
  prof->add_option("set", a1);
  prof->add_option("--vstage", stage, "Use V_m (m <= 5)");
  prof->callback([&] {
    action = [&] {
      Report r{"mathias profile", {{"set", a1}, {"vstage", stage}}};
      r.result = s.json_out ? io::to_json(growth_profile(set_or_stage(a1))) : json(io::to_json(growth_profile(set_or_stage(a1))).dump());
      return r;
    };
  });

  auto* md = ma->add_subcommand("min-depth", "Least k with profile bounded by b_k");
  md->add_option("set", a1);
  md->add_option("--vstage", stage, "Use V_m, computed from |V_n| symbolically");
  md->callback([&] {
    action = [&] {
      Report r{"mathias min-depth", {{"set", a1}, {"vstage", stage}}};
      r.result = stage >= 0 ? min_depth_vstage(stage, s.tower_cap) : min_depth(hf_arg(a1));
      return r;
    };
  });

  auto* ts = ma->add_subcommand("tower-sub", "x^(a)");
  ts->add_option("x", a1)->required();
  ts->add_option("a", a2)->required();
  ts->callback([&] {
    action = [&] {
      Report r{"mathias tower-sub", {{"x", a1}, {"a", a2}}};
      r.result = render_hf(tower_sub(hf_arg(a1), hf_arg(a2)));
      return r;
    };
  });

  bool list_descents = false;
  auto* it = ma->add_subcommand("in-tower", "Does every terminal descent from x pass through a");
  it->add_option("x", a1)->required();
  it->add_option("a", a2)->required();
  it->add_flag("--descents", list_descents, "Also list the terminal descents");
  it->callback([&] {
    action = [&] {
      HFSet x = hf_arg(a1);
      HFSet a = hf_arg(a2);
      Report r{"mathias in-tower", {{"x", a1}, {"a", a2}}};
      if (list_descents) {
        json chains = json::array();
        for (const auto& chain : terminal_descents(x, s.descent_cap)) {
          json c = json::array();
          for (const auto& y : chain) c.push_back(render_hf(y));
          chains.push_back(c);
        }
        r.result = s.json_out ? chains : json(chains.dump());
      }
      r.checks.push_back(verdict("in tower", in_tower(x, a)));
      return r;
    };
  });

  int bound = 0;
  std::vector<std::string> sample;
  auto* cl = ma->add_subcommand("closure", "Closure clauses for {transitive x : min_depth(x) <= K}");
  cl->add_option("K", bound)->required();
  cl->add_option("sample", sample, "Set literals (default: the transitive sets in V_4)");
  cl->callback([&] {
    action = [&] {
      std::vector<HFSet> xs;
      if (sample.empty()) {
        for (const auto& x : v_stage(4))
          if (is_transitive(x)) xs.push_back(x);
      } else {
        for (const auto& t : sample) xs.push_back(hf_arg(t));
      }
      ClosureReport cr = fruitful_closure_check(bound, xs);
      Report r{"mathias closure", {{"K", bound}, {"sample_size", xs.size()}}};
      r.result = s.json_out ? json{{"checks", cr.checks}, {"violations", cr.violations}}
                            : json(std::to_string(cr.checks) + " instances checked");
      r.checks.push_back(verdict("closure", cr.ok(), cr.ok() ? std::string() : cr.violations.front()));
      return r;
    };
  });

  // ------------------------------------------------------------- selftest
  std::vector<int> only;
  auto* st = app.add_subcommand("selftest", "Run the acceptance suite (criteria 1-9)");
  st->add_option("--only", only, "Run only these criteria");
  st->callback([&] {
    action = [&] {
      AcceptanceOptions opt;
      opt.seed = s.seed;
      opt.only.insert(only.begin(), only.end());
      Report r{"selftest", {{"seed", s.seed}}};
      std::string lines;
      for (const auto& c : run_acceptance(opt)) {
        lines += format_result(c) + "\n";
        r.checks.push_back(verdict("criterion " + std::to_string(c.id) + " " + c.name, c.pass, c.pass ? std::string() : c.detail,
                                   json{{"cases", c.cases}, {"seconds", c.seconds}}));
      }
      if (!s.json_out) {
        lines.pop_back();
        r.result = lines;
        r.checks.clear();
        if (lines.find("[FAIL]") != std::string::npos) r.checks.push_back(verdict("selftest", false));
      }
      return r;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    Report r = action();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    print_report(r, s, secs);
    for (const auto& c : r.checks)
      if (c.verdict != Verdict::Pass) return 1;
    return 0;
  } catch (const interpres::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const io::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
