#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "interpres/fin_model.hpp"
#include "interpres/hf.hpp"
#include "interpres/interp.hpp"
#include "interpres/mathias.hpp"

namespace interpres::io {

using nlohmann::json;

// Reads a whole file; throws ValidationError when it cannot be opened or is
// not JSON.
json read_json_file(const std::string& path);

// {"domain": n, "relations": {"E": [[0,1]]}, "constants": {"c": 0}}, with an
// optional "arities" map for relations whose table is empty (default 2).
FinStructure structure_from_json(const json& j);
json to_json(const FinStructure& m);

// {"dimension": k, "source": {"R": 2}, "target": {...}, "domain": "...",
//  "equality": "...", "relations": {"R": "..."}, "params": [3, {"name": "c", "element": 1}]}
// Free variables default to x1..xk, y1..yk, ... (x, y, ... when k = 1).
// `target` is used when the document has no "target" entry.
Interpretation interpretation_from_json(const json& j, const std::optional<Signature>& target = std::nullopt);
json to_json(const Interpretation& in);

Signature signature_from_json(const json& j);  // {"relations": {"E": 2}, "constants": ["c"]}
json to_json(const Signature& sig);

// {"name": "T", "signature": {...}, "axioms": ["Ax.(x=x)"]}
Theory theory_from_json(const json& j);
json to_json(const Theory& t);

// {"I": {...}, "J": {...}, "iso_m": "...", "iso_n": "..."}; I and J need
// explicit source and target signatures unless m_sig / n_sig are given.
BiInterpretation bi_from_json(const json& j, const std::optional<Signature>& m_sig = std::nullopt,
                              const std::optional<Signature>& n_sig = std::nullopt);

// {"classes": [[0,2],[1]]} or {"pairs": [[0,2]]}
EqRelation eq_from_json(const json& j, int size);

// {"n": 2, "E": [[0,1]], "alpha": 1}
CodedPair coded_pair_from_json(const json& j);
json to_json(const CodedPair& c);

json to_json(const GrowthProfile& p);

}  // namespace interpres::io
