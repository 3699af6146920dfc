#pragma once

// Reference oracles and seeded generators used by the acceptance suite and the
// unit tests. The oracles deliberately avoid the library's own algorithms.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "interpres/hf.hpp"
#include "interpres/interp.hpp"
#include "interpres/logic.hpp"
#include "interpres/structure.hpp"

namespace interpres::testing {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi);  // inclusive
bool coin(Rng& rng, double p = 0.5);

// Recursive satisfaction over a string-keyed environment.
bool naive_eval(const FinStructure& m, const Formula& f, std::map<std::string, int> env = {});

bool has_cycle(const BinaryRelation& rel);
bool naive_extensional(const BinaryRelation& rel);

// Permutation-by-permutation isomorphism oracle.
bool is_isomorphism(const FinStructure& a, const FinStructure& b, const std::vector<int>& f);
std::size_t brute_iso_count(const FinStructure& a, const FinStructure& b, std::size_t stop_after = SIZE_MAX);

// Signature {E/2, P/1}.
Signature graph_signature();
FinStructure random_structure(Rng& rng, int n, const Signature& sig, double density);
// Random formula whose free variables lie in `scope`; depth <= `depth`.
Formula random_formula(Rng& rng, const Signature& sig, const std::vector<std::string>& scope, int depth,
                       const std::vector<std::string>& constants = {});
Formula random_sentence(Rng& rng, const Signature& sig, int depth);

// A k-dimensional interpretation of `source` in `target` whose equality is a
// congruence by construction: equality is an intersection of identity,
// kernels of random features, "same multiset" or "same first coordinate",
// and relation formulas are built from pieces invariant under each part.
Interpretation random_interpretation(Rng& rng, const Signature& source, const Signature& target, int k,
                                     int host_size, bool allow_params);

// Membership structure on the listed sets: (i, j) in E iff sets[i] in sets[j].
FinStructure membership_structure(const std::vector<HFSet>& sets, const std::string& symbol = "E");
// V_n built by iterated power sets, without Ackermann decoding.
std::vector<HFSet> stage_by_powerset(int n);
// Random transitive set of at most `max_size` elements drawn below V_5.
HFSet random_transitive(Rng& rng, int max_size);
// Random bijection of 0..n-1.
std::vector<int> random_permutation(Rng& rng, int n);

}  // namespace interpres::testing
