#pragma once

#include <vector>

#include "rpn/engine.hpp"

namespace rpn {

// Maximal chains of the covering relation of ≺ over live occurrences.
// An occurrence unrelated to every other forms a chain of its own.
std::vector<std::vector<Occ>> causal_paths(const Engine& eng, const State& s);

// s1 and s2 agree up to a renaming of keys that preserves transitions:
// same placement and bonds, renamed memories and causal order coincide.
bool states_causally_equivalent(const Engine& eng, const State& s1, const State& s2);

}  // namespace rpn
