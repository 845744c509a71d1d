#pragma once

#include <string>
#include <vector>

#include "rpn/condition.hpp"
#include "rpn/engine.hpp"

namespace rpn {

struct CondCheck {
    bool ok = true;
    bool has_condition = false;
    Binding ext;        // arc binding extended to the condition's free variables
    std::string trace;  // e.g. "20 ≥ 338 → false ⇒ reverse allowed"
};

// The condition guarding t in a direction; null when unconditional.
// With rev_is_neg the reverse condition is the negation of the forward one.
CondCheck check_condition(const Engine& eng, const State& s, int t, Dir dir, const Binding& b);

struct ControlledMove {
    Move move;
    CondCheck cond;
};

// Moves of the underlying semantics whose condition can be satisfied.
// With include_blocked, moves whose condition fails are listed too (cond.ok false).
std::vector<ControlledMove> enabled_controlled(const Engine& eng, const State& s, Dir dir, Semantics sem,
                                               bool include_blocked = false);

std::vector<Move> controlled_moves(const Engine& eng, const State& s, Semantics sem, bool forward, bool reverse);

// Resolves condition variable names, placeRef ids and the rev_is_neg convention.
// Returns problems as strings; empty when all conditions are usable.
std::vector<std::string> check_conditions(const Net& net);

}  // namespace rpn
