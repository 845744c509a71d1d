#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rpn/engine.hpp"

namespace rpn {

struct TraceReport {
    bool ok = true;
    std::vector<std::string> lines;
    std::string error;
    State final_state;
    int steps_run = 0;
};

// Script: {"interpretation"?, "semantics"?, "expectInitial"?, "steps": [step...]}. A step is
// {"fire": t} or {"reverse": t, "key"?, "semantics"?} with optional
// "assignment" {var: instance}, "expectMarking" (whole marking),
// "expectPlaces" (listed places only), "expectHistory", "expectFail".
TraceReport run_trace(const Net& net, const nlohmann::json& script);

// Compares a marking against {place: {"tokens": [...], "bonds": [...]}}.
// Returns an empty string on match, otherwise a description of the difference.
std::string compare_marking(const Net& net, const State& s, const nlohmann::json& expect, bool whole);

}  // namespace rpn
