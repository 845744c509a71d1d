#pragma once

#include <map>
#include <utility>
#include <vector>

#include "rpn/engine.hpp"
#include "rpn/props.hpp"

namespace rpntest {

// Explicit state graph built by depth-first search with linear-scan
// deduplication. Kept deliberately naive so it shares nothing with build_lts.
struct Graph {
    std::vector<rpn::State> states;
    std::vector<std::vector<std::pair<rpn::Move, int>>> succ;
    bool complete = true;
};

Graph enumerate(const rpn::Engine& eng, rpn::Semantics sem, int cap);

struct OracleVerdict {
    bool holds = false;
    std::map<int, int> levels;
};

OracleVerdict oracle_check(const rpn::Engine& eng, const Graph& g, const rpn::PropertyQuery& q);

}  // namespace rpntest
