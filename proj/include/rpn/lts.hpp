#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "rpn/engine.hpp"

namespace rpn {

struct Bounds {
    int max_states = 100000;
    int max_depth = -1;  // -1: unbounded
    Semantics sem = Semantics::causal;
    bool forward_only = false;
    bool controlled = true;  // apply transition conditions
};

struct Edge {
    int src = 0;
    Move move;
    int dst = 0;
};

struct Lts {
    std::vector<State> states;
    std::vector<Edge> edges;
    std::vector<int> depth;
    std::vector<char> expanded;  // every successor of the state is recorded
    int initial = 0;
    bool truncated = false;
    bool state_cap = false;  // truncated by max_states rather than max_depth only
    int skipped = 0;  // moves whose firing raised (e.g. unrelocatable components)
    std::vector<std::vector<int>> out;  // edge ids per state
    std::vector<std::vector<int>> in;

    int find(const State& s) const;
    std::map<std::string, int> index;
};

// Moves available in s under the bounds' policy.
std::vector<Move> lts_moves(const Engine& eng, const State& s, const Bounds& b);

Lts build_lts(const Engine& eng, const State& init, const Bounds& b);

// "t[u=a1,v=b1]:fwd" style event label.
std::string move_label(const Net& net, const Move& m);

std::string export_text(const Net& net, const Lts& lts);
std::string export_dot(const Net& net, const Lts& lts);

struct IsoMap {
    std::vector<int> beta;                     // state of A -> state of B
    std::map<std::string, std::string> eta;    // label of A -> label of B
};

// Labelled graph view used for isomorphism.
struct LabelledGraph {
    int n = 0;
    int initial = 0;
    std::vector<std::tuple<int, std::string, int>> edges;
};

LabelledGraph graph_of(const Net& net, const Lts& lts);

// Isomorphism of reachable parts with free state and label bijections.
std::optional<IsoMap> isomorphic(const LabelledGraph& a, const LabelledGraph& b);
// Throws Error when either LTS hit its state cap. Depth-bounded LTSs are
// compared as explored, which is sound because isomorphisms preserve depth.
std::optional<IsoMap> lts_isomorphic_reachable(const Net& na, const Lts& a, const Net& nb, const Lts& b);

}  // namespace rpn
