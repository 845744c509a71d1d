#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpn/lts.hpp"

namespace rpn {

enum class PropKind { reachability, coverability, home_state, liveness, deadlock, persistence, siphon, trap };

const char* to_string(PropKind k);
PropKind parse_prop_kind(const std::string& s);

// A marking plus history to look for. Tokens of unlisted places are free
// when submarking is set; otherwise unlisted places must be empty.
struct Target {
    std::vector<int> place;  // per token, -1 when not listed
    std::vector<char> listed_place;
    std::vector<Bond> bonds;
    std::map<int, std::vector<int>> history;  // transition -> sorted keys
    bool submarking = false;
};

struct PropertyQuery {
    PropKind kind = PropKind::deadlock;
    std::optional<Target> target;
    bool ignore_history = false;
    int level = 1;              // liveness
    int transition = -1;        // liveness: -1 means every transition
    std::vector<int> places;    // siphon, trap
};

struct Verdict {
    bool holds = false;
    bool bounded = false;  // exploration was truncated; universal answers are provisional
    std::string detail;
    int state = -1;                 // witness or counterexample state
    std::vector<Move> witness;      // path from the initial state to `state`
    std::map<int, int> levels;      // liveness: highest Lk per transition
};

// {"marking": {place: [tokens] | {tokens, bonds}}, "history": {t: [keys]}, "submarking": bool}
Target parse_target(const Net& net, const nlohmann::json& j);
PropertyQuery parse_query(const Net& net, const nlohmann::json& j);

bool matches(const Target& t, const State& s, bool ignore_history);
bool covers(const Net& net, const State& s, const Target& t, bool ignore_history);

// Highest liveness level of transition t on a fully explored graph.
int liveness_level(const Lts& lts, int t);

Verdict check_property(const Engine& eng, const Lts& lts, const PropertyQuery& q);
Verdict check_property(const Engine& eng, const PropertyQuery& q, const Bounds& b);

}  // namespace rpn
