#include "rpn/props.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "rpn/netfile.hpp"

namespace rpn {

using nlohmann::json;

const char* to_string(PropKind k) {
    switch (k) {
    case PropKind::reachability: return "reachability";
    case PropKind::coverability: return "coverability";
    case PropKind::home_state: return "homeState";
    case PropKind::liveness: return "liveness";
    case PropKind::deadlock: return "deadlock";
    case PropKind::persistence: return "persistence";
    case PropKind::siphon: return "siphon";
    case PropKind::trap: return "trap";
    }
    return "?";
}

PropKind parse_prop_kind(const std::string& s) {
    for (auto k : {PropKind::reachability, PropKind::coverability, PropKind::home_state, PropKind::liveness,
                   PropKind::deadlock, PropKind::persistence, PropKind::siphon, PropKind::trap})
        if (s == to_string(k)) return k;
    if (s == "home-state" || s == "home") return PropKind::home_state;
    throw std::invalid_argument("unknown property '" + s + "'");
}

Target parse_target(const Net& net, const json& j) {
    Target t;
    t.place.assign(net.tokens.size(), -1);
    t.listed_place.assign(net.places.size(), 0);
    t.submarking = j.value("submarking", false);
    const json marking_j = j.value("marking", json::object());
    for (auto& [pn, pj] : marking_j.items()) {
        int p = net.place_id(pn);
        if (p < 0) throw std::invalid_argument("target: unknown place " + pn);
        t.listed_place[p] = 1;
        json toks = pj.is_array() ? pj : pj.value("tokens", json::array());
        for (const auto& tn : toks) {
            int id = net.token_id(tn.get<std::string>());
            if (id < 0) throw std::invalid_argument("target: unknown token " + tn.get<std::string>());
            t.place[id] = p;
        }
        if (pj.is_object())
            for (const auto& b : pj.value("bonds", json::array())) {
                std::string x, y;
                if (b.is_string()) {
                    auto s = b.get<std::string>();
                    auto dash = s.find('-');
                    if (dash == std::string::npos) throw std::invalid_argument("target: bad bond " + s);
                    x = s.substr(0, dash);
                    y = s.substr(dash + 1);
                } else {
                    x = b.at(0).get<std::string>();
                    y = b.at(1).get<std::string>();
                }
                int ia = net.token_id(x), ib = net.token_id(y);
                if (ia < 0 || ib < 0) throw std::invalid_argument("target: unknown bond endpoint");
                t.bonds.push_back(make_bond(ia, ib));
            }
    }
    std::sort(t.bonds.begin(), t.bonds.end());
    const json history_j = j.value("history", json::object());
    for (auto& [tn, keys] : history_j.items()) {
        int id = net.transition_id(tn);
        if (id < 0) throw std::invalid_argument("target: unknown transition " + tn);
        auto& v = t.history[id];
        for (const auto& k : keys) v.push_back(k.get<int>());
        std::sort(v.begin(), v.end());
    }
    return t;
}

PropertyQuery parse_query(const Net& net, const json& j) {
    PropertyQuery q;
    q.kind = parse_prop_kind(j.at("kind").get<std::string>());
    if (j.contains("target")) q.target = parse_target(net, j.at("target"));
    q.ignore_history = j.value("ignoreHistory", false);
    q.level = j.value("level", 1);
    if (j.contains("transition")) {
        q.transition = net.transition_id(j.at("transition").get<std::string>());
        if (q.transition < 0) throw std::invalid_argument("query: unknown transition");
    }
    for (const auto& p : j.value("places", json::array())) {
        int id = net.place_id(p.get<std::string>());
        if (id < 0) throw std::invalid_argument("query: unknown place " + p.get<std::string>());
        q.places.push_back(id);
    }
    return q;
}

namespace {

bool history_equal(const Target& t, const State& s) {
    std::map<int, std::vector<int>> h;
    for (auto o : s.live) h[o.t].push_back(o.key);
    for (auto& [tr, keys] : t.history)
        if (!keys.empty() && h[tr] != keys) return false;
    for (auto& [tr, keys] : h) {
        auto it = t.history.find(tr);
        if (!keys.empty() && (it == t.history.end() || it->second != keys)) return false;
    }
    return true;
}

std::vector<int> parents_path(const Lts& lts, int target, std::vector<Move>& moves) {
    std::vector<int> via(lts.states.size(), -1);
    std::vector<char> seen(lts.states.size(), 0);
    std::deque<int> q{lts.initial};
    seen[lts.initial] = 1;
    while (!q.empty()) {
        int c = q.front();
        q.pop_front();
        for (int e : lts.out[c]) {
            int d = lts.edges[e].dst;
            if (seen[d]) continue;
            seen[d] = 1;
            via[d] = e;
            q.push_back(d);
        }
    }
    std::vector<int> edges;
    for (int c = target; c != lts.initial && via[c] >= 0; c = lts.edges[via[c]].src) edges.push_back(via[c]);
    std::reverse(edges.begin(), edges.end());
    moves.clear();
    for (int e : edges) moves.push_back(lts.edges[e].move);
    return edges;
}

// States from which some state in `goal` is reachable.
std::vector<char> can_reach(const Lts& lts, const std::vector<char>& goal) {
    std::vector<char> r = goal;
    std::deque<int> q;
    for (size_t i = 0; i < goal.size(); ++i)
        if (goal[i]) q.push_back(static_cast<int>(i));
    while (!q.empty()) {
        int c = q.front();
        q.pop_front();
        for (int e : lts.in[c]) {
            int s = lts.edges[e].src;
            if (!r[s]) {
                r[s] = 1;
                q.push_back(s);
            }
        }
    }
    return r;
}

// Tarjan, iterative.
std::vector<int> scc_ids(const Lts& lts) {
    int n = static_cast<int>(lts.states.size());
    std::vector<int> idx(n, -1), low(n, 0), comp(n, -1), stack;
    std::vector<char> on(n, 0);
    int counter = 0, ncomp = 0;
    for (int root = 0; root < n; ++root) {
        if (idx[root] >= 0) continue;
        std::vector<std::pair<int, size_t>> call{{root, 0}};
        idx[root] = low[root] = counter++;
        stack.push_back(root);
        on[root] = 1;
        while (!call.empty()) {
            auto& [v, i] = call.back();
            if (i < lts.out[v].size()) {
                int w = lts.edges[lts.out[v][i++]].dst;
                if (idx[w] < 0) {
                    idx[w] = low[w] = counter++;
                    stack.push_back(w);
                    on[w] = 1;
                    call.emplace_back(w, 0);
                } else if (on[w]) {
                    low[v] = std::min(low[v], idx[w]);
                }
                continue;
            }
            if (low[v] == idx[v]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on[w] = 0;
                    comp[w] = ncomp;
                } while (w != v);
                ++ncomp;
            }
            int done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    return comp;
}

bool place_set_empty(const State& s, const std::vector<int>& places) {
    for (int p : s.place)
        if (std::find(places.begin(), places.end(), p) != places.end()) return false;
    return true;
}

bool same_action(const Move& a, const Move& b) {
    return a.t == b.t && a.dir == b.dir && (a.dir == Dir::forward || a.key == b.key);
}

}  // namespace

bool matches(const Target& t, const State& s, bool ignore_history) {
    for (size_t tok = 0; tok < s.place.size(); ++tok) {
        int want = t.place[tok];
        int here = s.place[tok];
        if (want >= 0) {
            if (here != want) return false;
        } else if (!t.submarking || t.listed_place[here]) {
            return false;
        }
    }
    for (auto b : s.bonds) {
        bool relevant = !t.submarking || t.listed_place[s.place[b.a]];
        if (relevant && !std::binary_search(t.bonds.begin(), t.bonds.end(), b)) return false;
    }
    for (auto b : t.bonds)
        if (!s.has_bond(b.a, b.b)) return false;
    return ignore_history || history_equal(t, s);
}

bool covers(const Net& net, const State& s, const Target& t, bool ignore_history) {
    std::map<std::pair<int, int>, int> need, have;
    for (size_t tok = 0; tok < t.place.size(); ++tok)
        if (t.place[tok] >= 0) ++need[{t.place[tok], net.token_type(static_cast<int>(tok))}];
    for (size_t tok = 0; tok < s.place.size(); ++tok) ++have[{s.place[tok], net.token_type(static_cast<int>(tok))}];
    for (auto& [k, n] : need)
        if (have[k] < n) return false;
    if (ignore_history) return true;
    for (auto& [tr, keys] : t.history) {
        auto h = s.history(tr);
        for (int k : keys)
            if (!std::binary_search(h.begin(), h.end(), k)) return false;
    }
    return true;
}

int liveness_level(const Lts& lts, int t) {
    std::vector<char> src(lts.states.size(), 0);
    bool fires = false;
    for (const auto& e : lts.edges)
        if (e.move.t == t && e.move.dir == Dir::forward) {
            src[e.src] = 1;
            fires = true;
        }
    if (!fires) return 0;
    auto reach = can_reach(lts, src);
    if (std::all_of(reach.begin(), reach.end(), [](char c) { return c; })) return 4;
    auto comp = scc_ids(lts);
    for (const auto& e : lts.edges)
        if (e.move.t == t && e.move.dir == Dir::forward && comp[e.src] == comp[e.dst]) return 3;
    return 1;
}

Verdict check_property(const Engine& eng, const Lts& lts, const PropertyQuery& q) {
    const Net& net = eng.net();
    Verdict v;
    v.bounded = lts.truncated;
    size_t n = lts.states.size();
    auto witness = [&](int id) {
        v.state = id;
        parents_path(lts, id, v.witness);
    };
    auto need_target = [&]() -> const Target& {
        if (!q.target) throw std::invalid_argument(std::string(to_string(q.kind)) + " needs a target");
        return *q.target;
    };

    switch (q.kind) {
    case PropKind::reachability:
    case PropKind::coverability: {
        const Target& t = need_target();
        for (size_t i = 0; i < n; ++i) {
            bool ok = q.kind == PropKind::reachability ? matches(t, lts.states[i], q.ignore_history)
                                                       : covers(net, lts.states[i], t, q.ignore_history);
            if (ok) {
                v.holds = true;
                v.bounded = false;
                witness(static_cast<int>(i));
                v.detail = q.kind == PropKind::reachability ? "target reached" : "target covered";
                return v;
            }
        }
        v.detail = q.kind == PropKind::reachability ? "target not reachable" : "target not coverable";
        return v;
    }
    case PropKind::home_state: {
        const Target& t = need_target();
        std::vector<char> goal(n, 0);
        for (size_t i = 0; i < n; ++i) goal[i] = matches(t, lts.states[i], q.ignore_history);
        auto r = can_reach(lts, goal);
        for (size_t i = 0; i < n; ++i)
            if (!r[i]) {
                v.holds = false;
                witness(static_cast<int>(i));
                v.detail = "target unreachable from state " + std::to_string(i);
                return v;
            }
        v.holds = true;
        v.detail = "target reachable from every reachable state";
        return v;
    }
    case PropKind::deadlock: {
        for (size_t i = 0; i < n; ++i)
            if (lts.expanded[i] && lts.out[i].empty()) {
                v.holds = true;
                v.bounded = false;
                witness(static_cast<int>(i));
                v.detail = "deadlock at state " + std::to_string(i) + ": " + marking_text(net, lts.states[i]);
                return v;
            }
        v.detail = "no reachable deadlock";
        return v;
    }
    case PropKind::liveness: {
        v.holds = true;
        for (size_t t = 0; t < net.transitions.size(); ++t) {
            if (q.transition >= 0 && q.transition != static_cast<int>(t)) continue;
            int lv = liveness_level(lts, static_cast<int>(t));
            v.levels[static_cast<int>(t)] = lv;
            bool ok = q.level == 0 ? lv == 0 : lv >= q.level;
            if (!ok && v.holds) {
                v.holds = false;
                v.detail = net.transitions[t].name + " is only L" + std::to_string(lv) + "-live";
            }
        }
        if (v.holds) v.detail = q.level == 0 ? "dead" : "L" + std::to_string(q.level) + "-live";
        return v;
    }
    case PropKind::persistence: {
        for (size_t i = 0; i < n; ++i)
            for (int e1 : lts.out[i])
                for (int e2 : lts.out[i]) {
                    const Move& m1 = lts.edges[e1].move;
                    const Move& m2 = lts.edges[e2].move;
                    if (m1.t == m2.t) continue;
                    int d = lts.edges[e1].dst;
                    bool still = std::any_of(lts.out[d].begin(), lts.out[d].end(),
                                             [&](int e) { return same_action(lts.edges[e].move, m2); });
                    if (!still && lts.expanded[d]) {
                        v.holds = false;
                        v.bounded = false;
                        witness(static_cast<int>(i));
                        v.detail = move_label(net, m1) + " disables " + move_label(net, m2) + " at state " +
                                   std::to_string(i);
                        return v;
                    }
                }
        v.holds = true;
        v.detail = "no enabled move disables another";
        return v;
    }
    case PropKind::siphon:
    case PropKind::trap: {
        if (q.places.empty()) throw std::invalid_argument("place set must be non-empty");
        bool siphon = q.kind == PropKind::siphon;
        for (const auto& e : lts.edges) {
            bool before = place_set_empty(lts.states[e.src], q.places);
            bool after = place_set_empty(lts.states[e.dst], q.places);
            bool broken = siphon ? (before && !after) : (!before && after);
            if (broken) {
                v.holds = false;
                v.bounded = false;
                witness(e.dst);
                v.detail = move_label(net, e.move) + (siphon ? " marks the empty set" : " empties the marked set");
                return v;
            }
        }
        v.holds = true;
        v.detail = siphon ? "behaves as a siphon" : "behaves as a trap";
        return v;
    }
    }
    return v;
}

Verdict check_property(const Engine& eng, const PropertyQuery& q, const Bounds& b) {
    auto lts = build_lts(eng, eng.initial(), b);
    return check_property(eng, lts, q);
}

}  // namespace rpn
