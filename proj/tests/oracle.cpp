#include "oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "rpn/control.hpp"

namespace rpntest {

using namespace rpn;

namespace {

int lookup(const Graph& g, const State& s) {
    for (size_t i = 0; i < g.states.size(); ++i)
        if (g.states[i] == s) return static_cast<int>(i);
    return -1;
}

std::vector<char> reach_from(const Graph& g, int from) {
    std::vector<char> seen(g.states.size(), 0);
    std::function<void(int)> go = [&](int v) {
        if (seen[v]) return;
        seen[v] = 1;
        for (auto& [m, d] : g.succ[v]) go(d);
    };
    go(from);
    return seen;
}

bool same_place_and_bonds(const Target& t, const State& s) {
    for (size_t tok = 0; tok < s.place.size(); ++tok) {
        if (t.place[tok] >= 0) {
            if (s.place[tok] != t.place[tok]) return false;
        } else if (!t.submarking || t.listed_place[s.place[tok]]) {
            return false;
        }
    }
    std::set<Bond> want(t.bonds.begin(), t.bonds.end()), have;
    for (auto b : s.bonds)
        if (!t.submarking || t.listed_place[s.place[b.a]]) have.insert(b);
    return want == have;
}

std::map<int, std::vector<int>> history_of(const State& s) {
    std::map<int, std::vector<int>> h;
    for (auto o : s.live) h[o.t].push_back(o.key);
    return h;
}

std::map<int, std::vector<int>> nonempty(const std::map<int, std::vector<int>>& h) {
    std::map<int, std::vector<int>> r;
    for (auto& [t, ks] : h)
        if (!ks.empty()) r[t] = ks;
    return r;
}

bool target_equal(const Target& t, const State& s, bool ignore_history) {
    if (!same_place_and_bonds(t, s)) return false;
    return ignore_history || nonempty(t.history) == nonempty(history_of(s));
}

bool target_covered(const Net& net, const Target& t, const State& s, bool ignore_history) {
    std::map<std::pair<int, int>, int> count;
    for (size_t tok = 0; tok < s.place.size(); ++tok) ++count[{s.place[tok], net.token_type(static_cast<int>(tok))}];
    for (size_t tok = 0; tok < t.place.size(); ++tok)
        if (t.place[tok] >= 0 && --count[{t.place[tok], net.token_type(static_cast<int>(tok))}] < 0) return false;
    if (ignore_history) return true;
    auto h = history_of(s);
    for (auto& [tr, ks] : t.history)
        for (int k : ks)
            if (std::find(h[tr].begin(), h[tr].end(), k) == h[tr].end()) return false;
    return true;
}

int level_of(const Graph& g, int t) {
    int n = static_cast<int>(g.states.size());
    std::vector<char> src(n, 0);
    bool any = false;
    for (int v = 0; v < n; ++v)
        for (auto& [m, d] : g.succ[v])
            if (m.t == t && m.dir == Dir::forward) src[v] = any = true;
    if (!any) return 0;
    bool everywhere = true;
    for (int v = 0; v < n && everywhere; ++v) {
        auto r = reach_from(g, v);
        bool hit = false;
        for (int w = 0; w < n; ++w) hit = hit || (r[w] && src[w]);
        everywhere = hit;
    }
    if (everywhere) return 4;
    for (int v = 0; v < n; ++v)
        for (auto& [m, d] : g.succ[v])
            if (m.t == t && m.dir == Dir::forward && reach_from(g, d)[v]) return 3;
    return 1;
}

}  // namespace

Graph enumerate(const Engine& eng, Semantics sem, int cap) {
    Graph g;
    std::function<int(const State&)> visit = [&](const State& s) -> int {
        int id = lookup(g, s);
        if (id >= 0) return id;
        if (static_cast<int>(g.states.size()) >= cap) {
            g.complete = false;
            return -1;
        }
        id = static_cast<int>(g.states.size());
        g.states.push_back(s);
        g.succ.emplace_back();
        for (const auto& m : controlled_moves(eng, s, sem, true, true)) {
            State next;
            try {
                next = eng.apply(s, m);
            } catch (const Error&) {
                continue;
            }
            int d = visit(next);
            if (d >= 0) g.succ[id].emplace_back(m, d);
        }
        return id;
    };
    visit(eng.initial());
    return g;
}

OracleVerdict oracle_check(const Engine& eng, const Graph& g, const PropertyQuery& q) {
    OracleVerdict v;
    int n = static_cast<int>(g.states.size());
    switch (q.kind) {
    case PropKind::reachability:
        for (const auto& s : g.states) v.holds = v.holds || target_equal(*q.target, s, q.ignore_history);
        break;
    case PropKind::coverability:
        for (const auto& s : g.states) v.holds = v.holds || target_covered(eng.net(), *q.target, s, q.ignore_history);
        break;
    case PropKind::deadlock:
        for (int i = 0; i < n; ++i) v.holds = v.holds || g.succ[i].empty();
        break;
    case PropKind::home_state: {
        v.holds = true;
        for (int i = 0; i < n && v.holds; ++i) {
            auto r = reach_from(g, i);
            bool hit = false;
            for (int j = 0; j < n; ++j) hit = hit || (r[j] && target_equal(*q.target, g.states[j], q.ignore_history));
            v.holds = hit;
        }
        break;
    }
    case PropKind::liveness:
        v.holds = true;
        for (int t = 0; t < static_cast<int>(eng.net().transitions.size()); ++t) {
            if (q.transition >= 0 && q.transition != t) continue;
            int lv = level_of(g, t);
            v.levels[t] = lv;
            if (q.level == 0 ? lv != 0 : lv < q.level) v.holds = false;
        }
        break;
    case PropKind::persistence:
        v.holds = true;
        for (int i = 0; i < n; ++i)
            for (auto& [m1, d] : g.succ[i])
                for (auto& [m2, d2] : g.succ[i]) {
                    if (m1.t == m2.t) continue;
                    bool still = false;
                    for (auto& [m3, d3] : g.succ[d])
                        still = still || (m3.t == m2.t && m3.dir == m2.dir && (m2.dir == Dir::forward || m3.key == m2.key));
                    if (!still) v.holds = false;
                }
        break;
    case PropKind::siphon:
    case PropKind::trap: {
        auto empty = [&](const State& s) {
            for (int p : s.place)
                if (std::find(q.places.begin(), q.places.end(), p) != q.places.end()) return false;
            return true;
        };
        v.holds = true;
        for (int i = 0; i < n; ++i)
            for (auto& [m, d] : g.succ[i]) {
                bool a = empty(g.states[i]), b = empty(g.states[d]);
                if (q.kind == PropKind::siphon ? (a && !b) : (!a && b)) v.holds = false;
            }
        break;
    }
    }
    return v;
}

}  // namespace rpntest
