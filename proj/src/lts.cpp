#include "rpn/lts.hpp"

#include <deque>
#include <sstream>

#include "rpn/control.hpp"
#include "rpn/netfile.hpp"

namespace rpn {

int Lts::find(const State& s) const {
    auto it = index.find(encode(s));
    return it == index.end() ? -1 : it->second;
}

std::vector<Move> lts_moves(const Engine& eng, const State& s, const Bounds& b) {
    if (b.controlled) return controlled_moves(eng, s, b.sem, true, !b.forward_only);
    return eng.moves(s, b.sem, true, !b.forward_only);
}

Lts build_lts(const Engine& eng, const State& init, const Bounds& b) {
    Lts l;
    auto add = [&](const State& s, int d) {
        auto key = encode(s);
        auto it = l.index.find(key);
        if (it != l.index.end()) return it->second;
        int id = static_cast<int>(l.states.size());
        l.index.emplace(std::move(key), id);
        l.states.push_back(s);
        l.depth.push_back(d);
        l.expanded.push_back(0);
        l.out.emplace_back();
        l.in.emplace_back();
        return id;
    };
    add(init, 0);
    std::deque<int> todo{0};
    while (!todo.empty()) {
        int cur = todo.front();
        todo.pop_front();
        if (b.max_depth >= 0 && l.depth[cur] >= b.max_depth) {
            if (!lts_moves(eng, l.states[cur], b).empty()) l.truncated = true;
            continue;
        }
        State here = l.states[cur];
        bool complete = true;
        for (auto& m : lts_moves(eng, here, b)) {
            State next;
            try {
                next = eng.apply(here, m);
            } catch (const Error&) {
                ++l.skipped;
                continue;
            }
            int dst = l.find(next);
            if (dst < 0) {
                if (static_cast<int>(l.states.size()) >= b.max_states) {
                    l.truncated = l.state_cap = true;
                    complete = false;
                    continue;
                }
                dst = add(next, l.depth[cur] + 1);
                todo.push_back(dst);
            }
            int eid = static_cast<int>(l.edges.size());
            l.edges.push_back(Edge{cur, std::move(m), dst});
            l.out[cur].push_back(eid);
            l.in[dst].push_back(eid);
        }
        l.expanded[cur] = complete;
    }
    return l;
}

std::string move_label(const Net& net, const Move& m) {
    const auto& tr = net.transitions[m.t];
    std::string r = tr.name;
    if (net.mode == Mode::variable) {
        std::string inner;
        for (size_t v = 0; v < tr.vars.size(); ++v) {
            if (v >= m.binding.size() || m.binding[v] < 0) continue;
            if (!inner.empty()) inner += ",";
            inner += tr.vars[v].name + "=" + net.tokens[m.binding[v]].name;
        }
        r += "[" + inner + "]";
    }
    return r + ":" + to_string(m.dir);
}

std::string export_text(const Net& net, const Lts& lts) {
    std::ostringstream os;
    for (size_t i = 0; i < lts.states.size(); ++i)
        os << "STATE " << i << " " << state_json(net, lts.states[i]).dump() << "\n";
    for (const auto& e : lts.edges)
        os << "EDGE " << e.src << " " << net.transitions[e.move.t].name << ":"
           << (e.move.dir == Dir::forward ? lts.states[e.dst].max_key() : e.move.key) << ":" << to_string(e.move.dir)
           << " " << e.dst << "\n";
    if (lts.truncated) os << "TRUNCATED\n";
    return os.str();
}

std::string export_dot(const Net& net, const Lts& lts) {
    std::ostringstream os;
    os << "digraph lts {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (size_t i = 0; i < lts.states.size(); ++i) {
        std::string tip = marking_text(net, lts.states[i]);
        for (auto& c : tip)
            if (c == '"') c = '\'';
        os << "  s" << i << " [label=\"" << i << "\", tooltip=\"" << tip << "\""
           << (static_cast<int>(i) == lts.initial ? ", shape=doublecircle" : "") << "];\n";
    }
    for (const auto& e : lts.edges) {
        int k = e.move.dir == Dir::forward ? lts.states[e.dst].max_key() : e.move.key;
        os << "  s" << e.src << " -> s" << e.dst << " [label=\"" << net.transitions[e.move.t].name << "," << k
           << (e.move.dir == Dir::reverse ? ",rev" : "") << "\""
           << (e.move.dir == Dir::reverse ? ", style=dashed" : "") << "];\n";
    }
    os << "}\n";
    return os.str();
}

LabelledGraph graph_of(const Net& net, const Lts& lts) {
    LabelledGraph g;
    g.n = static_cast<int>(lts.states.size());
    g.initial = lts.initial;
    for (const auto& e : lts.edges) g.edges.emplace_back(e.src, move_label(net, e.move), e.dst);
    return g;
}

std::optional<IsoMap> lts_isomorphic_reachable(const Net& na, const Lts& a, const Net& nb, const Lts& b) {
    if (a.state_cap || b.state_cap) throw Error("isomorphism needs LTSs explored without a state cap");
    return isomorphic(graph_of(na, a), graph_of(nb, b));
}

}  // namespace rpn
