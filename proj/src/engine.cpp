#include "rpn/engine.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace rpn {

const char* to_string(Dir d) { return d == Dir::forward ? "fwd" : "rev"; }

Engine::Engine(const Net& net, Interp interp)
    : net_(&net), interp_(interp), memory_(interp == Interp::individual && net.mode == Mode::variable) {
    effect_tokens_.resize(net.transitions.size());
    for (size_t t = 0; t < net.transitions.size(); ++t) {
        const auto& tr = net.transitions[t];
        for (int v : tr.effect_vars)
            if (tr.vars[v].fixed >= 0) effect_tokens_[t].push_back(tr.vars[v].fixed);
        std::sort(effect_tokens_[t].begin(), effect_tokens_[t].end());
    }
    by_type_.resize(net.types.size());
    for (size_t i = 0; i < net.tokens.size(); ++i) {
        int ty = net.token_type(static_cast<int>(i));
        if (ty >= 0) by_type_[ty].push_back(static_cast<int>(i));
    }
}

bool Engine::allows(Semantics sem) const {
    return interp_ == Interp::collective ? sem == Semantics::coll : sem != Semantics::coll;
}

std::vector<Bond> Engine::map_bonds(const std::vector<VarPair>& vp, const Binding& b) const {
    std::vector<Bond> r;
    for (auto [u, v] : vp) r.push_back(make_bond(b[u], b[v]));
    std::sort(r.begin(), r.end());
    return r;
}

namespace {

std::vector<Bond> apply_bonds(const std::vector<Bond>& cur, const std::vector<Bond>& remove,
                              const std::vector<Bond>& add) {
    std::vector<Bond> r;
    std::set_difference(cur.begin(), cur.end(), remove.begin(), remove.end(), std::back_inserter(r));
    std::vector<Bond> out;
    std::set_union(r.begin(), r.end(), add.begin(), add.end(), std::back_inserter(out));
    return out;
}

}  // namespace

// ---- forward ------------------------------------------------------------

bool Engine::forward_ok(const State& s, int t, const Binding& b) const {
    const Net& n = *net_;
    if (t < 0 || t >= static_cast<int>(n.transitions.size())) return false;
    const auto& tr = n.transitions[t];
    if (b.size() != tr.vars.size()) return false;
    std::set<int> used;
    for (int v : tr.guard_vars) {
        int tok = b[v];
        if (tok < 0 || tok >= static_cast<int>(n.tokens.size())) return false;
        if (tr.vars[v].fixed >= 0 ? tok != tr.vars[v].fixed : n.token_type(tok) != tr.vars[v].type) return false;
        if (s.place[tok] != tr.in_place[v]) return false;
        if (!used.insert(tok).second) return false;
    }
    for (const auto& a : tr.in) {
        for (auto [u, v] : a.bonds)
            if (!s.has_bond(b[u], b[v])) return false;
        // bonds between selected co-located tokens must be required by the arc
        for (size_t i = 0; i < a.vars.size(); ++i)
            for (size_t j = i + 1; j < a.vars.size(); ++j) {
                int u = a.vars[i], v = a.vars[j];
                if (!s.has_bond(b[u], b[v])) continue;
                VarPair p{std::min(u, v), std::max(u, v)};
                bool listed = std::any_of(a.bonds.begin(), a.bonds.end(), [&](VarPair q) {
                    return VarPair{std::min(q.first, q.second), std::max(q.first, q.second)} == p;
                });
                if (!listed) return false;
            }
        for (int tok : a.neg_tokens)
            if (s.place[tok] == a.place) return false;
        for (auto nb : a.neg_bonds)
            if (s.has_bond(nb.a, nb.b) && s.place[nb.a] == a.place) return false;
    }
    // no cloning
    auto nb = apply_bonds(s.bonds, map_bonds(tr.pre_bonds, b), map_bonds(tr.post_bonds, b));
    auto comp = component_ids(static_cast<int>(n.tokens.size()), nb);
    std::vector<int> dest(n.tokens.size(), -1);
    for (int v : tr.effect_vars) {
        int c = comp[b[v]];
        if (dest[c] >= 0 && dest[c] != tr.out_place[v]) return false;
        dest[c] = tr.out_place[v];
    }
    return true;
}

std::vector<Binding> Engine::enabled_forward(const State& s, int t) const {
    const Net& n = *net_;
    if (t < 0 || t >= static_cast<int>(n.transitions.size())) throw Error("unknown transition");
    const auto& tr = n.transitions[t];
    std::vector<Binding> out;
    Binding b(tr.vars.size(), -1);
    std::vector<char> used(n.tokens.size(), 0);
    std::vector<int> order = tr.guard_vars;  // variable order is name order

    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == order.size()) {
            if (forward_ok(s, t, b)) out.push_back(b);
            return;
        }
        int v = order[i];
        const Var& var = tr.vars[v];
        auto try_tok = [&](int tok) {
            if (used[tok] || s.place[tok] != tr.in_place[v]) return;
            b[v] = tok;
            used[tok] = 1;
            rec(i + 1);
            used[tok] = 0;
            b[v] = -1;
        };
        if (var.fixed >= 0) {
            try_tok(var.fixed);
        } else if (var.type >= 0) {
            for (int tok : by_type_[var.type]) try_tok(tok);
        }
    };
    rec(0);
    return out;
}

State Engine::fire_forward(const State& s, int t, const Binding& b) const {
    if (!forward_ok(s, t, b)) throw Error("stale assignment");
    const Net& n = *net_;
    const auto& tr = n.transitions[t];
    int ntok = static_cast<int>(n.tokens.size());
    State r = s;
    int k = s.max_key() + 1;

    if (n.mode == Mode::ground && interp_ == Interp::individual) {
        auto comp = component_ids(ntok, s.bonds);
        std::set<int> used_comps;
        for (int v : tr.guard_vars) used_comps.insert(comp[b[v]]);
        for (const auto& o : s.live) {
            bool dep = false;
            for (int tok : effect_tokens_[o.t])
                if (used_comps.count(comp[tok])) dep = true;
            if (dep) r.prec.emplace_back(o.key, k);
        }
        std::sort(r.prec.begin(), r.prec.end());
    }

    r.bonds = apply_bonds(s.bonds, map_bonds(tr.pre_bonds, b), map_bonds(tr.post_bonds, b));
    auto comp = component_ids(ntok, r.bonds);
    std::vector<int> dest(ntok, -1), var_of(ntok, -1);
    for (int v : tr.effect_vars) {
        dest[comp[b[v]]] = tr.out_place[v];
        var_of[b[v]] = v;
    }
    for (int tok = 0; tok < ntok; ++tok) {
        int d = dest[comp[tok]];
        if (d < 0) continue;
        r.place[tok] = d;
        if (memory_) r.mem[tok].push_back(Record{k, var_of[tok]});
    }
    r.live.push_back(Occ{t, k});
    return r;
}

// ---- reverse ------------------------------------------------------------

bool Engine::has_direct_dependent(const State& s, Occ o) const {
    if (interp_ == Interp::collective) return false;
    if (!memory_) {
        for (auto [a, b] : s.prec)
            if (a == o.key) return true;
        return false;
    }
    for (const auto& m : s.mem) {
        bool has_k = false;
        for (auto r : m) has_k = has_k || r.key == o.key;
        if (!has_k) continue;
        for (auto r : m)
            if (r.key > o.key && s.find(r.key)) return true;
    }
    return false;
}

std::vector<std::pair<int, int>> Engine::direct_prec(const State& s) const {
    if (!memory_) return interp_ == Interp::collective ? std::vector<std::pair<int, int>>{} : s.prec;
    std::set<std::pair<int, int>> r;
    for (const auto& m : s.mem)
        for (size_t i = 0; i < m.size(); ++i)
            for (size_t j = i + 1; j < m.size(); ++j)
                if (m[i].key < m[j].key) r.insert({m[i].key, m[j].key});
    return {r.begin(), r.end()};
}

std::vector<Occ> Engine::causal_dependents(const State& s, Occ o) const {
    auto pairs = direct_prec(s);
    std::set<int> reach{o.key};
    bool grew = true;
    while (grew) {
        grew = false;
        for (auto [a, b] : pairs)
            if (reach.count(a) && !reach.count(b)) {
                reach.insert(b);
                grew = true;
            }
    }
    std::vector<Occ> r;
    for (int k : reach)
        if (k != o.key)
            if (const Occ* p = s.find(k)) r.push_back(*p);
    return r;
}

bool Engine::oco_guards(const State& s, Occ o, const Binding& b) const {
    const Net& n = *net_;
    const auto& tr = n.transitions[o.t];
    // An effect on a bond instance must not have been reverted by a later live occurrence.
    auto later_touches = [&](Bond bond, bool want_created) {
        for (const auto& lo : s.live) {
            if (lo.key <= o.key) continue;
            const auto& lt = n.transitions[lo.t];
            const auto& pairs = want_created ? lt.created : lt.broken;
            if (pairs.empty()) continue;
            if (memory_) {
                // variables of the later occurrence held by the two tokens
                int ua = -2, ub = -2;
                for (auto r : s.mem[bond.a])
                    if (r.key == lo.key) ua = r.var;
                for (auto r : s.mem[bond.b])
                    if (r.key == lo.key) ub = r.var;
                if (ua < 0 || ub < 0) continue;
                VarPair p{std::min(ua, ub), std::max(ua, ub)};
                if (std::find(pairs.begin(), pairs.end(), p) != pairs.end()) return true;
            } else {
                for (auto [u, v] : pairs)
                    if (make_bond(lt.vars[u].fixed, lt.vars[v].fixed) == bond) return true;
            }
        }
        return false;
    };
    for (auto [u, v] : tr.broken)
        if (later_touches(make_bond(b[u], b[v]), true)) return false;
    for (auto [u, v] : tr.created)
        if (later_touches(make_bond(b[u], b[v]), false)) return false;
    return true;
}

bool Engine::coll_check(const State& s, int t, const Binding& b) const {
    const Net& n = *net_;
    const auto& tr = n.transitions[t];
    std::set<int> used;
    for (int v : tr.effect_vars) {
        int tok = b[v];
        if (tok < 0) return false;
        if (tr.vars[v].fixed >= 0 ? tok != tr.vars[v].fixed : n.token_type(tok) != tr.vars[v].type) return false;
        if (s.place[tok] != tr.out_place[v]) return false;
        if (!used.insert(tok).second) return false;
    }
    for (const auto& a : tr.out) {
        for (auto [u, v] : a.bonds)
            if (!s.has_bond(b[u], b[v])) return false;
        for (size_t i = 0; i < a.vars.size(); ++i)
            for (size_t j = i + 1; j < a.vars.size(); ++j) {
                int u = a.vars[i], v = a.vars[j];
                if (!s.has_bond(b[u], b[v])) continue;
                VarPair p{std::min(u, v), std::max(u, v)};
                bool listed = std::any_of(a.bonds.begin(), a.bonds.end(), [&](VarPair q) {
                    return VarPair{std::min(q.first, q.second), std::max(q.first, q.second)} == p;
                });
                if (!listed) return false;
            }
    }
    auto nb = apply_bonds(s.bonds, map_bonds(tr.post_bonds, b), map_bonds(tr.pre_bonds, b));
    auto comp = component_ids(static_cast<int>(n.tokens.size()), nb);
    std::vector<int> dest(n.tokens.size(), -1);
    for (int v : tr.guard_vars) {
        int c = comp[b[v]];
        if (dest[c] >= 0 && dest[c] != tr.in_place[v]) return false;
        dest[c] = tr.in_place[v];
    }
    return true;
}

std::vector<Binding> Engine::reverse_bindings(const State& s, Occ o, Semantics sem) const {
    if (!allows(sem)) throw Error(std::string("semantics ") + to_string(sem) + " not available under the " +
                                  to_string(interp_) + " interpretation");
    const Occ* live = s.find(o.key);
    if (!live || live->t != o.t) return {};
    const Net& n = *net_;
    const auto& tr = n.transitions[o.t];
    std::vector<Binding> out;

    if (sem == Semantics::coll) {
        Binding b(tr.vars.size(), -1);
        std::vector<char> used(n.tokens.size(), 0);
        const auto& order = tr.effect_vars;
        std::function<void(size_t)> rec = [&](size_t i) {
            if (i == order.size()) {
                if (coll_check(s, o.t, b)) out.push_back(b);
                return;
            }
            int v = order[i];
            auto try_tok = [&](int tok) {
                if (used[tok] || s.place[tok] != tr.out_place[v]) return;
                b[v] = tok;
                used[tok] = 1;
                rec(i + 1);
                used[tok] = 0;
                b[v] = -1;
            };
            if (tr.vars[v].fixed >= 0)
                try_tok(tr.vars[v].fixed);
            else
                for (int tok : by_type_[tr.vars[v].type]) try_tok(tok);
        };
        rec(0);
        return out;
    }

    // individual interpretation: the binding is determined by the occurrence
    Binding b(tr.vars.size(), -1);
    for (int v : tr.effect_vars) {
        if (!memory_) {
            b[v] = tr.vars[v].fixed;
            continue;
        }
        for (size_t tok = 0; tok < s.mem.size() && b[v] < 0; ++tok) {
            const auto& m = s.mem[tok];
            if (sem == Semantics::oco) {
                for (auto r : m)
                    if (r.key == o.key && r.var == v) b[v] = static_cast<int>(tok);
            } else if (!m.empty() && m.back() == Record{o.key, v}) {
                b[v] = static_cast<int>(tok);
            }
        }
        if (b[v] < 0) return {};
    }
    if (reverse_check(s, o, b, sem)) out.push_back(b);
    return out;
}

bool Engine::reverse_check(const State& s, Occ o, const Binding& b, Semantics sem) const {
    const Net& n = *net_;
    const auto& tr = n.transitions[o.t];
    if (sem == Semantics::bt && o.key != s.max_key()) return false;
    if (sem == Semantics::causal && has_direct_dependent(s, o)) return false;
    if (sem == Semantics::oco) {
        if (memory_)
            for (const auto& a : tr.out)
                for (auto [u, v] : a.bonds)
                    if (!s.has_bond(b[u], b[v])) return false;
        return oco_guards(s, o, b);
    }
    for (const auto& a : tr.out) {
        for (int v : a.vars)
            if (s.place[b[v]] != a.place) return false;
        for (auto [u, v] : a.bonds)
            if (!s.has_bond(b[u], b[v])) return false;
    }
    return true;
}

std::vector<std::pair<Occ, Binding>> Engine::enabled_reverse(const State& s, Semantics sem) const {
    std::vector<std::pair<Occ, Binding>> r;
    for (const auto& o : s.live)
        for (auto& b : reverse_bindings(s, o, sem)) r.emplace_back(o, std::move(b));
    return r;
}

void Engine::drop_occurrence(State& r, int key) const {
    r.live.erase(std::remove_if(r.live.begin(), r.live.end(), [&](const Occ& x) { return x.key == key; }),
                 r.live.end());
    r.prec.erase(std::remove_if(r.prec.begin(), r.prec.end(),
                                [&](const std::pair<int, int>& p) { return p.first == key || p.second == key; }),
                 r.prec.end());
    if (memory_)
        for (auto& m : r.mem)
            m.erase(std::remove_if(m.begin(), m.end(), [&](const Record& x) { return x.key == key; }), m.end());
}

State Engine::reverse_to_inputs(const State& s, Occ o, const Binding& b) const {
    const Net& n = *net_;
    const auto& tr = n.transitions[o.t];
    int ntok = static_cast<int>(n.tokens.size());
    State r = s;
    r.bonds = apply_bonds(s.bonds, map_bonds(tr.post_bonds, b), map_bonds(tr.pre_bonds, b));
    auto comp = component_ids(ntok, r.bonds);
    std::vector<int> dest(ntok, -1);
    for (int v : tr.guard_vars) {
        int c = comp[b[v]];
        if (dest[c] >= 0 && dest[c] != tr.in_place[v]) throw Error("cloning on reversal");
        dest[c] = tr.in_place[v];
    }
    for (int tok = 0; tok < ntok; ++tok)
        if (dest[comp[tok]] >= 0) r.place[tok] = dest[comp[tok]];
    drop_occurrence(r, o.key);
    return r;
}

std::optional<Occ> Engine::last_occurrence(const State& s, const Component& c) const {
    std::optional<Occ> best;
    if (memory_) {
        for (int tok : c.tokens)
            for (auto r : s.mem[tok])
                if (r.var >= 0 && (!best || r.key > best->key))
                    if (const Occ* o = s.find(r.key)) best = *o;
        return best;
    }
    for (const auto& o : s.live) {
        const auto& eff = effect_tokens_[o.t];
        bool meets = std::any_of(c.tokens.begin(), c.tokens.end(),
                                 [&](int tok) { return std::binary_search(eff.begin(), eff.end(), tok); });
        if (meets && (!best || o.key > best->key)) best = o;
    }
    return best;
}

int Engine::last_place(const State& s, const Component& c) const {
    const Net& n = *net_;
    auto last = last_occurrence(s, c);
    if (!last) {
        if (c.tokens.empty()) return -1;
        int p = n.init_place[c.tokens.front()];
        for (int tok : c.tokens)
            if (n.init_place[tok] != p) return -1;
        for (auto b : c.bonds)
            if (!std::binary_search(n.init_bonds.begin(), n.init_bonds.end(), b)) return -1;
        return p;
    }
    const auto& tr = n.transitions[last->t];
    std::set<int> cand;
    if (memory_) {
        for (int tok : c.tokens)
            for (auto r : s.mem[tok])
                if (r.key == last->key && r.var >= 0 && tr.out_place[r.var] >= 0) cand.insert(tr.out_place[r.var]);
    } else {
        for (const auto& a : tr.out)
            for (int v : a.vars)
                if (std::binary_search(c.tokens.begin(), c.tokens.end(), tr.vars[v].fixed)) cand.insert(a.place);
    }
    return cand.size() == 1 ? *cand.begin() : -1;
}

State Engine::reverse_oco(const State& s, Occ o, const Binding& b) const {
    const Net& n = *net_;
    const auto& tr = n.transitions[o.t];
    int ntok = static_cast<int>(n.tokens.size());
    State r = s;
    r.bonds = apply_bonds(s.bonds, map_bonds(tr.post_bonds, b), map_bonds(tr.pre_bonds, b));
    drop_occurrence(r, o.key);
    auto comp = component_ids(ntok, r.bonds);

    std::vector<int> roots;
    if (memory_) {
        for (int tok = 0; tok < ntok; ++tok)
            if (comp[tok] == tok) roots.push_back(tok);
    } else {
        std::set<int> rs;
        for (int v : tr.effect_vars) rs.insert(comp[b[v]]);
        roots.assign(rs.begin(), rs.end());
    }
    for (int root : roots) {
        Component c;
        for (int tok = 0; tok < ntok; ++tok)
            if (comp[tok] == root) c.tokens.push_back(tok);
        for (auto bd : r.bonds)
            if (comp[bd.a] == root) c.bonds.push_back(bd);
        int p = last_place(r, c);
        if (p < 0) throw Error("unrelocatable component");
        if (memory_) {
            auto last = last_occurrence(r, c);
            int lk = last ? last->key : 0;
            for (int tok : c.tokens) {
                auto& m = r.mem[tok];
                m.erase(std::remove_if(m.begin(), m.end(), [&](const Record& x) { return x.key > lk; }), m.end());
            }
        }
        for (int tok : c.tokens) r.place[tok] = p;
    }
    return r;
}

State Engine::fire_reverse(const State& s, Occ o, const Binding& b, Semantics sem) const {
    auto options = reverse_bindings(s, o, sem);
    if (std::find(options.begin(), options.end(), b) == options.end()) throw Error("stale occurrence");
    if (sem == Semantics::oco) return reverse_oco(s, o, b);
    return reverse_to_inputs(s, o, b);
}

std::vector<Move> Engine::moves(const State& s, Semantics sem, bool forward, bool reverse) const {
    if (reverse && !allows(sem))
        throw Error(std::string("semantics ") + to_string(sem) + " not available under the " + to_string(interp_) +
                    " interpretation");
    std::vector<Move> r;
    if (forward)
        for (size_t t = 0; t < net_->transitions.size(); ++t)
            for (auto& b : enabled_forward(s, static_cast<int>(t)))
                r.push_back(Move{Dir::forward, static_cast<int>(t), 0, sem, std::move(b)});
    if (reverse)
        for (auto& [o, b] : enabled_reverse(s, sem)) r.push_back(Move{Dir::reverse, o.t, o.key, sem, std::move(b)});
    return r;
}

State Engine::apply(const State& s, const Move& m) const {
    if (m.dir == Dir::forward) return fire_forward(s, m.t, m.binding);
    return fire_reverse(s, Occ{m.t, m.key}, m.binding, m.sem);
}

}  // namespace rpn
