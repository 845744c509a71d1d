#include "rpn/causal.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace rpn {

namespace {

// Transitive closure of ≺ as a key -> successors map.
std::map<int, std::set<int>> closure(const Engine& eng, const State& s) {
    std::map<int, std::set<int>> succ;
    for (const auto& o : s.live) succ[o.key];
    for (auto [a, b] : eng.direct_prec(s))
        if (s.find(a) && s.find(b)) succ[a].insert(b);
    bool grew = true;
    while (grew) {
        grew = false;
        for (auto& [a, bs] : succ) {
            std::set<int> add;
            for (int b : bs)
                for (int c : succ[b])
                    if (!bs.count(c)) add.insert(c);
            if (!add.empty()) {
                bs.insert(add.begin(), add.end());
                grew = true;
            }
        }
    }
    return succ;
}

}  // namespace

std::vector<std::vector<Occ>> causal_paths(const Engine& eng, const State& s) {
    auto succ = closure(eng, s);
    // covering pairs: a ≺ b with no c between
    std::map<int, std::vector<int>> cover;
    std::set<int> has_pred;
    for (auto& [a, bs] : succ)
        for (int b : bs) {
            bool direct = std::none_of(bs.begin(), bs.end(), [&](int c) { return c != b && succ[c].count(b); });
            if (direct) {
                cover[a].push_back(b);
                has_pred.insert(b);
            }
        }
    std::vector<std::vector<Occ>> out;
    std::vector<Occ> path;
    std::function<void(int)> walk = [&](int k) {
        path.push_back(*s.find(k));
        if (cover[k].empty()) out.push_back(path);
        for (int n : cover[k]) walk(n);
        path.pop_back();
    };
    for (const auto& o : s.live)
        if (!has_pred.count(o.key)) walk(o.key);
    return out;
}

bool states_causally_equivalent(const Engine& eng, const State& s1, const State& s2) {
    if (s1.place != s2.place || s1.bonds != s2.bonds) return false;
    if (s1.live.size() != s2.live.size() || s1.mem.size() != s2.mem.size()) return false;
    for (size_t i = 0; i < s1.mem.size(); ++i) {
        if (s1.mem[i].size() != s2.mem[i].size()) return false;
        for (size_t j = 0; j < s1.mem[i].size(); ++j)
            if (s1.mem[i][j].var != s2.mem[i][j].var) return false;
    }
    std::map<int, int> t1, t2;
    for (auto o : s1.live) t1[o.key] = o.t;
    for (auto o : s2.live) t2[o.key] = o.t;

    // Memory positions pin the renaming down directly.
    std::map<int, int> pi, inv;
    auto bind = [&](int a, int b) {
        auto x = pi.find(a);
        auto y = inv.find(b);
        if (x != pi.end() || y != inv.end())
            return x != pi.end() && y != inv.end() && x->second == b && y->second == a;
        if (!t1.count(a) || !t2.count(b) || t1[a] != t2[b]) return false;
        pi[a] = b;
        inv[b] = a;
        return true;
    };
    for (size_t i = 0; i < s1.mem.size(); ++i)
        for (size_t j = 0; j < s1.mem[i].size(); ++j)
            if (!bind(s1.mem[i][j].key, s2.mem[i][j].key)) return false;

    auto c1 = closure(eng, s1), c2 = closure(eng, s2);
    std::vector<int> free1;
    std::set<int> taken;
    for (auto o : s1.live)
        if (!pi.count(o.key)) free1.push_back(o.key);
    for (auto& [b, a] : inv) taken.insert(b);

    auto consistent = [&]() {
        for (auto& [a, succ] : c1) {
            auto ia = pi.find(a);
            if (ia == pi.end()) continue;
            for (int b : succ) {
                auto ib = pi.find(b);
                if (ib != pi.end() && !c2[ia->second].count(ib->second)) return false;
            }
        }
        for (auto& [a, succ] : c2) {
            auto ia = inv.find(a);
            if (ia == inv.end()) continue;
            for (int b : succ) {
                auto ib = inv.find(b);
                if (ib != inv.end() && !c1[ia->second].count(ib->second)) return false;
            }
        }
        return true;
    };
    if (!consistent()) return false;

    // Remaining keys carry no memory; match them by transition and order.
    std::function<bool(size_t)> rec = [&](size_t i) {
        if (i == free1.size()) return true;
        int a = free1[i];
        for (auto o : s2.live) {
            if (taken.count(o.key) || o.t != t1[a]) continue;
            pi[a] = o.key;
            inv[o.key] = a;
            taken.insert(o.key);
            if (consistent() && rec(i + 1)) return true;
            pi.erase(a);
            inv.erase(o.key);
            taken.erase(o.key);
        }
        return false;
    };
    return rec(0);
}

}  // namespace rpn
