#include "rpn/state.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rpn {

bool memory_contains(const Instance& a, const Instance& b) {
    if (a.base != b.base || a.mem.size() > b.mem.size()) return false;
    return std::equal(a.mem.begin(), a.mem.end(), b.mem.begin());
}

Instance memory_drop(const Instance& a, int key) {
    Instance r = a;
    auto it = std::find_if(r.mem.begin(), r.mem.end(), [&](const Record& x) { return x.key == key; });
    if (it == r.mem.end()) throw std::invalid_argument("no such memory record");
    r.mem.erase(it);
    return r;
}

const Occ* State::find(int key) const {
    auto it = std::lower_bound(live.begin(), live.end(), key, [](const Occ& o, int k) { return o.key < k; });
    return it != live.end() && it->key == key ? &*it : nullptr;
}

std::vector<int> State::history(int t) const {
    std::vector<int> ks;
    for (const auto& o : live)
        if (o.t == t) ks.push_back(o.key);
    return ks;
}

bool State::has_bond(int a, int b) const {
    return std::binary_search(bonds.begin(), bonds.end(), make_bond(a, b));
}

std::vector<int> State::tokens_in(int p) const {
    std::vector<int> r;
    for (size_t i = 0; i < place.size(); ++i)
        if (place[i] == p) r.push_back(static_cast<int>(i));
    return r;
}

void bonds_insert(std::vector<Bond>& v, Bond b) {
    auto it = std::lower_bound(v.begin(), v.end(), b);
    if (it == v.end() || *it != b) v.insert(it, b);
}

void bonds_erase(std::vector<Bond>& v, Bond b) {
    auto it = std::lower_bound(v.begin(), v.end(), b);
    if (it != v.end() && *it == b) v.erase(it);
}

Component connected(int seed, const std::vector<int>& pool_tokens, const std::vector<Bond>& pool_bonds) {
    Component c;
    bool seed_in = std::find(pool_tokens.begin(), pool_tokens.end(), seed) != pool_tokens.end();
    std::vector<int> todo{seed}, seen{seed};
    std::vector<Bond> bonds;
    while (!todo.empty()) {
        int x = todo.back();
        todo.pop_back();
        for (auto b : pool_bonds) {
            if (b.a != x && b.b != x) continue;
            bonds.push_back(b);
            int y = b.a == x ? b.b : b.a;
            if (std::find(seen.begin(), seen.end(), y) == seen.end()) {
                seen.push_back(y);
                todo.push_back(y);
            }
        }
    }
    if (!seed_in && bonds.empty()) return c;
    std::sort(seen.begin(), seen.end());
    std::sort(bonds.begin(), bonds.end());
    bonds.erase(std::unique(bonds.begin(), bonds.end()), bonds.end());
    c.tokens = std::move(seen);
    c.bonds = std::move(bonds);
    return c;
}

std::vector<int> component_ids(int n, const std::vector<Bond>& bonds) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto b : bonds) {
        int ra = root(b.a), rb = root(b.b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
    for (int i = 0; i < n; ++i) parent[i] = root(i);
    return parent;
}

State initial_state(const Net& net) {
    State s;
    s.place = net.init_place;
    s.bonds = net.init_bonds;
    s.mem.assign(net.tokens.size(), {});
    return s;
}

std::string encode(const State& s) {
    std::vector<int> v;
    v.reserve(s.place.size() * 2 + s.bonds.size() * 2 + s.live.size() * 2 + 8);
    v.push_back(static_cast<int>(s.place.size()));
    v.insert(v.end(), s.place.begin(), s.place.end());
    v.push_back(static_cast<int>(s.bonds.size()));
    for (auto b : s.bonds) {
        v.push_back(b.a);
        v.push_back(b.b);
    }
    for (const auto& m : s.mem) {
        v.push_back(static_cast<int>(m.size()));
        for (auto r : m) {
            v.push_back(r.key);
            v.push_back(r.var);
        }
    }
    v.push_back(static_cast<int>(s.live.size()));
    for (auto o : s.live) {
        v.push_back(o.t);
        v.push_back(o.key);
    }
    v.push_back(static_cast<int>(s.prec.size()));
    for (auto [a, b] : s.prec) {
        v.push_back(a);
        v.push_back(b);
    }
    return std::string(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(int));
}

std::string token_label(const Net& net, const State& s, int tok) {
    std::string r = net.tokens[tok].name;
    if (tok < static_cast<int>(s.mem.size()) && !s.mem[tok].empty()) {
        r += "{";
        bool first = true;
        for (auto rec : s.mem[tok]) {
            if (!first) r += ",";
            first = false;
            r += std::to_string(rec.key) + ":";
            r += rec.var < 0 ? "*" : std::to_string(rec.var);
        }
        r += "}";
    }
    return r;
}

std::string marking_text(const Net& net, const State& s) {
    std::ostringstream os;
    for (size_t p = 0; p < net.places.size(); ++p) {
        auto toks = s.tokens_in(static_cast<int>(p));
        if (toks.empty()) continue;
        os << net.places[p] << "{";
        bool first = true;
        for (int t : toks) {
            os << (first ? "" : ",") << net.tokens[t].name;
            first = false;
        }
        for (auto b : s.bonds)
            if (s.place[b.a] == static_cast<int>(p)) os << "," << net.tokens[b.a].name << "-" << net.tokens[b.b].name;
        os << "} ";
    }
    std::string r = os.str();
    if (!r.empty()) r.pop_back();
    return r;
}

std::string history_text(const Net& net, const State& s) {
    std::ostringstream os;
    bool first = true;
    for (size_t t = 0; t < net.transitions.size(); ++t) {
        auto ks = s.history(static_cast<int>(t));
        if (ks.empty()) continue;
        os << (first ? "" : " ") << net.transitions[t].name << "{";
        for (size_t i = 0; i < ks.size(); ++i) os << (i ? "," : "") << ks[i];
        os << "}";
        first = false;
    }
    return os.str();
}

}  // namespace rpn
