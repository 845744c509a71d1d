#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "rpn/lts.hpp"

namespace rpn {

namespace {

struct G {
    int n = 0;
    int init = 0;
    std::vector<int> orig;  // compact id -> original id
    std::vector<std::vector<std::pair<int, int>>> out, in;  // (label id, node)
    std::vector<std::string> labels;
    std::vector<int> freq;  // edges per label
};

// Keeps only the part reachable from the initial state.
G compact(const LabelledGraph& g) {
    std::vector<std::vector<std::pair<std::string, int>>> adj(g.n);
    for (const auto& [s, l, d] : g.edges) adj[s].emplace_back(l, d);
    std::vector<int> id(g.n, -1);
    G r;
    std::deque<int> q{g.initial};
    id[g.initial] = 0;
    r.orig.push_back(g.initial);
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        for (const auto& [l, d] : adj[x])
            if (id[d] < 0) {
                id[d] = static_cast<int>(r.orig.size());
                r.orig.push_back(d);
                q.push_back(d);
            }
    }
    r.n = static_cast<int>(r.orig.size());
    r.out.resize(r.n);
    r.in.resize(r.n);
    std::map<std::string, int> lid;
    for (const auto& [s, l, d] : g.edges) {
        if (id[s] < 0) continue;
        auto [it, fresh] = lid.emplace(l, static_cast<int>(r.labels.size()));
        if (fresh) {
            r.labels.push_back(l);
            r.freq.push_back(0);
        }
        ++r.freq[it->second];
        r.out[id[s]].emplace_back(it->second, id[d]);
        r.in[id[d]].emplace_back(it->second, id[s]);
    }
    return r;
}

// Colour refinement over the disjoint union of both graphs.
void refine(const G& a, const G& b, std::vector<int>& ca, std::vector<int>& cb) {
    using Sig = std::vector<long long>;
    auto init_sig = [](const G& g, int v) {
        Sig s{v == g.init ? 1 : 0, static_cast<long long>(g.out[v].size()), static_cast<long long>(g.in[v].size())};
        std::vector<long long> f;
        for (auto [l, _] : g.out[v]) f.push_back(g.freq[l]);
        std::sort(f.begin(), f.end());
        s.insert(s.end(), f.begin(), f.end());
        s.push_back(-1);
        f.clear();
        for (auto [l, _] : g.in[v]) f.push_back(g.freq[l]);
        std::sort(f.begin(), f.end());
        s.insert(s.end(), f.begin(), f.end());
        return s;
    };
    auto assign = [&](const std::vector<Sig>& sa, const std::vector<Sig>& sb) {
        std::map<Sig, int> ids;
        for (const auto& s : sa) ids.emplace(s, 0);
        for (const auto& s : sb) ids.emplace(s, 0);
        int k = 0;
        for (auto& [_, v] : ids) v = k++;
        ca.resize(sa.size());
        cb.resize(sb.size());
        for (size_t i = 0; i < sa.size(); ++i) ca[i] = ids[sa[i]];
        for (size_t i = 0; i < sb.size(); ++i) cb[i] = ids[sb[i]];
        return k;
    };
    std::vector<Sig> sa(a.n), sb(b.n);
    for (int v = 0; v < a.n; ++v) sa[v] = init_sig(a, v);
    for (int v = 0; v < b.n; ++v) sb[v] = init_sig(b, v);
    int classes = assign(sa, sb);
    for (;;) {
        auto step = [](const G& g, const std::vector<int>& c, int v) {
            Sig s{c[v]};
            std::vector<std::pair<long long, long long>> o, i;
            for (auto [l, d] : g.out[v]) o.emplace_back(g.freq[l], c[d]);
            for (auto [l, d] : g.in[v]) i.emplace_back(g.freq[l], c[d]);
            std::sort(o.begin(), o.end());
            std::sort(i.begin(), i.end());
            for (auto [x, y] : o) s.insert(s.end(), {x, y});
            s.push_back(-1);
            for (auto [x, y] : i) s.insert(s.end(), {x, y});
            return s;
        };
        for (int v = 0; v < a.n; ++v) sa[v] = step(a, ca, v);
        for (int v = 0; v < b.n; ++v) sb[v] = step(b, cb, v);
        int next = assign(sa, sb);
        if (next == classes) break;
        classes = next;
    }
}

}  // namespace

std::optional<IsoMap> isomorphic(const LabelledGraph& ga, const LabelledGraph& gb) {
    G a = compact(ga), b = compact(gb);
    if (a.n != b.n || a.labels.size() != b.labels.size()) return std::nullopt;
    {
        auto fa = a.freq, fb = b.freq;
        std::sort(fa.begin(), fa.end());
        std::sort(fb.begin(), fb.end());
        if (fa != fb) return std::nullopt;
    }
    std::vector<int> ca, cb;
    refine(a, b, ca, cb);
    {
        auto xa = ca, xb = cb;
        std::sort(xa.begin(), xa.end());
        std::sort(xb.begin(), xb.end());
        if (xa != xb) return std::nullopt;
    }

    std::vector<int> beta(a.n, -1), inv(b.n, -1);
    std::vector<int> eta(a.labels.size(), -1), eta_inv(b.labels.size(), -1);

    // labels on edges between two nodes, in one direction
    auto between = [](const G& g, int x, int y) {
        std::vector<int> r;
        for (auto [l, d] : g.out[x])
            if (d == y) r.push_back(l);
        std::sort(r.begin(), r.end());
        return r;
    };

    // Match label multisets la -> lb consistently with eta; records new pairs in added.
    std::function<bool(std::vector<int>&, std::vector<int>&, std::vector<int>&)> match_labels =
        [&](std::vector<int>& la, std::vector<int>& lb, std::vector<int>& added) -> bool {
        if (la.size() != lb.size()) return false;
        if (la.empty()) return true;
        int l = la.back();
        for (size_t j = 0; j < lb.size(); ++j) {
            int m = lb[j];
            bool fresh = false;
            if (eta[l] >= 0) {
                if (eta[l] != m) continue;
            } else {
                if (eta_inv[m] >= 0 || a.freq[l] != b.freq[m]) continue;
                eta[l] = m;
                eta_inv[m] = l;
                fresh = true;
            }
            auto ra = la, rb = lb;
            ra.pop_back();
            rb.erase(rb.begin() + static_cast<long>(j));
            size_t mark = added.size();
            if (fresh) added.push_back(l);
            if (match_labels(ra, rb, added)) return true;
            while (added.size() > mark) {
                int x = added.back();
                added.pop_back();
                eta_inv[eta[x]] = -1;
                eta[x] = -1;
            }
        }
        return false;
    };

    // BFS order from the initial state
    std::vector<int> order;
    {
        std::vector<char> seen(a.n, 0);
        std::deque<int> q{a.init};
        seen[a.init] = 1;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            order.push_back(x);
            for (auto [_, d] : a.out[x])
                if (!seen[d]) {
                    seen[d] = 1;
                    q.push_back(d);
                }
        }
    }

    std::function<bool(size_t)> extend = [&](size_t i) -> bool {
        if (i == order.size()) return true;
        int x = order[i];
        std::vector<int> cands;
        if (i == 0) {
            cands.push_back(b.init);
        } else {
            // candidates adjacent to the image of an already mapped neighbour
            std::set<int> c;
            bool anchored = false;
            for (auto [_, p] : a.in[x])
                if (beta[p] >= 0) {
                    for (auto [__, d] : b.out[beta[p]]) c.insert(d);
                    anchored = true;
                    break;
                }
            if (!anchored)
                for (int y = 0; y < b.n; ++y) c.insert(y);
            cands.assign(c.begin(), c.end());
        }
        for (int y : cands) {
            if (inv[y] >= 0 || ca[x] != cb[y]) continue;
            beta[x] = y;
            inv[y] = x;
            std::vector<int> added;
            bool ok = true;
            // edges between x and every mapped node, both directions, including loops
            std::set<int> zs{x};
            for (auto [_, d] : a.out[x])
                if (beta[d] >= 0) zs.insert(d);
            for (auto [_, d] : a.in[x])
                if (beta[d] >= 0) zs.insert(d);
            for (auto [_, d] : b.out[y])
                if (inv[d] >= 0) zs.insert(inv[d]);
            for (auto [_, d] : b.in[y])
                if (inv[d] >= 0) zs.insert(inv[d]);
            for (int z : zs) {
                if (!ok) break;
                auto la = between(a, x, z), lb = between(b, y, beta[z]);
                ok = match_labels(la, lb, added);
                if (ok && z != x) {
                    la = between(a, z, x);
                    lb = between(b, beta[z], y);
                    ok = match_labels(la, lb, added);
                }
            }
            if (ok && extend(i + 1)) return true;
            for (int l : added) {
                eta_inv[eta[l]] = -1;
                eta[l] = -1;
            }
            beta[x] = -1;
            inv[y] = -1;
        }
        return false;
    };
    if (!extend(0)) return std::nullopt;

    IsoMap m;
    m.beta.assign(ga.n, -1);
    for (int v = 0; v < a.n; ++v) m.beta[a.orig[v]] = b.orig[beta[v]];
    for (size_t l = 0; l < a.labels.size(); ++l)
        if (eta[l] >= 0) m.eta[a.labels[l]] = b.labels[eta[l]];
    return m;
}

}  // namespace rpn
