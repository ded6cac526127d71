#include "stochmatch/mwm.hpp"

#include "stochmatch/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>

namespace stochmatch {

namespace {

struct LocalEdge {
    int a;
    int b;
    int global;
    std::int64_t w;
};

struct DpTable {
    std::vector<std::int64_t> value;
    std::vector<std::int16_t> choice;  // -1: lowest vertex left unmatched
    std::vector<std::uint32_t> stamp;
    std::uint32_t generation = 0;

    void prepare(std::size_t size) {
        if (value.size() < size) {
            value.resize(size);
            choice.resize(size);
            stamp.assign(size, 0);
            generation = 0;
        }
        if (++generation == 0) {
            std::fill(stamp.begin(), stamp.end(), 0);
            generation = 1;
        }
    }
};

thread_local DpTable table;

class ComponentSolver {
public:
    ComponentSolver(int k, std::vector<LocalEdge> edges) : k_(k), edges_(std::move(edges)), adj_(static_cast<std::size_t>(k)) {
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            adj_[static_cast<std::size_t>(edges_[i].a)].push_back(static_cast<int>(i));
            adj_[static_cast<std::size_t>(edges_[i].b)].push_back(static_cast<int>(i));
        }
        table.prepare(std::size_t{1} << k_);
    }

    void solve_into(EdgeSet& out) {
        const std::uint32_t full = k_ == 32 ? ~0u : ((1u << k_) - 1u);
        solve(full);
        reconstruct(full, out);
    }

private:
    std::int64_t solve(std::uint32_t mask) {
        if (mask == 0) return 0;
        if (table.stamp[mask] == table.generation) return table.value[mask];
        const int v = std::countr_zero(mask);
        const std::uint32_t rest = mask & ~(1u << v);
        std::int64_t best = solve(rest);
        int choice = -1;
        for (int le : adj_[static_cast<std::size_t>(v)]) {
            const LocalEdge& e = edges_[static_cast<std::size_t>(le)];
            const int u = e.a == v ? e.b : e.a;
            if (!(rest & (1u << u))) continue;
            const std::int64_t cand = e.w + solve(rest & ~(1u << u));
            if (cand > best || (cand == best && prefer(le, choice, mask))) {
                best = cand;
                choice = le;
            }
        }
        table.value[mask] = best;
        table.choice[mask] = static_cast<std::int16_t>(choice);
        table.stamp[mask] = table.generation;
        return best;
    }

    std::uint32_t after(std::uint32_t mask, int choice) const {
        const int v = std::countr_zero(mask);
        std::uint32_t rest = mask & ~(1u << v);
        if (choice >= 0) {
            const LocalEdge& e = edges_[static_cast<std::size_t>(choice)];
            rest &= ~(1u << (e.a == v ? e.b : e.a));
        }
        return rest;
    }

    EdgeSet candidate(std::uint32_t mask, int choice) {
        EdgeSet s;
        if (choice >= 0) s.push_back(edges_[static_cast<std::size_t>(choice)].global);
        reconstruct(after(mask, choice), s);
        std::sort(s.begin(), s.end());
        return s;
    }

    // True iff option `a` beats option `b` at `mask` under the canonical order.
    bool prefer(int a, int b, std::uint32_t mask) {
        EdgeSet sa = candidate(mask, a);
        EdgeSet sb = candidate(mask, b);
        std::size_t i = 0, j = 0;
        while (i < sa.size() && j < sb.size()) {
            if (sa[i] == sb[j]) {
                ++i;
                ++j;
            } else {
                return sa[i] < sb[j];
            }
        }
        return i < sa.size();
    }

    void reconstruct(std::uint32_t mask, EdgeSet& out) {
        while (mask != 0) {
            solve(mask);
            const int c = table.choice[mask];
            if (c >= 0) out.push_back(edges_[static_cast<std::size_t>(c)].global);
            mask = after(mask, c);
        }
    }

    int k_;
    std::vector<LocalEdge> edges_;
    std::vector<std::vector<int>> adj_;
};

EdgeSet checked_active(const WeightedGraph& g, std::span<const int> active) {
    EdgeSet a(active.begin(), active.end());
    a = normalized(std::move(a));
    for (int e : a)
        if (e < 0 || e >= g.m()) throw ConfigError("active edge index " + std::to_string(e) + " out of range");
    return a;
}

int find_root(std::vector<int>& parent, int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
    }
    return x;
}

}  // namespace

Matching mwm(const WeightedGraph& g, std::span<const int> active_in) {
    const EdgeSet active = checked_active(g, active_in);
    Matching result;
    if (active.empty()) return result;

    std::vector<int> touched;
    for (int e : active) {
        touched.push_back(g.edge(e).u);
        touched.push_back(g.edge(e).v);
    }
    touched = normalized(std::move(touched));
    if (static_cast<int>(touched.size()) > kMwmVertexCap)
        throw CapExceeded("mwm: " + std::to_string(touched.size()) + " touched vertices exceeds cap " +
                          std::to_string(kMwmVertexCap));

    std::vector<int> parent(static_cast<std::size_t>(g.n()));
    std::iota(parent.begin(), parent.end(), 0);
    for (int e : active) {
        int a = find_root(parent, g.edge(e).u), b = find_root(parent, g.edge(e).v);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }

    std::vector<int> local(static_cast<std::size_t>(g.n()), -1);
    for (int root : touched) {
        if (find_root(parent, root) != root) continue;
        int k = 0;
        for (int v : touched)
            if (find_root(parent, v) == root) local[static_cast<std::size_t>(v)] = k++;
        std::vector<LocalEdge> edges;
        for (int e : active) {
            const Edge& ed = g.edge(e);
            if (find_root(parent, ed.u) != root) continue;
            edges.push_back({local[static_cast<std::size_t>(ed.u)], local[static_cast<std::size_t>(ed.v)], e, ed.w});
        }
        if (edges.size() == 1) {
            result.edges.push_back(edges[0].global);
            continue;
        }
        ComponentSolver solver(k, std::move(edges));
        solver.solve_into(result.edges);
    }
    std::sort(result.edges.begin(), result.edges.end());
    result.weight = g.total_weight(result.edges);
    return result;
}

bool canonical_less(std::span<const int> a, std::span<const int> b) {
    constexpr long long inf = std::numeric_limits<long long>::max();
    const std::size_t len = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < len; ++i) {
        const long long x = i < a.size() ? a[i] : inf;
        const long long y = i < b.size() ? b[i] : inf;
        if (x != y) return x < y;
    }
    return false;
}

Matching mwm_bruteforce(const WeightedGraph& g, std::span<const int> active_in) {
    const EdgeSet active = checked_active(g, active_in);
    if (static_cast<int>(active.size()) > kBruteforceEdgeCap)
        throw CapExceeded("mwm_bruteforce: " + std::to_string(active.size()) + " active edges exceeds cap " +
                          std::to_string(kBruteforceEdgeCap));
    Matching best;
    const std::uint32_t limit = 1u << active.size();
    for (std::uint32_t subset = 1; subset < limit; ++subset) {
        EdgeSet chosen;
        for (std::size_t i = 0; i < active.size(); ++i)
            if (subset & (1u << i)) chosen.push_back(active[i]);
        if (!is_matching(g, chosen)) continue;
        const std::int64_t w = g.total_weight(chosen);
        if (w > best.weight || (w == best.weight && canonical_less(chosen, best.edges))) {
            best.edges = std::move(chosen);
            best.weight = w;
        }
    }
    return best;
}

}  // namespace stochmatch
