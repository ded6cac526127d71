#include "stochmatch/graph.hpp"

#include "stochmatch/errors.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

namespace stochmatch {

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges, std::int64_t denominator)
    : n_(n), edges_(std::move(edges)), denominator_(denominator) {
    if (n_ < 0) throw ConfigError("negative vertex count");
    if (denominator_ <= 0) throw ConfigError("weight denominator must be positive");
    adjacency_.assign(static_cast<std::size_t>(n_), {});
    std::set<std::pair<int, int>> seen;
    std::int64_t total = 0;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_)
            throw ConfigError("edge " + std::to_string(i) + " has an endpoint out of range");
        if (e.u == e.v) throw ConfigError("self-loop at vertex " + std::to_string(e.u));
        if (e.w < 0) throw ConfigError("negative weight on edge " + std::to_string(i));
        if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second)
            throw ConfigError("parallel edge between " + std::to_string(e.u) + " and " + std::to_string(e.v));
        if (e.w > std::numeric_limits<std::int64_t>::max() / 4 - total) throw ConfigError("total weight overflows");
        total += e.w;
        adjacency_[static_cast<std::size_t>(e.u)].push_back(static_cast<int>(i));
        adjacency_[static_cast<std::size_t>(e.v)].push_back(static_cast<int>(i));
    }
}

std::optional<int> WeightedGraph::find_edge(int u, int v) const {
    if (u < 0 || u >= n_) return std::nullopt;
    for (int e : incident(u))
        if (edge(e).other(u) == v) return e;
    return std::nullopt;
}

std::int64_t WeightedGraph::total_weight(std::span<const int> edges) const {
    std::int64_t s = 0;
    for (int e : edges) s += edge(e).w;
    return s;
}

bool WeightedGraph::check_adjacency() const {
    std::size_t count = 0;
    for (int v = 0; v < n_; ++v) {
        for (int e : incident(v)) {
            if (e < 0 || e >= m() || !edge(e).touches(v)) return false;
        }
        count += incident(v).size();
    }
    return count == 2 * edges_.size();
}

std::int64_t scale_weight(std::string_view text, std::int64_t denominator) {
    Rational q = parse_decimal(text) * Rational(denominator);
    q.canonicalize();
    if (q < 0) throw ParseError("negative weight '" + std::string(text) + "'");
    if (q.get_den() != 1)
        throw ParseError("weight '" + std::string(text) + "' is not a multiple of 1/" + std::to_string(denominator));
    if (q.get_num() > mpz_class(std::numeric_limits<std::int64_t>::max() / 4))
        throw ParseError("weight '" + std::string(text) + "' too large");
    return static_cast<std::int64_t>(q.get_num().get_si());
}

namespace {

int parse_int(std::string_view tok, std::size_t line) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError("line " + std::to_string(line) + ": expected integer, got '" + std::string(tok) + "'");
    return value;
}

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

}  // namespace

WeightedGraph parse_graph(std::istream& in, std::int64_t denominator) {
    std::string line;
    std::size_t lineno = 0;
    auto next = [&]() -> std::optional<std::vector<std::string>> {
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            auto t = tokens(line);
            if (!t.empty()) return t;
        }
        return std::nullopt;
    };
    auto header = next();
    if (!header || header->size() != 2) throw ParseError("line " + std::to_string(lineno) + ": expected 'n m'");
    int n = parse_int((*header)[0], lineno);
    int m = parse_int((*header)[1], lineno);
    if (n < 0 || m < 0) throw ParseError("negative n or m");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        auto t = next();
        if (!t) throw ParseError("expected " + std::to_string(m) + " edges, found " + std::to_string(i));
        if (t->size() != 3) throw ParseError("line " + std::to_string(lineno) + ": expected 'u v w'");
        Edge e;
        e.u = parse_int((*t)[0], lineno);
        e.v = parse_int((*t)[1], lineno);
        try {
            e.w = scale_weight((*t)[2], denominator);
        } catch (const ParseError& err) {
            throw ParseError("line " + std::to_string(lineno) + ": " + err.what());
        }
        if (e.u == e.v) throw ParseError("line " + std::to_string(lineno) + ": self-loop");
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
            throw ParseError("line " + std::to_string(lineno) + ": vertex out of range");
        edges.push_back(e);
    }
    if (next()) throw ParseError("line " + std::to_string(lineno) + ": trailing content");
    try {
        return WeightedGraph(n, std::move(edges), denominator);
    } catch (const ConfigError& err) {
        throw ParseError(err.what());
    }
}

WeightedGraph load_graph(const std::string& path, std::int64_t denominator) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open graph file '" + path + "'");
    try {
        return parse_graph(in, denominator);
    } catch (const ParseError& err) {
        throw ParseError(path + ": " + err.what());
    }
}

void write_graph(std::ostream& out, const WeightedGraph& g) {
    out << g.n() << ' ' << g.m() << '\n';
    for (const Edge& e : g.edges()) {
        Rational w = g.to_rational(e.w);
        out << e.u << ' ' << e.v << ' ';
        if (w.get_den() == 1) {
            out << w.get_num().get_str();
        } else {
            mpz_class den = w.get_den();
            int digits = 0;
            mpz_class pow10 = 1;
            while (pow10 % den != 0 && digits < 30) {
                pow10 *= 10;
                ++digits;
            }
            if (pow10 % den == 0) {
                mpz_class scaled = w.get_num() * (pow10 / den);
                std::string s = scaled.get_str();
                if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
                s.insert(s.size() - static_cast<std::size_t>(digits), ".");
                out << s;
            } else {
                out << w.get_d();
            }
        }
        out << '\n';
    }
}

bool Realization::contains(int e) const { return std::binary_search(realized.begin(), realized.end(), e); }

Realization sample_realization(const WeightedGraph& g, const Probability& p, RngStream stream) {
    Realization r;
    r.graph = &g;
    r.stream = stream;
    Rng rng(stream);
    for (int i = 0; i < g.m(); ++i)
        if (p.accept(rng.next_u64())) r.realized.push_back(i);
    return r;
}

EdgeSet sample_subset(std::span<const int> candidates, const Probability& p, RngStream stream) {
    EdgeSet out;
    Rng rng(stream);
    for (int e : candidates)
        if (p.accept(rng.next_u64())) out.push_back(e);
    return normalized(std::move(out));
}

bool is_matching(const WeightedGraph& g, std::span<const int> edges) {
    std::vector<char> used(static_cast<std::size_t>(g.n()), 0);
    for (int e : edges) {
        if (e < 0 || e >= g.m()) return false;
        const Edge& ed = g.edge(e);
        if (used[static_cast<std::size_t>(ed.u)] || used[static_cast<std::size_t>(ed.v)]) return false;
        used[static_cast<std::size_t>(ed.u)] = used[static_cast<std::size_t>(ed.v)] = 1;
    }
    return true;
}

std::vector<int> degrees(const WeightedGraph& g, std::span<const int> edges) {
    std::vector<int> d(static_cast<std::size_t>(g.n()), 0);
    for (int e : edges) {
        ++d[static_cast<std::size_t>(g.edge(e).u)];
        ++d[static_cast<std::size_t>(g.edge(e).v)];
    }
    return d;
}

int max_degree(const WeightedGraph& g, std::span<const int> edges) {
    auto d = degrees(g, edges);
    return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

std::vector<int> hop_distances(const WeightedGraph& g, std::span<const int> edges, int source) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n()));
    for (int e : edges) {
        adj[static_cast<std::size_t>(g.edge(e).u)].push_back(g.edge(e).v);
        adj[static_cast<std::size_t>(g.edge(e).v)].push_back(g.edge(e).u);
    }
    std::vector<int> dist(static_cast<std::size_t>(g.n()), -1);
    std::deque<int> queue{source};
    dist[static_cast<std::size_t>(source)] = 0;
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        for (int y : adj[static_cast<std::size_t>(x)]) {
            if (dist[static_cast<std::size_t>(y)] < 0) {
                dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
                queue.push_back(y);
            }
        }
    }
    return dist;
}

EdgeSet set_union(std::span<const int> a, std::span<const int> b) {
    EdgeSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

EdgeSet set_intersection(std::span<const int> a, std::span<const int> b) {
    EdgeSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

EdgeSet set_difference(std::span<const int> a, std::span<const int> b) {
    EdgeSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

EdgeSet normalized(std::vector<int> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

EdgeSet all_edges(const WeightedGraph& g) {
    EdgeSet out(static_cast<std::size_t>(g.m()));
    for (int i = 0; i < g.m(); ++i) out[static_cast<std::size_t>(i)] = i;
    return out;
}

namespace {

std::int64_t draw_weight(Rng& rng, std::int64_t wmin, std::int64_t wmax) {
    if (wmin < 0 || wmax < wmin) throw ConfigError("invalid weight range");
    return wmin + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(wmax - wmin + 1)));
}

std::vector<Edge> weighted(const std::vector<std::pair<int, int>>& pairs, std::int64_t wmin, std::int64_t wmax,
                           Rng& rng, std::int64_t denominator) {
    std::vector<Edge> edges;
    for (auto [u, v] : pairs) edges.push_back(Edge{u, v, draw_weight(rng, wmin, wmax) * denominator});
    return edges;
}

}  // namespace

WeightedGraph erdos_renyi(int n, int m, std::int64_t wmin, std::int64_t wmax, RngStream stream,
                          std::int64_t denominator) {
    if (n < 0 || m < 0) throw ConfigError("negative generator size");
    const long long pairs = static_cast<long long>(n) * (n - 1) / 2;
    if (m > pairs) throw ConfigError("too many edges for " + std::to_string(n) + " vertices");
    Rng rng(stream);
    std::vector<std::pair<int, int>> all;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) all.emplace_back(u, v);
    // partial Fisher-Yates
    for (int i = 0; i < m; ++i) {
        auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(all.size()) - i);
        std::swap(all[static_cast<std::size_t>(i)], all[j]);
    }
    all.resize(static_cast<std::size_t>(m));
    std::sort(all.begin(), all.end());
    return WeightedGraph(n, weighted(all, wmin, wmax, rng, denominator), denominator);
}

WeightedGraph path_graph(int n, std::int64_t wmin, std::int64_t wmax, RngStream stream, std::int64_t denominator) {
    Rng rng(stream);
    std::vector<std::pair<int, int>> pairs;
    for (int v = 0; v + 1 < n; ++v) pairs.emplace_back(v, v + 1);
    return WeightedGraph(n, weighted(pairs, wmin, wmax, rng, denominator), denominator);
}

WeightedGraph cycle_graph(int n, std::int64_t wmin, std::int64_t wmax, RngStream stream, std::int64_t denominator) {
    if (n < 3) throw ConfigError("cycle needs at least 3 vertices");
    Rng rng(stream);
    std::vector<std::pair<int, int>> pairs;
    for (int v = 0; v + 1 < n; ++v) pairs.emplace_back(v, v + 1);
    pairs.emplace_back(0, n - 1);
    return WeightedGraph(n, weighted(pairs, wmin, wmax, rng, denominator), denominator);
}

WeightedGraph clique_graph(int n, std::int64_t wmin, std::int64_t wmax, RngStream stream, std::int64_t denominator) {
    Rng rng(stream);
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    return WeightedGraph(n, weighted(pairs, wmin, wmax, rng, denominator), denominator);
}

WeightedGraph generate_graph(std::string_view spec, RngStream stream, std::int64_t denominator) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    auto num = [&](std::size_t i) -> long long {
        long long v = 0;
        const std::string& s = parts[i];
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || v < 0)
            throw ConfigError("bad generator field '" + s + "' in '" + std::string(spec) + "'");
        return v;
    };
    const std::string& kind = parts[0];
    auto range = [&](std::size_t at) -> std::pair<std::int64_t, std::int64_t> {
        if (parts.size() == at) return {1, 1};
        if (parts.size() == at + 2) return {num(at), num(at + 1)};
        throw ConfigError("bad generator spec '" + std::string(spec) + "'");
    };
    if (kind == "er") {
        if (parts.size() != 5) throw ConfigError("expected er:n:m:wmin:wmax");
        return erdos_renyi(static_cast<int>(num(1)), static_cast<int>(num(2)), num(3), num(4), stream, denominator);
    }
    if (parts.size() < 2) throw ConfigError("bad generator spec '" + std::string(spec) + "'");
    const int n = static_cast<int>(num(1));
    if (kind == "path") {
        auto [a, b] = range(2);
        return path_graph(n, a, b, stream, denominator);
    }
    if (kind == "cycle") {
        auto [a, b] = range(2);
        return cycle_graph(n, a, b, stream, denominator);
    }
    if (kind == "clique") {
        auto [a, b] = range(2);
        return clique_graph(n, a, b, stream, denominator);
    }
    if (kind == "empty" && parts.size() == 2) return WeightedGraph(n, {}, denominator);
    throw ConfigError("unknown generator '" + std::string(spec) + "'");
}

}  // namespace stochmatch
