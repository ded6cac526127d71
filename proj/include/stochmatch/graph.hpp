#pragma once

#include "stochmatch/numeric.hpp"
#include "stochmatch/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stochmatch {

/// Sorted, duplicate-free list of edge indices.
using EdgeSet = std::vector<int>;

constexpr std::int64_t kDefaultWeightDenominator = 1'000'000;

struct Edge {
    int u = 0;
    int v = 0;
    std::int64_t w = 0;  // weight scaled by the graph's denominator

    int other(int x) const { return x == u ? v : u; }
    bool touches(int x) const { return x == u || x == v; }
};

/// Immutable simple undirected graph with nonnegative weights.
///
/// Weights are integers in units of 1/denominator, so sums and comparisons
/// are exact. Edge i keeps index i for the life of the object.
class WeightedGraph {
public:
    WeightedGraph() = default;
    WeightedGraph(int n, std::vector<Edge> edges, std::int64_t denominator = kDefaultWeightDenominator);

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }
    const Edge& edge(int i) const { return edges_[static_cast<std::size_t>(i)]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& incident(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
    std::int64_t denominator() const { return denominator_; }

    Rational weight(int i) const { return make_rational(edge(i).w, denominator_); }
    Rational to_rational(std::int64_t scaled) const { return make_rational(scaled, denominator_); }
    double to_double(std::int64_t scaled) const {
        return static_cast<double>(scaled) / static_cast<double>(denominator_);
    }

    std::optional<int> find_edge(int u, int v) const;
    std::int64_t total_weight(std::span<const int> edges) const;

    /// True iff adjacency lists and edge list describe the same graph.
    bool check_adjacency() const;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adjacency_;
    std::int64_t denominator_ = kDefaultWeightDenominator;
};

/// Converts a decimal weight to scaled units; throws ParseError if it is
/// negative or not a multiple of 1/denominator.
std::int64_t scale_weight(std::string_view text, std::int64_t denominator);

/// Reads "n m" followed by m lines "u v w".
WeightedGraph parse_graph(std::istream& in, std::int64_t denominator = kDefaultWeightDenominator);
WeightedGraph load_graph(const std::string& path, std::int64_t denominator = kDefaultWeightDenominator);
void write_graph(std::ostream& out, const WeightedGraph& g);

struct Realization {
    const WeightedGraph* graph = nullptr;
    EdgeSet realized;
    RngStream stream;

    bool contains(int e) const;
};

/// Keeps each edge independently with probability p; edge i consumes word i of the stream.
Realization sample_realization(const WeightedGraph& g, const Probability& p, RngStream stream);

/// Same as sample_realization restricted to `candidates`.
EdgeSet sample_subset(std::span<const int> candidates, const Probability& p, RngStream stream);

struct Matching {
    EdgeSet edges;
    std::int64_t weight = 0;  // scaled units

    bool operator==(const Matching&) const = default;
};

bool is_matching(const WeightedGraph& g, std::span<const int> edges);

/// Degree of every vertex in the subgraph spanned by `edges`.
std::vector<int> degrees(const WeightedGraph& g, std::span<const int> edges);
int max_degree(const WeightedGraph& g, std::span<const int> edges);

/// Unweighted hop distances from `source` using only `edges`; -1 if unreachable.
std::vector<int> hop_distances(const WeightedGraph& g, std::span<const int> edges, int source);

EdgeSet set_union(std::span<const int> a, std::span<const int> b);
EdgeSet set_intersection(std::span<const int> a, std::span<const int> b);
EdgeSet set_difference(std::span<const int> a, std::span<const int> b);
EdgeSet normalized(std::vector<int> edges);
EdgeSet all_edges(const WeightedGraph& g);

// Generators. Weights are integers drawn uniformly from [wmin, wmax].
WeightedGraph erdos_renyi(int n, int m, std::int64_t wmin, std::int64_t wmax, RngStream stream,
                          std::int64_t denominator = kDefaultWeightDenominator);
WeightedGraph path_graph(int n, std::int64_t wmin, std::int64_t wmax, RngStream stream,
                         std::int64_t denominator = kDefaultWeightDenominator);
WeightedGraph cycle_graph(int n, std::int64_t wmin, std::int64_t wmax, RngStream stream,
                          std::int64_t denominator = kDefaultWeightDenominator);
WeightedGraph clique_graph(int n, std::int64_t wmin, std::int64_t wmax, RngStream stream,
                           std::int64_t denominator = kDefaultWeightDenominator);

/// Parses "er:n:m:wmin:wmax", "path:n[:wmin:wmax]", "cycle:n[:wmin:wmax]",
/// "clique:n[:wmin:wmax]" or "empty:n".
WeightedGraph generate_graph(std::string_view spec, RngStream stream,
                             std::int64_t denominator = kDefaultWeightDenominator);

}  // namespace stochmatch
