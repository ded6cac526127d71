#pragma once

#include "stochmatch/graph.hpp"
#include "stochmatch/numeric.hpp"
#include "stochmatch/rng.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace stochmatch {

struct ProfileEntry {
    EdgeSet subgraph;
    EdgeSet matching;
};

/// alpha (subgraph, matching) pairs over one base graph.
class Profile {
public:
    Profile(const WeightedGraph& g, std::vector<ProfileEntry> entries);

    const WeightedGraph& graph() const { return *graph_; }
    int alpha() const { return static_cast<int>(entries_.size()); }
    const ProfileEntry& entry(int i) const { return entries_[static_cast<std::size_t>(i)]; }
    const std::vector<ProfileEntry>& entries() const { return entries_; }

    bool in_subgraph(int i, int e) const { return sub_[flat(i, e)] != 0; }
    bool in_matching(int i, int e) const { return match_[flat(i, e)] != 0; }
    /// Edge of M_i at v, or -1.
    int mate_edge(int i, int v) const { return mate_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(v)]; }
    bool matched(int i, int v) const { return mate_edge(i, v) >= 0; }
    /// |{i : v in M_i}|
    int matched_count(int v) const;

    std::int64_t total_weight() const;

private:
    std::size_t flat(int i, int e) const { return static_cast<std::size_t>(i) * m_ + static_cast<std::size_t>(e); }

    const WeightedGraph* graph_;
    std::vector<ProfileEntry> entries_;
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<char> sub_;
    std::vector<char> match_;
    std::vector<int> mate_;
};

struct WalkElement {
    int s = 0;  // profile entry
    int e = 0;  // edge index
    auto operator<=>(const WalkElement&) const = default;
};

using MultiWalk = std::vector<WalkElement>;

/// Vertex sequence u_1..u_{k+1} with e_i = (u_i, u_{i+1}), if the edges form a walk.
/// The orientation starting at the lower-numbered feasible end of e_1 is returned.
std::optional<std::vector<int>> walk_vertices(const WeightedGraph& g, const MultiWalk& w);

/// Definition check: entries in range, e_i in subgraph s_i, distinct elements, edges form a walk.
bool is_multiwalk(const MultiWalk& w, const Profile& prof);
bool is_alternating(const MultiWalk& w, const Profile& prof);
/// (d, d_bar): matched and unmatched incidences of v along w.
std::pair<int, int> walk_degrees(const MultiWalk& w, const Profile& prof, int v);
bool is_applicable(const MultiWalk& w, const Profile& prof, const std::vector<char>& saturated);
/// Net weight change in scaled units.
std::int64_t gain(const MultiWalk& w, const Profile& prof);
/// Throws InvalidWalk unless w is alternating.
Profile apply_walk(const Profile& prof, const MultiWalk& w);
/// Sorted distinct vertices touched by w.
std::vector<int> walk_vertex_set(const WeightedGraph& g, const MultiWalk& w);
/// The lexicographically smaller of w and its reverse.
MultiWalk canonical_walk(const MultiWalk& w);

struct Hyperedge {
    std::vector<int> vertices;
    std::int64_t gain = 0;
    MultiWalk walk;
};

struct GainHypergraph {
    std::vector<Hyperedge> edges;
    bool truncated = false;
    std::size_t dropped = 0;  // construct_H_prime pieces that failed the applicability check

    int rank() const;
    int max_degree(int n) const;
};

/// Alternating multi-walks of length 1..l applicable w.r.t. `saturated`, one per
/// reversal class, found by depth-first extension. Stops after walk_cap walks.
GainHypergraph build_H(const Profile& prof, const std::vector<char>& saturated, int l, std::size_t walk_cap,
                       bool positive_only = false);

/// Greedy by gain (ties to the lower index) over positive-gain hyperedges;
/// returns selected indices ascending.
std::vector<int> greedy_hypergraph_matching(const GainHypergraph& H);

/// Matching returned by a reference algorithm on a crucial-graph subgraph.
using ReferenceAlgorithm = std::function<EdgeSet(const EdgeSet& subgraph, RngStream stream)>;

/// Reference algorithm mwm(H u sample(E \ crucial, p)) n H.
ReferenceAlgorithm make_reference(const WeightedGraph& g, const EdgeSet& crucial, const Probability& p);

struct VimatchParams {
    std::optional<Rational> epsilon;  // defaults to the pipeline epsilon
    int alpha = 3;
    int t = 2;
    int l = 4;
    int K_gamma = 64;
    std::size_t walk_cap = 5000;
    double budget = 1e7;

    /// alpha = eps^-12 + 1, t = eps^-20, l = 3 eps^-3 rounded up to a multiple of 4.
    static VimatchParams closed_form(const Rational& epsilon);
    void validate() const;

    bool operator==(const VimatchParams&) const = default;
};

struct LevelTrace {
    int depth = 0;
    std::uint64_t calls = 0;
    int alpha = 0;
    std::uint64_t saturated = 0;
    std::uint64_t hyperedges = 0;
    std::uint64_t selected = 0;
    std::int64_t gain_sum = 0;
    std::int64_t residual = 0;  // sum_i w(M'_i) - sum_i w(M_i) - selected gain
    std::uint64_t truncated = 0;
};

struct SaturationTable {
    std::vector<Rational> gamma_prev;
    std::vector<Rational> target;
    std::vector<char> saturated;
    Rational epsilon;
    int alpha = 0;
};

/// One top-level findmatching call with its estimation memo and trace.
class VimatchSession {
public:
    VimatchSession(const WeightedGraph& g, EdgeSet crucial, Probability p, VimatchParams params, Rational epsilon,
                   ReferenceAlgorithm reference);

    Matching run(int r, const EdgeSet& realization, RngStream stream);

    const std::vector<LevelTrace>& trace() const { return trace_; }
    const std::vector<std::optional<SaturationTable>>& tables() const { return tables_; }
    std::uint64_t calls() const { return calls_; }

private:
    EdgeSet recurse(int r, const EdgeSet& realization, RngStream stream);
    const SaturationTable& table(int r);
    const std::vector<std::uint64_t>& target_counts();

    const WeightedGraph* g_;
    EdgeSet crucial_;
    Probability p_;
    VimatchParams params_;
    Rational epsilon_;
    ReferenceAlgorithm reference_;
    RngStream top_;
    std::optional<std::vector<std::uint64_t>> target_counts_;
    std::vector<std::optional<SaturationTable>> tables_;  // indexed by r
    std::vector<LevelTrace> trace_;
    std::uint64_t calls_ = 0;
};

/// Convenience wrapper: fresh session, crucial graph = all of g, reference = mwm.
Matching findmatching(int r, const WeightedGraph& g, const EdgeSet& realization, const Probability& p,
                      const VimatchParams& params, RngStream stream, std::vector<LevelTrace>* trace = nullptr);

/// Algorithm-4 construction of H' from the profile, saturated set and reference matchings.
GainHypergraph construct_H_prime(const Profile& prof, const std::vector<char>& saturated,
                                 const std::vector<EdgeSet>& reference_matchings, int l, RngStream stream);

}  // namespace stochmatch
