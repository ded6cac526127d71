#pragma once

#include "stochmatch/fractional.hpp"
#include "stochmatch/graph.hpp"
#include "stochmatch/sparsifier.hpp"
#include "stochmatch/stats.hpp"
#include "stochmatch/vimatch.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace stochmatch {

/// Everything needed to reproduce one harness run.
struct ExperimentSpec {
    std::string graph_path;  // exactly one of graph_path and generator is set
    std::string generator;   // see generate_graph
    bool fresh_graph_per_trial = false;
    std::int64_t denominator = kDefaultWeightDenominator;

    SparsifierConfig sparsifier;
    VimatchParams vimatch;
    int K_Z = 16;
    std::optional<int> blossom_max_odd;

    std::uint64_t trials = 1;
    std::uint64_t T_eval = 100;
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> R_values;
    int lambda_hops = 3;
    std::uint64_t runs = 5000;  // independence and vimatch-demo repetitions
    std::vector<int> depths{0, 1, 2};
    std::string output;

    /// Throws ConfigError on bad counts or an unparsable generator.
    void validate() const;
    /// Graph from the file, or from the generator with `stream`.
    WeightedGraph load(RngStream stream) const;
    /// Graph used when graphs are not drawn per trial.
    WeightedGraph base_graph() const;

    bool operator==(const ExperimentSpec&) const = default;
};

struct Witness {
    std::string kind;
    std::vector<int> vertices;
    int edge = -1;
    std::string value;
    std::string bound;

    bool operator==(const Witness&) const = default;
};

struct TrialResult {
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    int n = 0;
    int m = 0;
    std::uint64_t R = 0;
    std::uint64_t Delta = 0;
    std::uint64_t lambda = 0;
    int greedy_iterations = 0;
    std::size_t P_size = 0;
    std::vector<int> P_edges;
    std::size_t I_prime_size = 0;
    std::size_t N_size = 0;
    std::size_t Q_size = 0;
    int Q_max_degree = 0;
    std::vector<int> Q_edges;
    std::size_t Z_size = 0;
    double mu_realized = 0.0;  // mu of the realization
    double mu_Q = 0.0;         // mu of Q restricted to the realization
    double chi_N = 0.0;
    double w_f = 0.0;
    double w_g = 0.0;
    double w_h = 0.0;
    double w_x = 0.0;
    bool fractional_ok = true;
    int max_odd_size = 0;
    std::uint64_t blossom_subsets = 0;
    std::vector<Witness> witnesses;
    std::int64_t gain_residual = 0;
    bool degree_ok = true;
    bool iterations_ok = true;
    bool partition_ok = true;
    std::string error;

    bool operator==(const TrialResult&) const = default;
};

struct Criterion {
    std::string name;
    bool hard = true;
    bool passed = true;
    std::string detail;

    bool operator==(const Criterion&) const = default;
};

struct SweepPoint {
    std::uint64_t R = 0;
    RatioEstimate ratio;
    std::size_t Q_size = 0;
    int Q_max_degree = 0;
    double Q_mean_degree = 0.0;
    bool dominated = true;  // mu_Q <= mu on every paired sample

    bool operator==(const SweepPoint&) const = default;
};

struct PairTest {
    int u = 0;
    int v = 0;
    int distance = -1;  // -1 when unreachable
    std::array<std::uint64_t, 4> table{};  // n11 n10 n01 n00
    std::optional<ChiSquare> test;

    bool operator==(const PairTest&) const = default;
};

struct IndependenceResult {
    int lambda_hops = 0;
    std::uint64_t runs = 0;
    std::uint64_t eligible_pairs = 0;
    std::uint64_t tested_pairs = 0;
    std::uint64_t rejected = 0;
    double significance = 0.01;
    double rejection_fraction = 0.0;
    std::vector<PairTest> pairs;

    bool operator==(const IndependenceResult&) const = default;
};

struct DepthResult {
    int depth = 0;
    MeanSE weight;
    double min_weight = 0.0;
    double max_weight = 0.0;

    bool operator==(const DepthResult&) const = default;
};

struct Report {
    int schema_version = 1;
    std::string tool_version = STOCHMATCH_VERSION;
    std::string command;
    ExperimentSpec spec;
    std::optional<std::string> started;
    std::optional<std::string> finished;
    std::vector<TrialResult> trials;
    std::optional<RatioEstimate> ratio;
    std::vector<std::uint64_t> degree_histogram;  // Q degrees over all trials
    std::vector<SweepPoint> sweep;
    std::optional<IndependenceResult> independence;
    std::vector<DepthResult> depths;
    std::vector<Criterion> criteria;

    /// All hard criteria passed.
    bool passed() const;

    bool operator==(const Report&) const = default;
};

using XMutation = std::function<void(Assignment& x, const WeightedGraph& g)>;

/// One full pipeline run on `g` with the trial's streams.
TrialResult run_trial(const WeightedGraph& g, const ExperimentSpec& spec, std::uint64_t index,
                      const XMutation& mutate = {});

/// Q only: statistics, partition, sampler.
Report run_sparsify(const ExperimentSpec& spec);

Report run_validity_audit(const ExperimentSpec& spec, const XMutation& mutate = {});

/// Shared statistics and partition; nested sampler streams; paired evaluation realizations.
Report run_ratio_sweep(const ExperimentSpec& spec, const std::vector<std::uint64_t>& R_values);

/// findmatching on the whole graph as the crucial graph; throws NoEligiblePairs.
Report run_independence_test(const ExperimentSpec& spec, int lambda_hops);

/// Mean findmatching weight at each depth in spec.depths over spec.runs fresh seeds.
Report run_vimatch_demo(const ExperimentSpec& spec);

}  // namespace stochmatch
