#pragma once

#include "stochmatch/graph.hpp"
#include "stochmatch/numeric.hpp"
#include "stochmatch/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace stochmatch {

struct SparsifierConfig {
    Rational epsilon{1, 10};
    Probability p{Rational(1, 2)};
    int lambda_constant_C = 1;
    int lambda_cap = 8;
    std::optional<std::uint64_t> R_override;
    std::uint64_t R_hard_cap = 4096;
    std::uint64_t N_q = 2000;
    std::uint64_t N_opt = 2000;

    /// Throws ConfigError on out-of-range fields.
    void validate() const;

    bool operator==(const SparsifierConfig&) const = default;
};

/// max(1, ceil(eps^-24 * log2(delta) * max(1, log2 log2 delta)^C)), clamped to cap.
std::uint64_t lambda_fn(std::uint64_t delta, double epsilon, int C, int cap);
std::uint64_t lambda_fn(std::uint64_t delta, const Rational& epsilon, int C, int cap);

struct EdgeStats {
    std::vector<std::uint64_t> q_count;  // realizations whose matching contains e
    std::uint64_t samples = 0;
    std::int64_t weight_sum = 0;  // scaled, summed over the samples

    Rational q_hat(int e) const { return make_rational(static_cast<long long>(q_count[static_cast<std::size_t>(e)]), static_cast<long long>(samples)); }
    double q_hat_double(int e) const {
        return static_cast<double>(q_count[static_cast<std::size_t>(e)]) / static_cast<double>(samples);
    }
    /// q_hat(e) * w_e in scaled units.
    Rational chi_hat(const WeightedGraph& g, int e) const { return q_hat(e) * Rational(g.edge(e).w); }
    Rational chi_hat(const WeightedGraph& g, std::span<const int> edges) const;
    /// Mean matching weight in scaled units.
    Rational opt_hat() const { return samples == 0 ? Rational(0) : Rational(weight_sum) / Rational(static_cast<unsigned long>(samples)); }
};

/// Runs mwm on N realizations; realization i uses stream.child(i).
EdgeStats estimate_edge_stats(const WeightedGraph& g, const Probability& p, std::uint64_t N, RngStream stream);

/// Mean and standard error of mu over N fresh realizations, in graph units.
struct OptEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
};
OptEstimate estimate_opt(const WeightedGraph& g, const Probability& p, std::uint64_t N, RngStream stream);

struct Partition {
    EdgeSet P;
    EdgeSet I_prime;
    EdgeSet N;
    std::uint64_t Delta = 1;
    std::uint64_t lambda = 1;
    int iterations = 0;
};

/// Sign of q - p^2 eps^k Delta^-lambda; exact unless lambda log2(Delta) > 4096.
int compare_q_threshold(const Rational& q, const Probability& p, const Rational& epsilon, int eps_power,
                        std::uint64_t delta, std::uint64_t lambda);
/// q >= p^2 eps^k Delta^-lambda.
bool meets_q_threshold(const Rational& q, const Probability& p, const Rational& epsilon, int eps_power,
                       std::uint64_t delta, std::uint64_t lambda);

Partition greedy_subgraph(const WeightedGraph& g, const EdgeStats& stats, const SparsifierConfig& cfg);

struct SparsifierOutput {
    std::uint64_t R = 0;
    std::vector<Matching> matchings;
    EdgeSet S;
    EdgeSet Q;
};

/// R from the override or the formula ceil(p^-2 eps^-10 Delta^lambda).
std::uint64_t sampler_rounds(const SparsifierConfig& cfg, std::uint64_t delta);

SparsifierOutput sampling_subgraph(const WeightedGraph& g, const SparsifierConfig& cfg, std::uint64_t delta,
                                   RngStream stream);

/// Q = S u P; throws InvariantViolation if some vertex has deg_Q > R + deg_P.
EdgeSet build_Q(const WeightedGraph& g, const Partition& partition, SparsifierOutput& sampler);

}  // namespace stochmatch
