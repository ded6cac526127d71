#include "stochmatch/sparsifier.hpp"

#include "stochmatch/errors.hpp"
#include "stochmatch/mwm.hpp"

#include <cmath>
#include <limits>

namespace stochmatch {

void SparsifierConfig::validate() const {
    if (epsilon <= 0 || epsilon >= 1) throw ConfigError("epsilon must lie in (0, 1)");
    if (p.exact() <= 0 || p.exact() > 1) throw ConfigError("p must lie in (0, 1]");
    if (lambda_constant_C < 0) throw ConfigError("C must be nonnegative");
    if (lambda_cap < 1) throw ConfigError("lambda_cap must be positive");
    if (R_override && *R_override < 1) throw ConfigError("R must be at least 1");
    if (R_hard_cap < 1) throw ConfigError("R hard cap must be positive");
    if (N_q < 1 || N_opt < 1) throw ConfigError("sample counts must be positive");
}

std::uint64_t lambda_fn(std::uint64_t delta, double epsilon, int C, int cap) {
    if (delta < 1) throw ConfigError("lambda_fn: delta must be at least 1");
    if (!(epsilon > 0.0) || epsilon > 1.0) throw ConfigError("lambda_fn: epsilon must lie in (0, 1]");
    if (cap < 1) throw ConfigError("lambda_fn: cap must be positive");
    const std::uint64_t ucap = static_cast<std::uint64_t>(cap);
    if (delta == 1) return 1;
    const long double log_delta = std::log2(static_cast<long double>(delta));
    const long double loglog = std::max(1.0L, std::log2(log_delta));
    // log2 of the raw value
    const long double l2 = -24.0L * std::log2(static_cast<long double>(epsilon)) + std::log2(log_delta) +
                           static_cast<long double>(C) * std::log2(loglog);
    if (l2 >= 62.0L) return ucap;
    const long double raw = std::exp2(l2);
    long double rounded = std::round(raw);
    long double value = std::fabs(raw - rounded) <= 1e-12L * std::max(1.0L, raw) ? rounded : std::ceil(raw);
    std::uint64_t out = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(value));
    return std::min(out, ucap);
}

std::uint64_t lambda_fn(std::uint64_t delta, const Rational& epsilon, int C, int cap) {
    return lambda_fn(delta, epsilon.get_d(), C, cap);
}

Rational EdgeStats::chi_hat(const WeightedGraph& g, std::span<const int> edges) const {
    mpz_class total = 0;
    for (int e : edges)
        total += mpz_class(static_cast<unsigned long>(q_count[static_cast<std::size_t>(e)])) * mpz_class(static_cast<long>(g.edge(e).w));
    return Rational(total) / Rational(static_cast<unsigned long>(samples));
}

EdgeStats estimate_edge_stats(const WeightedGraph& g, const Probability& p, std::uint64_t N, RngStream stream) {
    if (N < 1) throw ConfigError("estimate_edge_stats needs at least one sample");
    EdgeStats stats;
    stats.q_count.assign(static_cast<std::size_t>(g.m()), 0);
    stats.samples = N;
    for (std::uint64_t i = 0; i < N; ++i) {
        Realization r = sample_realization(g, p, stream.child(i));
        Matching mm = mwm(g, r.realized);
        for (int e : mm.edges) ++stats.q_count[static_cast<std::size_t>(e)];
        stats.weight_sum += mm.weight;
    }
    return stats;
}

OptEstimate estimate_opt(const WeightedGraph& g, const Probability& p, std::uint64_t N, RngStream stream) {
    if (N < 1) throw ConfigError("estimate_opt needs at least one sample");
    long double sum = 0, sum_sq = 0;
    for (std::uint64_t i = 0; i < N; ++i) {
        Realization r = sample_realization(g, p, stream.child(i));
        const long double w = g.to_double(mwm(g, r.realized).weight);
        sum += w;
        sum_sq += w * w;
    }
    OptEstimate out;
    out.samples = N;
    const long double n = static_cast<long double>(N);
    out.mean = static_cast<double>(sum / n);
    if (N > 1) {
        long double var = (sum_sq - sum * sum / n) / (n - 1);
        out.standard_error = static_cast<double>(std::sqrt(std::max(0.0L, var) / n));
    }
    return out;
}

int compare_q_threshold(const Rational& q, const Probability& p, const Rational& epsilon, int eps_power,
                        std::uint64_t delta, std::uint64_t lambda) {
    const Rational rhs = p.exact() * p.exact() * pow(epsilon, static_cast<unsigned>(eps_power));
    if (rhs == 0) return sgn(q);
    if (q <= 0) return -1;
    const long double bits = static_cast<long double>(lambda) * std::log2(static_cast<long double>(delta));
    if (bits <= 4096.0L) {
        mpz_class dpow;
        mpz_ui_pow_ui(dpow.get_mpz_t(), static_cast<unsigned long>(delta), static_cast<unsigned long>(lambda));
        const int c = cmp(q * Rational(dpow), rhs);
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    const long double lhs_log = std::log2(static_cast<long double>(q.get_d())) + bits;
    const long double rhs_log = std::log2(static_cast<long double>(rhs.get_d()));
    return lhs_log < rhs_log ? -1 : (lhs_log == rhs_log ? 0 : 1);
}

bool meets_q_threshold(const Rational& q, const Probability& p, const Rational& epsilon, int eps_power,
                       std::uint64_t delta, std::uint64_t lambda) {
    return compare_q_threshold(q, p, epsilon, eps_power, delta, lambda) >= 0;
}

namespace {

bool close_in_P(const WeightedGraph& g, const std::vector<std::vector<int>>& dist_cache, int e, std::uint64_t lambda) {
    const int d = dist_cache[static_cast<std::size_t>(g.edge(e).u)][static_cast<std::size_t>(g.edge(e).v)];
    return d >= 0 && static_cast<std::uint64_t>(d) < lambda;
}

}  // namespace

Partition greedy_subgraph(const WeightedGraph& g, const EdgeStats& stats, const SparsifierConfig& cfg) {
    if (static_cast<int>(stats.q_count.size()) != g.m()) throw ConfigError("edge stats do not match the graph");
    Partition out;
    const Rational opt = stats.opt_hat();
    const std::uint64_t max_iterations = ceil_to_u64(Rational(1) / cfg.epsilon);
    std::vector<char> in_P(static_cast<std::size_t>(g.m()), 0);

    while (true) {
        out.Delta = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(max_degree(g, out.P)));
        out.lambda = lambda_fn(out.Delta, cfg.epsilon, cfg.lambda_constant_C, cfg.lambda_cap);

        std::vector<std::vector<int>> dist;
        if (!out.P.empty()) {
            dist.reserve(static_cast<std::size_t>(g.n()));
            for (int v = 0; v < g.n(); ++v) dist.push_back(hop_distances(g, out.P, v));
        }
        EdgeSet I;
        for (int e = 0; e < g.m(); ++e) {
            if (in_P[static_cast<std::size_t>(e)]) continue;
            bool take = meets_q_threshold(stats.q_hat(e), cfg.p, cfg.epsilon, 10, out.Delta, out.lambda);
            if (!take && !out.P.empty()) take = close_in_P(g, dist, e, out.lambda);
            if (take) I.push_back(e);
        }

        if (opt > 0 && stats.chi_hat(g, I) >= cfg.epsilon * opt) {
            for (int e : I) in_P[static_cast<std::size_t>(e)] = 1;
            out.P = set_union(out.P, I);
            ++out.iterations;
            if (static_cast<std::uint64_t>(out.iterations) > max_iterations)
                throw IterationOverflow("greedy_subgraph exceeded " + std::to_string(max_iterations) + " additions");
        } else {
            out.I_prime = std::move(I);
            break;
        }
    }
    out.N = set_difference(set_difference(all_edges(g), out.P), out.I_prime);
    return out;
}

std::uint64_t sampler_rounds(const SparsifierConfig& cfg, std::uint64_t delta) {
    if (cfg.R_override) {
        if (*cfg.R_override < 1) throw ConfigError("R must be at least 1");
        return *cfg.R_override;
    }
    const std::uint64_t lambda = lambda_fn(delta, cfg.epsilon, cfg.lambda_constant_C, cfg.lambda_cap);
    const long double bits = static_cast<long double>(lambda) * std::log2(static_cast<long double>(delta)) -
                             2.0L * std::log2(static_cast<long double>(cfg.p.value())) -
                             10.0L * std::log2(static_cast<long double>(cfg.epsilon.get_d()));
    if (bits > 62.0L)
        throw ParameterOverflow("R formula exceeds 2^62; pass an explicit R");
    mpz_class dpow;
    mpz_ui_pow_ui(dpow.get_mpz_t(), static_cast<unsigned long>(delta), static_cast<unsigned long>(lambda));
    const Rational value = Rational(dpow) / (cfg.p.exact() * cfg.p.exact() * pow(cfg.epsilon, 10));
    const std::uint64_t R = std::max<std::uint64_t>(1, ceil_to_u64(value));
    if (R > cfg.R_hard_cap)
        throw ParameterOverflow("R formula gives " + std::to_string(R) + " rounds, above the hard cap " +
                                std::to_string(cfg.R_hard_cap) + "; pass an explicit R");
    return R;
}

SparsifierOutput sampling_subgraph(const WeightedGraph& g, const SparsifierConfig& cfg, std::uint64_t delta,
                                   RngStream stream) {
    SparsifierOutput out;
    out.R = sampler_rounds(cfg, delta);
    out.matchings.reserve(static_cast<std::size_t>(out.R));
    std::vector<int> all;
    for (std::uint64_t i = 0; i < out.R; ++i) {
        Realization r = sample_realization(g, cfg.p, stream.child(i));
        out.matchings.push_back(mwm(g, r.realized));
        all.insert(all.end(), out.matchings.back().edges.begin(), out.matchings.back().edges.end());
    }
    out.S = normalized(std::move(all));
    return out;
}

EdgeSet build_Q(const WeightedGraph& g, const Partition& partition, SparsifierOutput& sampler) {
    sampler.Q = set_union(sampler.S, partition.P);
    const auto dq = degrees(g, sampler.Q);
    const auto dp = degrees(g, partition.P);
    for (int v = 0; v < g.n(); ++v) {
        if (static_cast<std::uint64_t>(dq[static_cast<std::size_t>(v)]) >
            sampler.R + static_cast<std::uint64_t>(dp[static_cast<std::size_t>(v)]))
            throw InvariantViolation("deg_Q(" + std::to_string(v) + ") exceeds R + deg_P");
    }
    return sampler.Q;
}

}  // namespace stochmatch
