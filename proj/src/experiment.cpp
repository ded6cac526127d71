#include "stochmatch/experiment.hpp"

#include "stochmatch/errors.hpp"
#include "stochmatch/mwm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace stochmatch {

void ExperimentSpec::validate() const {
    if (graph_path.empty() == generator.empty()) throw ConfigError("exactly one of graph path and generator is required");
    if (trials < 1 || T_eval < 1 || runs < 1) throw ConfigError("trial, evaluation and run counts must be at least 1");
    if (K_Z < 1) throw ConfigError("K_Z must be at least 1");
    if (lambda_hops < 1) throw ConfigError("lambda_hops must be at least 1");
    if (denominator < 1) throw ConfigError("weight denominator must be positive");
    if (blossom_max_odd && *blossom_max_odd < 1) throw ConfigError("blossom_max_odd must be positive");
    for (auto R : R_values)
        if (R < 1) throw ConfigError("R values must be at least 1");
    for (int d : depths)
        if (d < 0) throw ConfigError("depths must be nonnegative");
    if (fresh_graph_per_trial && generator.empty()) throw ConfigError("fresh graphs need a generator");
    sparsifier.validate();
    vimatch.validate();
    if (!generator.empty()) (void)load(RngStream::make(seed, StreamPurpose::Generator, 0));
}

WeightedGraph ExperimentSpec::load(RngStream stream) const {
    if (!graph_path.empty()) return load_graph(graph_path, denominator);
    try {
        return generate_graph(generator, stream, denominator);
    } catch (const ParseError& e) {
        throw ConfigError(std::string("bad generator spec: ") + e.what());
    }
}

WeightedGraph ExperimentSpec::base_graph() const { return load(RngStream::make(seed, StreamPurpose::Generator, 0)); }

bool Report::passed() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return !c.hard || c.passed; });
}

namespace {

struct Sparsified {
    EdgeStats stats;
    Partition partition;
    SparsifierOutput sampler;
};

bool partition_covers(const WeightedGraph& g, const Partition& part) {
    std::vector<int> seen(static_cast<std::size_t>(g.m()), 0);
    for (const EdgeSet* s : {&part.P, &part.I_prime, &part.N})
        for (int e : *s) {
            if (e < 0 || e >= g.m()) return false;
            ++seen[static_cast<std::size_t>(e)];
        }
    return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

void fill_Q(const WeightedGraph& g, const Partition& part, SparsifierOutput& s, TrialResult& r) {
    s.Q = set_union(s.S, part.P);
    const auto dq = degrees(g, s.Q);
    const auto dp = degrees(g, part.P);
    for (int v = 0; v < g.n(); ++v)
        if (static_cast<std::uint64_t>(dq[static_cast<std::size_t>(v)]) >
            s.R + static_cast<std::uint64_t>(dp[static_cast<std::size_t>(v)]))
            r.degree_ok = false;
    r.R = s.R;
    r.Q_size = s.Q.size();
    r.Q_max_degree = max_degree(g, s.Q);
    r.Q_edges = s.Q;
}

/// Statistics, partition and sampler for one trial stream; fills the structural fields of `r`.
std::optional<Sparsified> sparsify(const WeightedGraph& g, const ExperimentSpec& spec, RngStream trial,
                                   TrialResult& r) {
    const auto& cfg = spec.sparsifier;
    Sparsified out;
    out.stats = estimate_edge_stats(g, cfg.p, cfg.N_q, trial.child(StreamPurpose::EdgeStats, 0));
    try {
        out.partition = greedy_subgraph(g, out.stats, cfg);
    } catch (const IterationOverflow& e) {
        r.iterations_ok = false;
        r.error = e.what();
        return std::nullopt;
    }
    const auto& part = out.partition;
    r.Delta = part.Delta;
    r.lambda = part.lambda;
    r.greedy_iterations = part.iterations;
    r.iterations_ok = static_cast<std::uint64_t>(part.iterations) <= ceil_to_u64(Rational(1) / cfg.epsilon);
    r.P_size = part.P.size();
    r.P_edges = part.P;
    r.I_prime_size = part.I_prime.size();
    r.N_size = part.N.size();
    r.partition_ok = partition_covers(g, part);
    out.sampler = sampling_subgraph(g, cfg, part.Delta, trial.child(StreamPurpose::Sampler, 0));
    fill_Q(g, part, out.sampler, r);
    return out;
}

double graph_units(const WeightedGraph& g, const Rational& scaled) {
    return to_double(scaled) / static_cast<double>(g.denominator());
}

void add_degrees(const WeightedGraph& g, const EdgeSet& Q, std::vector<std::uint64_t>& hist) {
    for (int d : degrees(g, Q)) {
        if (static_cast<std::size_t>(d) >= hist.size()) hist.resize(static_cast<std::size_t>(d) + 1, 0);
        ++hist[static_cast<std::size_t>(d)];
    }
}

Criterion all_trials(const std::string& name, const std::vector<TrialResult>& trials,
                     bool (*ok)(const TrialResult&)) {
    Criterion c{name, true, true, ""};
    std::uint64_t failed = 0;
    std::string first;
    for (const auto& t : trials)
        if (!ok(t)) {
            if (failed++ == 0) first = std::to_string(t.index);
        }
    c.passed = failed == 0;
    c.detail = std::to_string(trials.size() - failed) + "/" + std::to_string(trials.size()) + " trials";
    if (failed) c.detail += ", first failure at trial " + first;
    return c;
}

Rational vimatch_epsilon(const ExperimentSpec& spec) {
    return spec.vimatch.epsilon.value_or(spec.sparsifier.epsilon);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

}  // namespace

TrialResult run_trial(const WeightedGraph& g, const ExperimentSpec& spec, std::uint64_t index,
                      const XMutation& mutate) {
    TrialResult r;
    r.index = index;
    r.seed = spec.seed;
    r.n = g.n();
    r.m = g.m();
    const RngStream trial = RngStream::make(spec.seed, StreamPurpose::Trial, index);
    const auto& cfg = spec.sparsifier;
    try {
        auto sp = sparsify(g, spec, trial, r);
        if (!sp) return r;
        const auto& part = sp->partition;
        const Realization real = sample_realization(g, cfg.p, trial.child(StreamPurpose::Realization, 0));
        r.mu_realized = g.to_double(mwm(g, real.realized).weight);
        r.mu_Q = g.to_double(mwm(g, set_intersection(sp->sampler.Q, real.realized)).weight);

        const ZContext z = build_Z(g, part, sp->stats, real.realized, cfg.p, cfg.epsilon, spec.vimatch, spec.K_Z,
                                   trial.child(StreamPurpose::ZMatching, 0));
        r.Z_size = z.Z.edges.size();
        for (const auto& lvl : z.trace) r.gain_residual += lvl.residual;

        const Assignment f = compute_f(g, sp->sampler, part);
        const Assignment ga = compute_g(g, f, z, part, cfg);
        const Assignment h = compute_h(g, ga, z, real.realized, cfg.p, cfg.epsilon);
        Assignment x = compute_x(g, h, z, part, cfg.epsilon);
        if (mutate) mutate(x, g);

        r.chi_N = graph_units(g, sp->stats.chi_hat(g, part.N));
        r.w_f = to_double(assignment_weight(f, g));
        r.w_g = to_double(assignment_weight(ga, g));
        r.w_h = to_double(assignment_weight(h, g));
        r.w_x = to_double(assignment_weight(x, g));

        FractionalCheckOptions opts;
        opts.max_odd_size = spec.blossom_max_odd;
        const FractionalCheck check = check_fractional(x, g, sp->sampler.Q, real.realized, cfg.epsilon, opts);
        r.fractional_ok = check.ok;
        r.max_odd_size = check.max_odd_size;
        r.blossom_subsets = check.subsets_checked;
        for (const auto& v : check.violations)
            r.witnesses.push_back({v.kind, v.vertices, v.edge, to_string(v.value), to_string(v.bound)});
    } catch (const Error& e) {
        r.error = e.what();
    }
    return r;
}

Report run_sparsify(const ExperimentSpec& spec) {
    spec.validate();
    Report rep;
    rep.command = "sparsify";
    rep.spec = spec;
    const WeightedGraph g = spec.base_graph();
    TrialResult r;
    r.seed = spec.seed;
    r.n = g.n();
    r.m = g.m();
    if (sparsify(g, spec, RngStream::make(spec.seed, StreamPurpose::Trial, 0), r)) add_degrees(g, r.Q_edges, rep.degree_histogram);
    rep.criteria.push_back({"greedy_iterations", true, r.iterations_ok, r.error});
    rep.criteria.push_back({"partition", true, r.partition_ok, ""});
    rep.criteria.push_back({"degree_bound", true, r.degree_ok, "deg_Q(v) <= R + deg_P(v)"});
    rep.trials.push_back(std::move(r));
    return rep;
}

Report run_validity_audit(const ExperimentSpec& spec, const XMutation& mutate) {
    spec.validate();
    Report rep;
    rep.command = "audit";
    rep.spec = spec;
    const std::optional<WeightedGraph> shared =
        spec.fresh_graph_per_trial ? std::nullopt : std::optional<WeightedGraph>(spec.base_graph());
    std::vector<double> mu, mu_Q;
    for (std::uint64_t i = 0; i < spec.trials; ++i) {
        const WeightedGraph g =
            shared ? *shared
                   : spec.load(RngStream::make(spec.seed, StreamPurpose::Trial, i).child(StreamPurpose::Generator, 0));
        TrialResult r = run_trial(g, spec, i, mutate);
        add_degrees(g, r.Q_edges, rep.degree_histogram);
        if (r.error.empty()) {
            mu.push_back(r.mu_realized);
            mu_Q.push_back(r.mu_Q);
        }
        rep.trials.push_back(std::move(r));
    }
    if (!mu.empty()) rep.ratio = paired_ratio(mu_Q, mu);

    const auto& t = rep.trials;
    rep.criteria.push_back(all_trials("fractional_validity", t, [](const TrialResult& r) { return r.fractional_ok; }));
    rep.criteria.push_back(all_trials("degree_bound", t, [](const TrialResult& r) { return r.degree_ok; }));
    rep.criteria.push_back(all_trials("greedy_iterations", t, [](const TrialResult& r) { return r.iterations_ok; }));
    rep.criteria.push_back(all_trials("partition", t, [](const TrialResult& r) { return r.partition_ok; }));
    rep.criteria.push_back(all_trials("gain_residual", t, [](const TrialResult& r) { return r.gain_residual == 0; }));
    rep.criteria.push_back(all_trials("trial_errors", t, [](const TrialResult& r) { return r.error.empty(); }));

    double w_g = 0, chi = 0;
    for (const auto& r : t) {
        w_g += r.w_g;
        chi += r.chi_N;
    }
    Criterion weight{"weight_of_g", false, true, ""};
    const double target = (1.0 - to_double(spec.sparsifier.epsilon)) * chi;
    weight.passed = w_g >= target;
    weight.detail = "sum w(g) = " + fmt(w_g) + ", (1 - eps) sum chi(N) = " + fmt(target);
    rep.criteria.push_back(weight);
    if (rep.ratio) {
        rep.criteria.push_back({"approximation_ratio", false, true,
                                "ratio " + fmt(rep.ratio->ratio) + " +- " + fmt(rep.ratio->standard_error) + " over " +
                                    std::to_string(rep.ratio->samples) + " trials"});
    }
    return rep;
}

Report run_ratio_sweep(const ExperimentSpec& spec, const std::vector<std::uint64_t>& R_values) {
    spec.validate();
    if (R_values.empty()) throw ConfigError("ratio sweep needs at least one R");
    Report rep;
    rep.command = "ratio-sweep";
    rep.spec = spec;
    rep.spec.R_values = R_values;
    const WeightedGraph g = spec.base_graph();
    const RngStream base = RngStream::make(spec.seed, StreamPurpose::Trial, 0);
    const auto& cfg = spec.sparsifier;

    const EdgeStats stats = estimate_edge_stats(g, cfg.p, cfg.N_q, base.child(StreamPurpose::EdgeStats, 0));
    const Partition part = greedy_subgraph(g, stats, cfg);

    std::vector<EdgeSet> realized;
    std::vector<double> mu;
    realized.reserve(spec.T_eval);
    for (std::uint64_t j = 0; j < spec.T_eval; ++j) {
        realized.push_back(sample_realization(g, cfg.p, base.child(StreamPurpose::Realization, j)).realized);
        mu.push_back(g.to_double(mwm(g, realized.back()).weight));
    }

    bool dominated = true;
    for (std::uint64_t R : R_values) {
        SweepPoint pt;
        pt.R = R;
        SparsifierConfig c = cfg;
        c.R_override = R;
        try {
            SparsifierOutput s = sampling_subgraph(g, c, part.Delta, base.child(StreamPurpose::Sampler, 0));
            TrialResult scratch;
            fill_Q(g, part, s, scratch);
            pt.Q_size = s.Q.size();
            pt.Q_max_degree = scratch.Q_max_degree;
            pt.Q_mean_degree = g.n() == 0 ? 0.0 : 2.0 * static_cast<double>(s.Q.size()) / g.n();
            std::vector<double> mu_Q;
            mu_Q.reserve(realized.size());
            for (std::size_t j = 0; j < realized.size(); ++j) {
                mu_Q.push_back(g.to_double(mwm(g, set_intersection(s.Q, realized[j])).weight));
                if (mu_Q.back() > mu[j]) pt.dominated = false;
            }
            pt.ratio = paired_ratio(mu_Q, mu);
            if (R == R_values.back()) add_degrees(g, s.Q, rep.degree_histogram);
        } catch (const Error& e) {
            throw Error("R = " + std::to_string(R) + ": " + e.what());
        }
        dominated = dominated && pt.dominated;
        rep.sweep.push_back(pt);
    }
    rep.ratio = rep.sweep.back().ratio;

    rep.criteria.push_back({"paired_dominance", true, dominated, "mu(Q n G) <= mu(G) on every paired realization"});
    bool monotone = true;
    for (std::size_t i = 1; i < rep.sweep.size(); ++i)
        if (rep.sweep[i].ratio.ratio < rep.sweep[i - 1].ratio.ratio - 0.01) monotone = false;
    std::string curve;
    for (const auto& p : rep.sweep) curve += (curve.empty() ? "" : ", ") + std::to_string(p.R) + ":" + fmt(p.ratio.ratio);
    rep.criteria.push_back({"monotone_curve", false, monotone, curve});
    return rep;
}

Report run_independence_test(const ExperimentSpec& spec, int lambda_hops) {
    spec.validate();
    if (lambda_hops < 1) throw ConfigError("lambda_hops must be at least 1");
    Report rep;
    rep.command = "independence";
    rep.spec = spec;
    rep.spec.lambda_hops = lambda_hops;
    const WeightedGraph g = spec.base_graph();
    const EdgeSet all = all_edges(g);

    IndependenceResult res;
    res.lambda_hops = lambda_hops;
    res.runs = spec.runs;
    for (int u = 0; u < g.n(); ++u) {
        const auto dist = hop_distances(g, all, u);
        for (int v = u + 1; v < g.n(); ++v) {
            const int d = dist[static_cast<std::size_t>(v)];
            if (d >= 0 && d < lambda_hops) continue;
            PairTest t;
            t.u = u;
            t.v = v;
            t.distance = d;
            res.pairs.push_back(t);
        }
    }
    if (res.pairs.empty())
        throw NoEligiblePairs("no vertex pair at hop distance >= " + std::to_string(lambda_hops));
    res.eligible_pairs = res.pairs.size();

    const auto& cfg = spec.sparsifier;
    const ReferenceAlgorithm ref = make_reference(g, all, cfg.p);
    const Rational eps = vimatch_epsilon(spec);
    std::vector<char> matched(static_cast<std::size_t>(g.n()));
    for (std::uint64_t run = 0; run < spec.runs; ++run) {
        const RngStream rs = RngStream::make(spec.seed, StreamPurpose::Trial, run);
        const EdgeSet realized = sample_realization(g, cfg.p, rs.child(StreamPurpose::Realization, 0)).realized;
        VimatchSession session(g, all, cfg.p, spec.vimatch, eps, ref);
        const Matching m = session.run(spec.vimatch.t, realized, rs.child(StreamPurpose::Vimatch, 0));
        std::fill(matched.begin(), matched.end(), 0);
        for (int e : m.edges) matched[static_cast<std::size_t>(g.edge(e).u)] = matched[static_cast<std::size_t>(g.edge(e).v)] = 1;
        for (auto& t : res.pairs) {
            const bool a = matched[static_cast<std::size_t>(t.u)], b = matched[static_cast<std::size_t>(t.v)];
            ++t.table[a ? (b ? 0 : 1) : (b ? 2 : 3)];
        }
    }
    for (auto& t : res.pairs) {
        t.test = chi_square_2x2(t.table[0], t.table[1], t.table[2], t.table[3]);
        if (!t.test) continue;
        ++res.tested_pairs;
        if (t.test->p_value < res.significance) ++res.rejected;
    }
    res.rejection_fraction =
        res.tested_pairs == 0 ? 0.0 : static_cast<double>(res.rejected) / static_cast<double>(res.tested_pairs);
    rep.criteria.push_back({"independence", false, res.rejection_fraction <= 0.05,
                            std::to_string(res.rejected) + "/" + std::to_string(res.tested_pairs) +
                                " tested pairs rejected at 0.01 (" +
                                std::to_string(res.eligible_pairs - res.tested_pairs) + " untestable)"});
    rep.independence = std::move(res);
    return rep;
}

Report run_vimatch_demo(const ExperimentSpec& spec) {
    spec.validate();
    Report rep;
    rep.command = "vimatch-demo";
    rep.spec = spec;
    const WeightedGraph g = spec.base_graph();
    const EdgeSet all = all_edges(g);
    const auto& cfg = spec.sparsifier;
    const ReferenceAlgorithm ref = make_reference(g, all, cfg.p);
    const Rational eps = vimatch_epsilon(spec);
    for (int depth : spec.depths) {
        std::vector<double> w;
        w.reserve(spec.runs);
        for (std::uint64_t run = 0; run < spec.runs; ++run) {
            const RngStream rs = RngStream::make(spec.seed, StreamPurpose::Trial, run);
            const EdgeSet realized = sample_realization(g, cfg.p, rs.child(StreamPurpose::Realization, 0)).realized;
            VimatchSession session(g, all, cfg.p, spec.vimatch, eps, ref);
            w.push_back(g.to_double(session.run(depth, realized, rs.child(StreamPurpose::Vimatch, 0)).weight));
        }
        DepthResult d;
        d.depth = depth;
        d.weight = mean_se(w);
        d.min_weight = w.empty() ? 0.0 : *std::min_element(w.begin(), w.end());
        d.max_weight = w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
        rep.depths.push_back(d);
    }
    for (const auto& d : rep.depths)
        if (d.depth == 0)
            rep.criteria.push_back({"depth_zero_empty", true, d.max_weight == 0.0, "max weight " + fmt(d.max_weight)});
    bool monotone = true;
    std::string curve;
    for (std::size_t i = 0; i < rep.depths.size(); ++i) {
        const auto& d = rep.depths[i];
        curve += (curve.empty() ? "" : ", ") + std::to_string(d.depth) + ":" + fmt(d.weight.mean);
        if (i == 0) continue;
        const auto& prev = rep.depths[i - 1].weight;
        const double se = std::sqrt(prev.standard_error * prev.standard_error + d.weight.standard_error * d.weight.standard_error);
        if (d.weight.mean < prev.mean - 3.0 * se) monotone = false;
    }
    rep.criteria.push_back({"depth_monotone", false, monotone, curve});
    return rep;
}

}  // namespace stochmatch
