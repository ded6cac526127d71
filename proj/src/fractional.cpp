#include "stochmatch/fractional.hpp"

#include "stochmatch/errors.hpp"

#include <algorithm>
#include <ostream>

namespace stochmatch {

namespace {

constexpr std::size_t kMaxRecordedViolations = 64;

void record(FractionalCheck& out, FractionalViolation v) {
    out.ok = false;
    if (out.violations.size() < kMaxRecordedViolations) out.violations.push_back(std::move(v));
}

}  // namespace

const char* to_string(AssignmentKind kind) {
    switch (kind) {
        case AssignmentKind::F: return "f";
        case AssignmentKind::G: return "g";
        case AssignmentKind::H: return "h";
        case AssignmentKind::X: return "x";
    }
    return "?";
}

Assignment Assignment::zeros(AssignmentKind kind, const WeightedGraph& g) {
    Assignment a;
    a.kind = kind;
    a.values.assign(static_cast<std::size_t>(g.m()), Rational(0));
    return a;
}

Rational Assignment::load(const WeightedGraph& g, int v) const {
    Rational s = 0;
    for (int e : g.incident(v)) s += (*this)[e];
    return s;
}

std::vector<Rational> Assignment::loads(const WeightedGraph& g) const {
    std::vector<Rational> out(static_cast<std::size_t>(g.n()), Rational(0));
    for (int e = 0; e < g.m(); ++e) {
        if (sgn((*this)[e]) == 0) continue;
        out[static_cast<std::size_t>(g.edge(e).u)] += (*this)[e];
        out[static_cast<std::size_t>(g.edge(e).v)] += (*this)[e];
    }
    return out;
}

EdgeSet Assignment::support() const {
    EdgeSet s;
    for (std::size_t e = 0; e < values.size(); ++e)
        if (sgn(values[e]) != 0) s.push_back(static_cast<int>(e));
    return s;
}

Rational assignment_weight(const Assignment& a, const WeightedGraph& g) {
    Rational s = 0;
    for (int e = 0; e < g.m(); ++e)
        if (sgn(a[e]) != 0) s += a[e] * g.weight(e);
    return s;
}

Matching draw_Z(const WeightedGraph& g, const EdgeSet& P, const EdgeSet& realized, const Probability& p,
                const Rational& epsilon, const VimatchParams& params, RngStream stream,
                std::vector<LevelTrace>* trace) {
    Matching z;
    if (P.empty()) {
        if (trace) trace->clear();
        return z;
    }
    VimatchSession session(g, P, p, params, params.epsilon.value_or(epsilon), make_reference(g, P, p));
    const Matching m = session.run(params.t, set_intersection(realized, P), stream.child(0));
    if (trace) *trace = session.trace();
    z.edges = sample_subset(m.edges, Probability(Rational(1) - epsilon), stream.child(1));
    z.weight = g.total_weight(z.edges);
    return z;
}

ZContext build_Z(const WeightedGraph& g, const Partition& partition, const EdgeStats& stats, const EdgeSet& realization,
                 const Probability& p, const Rational& epsilon, const VimatchParams& params, int K_Z, RngStream stream) {
    if (K_Z < 1) throw ConfigError("K_Z must be positive");
    ZContext ctx;
    ctx.reruns = K_Z;
    ctx.Z = draw_Z(g, partition.P, realization, p, epsilon, params, stream.child(0), &ctx.trace);

    ctx.q_P.assign(static_cast<std::size_t>(g.n()), Rational(0));
    for (int e : partition.P) {
        ctx.q_P[static_cast<std::size_t>(g.edge(e).u)] += stats.q_hat(e);
        ctx.q_P[static_cast<std::size_t>(g.edge(e).v)] += stats.q_hat(e);
    }

    std::vector<int> hits(static_cast<std::size_t>(g.n()), 0);
    if (!partition.P.empty()) {
        const RngStream base = stream.child(1);
        for (int k = 0; k < K_Z; ++k) {
            const RngStream s = base.child(static_cast<std::uint64_t>(k));
            const Realization fresh = sample_realization(g, p, s.child(0));
            for (int e : draw_Z(g, partition.P, fresh.realized, p, epsilon, params, s.child(1)).edges) {
                ++hits[static_cast<std::size_t>(g.edge(e).u)];
                ++hits[static_cast<std::size_t>(g.edge(e).v)];
            }
        }
    }
    const Rational cap = Rational(1) - epsilon;
    ctx.prob_in_Z.reserve(hits.size());
    for (int h : hits) ctx.prob_in_Z.push_back(std::min(make_rational(h, K_Z), cap));
    return ctx;
}

Assignment compute_f(const WeightedGraph& g, const SparsifierOutput& sampler, const Partition& partition) {
    Assignment f = Assignment::zeros(AssignmentKind::F, g);
    if (sampler.R == 0) return f;
    std::vector<std::uint64_t> count(static_cast<std::size_t>(g.m()), 0);
    for (const auto& m : sampler.matchings)
        for (int e : m.edges) ++count[static_cast<std::size_t>(e)];
    for (int e : partition.N)
        f[e] = make_rational(static_cast<long long>(count[static_cast<std::size_t>(e)]),
                             static_cast<long long>(sampler.R));
    return f;
}

Assignment compute_g(const WeightedGraph& g, const Assignment& f, const ZContext& z, const Partition& partition,
                     const SparsifierConfig& cfg) {
    Assignment out = Assignment::zeros(AssignmentKind::G, g);
    const auto load = f.loads(g);
    const Rational eps3 = pow(cfg.epsilon, 3);
    for (int e : partition.N) {
        if (sgn(f[e]) == 0) continue;
        if (compare_q_threshold(f[e], cfg.p, cfg.epsilon, 7, partition.Delta, partition.lambda) > 0) continue;
        const auto u = static_cast<std::size_t>(g.edge(e).u);
        const auto v = static_cast<std::size_t>(g.edge(e).v);
        if (load[u] > 1 - z.q_P[u] + eps3 || load[v] > 1 - z.q_P[v] + eps3) continue;
        out[e] = f[e];
    }
    return out;
}

Assignment compute_h(const WeightedGraph& g, const Assignment& ga, const ZContext& z, const EdgeSet& realization,
                     const Probability& p, const Rational& epsilon) {
    Assignment out = Assignment::zeros(AssignmentKind::H, g);
    if (sgn(p.exact()) == 0) return out;
    std::vector<char> in_Z(static_cast<std::size_t>(g.n()), 0);
    for (int e : z.Z.edges) in_Z[static_cast<std::size_t>(g.edge(e).u)] = in_Z[static_cast<std::size_t>(g.edge(e).v)] = 1;
    for (int e : realization) {
        if (sgn(ga[e]) == 0) continue;
        const int u = g.edge(e).u, v = g.edge(e).v;
        if (in_Z[static_cast<std::size_t>(u)] || in_Z[static_cast<std::size_t>(v)]) continue;
        const Rational free_u = 1 - z.prob_in_Z[static_cast<std::size_t>(u)];
        const Rational free_v = 1 - z.prob_in_Z[static_cast<std::size_t>(v)];
        if (free_u < epsilon || free_v < epsilon)
            throw DegenerateDenominator("Pr[v not in Z] below epsilon at edge " + std::to_string(e));
        out[e] = ga[e] / (p.exact() * free_u * free_v);
    }
    return out;
}

Assignment compute_x(const WeightedGraph& g, const Assignment& h, const ZContext& z, const Partition& partition,
                     const Rational& epsilon) {
    Assignment out = Assignment::zeros(AssignmentKind::X, g);
    const Rational cap = 1 + 3 * epsilon;
    const auto load = h.loads(g);
    for (int e : partition.N) {
        if (sgn(h[e]) == 0) continue;
        if (load[static_cast<std::size_t>(g.edge(e).u)] > cap || load[static_cast<std::size_t>(g.edge(e).v)] > cap)
            continue;
        out[e] = h[e] / cap;
    }
    for (int e : z.Z.edges)
        if (std::binary_search(partition.P.begin(), partition.P.end(), e)) out[e] = 1;
    return out;
}

namespace {

class OddSetScanner {
public:
    OddSetScanner(const WeightedGraph& g, const Assignment& x, std::vector<int> vertices, int max_size,
                  FractionalCheck& out)
        : vertices_(std::move(vertices)), max_size_(max_size), out_(out) {
        const std::size_t k = vertices_.size();
        pair_.assign(k * k, Rational(0));
        std::vector<int> local(static_cast<std::size_t>(g.n()), -1);
        for (std::size_t i = 0; i < k; ++i) local[static_cast<std::size_t>(vertices_[i])] = static_cast<int>(i);
        for (int e : x.support()) {
            const int a = local[static_cast<std::size_t>(g.edge(e).u)];
            const int b = local[static_cast<std::size_t>(g.edge(e).v)];
            if (a < 0 || b < 0) continue;
            pair_[static_cast<std::size_t>(a) * k + static_cast<std::size_t>(b)] += x[e];
            pair_[static_cast<std::size_t>(b) * k + static_cast<std::size_t>(a)] += x[e];
        }
    }

    void run() {
        Rational zero = 0;
        extend(0, zero);
    }

private:
    void extend(std::size_t start, const Rational& sum) {
        const int size = static_cast<int>(chosen_.size());
        if (size >= 3 && size % 2 == 1) {
            ++out_.subsets_checked;
            const Rational bound((size - 1), 2);
            if (sum > bound) {
                FractionalViolation v;
                v.kind = "blossom";
                for (std::size_t i : chosen_) v.vertices.push_back(vertices_[i]);
                v.value = sum;
                v.bound = bound;
                record(out_, std::move(v));
            }
        }
        if (size >= max_size_) return;
        const std::size_t k = vertices_.size();
        for (std::size_t i = start; i < k; ++i) {
            Rational next = sum;
            for (std::size_t j : chosen_) next += pair_[j * k + i];
            chosen_.push_back(i);
            extend(i + 1, next);
            chosen_.pop_back();
        }
    }

    std::vector<int> vertices_;
    int max_size_;
    FractionalCheck& out_;
    std::vector<Rational> pair_;
    std::vector<std::size_t> chosen_;
};

}  // namespace

FractionalCheck check_fractional(const Assignment& x, const WeightedGraph& g, const EdgeSet& Q,
                                 const EdgeSet& realization, const Rational& epsilon,
                                 const FractionalCheckOptions& options) {
    if (static_cast<int>(x.values.size()) != g.m()) throw ConfigError("assignment size does not match the graph");
    FractionalCheck out;
    const auto load = x.loads(g);
    for (int v = 0; v < g.n(); ++v) {
        if (load[static_cast<std::size_t>(v)] > 1) {
            FractionalViolation w;
            w.kind = "vertex_load";
            w.vertices = {v};
            w.value = load[static_cast<std::size_t>(v)];
            w.bound = 1;
            record(out, std::move(w));
        }
    }
    const EdgeSet allowed = set_intersection(normalized(Q), normalized(realization));
    for (int e = 0; e < g.m(); ++e) {
        if (sgn(x[e]) < 0) {
            FractionalViolation w;
            w.kind = "negative";
            w.edge = e;
            w.vertices = {g.edge(e).u, g.edge(e).v};
            w.value = x[e];
            w.bound = 0;
            record(out, std::move(w));
        }
        if (sgn(x[e]) != 0 && !std::binary_search(allowed.begin(), allowed.end(), e)) {
            FractionalViolation w;
            w.kind = "support";
            w.edge = e;
            w.vertices = {g.edge(e).u, g.edge(e).v};
            w.value = x[e];
            w.bound = 0;
            record(out, std::move(w));
        }
    }

    if (options.max_odd_size) {
        out.max_odd_size = *options.max_odd_size;
    } else {
        const std::uint64_t inv = ceil_to_u64(Rational(1) / epsilon);
        out.max_odd_size = static_cast<int>(std::min<std::uint64_t>(inv, static_cast<std::uint64_t>(options.blossom_cap)));
    }
    std::vector<int> support_vertices;
    for (int v = 0; v < g.n(); ++v)
        if (sgn(load[static_cast<std::size_t>(v)]) != 0) support_vertices.push_back(v);
    if (out.max_odd_size >= 3) {
        OddSetScanner scan(g, x, std::move(support_vertices), out.max_odd_size, out);
        scan.run();
    }
    return out;
}

void write_certificate(std::ostream& out, const WeightedGraph& g, const Assignment& f, const Assignment& ga,
                       const Assignment& h, const Assignment& x) {
    out << "# edge u v f g h x\n";
    for (int e = 0; e < g.m(); ++e) {
        out << e << ' ' << g.edge(e).u << ' ' << g.edge(e).v << ' ' << to_string(f[e]) << ' ' << to_string(ga[e])
            << ' ' << to_string(h[e]) << ' ' << to_string(x[e]) << '\n';
    }
    const auto lf = f.loads(g), lg = ga.loads(g), lh = h.loads(g), lx = x.loads(g);
    out << "# vertex f_v g_v h_v x_v\n";
    for (int v = 0; v < g.n(); ++v) {
        const auto i = static_cast<std::size_t>(v);
        out << v << ' ' << to_string(lf[i]) << ' ' << to_string(lg[i]) << ' ' << to_string(lh[i]) << ' '
            << to_string(lx[i]) << '\n';
    }
}

}  // namespace stochmatch
