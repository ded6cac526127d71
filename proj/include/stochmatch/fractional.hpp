#pragma once

#include "stochmatch/graph.hpp"
#include "stochmatch/numeric.hpp"
#include "stochmatch/sparsifier.hpp"
#include "stochmatch/vimatch.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace stochmatch {

enum class AssignmentKind { F, G, H, X };

const char* to_string(AssignmentKind kind);

/// Edge-indexed fractional values.
struct Assignment {
    AssignmentKind kind = AssignmentKind::F;
    std::vector<Rational> values;

    static Assignment zeros(AssignmentKind kind, const WeightedGraph& g);

    const Rational& operator[](int e) const { return values[static_cast<std::size_t>(e)]; }
    Rational& operator[](int e) { return values[static_cast<std::size_t>(e)]; }

    /// a_v = sum of a_e over edges at v.
    Rational load(const WeightedGraph& g, int v) const;
    std::vector<Rational> loads(const WeightedGraph& g) const;
    EdgeSet support() const;
};

/// sum_e a_e w_e in graph units.
Rational assignment_weight(const Assignment& a, const WeightedGraph& g);

struct ZContext {
    Matching Z;
    std::vector<Rational> prob_in_Z;  // per vertex, at most 1 - eps
    std::vector<Rational> q_P;        // per vertex, sum of q_hat over P edges
    int reruns = 0;
    std::vector<LevelTrace> trace;
};

/// One draw of Z: findmatching on the realized P edges with reference mwm(H u sample(E \ P)) n H,
/// followed by dropping each edge with probability eps.
Matching draw_Z(const WeightedGraph& g, const EdgeSet& P, const EdgeSet& realized, const Probability& p,
                const Rational& epsilon, const VimatchParams& params, RngStream stream,
                std::vector<LevelTrace>* trace = nullptr);

/// Z on `realization` plus Pr[v in Z] from K_Z reruns on fresh realizations of P.
ZContext build_Z(const WeightedGraph& g, const Partition& partition, const EdgeStats& stats, const EdgeSet& realization,
                 const Probability& p, const Rational& epsilon, const VimatchParams& params, int K_Z, RngStream stream);

/// f_e = |{i : e in MM(G_i)}| / R on N, 0 elsewhere.
Assignment compute_f(const WeightedGraph& g, const SparsifierOutput& sampler, const Partition& partition);

/// g_e = f_e if f_e <= p^2 eps^7 Delta^-lambda and f_u, f_v <= 1 - q_P + eps^3, else 0.
Assignment compute_g(const WeightedGraph& g, const Assignment& f, const ZContext& z, const Partition& partition,
                     const SparsifierConfig& cfg);

/// h_e = g_e / (p Pr[u not in Z] Pr[v not in Z]) when e is realized and u, v are free in Z.
Assignment compute_h(const WeightedGraph& g, const Assignment& ga, const ZContext& z, const EdgeSet& realization,
                     const Probability& p, const Rational& epsilon);

/// x = h / (1 + 3 eps) on N where both h loads are at most 1 + 3 eps; x = 1 on Z; 0 elsewhere.
Assignment compute_x(const WeightedGraph& g, const Assignment& h, const ZContext& z, const Partition& partition,
                     const Rational& epsilon);

struct FractionalViolation {
    std::string kind;  // vertex_load, negative, support, blossom
    std::vector<int> vertices;
    int edge = -1;
    Rational value;
    Rational bound;
};

struct FractionalCheck {
    bool ok = true;
    std::vector<FractionalViolation> violations;
    int max_odd_size = 0;
    std::uint64_t subsets_checked = 0;
};

struct FractionalCheckOptions {
    int blossom_cap = 7;
    std::optional<int> max_odd_size;  // replaces min(ceil(1/eps), blossom_cap)
};

FractionalCheck check_fractional(const Assignment& x, const WeightedGraph& g, const EdgeSet& Q,
                                 const EdgeSet& realization, const Rational& epsilon,
                                 const FractionalCheckOptions& options = {});

/// Per-edge rows "edge u v f g h x" followed by per-vertex loads.
void write_certificate(std::ostream& out, const WeightedGraph& g, const Assignment& f, const Assignment& ga,
                       const Assignment& h, const Assignment& x);

}  // namespace stochmatch
