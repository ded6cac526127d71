#include "doctest.h"
#include "helpers.hpp"

#include "stochmatch/errors.hpp"
#include "stochmatch/fractional.hpp"

#include <sstream>

using namespace stochmatch;
using testutil::make_graph;

namespace {

Rational q(long long a, long long b) { return make_rational(a, b); }

ZContext empty_z(const WeightedGraph& g) {
    ZContext z;
    z.prob_in_Z.assign(static_cast<std::size_t>(g.n()), Rational(0));
    z.q_P.assign(static_cast<std::size_t>(g.n()), Rational(0));
    return z;
}

}  // namespace

TEST_SUITE("fractional") {

TEST_CASE("assignment weight") {
    WeightedGraph g = make_graph(4, {{0, 1, 7}, {1, 2, 2}, {2, 3, 4}});
    Assignment a = Assignment::zeros(AssignmentKind::X, g);
    CHECK(assignment_weight(a, g) == 0);
    a[0] = 1;
    CHECK(assignment_weight(a, g) == 7);
    a[0] = 0;
    a[1] = a[2] = q(1, 2);
    CHECK(assignment_weight(a, g) == 3);
    CHECK(a.load(g, 2) == 1);
    CHECK(a.support() == EdgeSet{1, 2});
}

TEST_CASE("f counts matchings on N only") {
    WeightedGraph g = make_graph(3, {{0, 1, 1}, {1, 2, 1}});
    SparsifierOutput s;
    s.R = 4;
    s.matchings = {{{0}, 1}, {{1}, 1}, {{1}, 1}, {{}, 0}};
    Partition part;
    part.P = {1};
    part.N = {0};
    Assignment f = compute_f(g, s, part);
    CHECK(f[0] == q(1, 4));
    CHECK(f[1] == 0);
    part.P = {};
    part.N = {0, 1};
    f = compute_f(g, s, part);
    CHECK(f[1] == q(1, 2));
    CHECK(f.load(g, 1) == q(3, 4));
}

TEST_CASE("g caps") {
    WeightedGraph g = make_graph(3, {{0, 1, 1}, {1, 2, 1}});
    SparsifierConfig cfg;
    cfg.epsilon = q(1, 2);
    cfg.p = Probability(Rational(1));
    Partition part;
    part.N = {0, 1};
    part.Delta = 1;
    part.lambda = 1;
    ZContext z = empty_z(g);
    Assignment f = Assignment::zeros(AssignmentKind::F, g);
    f[0] = q(1, 256);  // below eps^7 = 1/128
    f[1] = q(1, 64);   // above
    Assignment ga = compute_g(g, f, z, part, cfg);
    CHECK(ga[0] == f[0]);
    CHECK(ga[1] == 0);
    z.q_P[0] = q(9, 8);  // 1 - q_P + eps^3 = 0 < f_0
    ga = compute_g(g, f, z, part, cfg);
    CHECK(ga[0] == 0);
}

TEST_CASE("h rescaling") {
    WeightedGraph g = make_graph(4, {{0, 1, 1}, {2, 3, 1}, {1, 2, 1}});
    ZContext z = empty_z(g);
    z.prob_in_Z = {q(1, 5), q(1, 5), 0, 0};
    z.Z.edges = {1};
    Assignment ga = Assignment::zeros(AssignmentKind::G, g);
    ga[0] = q(1, 10);
    ga[2] = q(1, 10);
    const Probability p(q(1, 2));
    Assignment h = compute_h(g, ga, z, {0, 2}, p, q(1, 10));
    CHECK(h[0] == q(5, 16));  // 0.1 / (0.5 * 0.64)
    CHECK(h[2] == 0);         // vertex 2 is in Z
    h = compute_h(g, ga, z, {2}, p, q(1, 10));
    CHECK(h[0] == 0);  // not realized
    z.prob_in_Z[0] = q(19, 20);
    CHECK_THROWS_AS(compute_h(g, ga, z, {0}, p, q(1, 10)), DegenerateDenominator);
}

TEST_CASE("x scaling, cutoff and Z edges") {
    WeightedGraph g = make_graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
    Partition part;
    part.N = {0, 1};
    part.P = {2};
    ZContext z = empty_z(g);
    z.Z.edges = {2};
    Assignment h = Assignment::zeros(AssignmentKind::H, g);
    h[0] = q(31, 100);
    Assignment x = compute_x(g, h, z, part, q(1, 10));
    CHECK(x[0] == q(31, 130));
    CHECK(x[2] == 1);
    h[1] = 2;  // load at vertex 1 exceeds 1.3
    x = compute_x(g, h, z, part, q(1, 10));
    CHECK(x[0] == 0);
    CHECK(x[1] == 0);
}

TEST_CASE("fractional checks") {
    WeightedGraph g = make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
    const EdgeSet all{0, 1, 2};
    Assignment x = Assignment::zeros(AssignmentKind::X, g);
    CHECK(check_fractional(x, g, all, all, q(1, 3)).ok);

    x[0] = x[1] = 1;
    auto c = check_fractional(x, g, all, all, q(1, 3));
    CHECK_FALSE(c.ok);
    REQUIRE_FALSE(c.violations.empty());
    CHECK(c.violations[0].kind == "vertex_load");
    CHECK(c.violations[0].vertices == std::vector<int>{1});

    x = Assignment::zeros(AssignmentKind::X, g);
    x[0] = x[1] = x[2] = q(2, 5);
    c = check_fractional(x, g, all, all, q(1, 3));
    CHECK_FALSE(c.ok);
    REQUIRE(c.violations.size() == 1);
    CHECK(c.violations[0].kind == "blossom");
    CHECK(c.violations[0].value == q(6, 5));
    CHECK(c.max_odd_size == 3);
    // with eps = 1/2 the largest odd size is 2, so no blossom check runs
    CHECK(check_fractional(x, g, all, all, q(1, 2)).ok);

    x = Assignment::zeros(AssignmentKind::X, g);
    x[2] = q(1, 2);
    c = check_fractional(x, g, all, {0, 1}, q(1, 3));
    CHECK_FALSE(c.ok);
    CHECK(c.violations[0].kind == "support");
    x[2] = -1;
    c = check_fractional(x, g, all, all, q(1, 3));
    CHECK(c.violations[0].kind == "negative");
}

TEST_CASE("blossom cap and override") {
    WeightedGraph g = make_graph(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 0, 1}});
    Assignment x = Assignment::zeros(AssignmentKind::X, g);
    for (int e = 0; e < 5; ++e) x[e] = q(1, 2);  // x(U) = 5/2 > 2 on the 5-cycle
    const EdgeSet all{0, 1, 2, 3, 4};
    auto c = check_fractional(x, g, all, all, q(1, 100));
    CHECK(c.max_odd_size == 7);
    CHECK_FALSE(c.ok);
    FractionalCheckOptions opts;
    opts.max_odd_size = 3;
    CHECK(check_fractional(x, g, all, all, q(1, 100), opts).ok);
}

TEST_CASE("Z on an empty crucial set") {
    WeightedGraph g = make_graph(2, {{0, 1, 1}});
    SparsifierConfig cfg;
    EdgeStats stats = estimate_edge_stats(g, cfg.p, 10, RngStream::make(1, StreamPurpose::EdgeStats));
    Partition part;
    part.N = {0};
    VimatchParams params;
    ZContext z = build_Z(g, part, stats, {0}, cfg.p, cfg.epsilon, params, 4, RngStream::make(1, StreamPurpose::ZMatching));
    CHECK(z.Z.edges.empty());
    CHECK(z.prob_in_Z == std::vector<Rational>{0, 0});
}

TEST_CASE("Z with full drop and with a single crucial edge") {
    WeightedGraph g = make_graph(2, {{0, 1, 1}});
    const Probability one(Rational(1));
    EdgeStats stats = estimate_edge_stats(g, one, 10, RngStream::make(2, StreamPurpose::EdgeStats));
    Partition part;
    part.P = {0};
    VimatchParams params;
    params.t = 1;
    params.K_gamma = 4;
    ZContext z = build_Z(g, part, stats, {0}, one, Rational(1), params, 8, RngStream::make(2, StreamPurpose::ZMatching));
    CHECK(z.Z.edges.empty());
    CHECK(z.prob_in_Z[0] == 0);
    CHECK(z.q_P[0] == 1);

    const Rational eps = q(1, 4);
    z = build_Z(g, part, stats, {0}, one, eps, params, 400, RngStream::make(3, StreamPurpose::ZMatching));
    CHECK(z.prob_in_Z[0] <= 1 - eps);
    CHECK(z.prob_in_Z[0] == z.prob_in_Z[1]);
    CHECK(to_double(z.prob_in_Z[0]) == doctest::Approx(0.75).epsilon(0.1));
}

TEST_CASE("certificate rows") {
    WeightedGraph g = make_graph(2, {{0, 1, 1}});
    Assignment a = Assignment::zeros(AssignmentKind::F, g);
    a[0] = q(1, 3);
    std::ostringstream os;
    write_certificate(os, g, a, a, a, a);
    CHECK(os.str() == "# edge u v f g h x\n0 0 1 1/3 1/3 1/3 1/3\n# vertex f_v g_v h_v x_v\n0 1/3 1/3 1/3 1/3\n1 1/3 1/3 1/3 1/3\n");
}

}  // TEST_SUITE
