#include "doctest.h"
#include "vimatch_fixtures.hpp"

#include "stochmatch/errors.hpp"
#include "stochmatch/mwm.hpp"
#include "stochmatch/vimatch.hpp"

#include <functional>
#include <set>

using namespace stochmatch;
using testutil::make_graph;

namespace {

using testutil::exhaustive_walks;

std::vector<char> none(int n) { return std::vector<char>(static_cast<std::size_t>(n), 0); }

std::set<MultiWalk> walk_set(const GainHypergraph& H) {
    std::set<MultiWalk> out;
    for (const auto& h : H.edges) out.insert(canonical_walk(h.walk));
    return out;
}

}  // namespace

TEST_SUITE("vimatch") {

TEST_CASE("profile validation") {
    WeightedGraph g = make_graph(3, {{0, 1, 1}, {1, 2, 1}});
    CHECK_THROWS_AS(Profile(g, {{{0}, {1}}}), ConfigError);
    CHECK_THROWS_AS(Profile(g, {{{0, 1}, {0, 1}}}), ConfigError);
    Profile p(g, {{{0, 1}, {1}}, {{0}, {}}});
    CHECK(p.alpha() == 2);
    CHECK(p.mate_edge(0, 2) == 1);
    CHECK(p.mate_edge(1, 0) == -1);
    CHECK(p.matched_count(1) == 1);
}

TEST_CASE("alternation and gain") {
    WeightedGraph g = make_graph(4, {{0, 1, 5}, {1, 2, 3}, {2, 3, 4}});
    Profile p(g, {{{0, 1, 2}, {1}}});
    CHECK(is_alternating({}, p));
    CHECK(gain({}, p) == 0);
    CHECK_FALSE(is_alternating({{0, 0}, {0, 2}}, p));  // not a walk
    CHECK(is_alternating({{0, 0}, {0, 1}, {0, 2}}, p));
    CHECK(gain({{0, 0}, {0, 1}, {0, 2}}, p) == 6);
    CHECK_FALSE(is_alternating({{0, 0}}, p));  // vertex 1 would be matched twice
    Profile q(g, {{{0, 1, 2}, {}}});
    CHECK(is_alternating({{0, 0}}, q));
    CHECK_FALSE(is_alternating({{0, 0}, {0, 1}}, q));  // two unmatched in a row
    CHECK(gain({{0, 0}}, q) == 5);
}

TEST_CASE("walk degrees and applicability") {
    WeightedGraph g = make_graph(4, {{0, 1, 5}, {1, 2, 3}, {2, 3, 4}});
    Profile p(g, {{{0, 1, 2}, {1}}});
    const MultiWalk w{{0, 0}, {0, 1}, {0, 2}};
    CHECK(walk_degrees(w, p, 1) == std::pair{1, 1});
    CHECK(walk_degrees(w, p, 0) == std::pair{0, 1});
    CHECK(walk_degrees({{0, 1}}, p, 1) == std::pair{1, 0});
    CHECK(walk_degrees({{0, 1}}, p, 3) == std::pair{0, 0});
    std::vector<char> sat = none(4);
    CHECK(is_applicable(w, p, sat));
    sat[0] = 1;
    CHECK_FALSE(is_applicable(w, p, sat));
    // matched at both ends: applicable for every saturated set
    const MultiWalk m{{0, 1}};
    std::vector<char> all(4, 1);
    CHECK(is_applicable(m, p, all));
}

TEST_CASE("apply walk") {
    WeightedGraph g = make_graph(3, {{0, 1, 5}, {1, 2, 3}});
    Profile p(g, {{{0, 1}, {1}}});
    Profile same = apply_walk(p, {});
    CHECK(same.entry(0).matching == p.entry(0).matching);
    Profile next = apply_walk(p, {{0, 0}, {0, 1}});
    CHECK(next.entry(0).matching == EdgeSet{0});
    CHECK(next.total_weight() - p.total_weight() == gain({{0, 0}, {0, 1}}, p));
    CHECK(next.total_weight() - p.total_weight() == 2);
    CHECK_THROWS_AS(apply_walk(p, {{0, 0}}), InvalidWalk);
}

TEST_CASE("build_H with empty matchings and l = 1") {
    WeightedGraph g = make_graph(4, {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}});
    Profile p(g, {{{0, 1, 2}, {}}, {{1, 2}, {}}});
    GainHypergraph H = build_H(p, none(4), 1, 1000);
    CHECK(H.edges.size() == 5);
    for (const auto& h : H.edges) {
        REQUIRE(h.walk.size() == 1);
        CHECK(h.gain == g.edge(h.walk[0].e).w);
    }
    CHECK_FALSE(H.truncated);
    CHECK(H.rank() == 2);
}

TEST_CASE("build_H truncation flag") {
    WeightedGraph g = make_graph(4, {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}});
    Profile p(g, {{{0, 1, 2}, {}}});
    GainHypergraph H = build_H(p, none(4), 1, 2);
    CHECK(H.edges.size() == 2);
    CHECK(H.truncated);
}

TEST_CASE("build_H matches exhaustive enumeration") {
    Rng rng(RngStream::make(3, StreamPurpose::Test, 6));
    int compared = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(3));
        WeightedGraph g = testutil::random_graph(rng, n, 5, 6);
        const int alpha = 1 + static_cast<int>(rng.below(3));
        Profile prof(g, testutil::random_entries(rng, g, alpha));
        const auto sat = testutil::random_saturated(rng, n);
        const int l = 1 + static_cast<int>(rng.below(4));
        if (g.m() * alpha > 9 && l > 3) continue;
        const auto expected = exhaustive_walks(prof, sat, l);
        const GainHypergraph H = build_H(prof, sat, l, 100000);
        CHECK(walk_set(H) == expected);
        CHECK(H.edges.size() == expected.size());
        for (const auto& h : H.edges) {
            CHECK(h.gain == gain(h.walk, prof));
            CHECK(h.vertices == walk_vertex_set(g, h.walk));
        }
        GainHypergraph pos = build_H(prof, sat, l, 100000, true);
        std::size_t positive = 0;
        for (const auto& h : H.edges) positive += h.gain > 0 ? 1 : 0;
        CHECK(pos.edges.size() == positive);
        ++compared;
    }
    CHECK(compared > 60);
}

TEST_CASE("greedy hypergraph matching") {
    GainHypergraph H;
    CHECK(greedy_hypergraph_matching(H).empty());
    H.edges = {{{0, 1}, 3, {}}, {{1, 2}, 2, {}}, {{2, 3}, 4, {}}};
    CHECK(greedy_hypergraph_matching(H) == std::vector<int>{0, 2});
    GainHypergraph neg;
    neg.edges = {{{0, 1}, -1, {}}};
    CHECK(greedy_hypergraph_matching(neg).empty());
    GainHypergraph tie;
    tie.edges = {{{0, 1}, 5, {}}, {{1, 2}, 5, {}}};
    CHECK(greedy_hypergraph_matching(tie) == std::vector<int>{0});
}

TEST_CASE("findmatching base cases") {
    WeightedGraph g = make_graph(2, {{0, 1, 7}});
    const Probability one(Rational(1));
    VimatchParams params;
    params.epsilon = make_rational(1, 2);
    params.alpha = 2;
    params.t = 1;
    params.K_gamma = 8;
    CHECK(findmatching(0, g, {0}, one, params, RngStream::make(1, StreamPurpose::Vimatch)).edges.empty());
    std::vector<LevelTrace> trace;
    Matching m = findmatching(1, g, {0}, one, params, RngStream::make(1, StreamPurpose::Vimatch), &trace);
    CHECK(m.edges == EdgeSet{0});
    REQUIRE(trace.size() == 1);
    CHECK(trace[0].saturated == 0);
    CHECK(trace[0].residual == 0);
    CHECK(findmatching(1, g, {}, one, params, RngStream::make(1, StreamPurpose::Vimatch)).edges.empty());
}

TEST_CASE("findmatching returns a matching of its input") {
    WeightedGraph g = generate_graph("er:9:14:1:5", RngStream::make(2, StreamPurpose::Generator));
    const Probability half(make_rational(1, 2));
    VimatchParams params;
    params.epsilon = make_rational(1, 2);
    params.K_gamma = 8;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const EdgeSet input = sample_realization(g, half, RngStream::make(s, StreamPurpose::Realization)).realized;
        std::vector<LevelTrace> trace;
        Matching m = findmatching(2, g, input, half, params, RngStream::make(s, StreamPurpose::Vimatch), &trace);
        CHECK(is_matching(g, m.edges));
        CHECK(set_difference(m.edges, input).empty());
        for (const auto& t : trace) CHECK(t.residual == 0);
    }
}

TEST_CASE("findmatching is reproducible") {
    WeightedGraph g = generate_graph("er:8:12:1:5", RngStream::make(5, StreamPurpose::Generator));
    const Probability half(make_rational(1, 2));
    VimatchParams params;
    params.epsilon = make_rational(1, 2);
    params.K_gamma = 4;
    const EdgeSet input = all_edges(g);
    const RngStream s = RngStream::make(5, StreamPurpose::Vimatch);
    CHECK(findmatching(2, g, input, half, params, s) == findmatching(2, g, input, half, params, s));
}

TEST_CASE("recursion budget and parameter validation") {
    WeightedGraph g = make_graph(2, {{0, 1, 1}});
    VimatchParams params;
    params.epsilon = make_rational(1, 2);
    params.budget = 10;
    CHECK_THROWS_AS(findmatching(3, g, {0}, Probability(Rational(1)), params, RngStream{}), RecursionBudgetExceeded);
    VimatchParams bad;
    bad.l = 6;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.l = 4;
    bad.alpha = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    VimatchParams cf = VimatchParams::closed_form(make_rational(1, 2));
    CHECK(cf.alpha == 4097);
    CHECK(cf.t == 1048576);
    CHECK(cf.l == 24);
    params = cf;
    CHECK_THROWS_AS(findmatching(cf.t, g, {0}, Probability(Rational(1)), params, RngStream{}), RecursionBudgetExceeded);
}

TEST_CASE("construct_H_prime examples") {
    WeightedGraph g = make_graph(4, {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}});
    Profile p(g, {{{0, 1, 2}, {1}}, {{0, 1, 2}, {0, 2}}});
    GainHypergraph same = construct_H_prime(p, none(4), {{1}, {0, 2}}, 4, RngStream{});
    CHECK(same.edges.empty());

    WeightedGraph e = make_graph(2, {{0, 1, 9}});
    Profile single(e, {{{0}, {}}});
    GainHypergraph one = construct_H_prime(single, none(2), {{0}}, 4, RngStream{});
    REQUIRE(one.edges.size() == 1);
    CHECK(one.edges[0].vertices == std::vector<int>{0, 1});
    CHECK(one.edges[0].gain == 9);
}

}  // TEST_SUITE

TEST_SUITE("vimatch") {

TEST_CASE("construct_H_prime contract on random instances") {
    Rng rng(RngStream::make(8, StreamPurpose::Test, 1));
    int walks = 0;
    std::size_t dropped = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 4 + static_cast<int>(rng.below(6));
        WeightedGraph g = testutil::random_graph(rng, n, 14, 9);
        const int alpha = 1 + static_cast<int>(rng.below(4));
        auto entries = testutil::random_entries(rng, g, alpha);
        std::vector<EdgeSet> ref;
        for (const auto& en : entries) ref.push_back(testutil::random_matching(rng, g, en.subgraph));
        Profile prof(g, entries);
        const auto sat = testutil::random_saturated(rng, n);
        const int l = 4 * (1 + static_cast<int>(rng.below(3)));
        GainHypergraph Hp = construct_H_prime(prof, sat, ref, l, RngStream::make(trial, StreamPurpose::HPrime));
        CHECK(Hp.max_degree(n) <= 2 * alpha);
        dropped += Hp.dropped;
        for (const auto& h : Hp.edges) {
            ++walks;
            CHECK(static_cast<int>(h.walk.size()) <= l);
            INFO("trial " << trial);
            CHECK(is_alternating(h.walk, prof));
            CHECK(is_applicable(h.walk, prof, sat));
            CHECK(h.gain == gain(h.walk, prof));
        }
    }
    CHECK(walks > 100);
    CHECK(dropped * 50 <= static_cast<std::size_t>(walks));
}

}  // TEST_SUITE
