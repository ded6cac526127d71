#include "doctest.h"
#include "vimatch_fixtures.hpp"

#include "stochmatch/vimatch.hpp"

using namespace stochmatch;

TEST_SUITE("walks") {

TEST_CASE("walk properties on random alternating walks") {
    Rng rng(RngStream::make(21, StreamPurpose::Test, 0));
    int both_matched = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(6));
        WeightedGraph g = testutil::random_graph(rng, n, 12, 9);
        Profile prof(g, testutil::random_entries(rng, g, 1 + static_cast<int>(rng.below(3))));
        const MultiWalk w = testutil::random_alternating_walk(rng, prof, 8);
        if (w.empty()) continue;
        const auto props = testutil::check_walk_properties(rng, w, prof);
        CHECK(props.interior);
        CHECK(props.boundary);
        CHECK(props.applicable);
        if (prof.in_matching(w.front().s, w.front().e) && prof.in_matching(w.back().s, w.back().e)) ++both_matched;
    }
    CHECK(both_matched > 10);
}

TEST_CASE("unmatched end at a saturated vertex is not applicable") {
    WeightedGraph g = testutil::make_graph(3, {{0, 1, 1}, {1, 2, 1}});
    Profile prof(g, {{{0, 1}, {1}}});
    const MultiWalk w{{0, 0}, {0, 1}};
    std::vector<char> sat{1, 0, 0};
    CHECK(is_alternating(w, prof));
    CHECK_FALSE(is_applicable(w, prof, sat));
    sat = {0, 0, 1};
    CHECK(is_applicable(w, prof, sat));
}

TEST_CASE("gain identity after greedy selection") {
    Rng rng(RngStream::make(22, StreamPurpose::Test, 0));
    std::size_t walks = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(5));
        WeightedGraph g = testutil::random_graph(rng, n, 9, 9);
        Profile prof(g, testutil::random_entries(rng, g, 1 + static_cast<int>(rng.below(3))));
        const auto id = testutil::check_gain_identity(prof, testutil::random_saturated(rng, n), 4);
        CHECK(id.residual() == 0);
        CHECK(id.after >= id.before);
        walks += id.walks;
    }
    CHECK(walks > 100);
}

TEST_CASE("greedy bound on random hypergraphs") {
    Rng rng(RngStream::make(23, StreamPurpose::Test, 0));
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(10));
        const auto H = testutil::random_hypergraph(rng, n, static_cast<int>(rng.below(25)), 4, 20);
        CHECK(testutil::check_greedy_bound(H, n).holds());
    }
}

}  // TEST_SUITE
