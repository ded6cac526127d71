#include "doctest.h"

#include "stochmatch/errors.hpp"
#include "stochmatch/numeric.hpp"
#include "stochmatch/rng.hpp"
#include "stochmatch/stats.hpp"

#include <cmath>

#include <set>

using namespace stochmatch;

TEST_SUITE("numeric") {

TEST_CASE("decimal parsing is exact") {
    CHECK(parse_decimal("0.1") == make_rational(1, 10));
    CHECK(parse_decimal("-2.50") == make_rational(-5, 2));
    CHECK(parse_decimal("1.5e-3") == make_rational(3, 2000));
    CHECK(parse_decimal("12E2") == Rational(1200));
    CHECK_THROWS_AS(parse_decimal("1e"), ParseError);
    CHECK_THROWS_AS(parse_decimal(""), ParseError);
    CHECK_THROWS_AS(parse_decimal("1.2.3"), ParseError);
    CHECK(rational_from_double(0.3) == make_rational(3, 10));
}

TEST_CASE("probability thresholds") {
    const Probability one(Rational(1)), zero(Rational(0)), half(make_rational(1, 2));
    CHECK(one.accept(~0ULL));
    CHECK_FALSE(zero.accept(0));
    CHECK(half.accept((1ULL << 63) - 1));
    CHECK_FALSE(half.accept(1ULL << 63));
    CHECK_THROWS_AS(Probability(make_rational(3, 2)), ConfigError);
}

TEST_CASE("ceil and pow") {
    CHECK(ceil_to_u64(make_rational(7, 2)) == 4);
    CHECK(ceil_to_u64(Rational(3)) == 3);
    CHECK(pow(make_rational(1, 2), 3) == make_rational(1, 8));
    CHECK(pow(make_rational(2, 3), 0) == Rational(1));
}

}  // TEST_SUITE

TEST_SUITE("rng") {

TEST_CASE("philox known answer") {
    // Reference vectors from the Random123 distribution (kat_vectors, philox4x32_10).
    auto z = philox4x32({0, 0}, {0, 0, 0, 0});
    CHECK(z == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    auto f = philox4x32({0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu});
    CHECK(f == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    auto pi = philox4x32({0xa4093822u, 0x299f31d0u}, {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u});
    CHECK(pi == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and distinct") {
    const RngStream a = RngStream::make(7, StreamPurpose::Test, 1);
    Rng r1(a), r2(a), r3(a.child(0));
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 100; ++i) {
        const auto x = r1.next_u64();
        CHECK(x == r2.next_u64());
        seen.insert(x);
        seen.insert(r3.next_u64());
    }
    CHECK(seen.size() == 200);
    CHECK(RngStream::make(7, StreamPurpose::Test, 1) == a);
    CHECK_FALSE(RngStream::make(8, StreamPurpose::Test, 1) == a);
}

TEST_CASE("bounded draws stay in range and cover it") {
    Rng r(RngStream::make(1, StreamPurpose::Test, 2));
    std::vector<int> hist(7, 0);
    for (int i = 0; i < 7000; ++i) ++hist[r.below(7)];
    for (int h : hist) CHECK(h > 850);
    double s = 0;
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        s += u;
    }
    CHECK(std::abs(s / 10000 - 0.5) < 0.02);
}

}  // TEST_SUITE

TEST_SUITE("stats") {

TEST_CASE("mean and standard error") {
    const std::vector<double> xs{1, 2, 3, 4};
    const auto m = mean_se(xs);
    CHECK(m.mean == doctest::Approx(2.5));
    CHECK(m.standard_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(m.samples == 4);
}

TEST_CASE("paired ratio") {
    const std::vector<double> a{1, 2, 3}, b{2, 4, 6};
    const auto r = paired_ratio(a, b);
    CHECK(r.ratio == doctest::Approx(0.5));
    CHECK(r.standard_error == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("chi square 2x2") {
    CHECK_FALSE(chi_square_2x2(0, 0, 3, 4).has_value());
    const auto even = chi_square_2x2(25, 25, 25, 25);
    REQUIRE(even);
    CHECK(even->statistic == doctest::Approx(0.0));
    CHECK(even->p_value == doctest::Approx(1.0));
    // (ad - bc)^2 n / (r1 r2 c1 c2) = (40*40 - 10*10)^2 * 100 / 50^4 = 36
    const auto strong = chi_square_2x2(40, 10, 10, 40);
    REQUIRE(strong);
    CHECK(strong->statistic == doctest::Approx(36.0));
    CHECK(strong->p_value == doctest::Approx(std::erfc(std::sqrt(18.0))));
}

}  // TEST_SUITE
