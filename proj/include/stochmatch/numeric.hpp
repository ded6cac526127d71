#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace stochmatch {

/// Exact rational used for every fractional quantity.
using Rational = mpq_class;

/// Canonical num/den; den != 0.
inline Rational make_rational(long long num, long long den) {
    Rational q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return q;
}

/// Parses a decimal literal ("3", "-0.25", "1.5e-3") into an exact rational.
Rational parse_decimal(std::string_view text);

/// Exact rational of the shortest decimal that round-trips `value`.
Rational rational_from_double(double value);

double to_double(const Rational& q);
std::string to_string(const Rational& q);

/// Exact power q^k for k >= 0.
Rational pow(const Rational& q, unsigned k);

/// A probability in [0, 1], carried both exactly and as a sampling threshold.
class Probability {
public:
    Probability() : Probability(Rational(0)) {}
    explicit Probability(const Rational& exact);
    static Probability from_double(double value) { return Probability(rational_from_double(value)); }
    static Probability parse(std::string_view text) { return Probability(parse_decimal(text)); }

    const Rational& exact() const { return exact_; }
    double value() const { return value_; }

    /// Bernoulli trial driven by a uniform 64-bit word.
    bool accept(std::uint64_t word) const { return always_ || word < threshold_; }

    bool operator==(const Probability& o) const { return exact_ == o.exact_; }

private:
    Rational exact_;
    double value_ = 0.0;
    std::uint64_t threshold_ = 0;  // floor(p * 2^64) when p < 1
    bool always_ = false;
};

/// Integer ceiling of a positive rational.
std::uint64_t ceil_to_u64(const Rational& q);

}  // namespace stochmatch
