#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace stochmatch {

struct MeanSE {
    double mean = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;

    bool operator==(const MeanSE&) const = default;
};

MeanSE mean_se(std::span<const double> xs);

/// Paired ratio sum(a)/sum(b) with a delta-method standard error.
struct RatioEstimate {
    double numerator_mean = 0.0;
    double denominator_mean = 0.0;
    double ratio = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;

    bool operator==(const RatioEstimate&) const = default;
};

RatioEstimate paired_ratio(std::span<const double> a, std::span<const double> b);

/// Pearson chi-square test of independence on a 2x2 table [[n11, n10], [n01, n00]].
/// Returns nullopt when a row or column total is zero.
struct ChiSquare {
    double statistic = 0.0;
    double p_value = 1.0;

    bool operator==(const ChiSquare&) const = default;
};

std::optional<ChiSquare> chi_square_2x2(std::uint64_t n11, std::uint64_t n10, std::uint64_t n01, std::uint64_t n00);

}  // namespace stochmatch
