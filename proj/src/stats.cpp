#include "stochmatch/stats.hpp"

#include <cmath>

namespace stochmatch {

MeanSE mean_se(std::span<const double> xs) {
    MeanSE out;
    out.samples = xs.size();
    if (xs.empty()) return out;
    long double sum = 0;
    for (double x : xs) sum += x;
    const long double n = static_cast<long double>(xs.size());
    const long double mean = sum / n;
    out.mean = static_cast<double>(mean);
    if (xs.size() > 1) {
        long double ss = 0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        out.standard_error = static_cast<double>(std::sqrt(ss / (n - 1) / n));
    }
    return out;
}

RatioEstimate paired_ratio(std::span<const double> a, std::span<const double> b) {
    RatioEstimate out;
    out.samples = a.size();
    if (a.empty() || a.size() != b.size()) return out;
    const MeanSE ma = mean_se(a), mb = mean_se(b);
    out.numerator_mean = ma.mean;
    out.denominator_mean = mb.mean;
    if (mb.mean == 0.0) {
        out.ratio = ma.mean == 0.0 ? 1.0 : 0.0;
        return out;
    }
    out.ratio = ma.mean / mb.mean;
    if (a.size() > 1) {
        long double ss = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const long double d = a[i] - out.ratio * b[i];
            ss += d * d;
        }
        const long double n = static_cast<long double>(a.size());
        out.standard_error = static_cast<double>(std::sqrt(ss / (n - 1) / n) / mb.mean);
    }
    return out;
}

std::optional<ChiSquare> chi_square_2x2(std::uint64_t n11, std::uint64_t n10, std::uint64_t n01, std::uint64_t n00) {
    const double a = static_cast<double>(n11), b = static_cast<double>(n10);
    const double c = static_cast<double>(n01), d = static_cast<double>(n00);
    const double n = a + b + c + d;
    const double r1 = a + b, r0 = c + d, c1 = a + c, c0 = b + d;
    if (r1 == 0 || r0 == 0 || c1 == 0 || c0 == 0) return std::nullopt;
    const double diff = a * d - b * c;
    ChiSquare out;
    out.statistic = n * diff * diff / (r1 * r0 * c1 * c0);
    out.p_value = std::erfc(std::sqrt(out.statistic / 2.0));
    return out;
}

}  // namespace stochmatch
