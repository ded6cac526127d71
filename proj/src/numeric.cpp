#include "stochmatch/numeric.hpp"

#include "stochmatch/errors.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace stochmatch {

Rational parse_decimal(std::string_view text) {
    auto fail = [&] { throw ParseError("not a decimal number: '" + std::string(text) + "'"); };
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t end = text.size();
    while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (i == end) fail();

    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    std::string digits;
    long exponent = 0;
    bool seen_digit = false, seen_point = false;
    for (; i < end; ++i) {
        char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            seen_digit = true;
            if (seen_point) --exponent;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else if (c == 'e' || c == 'E') {
            break;
        } else {
            fail();
        }
    }
    if (!seen_digit) fail();
    if (i < end) {
        ++i;  // skip 'e'
        if (i >= end) fail();
        long e = 0;
        auto [ptr, ec] = std::from_chars(text.data() + i + (text[i] == '+' ? 1 : 0), text.data() + end, e);
        if (ec != std::errc() || ptr != text.data() + end) fail();
        exponent += e;
    }
    if (exponent > 4000 || exponent < -4000) fail();

    mpz_class num(digits, 10);
    Rational q(num);
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent < 0) {
        q /= Rational(ten_pow);
    } else {
        q *= Rational(ten_pow);
    }
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

Rational rational_from_double(double value) {
    if (!std::isfinite(value)) throw ParseError("non-finite value");
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) throw ParseError("cannot format double");
    return parse_decimal(std::string_view(buf.data(), static_cast<std::size_t>(ptr - buf.data())));
}

double to_double(const Rational& q) { return q.get_d(); }

std::string to_string(const Rational& q) { return q.get_str(); }

Rational pow(const Rational& q, unsigned k) {
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), q.get_num_mpz_t(), k);
    mpz_pow_ui(d.get_mpz_t(), q.get_den_mpz_t(), k);
    Rational out(n, d);
    out.canonicalize();
    return out;
}

Probability::Probability(const Rational& exact) : exact_(exact) {
    exact_.canonicalize();
    if (exact_ < 0 || exact_ > 1) throw ConfigError("probability outside [0, 1]: " + exact_.get_str());
    value_ = exact_.get_d();
    if (exact_ == 1) {
        always_ = true;
        threshold_ = std::numeric_limits<std::uint64_t>::max();
        return;
    }
    mpz_class scaled = exact_.get_num();
    scaled <<= 64;
    scaled /= exact_.get_den();
    // scaled < 2^64 because p < 1
    threshold_ = 0;
    mpz_class low = scaled & mpz_class(0xffffffffUL);
    mpz_class high = scaled >> 32;
    threshold_ = (static_cast<std::uint64_t>(high.get_ui()) << 32) | static_cast<std::uint64_t>(low.get_ui());
}

std::uint64_t ceil_to_u64(const Rational& q) {
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    if (c < 0) return 0;
    if (mpz_sizeinbase(c.get_mpz_t(), 2) > 63) return std::numeric_limits<std::uint64_t>::max();
    mpz_class low = c & mpz_class(0xffffffffUL);
    mpz_class high = c >> 32;
    return (static_cast<std::uint64_t>(high.get_ui()) << 32) | static_cast<std::uint64_t>(low.get_ui());
}

}  // namespace stochmatch
