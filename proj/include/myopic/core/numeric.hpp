#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>

#include "myopic/core/error.hpp"

namespace myopic {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr double kTol = 1e-9;

inline double positive_part(double v) { return v > 0.0 ? v : 0.0; }

// Exact value of a decimal literal such as "4", "0.25", "1.5e3".
inline Rational parse_decimal_exact(std::string_view token) {
    if (token.empty()) throw InvalidArgument("empty number");
    std::size_t i = 0;
    bool negative = false;
    if (token[i] == '+' || token[i] == '-') {
        negative = token[i] == '-';
        ++i;
    }
    boost::multiprecision::cpp_int mantissa = 0;
    std::int64_t exponent = 0;
    bool any_digit = false;
    bool seen_point = false;
    for (; i < token.size(); ++i) {
        char c = token[i];
        if (c >= '0' && c <= '9') {
            mantissa = mantissa * 10 + (c - '0');
            if (seen_point) --exponent;
            any_digit = true;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!any_digit) throw InvalidArgument("malformed number '" + std::string(token) + "'");
    if (i < token.size()) {
        if (token[i] != 'e' && token[i] != 'E')
            throw InvalidArgument("malformed number '" + std::string(token) + "'");
        ++i;
        std::string rest(token.substr(i));
        if (rest.empty()) throw InvalidArgument("malformed number '" + std::string(token) + "'");
        std::size_t used = 0;
        long long e = 0;
        try {
            e = std::stoll(rest, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("malformed number '" + std::string(token) + "'");
        }
        if (used != rest.size()) throw InvalidArgument("malformed number '" + std::string(token) + "'");
        exponent += e;
    }
    Rational value(mantissa);
    boost::multiprecision::cpp_int ten = 10;
    if (exponent > 0) value *= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(exponent)));
    if (exponent < 0) value /= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(-exponent)));
    return negative ? Rational(-value) : value;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Uniform [0,1) double from a 64-bit generator, identical on every platform
// (std::uniform_real_distribution is implementation-defined).
template <class Engine>
double uniform01(Engine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [lo, hi], platform independent.
template <class Engine>
std::int64_t uniform_int(Engine& rng, std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(rng());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
}

} // namespace myopic
