#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "myopic/core/error.hpp"
#include "myopic/core/numeric.hpp"
#include "myopic/core/types.hpp"

namespace myopic {

// Distinct positive class weights w_1..w_l. The textual token of every weight
// is kept so that traces round-trip byte for byte.
class WeightTable {
public:
    WeightTable() = default;

    explicit WeightTable(const std::vector<std::string>& tokens) {
        for (const auto& t : tokens) push_token(t);
        validate();
    }

    static WeightTable from_values(const std::vector<double>& values) {
        WeightTable table;
        for (double v : values) {
            // %.17g keeps the exact binary value recoverable.
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            std::string shortest = buf;
            for (int prec = 1; prec <= 17; ++prec) {
                std::snprintf(buf, sizeof buf, "%.*g", prec, v);
                if (std::strtod(buf, nullptr) == v) {
                    shortest = buf;
                    break;
                }
            }
            table.push_token(shortest);
        }
        table.validate();
        return table;
    }

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t i) const { return values_.at(i); }
    const Rational& exact(std::size_t i) const { return exact_.at(i); }
    const std::string& token(std::size_t i) const { return tokens_.at(i); }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }

    double sum() const {
        double s = 0.0;
        for (double v : values_) s += v;
        return s;
    }

    // Integer weights proportional to the exact ones plus the common scale, so
    // offline solvers can work in int64 without rounding.
    struct Scaled {
        std::vector<std::int64_t> weights;
        Rational scale; // exact weight = weights[i] / scale
    };

    Scaled integer_scale() const {
        using boost::multiprecision::cpp_int;
        cpp_int lcm = 1;
        for (const auto& r : exact_) {
            cpp_int d = boost::multiprecision::denominator(r);
            lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
        }
        Scaled out;
        out.scale = Rational(lcm);
        const cpp_int limit = cpp_int(1) << 40;
        for (const auto& r : exact_) {
            Rational v = r * out.scale;
            cpp_int n = boost::multiprecision::numerator(v);
            if (n > limit) throw InvalidArgument("weights cannot be scaled to bounded integers");
            out.weights.push_back(n.convert_to<std::int64_t>());
        }
        return out;
    }

    friend bool operator==(const WeightTable& a, const WeightTable& b) { return a.tokens_ == b.tokens_; }

private:
    void push_token(const std::string& t) {
        Rational r;
        try {
            r = parse_decimal_exact(t);
        } catch (const InvalidArgument&) {
            throw InvalidArgument("malformed weight '" + t + "'");
        }
        tokens_.push_back(t);
        exact_.push_back(r);
        values_.push_back(to_double(r));
    }

    void validate() const {
        if (values_.empty()) throw InvalidArgument("weight table is empty");
        for (std::size_t i = 0; i < exact_.size(); ++i) {
            if (exact_[i] <= 0) throw InvalidArgument("nonpositive weight '" + tokens_[i] + "'");
            for (std::size_t j = 0; j < i; ++j)
                if (exact_[i] == exact_[j]) throw InvalidArgument("duplicate weight '" + tokens_[i] + "'");
        }
    }

    std::vector<std::string> tokens_;
    std::vector<Rational> exact_;
    std::vector<double> values_;
};

struct RoundedWeights {
    WeightTable table;
    // assignment[i] = class index (0-based) of raw weight i.
    std::vector<ClassId> assignment;
    std::vector<double> rounded;
};

// Smallest power base^e with base^e >= w, computed without trusting log() at
// exact powers.
inline double round_up_to_power(double w, double base) {
    int e = static_cast<int>(std::floor(std::log(w) / std::log(base)));
    if (e < 0) e = 0;
    double p = std::pow(base, e);
    while (p < w) p *= base;
    while (e > 0 && p / base >= w) {
        p /= base;
        --e;
    }
    return p;
}

inline RoundedWeights round_weights(const std::vector<double>& raw, double base) {
    if (!(base > 1.0) || !std::isfinite(base)) throw InvalidArgument("base must exceed 1");
    if (raw.empty()) throw InvalidArgument("weight table is empty");
    RoundedWeights out;
    for (double w : raw) {
        if (!(w >= 1.0) || !std::isfinite(w)) throw InvalidArgument("weight below 1");
        out.rounded.push_back(round_up_to_power(w, base));
    }
    std::vector<double> classes = out.rounded;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    for (double r : out.rounded)
        out.assignment.push_back(
            static_cast<ClassId>(std::lower_bound(classes.begin(), classes.end(), r) - classes.begin()));
    out.table = WeightTable::from_values(classes);
    return out;
}

} // namespace myopic
