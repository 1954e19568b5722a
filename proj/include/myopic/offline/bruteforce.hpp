#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <vector>

#include "myopic/core/error.hpp"
#include "myopic/core/trace.hpp"

namespace myopic {

struct OptCost {
    std::int64_t scaled = 0; // cost in integer weight units
    Rational scale{1};       // exact cost = scaled / scale
    double value() const { return to_double(Rational(scaled) / scale); }
};

struct BruteForceBudget {
    std::size_t max_pages = 10;
    int max_k = 5;
    std::size_t max_length = 25;
};

// Exact offline optimum (load cost, empty start) by dynamic programming over
// all cache subsets. Evictions are free and may happen at any time.
inline OptCost opt_bruteforce(const RequestTrace& trace, BruteForceBudget budget = {}) {
    const std::size_t n = trace.num_pages();
    const int k = trace.k();
    if (n > budget.max_pages || k > budget.max_k || trace.size() > budget.max_length)
        throw BudgetExceeded("instance exceeds brute-force budget");
    auto scaled = trace.weights().integer_scale();
    std::vector<std::int64_t> w(n);
    for (std::size_t p = 0; p < n; ++p) w[p] = scaled.weights[static_cast<std::size_t>(trace.page_class(static_cast<PageId>(p)))];

    constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
    const std::size_t states = std::size_t{1} << n;
    std::vector<std::int64_t> dp(states, inf);
    dp[0] = 0;
    for (const auto& r : trace.requests()) {
        // free evictions: value of S is the best over its supersets
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t s = 0; s < states; ++s)
                if (!(s >> b & 1)) dp[s] = std::min(dp[s], dp[s | (std::size_t{1} << b)]);
        // loads
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t s = 0; s < states; ++s)
                if (!(s >> b & 1) && dp[s] < inf) {
                    auto& to = dp[s | (std::size_t{1} << b)];
                    to = std::min(to, dp[s] + w[b]);
                }
        const std::size_t need = std::size_t{1} << r.page;
        for (std::size_t s = 0; s < states; ++s)
            if (!(s & need) || std::popcount(s) > k) dp[s] = inf;
    }
    OptCost out;
    out.scale = scaled.scale;
    out.scaled = *std::min_element(dp.begin(), dp.end());
    if (trace.empty()) out.scaled = 0;
    return out;
}

} // namespace myopic
