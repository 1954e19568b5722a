#pragma once

#include <random>
#include <string>
#include <vector>

#include "myopic/core/numeric.hpp"
#include "myopic/core/schedule.hpp"
#include "myopic/core/trace.hpp"

namespace myopic::fixtures {

// Random trace with `per_class` pages in each class, named "<class>.<i>".
inline RequestTrace random_trace(std::mt19937_64& rng, const std::vector<std::string>& weights, std::size_t per_class,
                                 int k, std::size_t length) {
    RequestTrace trace{WeightTable(weights), k};
    const std::size_t l = weights.size();
    for (std::size_t j = 0; j < l; ++j)
        for (std::size_t i = 0; i < per_class; ++i)
            trace.add_page(std::to_string(j + 1) + "." + std::to_string(i), static_cast<ClassId>(j));
    for (std::size_t t = 0; t < length; ++t) {
        auto j = static_cast<ClassId>(uniform_int(rng, 0, static_cast<std::int64_t>(l) - 1));
        auto i = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(per_class) - 1));
        trace.push_request(trace.universe(j)[i]);
    }
    return trace;
}

inline std::vector<PageId> random_sequence(std::mt19937_64& rng, std::size_t n, std::size_t length) {
    std::vector<PageId> seq;
    for (std::size_t t = 0; t < length; ++t) seq.push_back(static_cast<PageId>(uniform_int(rng, 0, static_cast<std::int64_t>(n) - 1)));
    return seq;
}

// Random feasible integral schedule: each step keeps a random subset of the
// previous cache, adds the request and maybe a few random pages.
inline IntegralSchedule random_integral_schedule(std::mt19937_64& rng, const RequestTrace& trace) {
    IntegralSchedule out;
    std::vector<PageId> cur;
    const auto n = static_cast<std::int64_t>(trace.num_pages());
    for (const auto& r : trace.requests()) {
        std::vector<PageId> next;
        for (PageId p : cur)
            if (uniform01(rng) < 0.8) next.push_back(p);
        if (std::find(next.begin(), next.end(), r.page) == next.end()) next.push_back(r.page);
        while (uniform01(rng) < 0.3) {
            auto p = static_cast<PageId>(uniform_int(rng, 0, n - 1));
            if (std::find(next.begin(), next.end(), p) == next.end()) next.push_back(p);
        }
        while (next.size() > static_cast<std::size_t>(trace.k())) {
            auto i = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(next.size()) - 1));
            if (next[i] == r.page) continue;
            next.erase(next.begin() + static_cast<std::ptrdiff_t>(i));
        }
        std::sort(next.begin(), next.end());
        out.push_back(next);
        cur = std::move(next);
    }
    return out;
}

// Random feasible fractional schedule.
inline FractionalSchedule random_fractional_schedule(std::mt19937_64& rng, const RequestTrace& trace) {
    FractionalSchedule out;
    const std::size_t n = trace.num_pages();
    CacheState cur(n, 0.0);
    for (const auto& r : trace.requests()) {
        CacheState next = cur;
        for (std::size_t p = 0; p < n; ++p) {
            double u = uniform01(rng);
            if (u < 0.2) next[p] = 0.0;
            else if (u < 0.4) next[p] = std::min(1.0, next[p] + uniform01(rng) * 0.5);
            else if (u < 0.5) next[p] *= uniform01(rng);
        }
        const auto req = static_cast<std::size_t>(r.page);
        next[req] = 1.0;
        double others = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            if (p != req) others += next[p];
        const double room = static_cast<double>(trace.k()) - 1.0;
        if (others > room) {
            double f = room / others;
            for (std::size_t p = 0; p < n; ++p)
                if (p != req) next[p] *= f * (1.0 - 1e-12);
        }
        out.push_back(next);
        cur = std::move(next);
    }
    return out;
}

} // namespace myopic::fixtures
