#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "myopic/core/error.hpp"
#include "myopic/core/ledger.hpp"
#include "myopic/core/numeric.hpp"
#include "myopic/core/trace.hpp"

namespace myopic {

// Integral cache contents per time (after serving the request at that time).
using IntegralSchedule = std::vector<std::vector<PageId>>;
// Fractional cache contents per time.
using FractionalSchedule = std::vector<CacheState>;

inline CacheState to_state(const std::vector<PageId>& pages, std::size_t num_pages) {
    CacheState s(num_pages, 0.0);
    for (PageId p : pages) s.at(static_cast<std::size_t>(p)) = 1.0;
    return s;
}

inline FractionalSchedule to_fractional(const IntegralSchedule& sched, std::size_t num_pages) {
    FractionalSchedule out;
    out.reserve(sched.size());
    for (const auto& c : sched) out.push_back(to_state(c, num_pages));
    return out;
}

// Weighted load/evict cost between two states.
inline void accumulate_transition(const RequestTrace& trace, const CacheState& before, const CacheState& after,
                                  CostLedger& ledger) {
    for (std::size_t p = 0; p < after.size(); ++p) {
        double d = after[p] - before[p];
        double w = trace.page_weight(static_cast<PageId>(p));
        if (d > 0) ledger.load += w * d;
        else if (d < 0) ledger.evict += -w * d;
    }
}

// Checks feasibility of a schedule starting from an empty cache and returns
// its cost. A schedule with more states than requests is rejected.
inline CostLedger validate_schedule(const RequestTrace& trace, const FractionalSchedule& states, double tol = kTol) {
    if (states.size() != trace.size())
        throw InvalidArgument("schedule length " + std::to_string(states.size()) + " does not match trace length " +
                              std::to_string(trace.size()));
    const std::size_t n = trace.num_pages();
    CostLedger ledger;
    CacheState prev(n, 0.0);
    for (std::size_t t = 0; t < states.size(); ++t) {
        const auto& s = states[t];
        if (s.size() != n) throw InvalidArgument("cache state has wrong dimension at time " + std::to_string(t));
        double total = 0.0;
        for (double v : s) {
            if (!(v >= -tol && v <= 1.0 + tol)) throw InvalidArgument("page mass outside [0,1] at time " + std::to_string(t));
            total += v;
        }
        if (total > trace.k() + tol * static_cast<double>(n + 1))
            throw Infeasible("capacity exceeded at time " + std::to_string(t));
        if (s[static_cast<std::size_t>(trace[t].page)] < 1.0 - tol)
            throw Infeasible("infeasible: requested page absent at time " + std::to_string(t));
        accumulate_transition(trace, prev, s, ledger);
        prev = s;
    }
    return ledger;
}

inline CostLedger validate_schedule(const RequestTrace& trace, const IntegralSchedule& states) {
    return validate_schedule(trace, to_fractional(states, trace.num_pages()));
}

// Lazy version of a feasible integral schedule: a page is loaded only when
// requested and evicted only to make room, choosing among pages the original
// schedule no longer holds. The cost never increases.
inline IntegralSchedule make_lazy(const RequestTrace& trace, const IntegralSchedule& schedule) {
    validate_schedule(trace, schedule);
    IntegralSchedule out;
    std::vector<PageId> cur;
    for (std::size_t t = 0; t < schedule.size(); ++t) {
        PageId r = trace[t].page;
        if (std::find(cur.begin(), cur.end(), r) == cur.end()) {
            if (cur.size() == static_cast<std::size_t>(trace.k())) {
                const auto& target = schedule[t];
                auto it = std::find_if(cur.begin(), cur.end(), [&](PageId p) {
                    return std::find(target.begin(), target.end(), p) == target.end();
                });
                cur.erase(it);
            }
            cur.insert(std::upper_bound(cur.begin(), cur.end(), r), r);
        }
        out.push_back(cur);
    }
    return out;
}

} // namespace myopic
