#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "myopic/belady/fif.hpp"
#include "myopic/core/error.hpp"
#include "myopic/core/oracle.hpp"

namespace myopic {

// max over suffixes s = 1..n+1 of (#online pages ranked >= s) - (#offline
// pages ranked >= s). `by_rank` lists pages in rank order (rank 1 first);
// membership vectors are indexed by PageId.
inline std::int64_t fif_potential(const std::vector<PageId>& by_rank, const std::vector<bool>& online,
                                  const std::vector<bool>& offline) {
    std::int64_t diff = 0; // value for the empty suffix s = n+1
    std::int64_t best = 0;
    for (std::size_t i = by_rank.size(); i-- > 0;) {
        auto p = static_cast<std::size_t>(by_rank[i]);
        diff += static_cast<std::int64_t>(online.at(p)) - static_cast<std::int64_t>(offline.at(p));
        best = std::max(best, diff);
    }
    return best;
}

// Pages ordered by next request at or after t.
inline std::vector<PageId> next_request_order(const MyopicOracle& oracle, const std::vector<PageId>& pages, Time t) {
    std::vector<PageId> out = pages;
    std::sort(out.begin(), out.end(), [&](PageId a, PageId b) { return oracle.key(a, t) < oracle.key(b, t); });
    return out;
}

struct StepwiseReport {
    bool ok = true;
    Time t = -1;
    std::string stage;
    std::int64_t online_cost = 0;  // evictions
    std::int64_t offline_cost = 0; // evictions
    std::int64_t online_faults = 0;
};

// Replays FiF with capacity k against an arbitrary feasible offline schedule
// (both from empty caches) and checks Bel' + Phi' <= Off' at every stage:
// offline evictions, offline fetches, FiF eviction, FiF fetch, reinsertion.
// Costs count evictions, which is what the potential argument charges.
inline StepwiseReport fif_stepwise_check(const std::vector<PageId>& seq, std::size_t num_pages, std::size_t k,
                                         const IntegralSchedule& offline) {
    if (offline.size() != seq.size()) throw InvalidArgument("offline schedule length mismatch");
    MyopicOracle oracle(seq, num_pages);
    std::vector<PageId> all(num_pages);
    for (std::size_t p = 0; p < num_pages; ++p) all[p] = static_cast<PageId>(p);
    std::vector<bool> on(num_pages, false), off(num_pages, false);
    std::size_t on_size = 0;
    StepwiseReport rep;
    for (std::size_t t = 0; t < seq.size(); ++t) {
        const Time now = static_cast<Time>(t);
        auto order = next_request_order(oracle, all, now);
        auto phi = fif_potential(order, on, off);
        auto check = [&](std::int64_t d_on, std::int64_t d_off, const char* stage) {
            auto next = fif_potential(order, on, off);
            if (d_on + (next - phi) > d_off && rep.ok) {
                rep.ok = false;
                rep.t = now;
                rep.stage = stage;
            }
            phi = next;
        };
        // offline moves
        std::vector<bool> target(num_pages, false);
        for (PageId p : offline[t]) target.at(static_cast<std::size_t>(p)) = true;
        if (offline[t].size() > k || !target[static_cast<std::size_t>(seq[t])])
            throw Infeasible("infeasible offline schedule at time " + std::to_string(t));
        for (std::size_t p = 0; p < num_pages; ++p)
            if (off[p] && !target[p]) {
                off[p] = false;
                ++rep.offline_cost;
                check(0, 1, "offline-evict");
            }
        for (std::size_t p = 0; p < num_pages; ++p)
            if (!off[p] && target[p]) {
                off[p] = true;
                check(0, 0, "offline-fetch");
            }
        // online moves
        auto q = static_cast<std::size_t>(seq[t]);
        if (!on[q]) {
            ++rep.online_faults;
            if (on_size == k) {
                std::size_t victim = num_pages;
                for (std::size_t i = order.size(); i-- > 0;)
                    if (on[static_cast<std::size_t>(order[i])]) {
                        victim = static_cast<std::size_t>(order[i]);
                        break;
                    }
                on[victim] = false;
                --on_size;
                ++rep.online_cost;
                check(1, 0, "online-evict");
            }
            on[q] = true;
            ++on_size;
            check(0, 0, "online-fetch");
        }
        // reinsertion
        order = next_request_order(oracle, all, now + 1);
        check(0, 0, "reinsert");
    }
    return rep;
}

} // namespace myopic
