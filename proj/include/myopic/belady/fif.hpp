#pragma once

#include <optional>
#include <set>
#include <vector>

#include "myopic/core/error.hpp"
#include "myopic/core/oracle.hpp"
#include "myopic/core/schedule.hpp"
#include "myopic/core/trace.hpp"

namespace myopic {

struct FifRun {
    IntegralSchedule caches; // cache after serving each request
    std::int64_t faults = 0;
    std::int64_t evictions = 0;
};

// Belady's farthest-in-future with capacity m over a plain page sequence.
// The optional initial cache is truncated to m pages.
inline FifRun simulate_fif(const std::vector<PageId>& seq, std::size_t num_pages, std::size_t m,
                           const std::vector<PageId>& initial = {}) {
    if (m < 1) throw InvalidArgument("cache size must be positive");
    MyopicOracle oracle(seq, num_pages);
    std::set<FutureKey> cache;
    std::vector<Time> cached_key(num_pages, -1); // -1: not cached
    for (std::size_t i = 0; i < initial.size() && cache.size() < m; ++i) {
        PageId p = initial[i];
        if (cached_key.at(static_cast<std::size_t>(p)) >= 0) continue;
        Time k = oracle.next_request(p, 0);
        cache.insert({k, p});
        cached_key[static_cast<std::size_t>(p)] = k;
    }
    FifRun run;
    run.caches.reserve(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) {
        PageId p = seq[t];
        auto& ck = cached_key[static_cast<std::size_t>(p)];
        if (ck >= 0) {
            cache.erase({ck, p});
        } else {
            ++run.faults;
            if (cache.size() == m) {
                auto victim = std::prev(cache.end());
                cached_key[static_cast<std::size_t>(victim->second)] = -1;
                cache.erase(victim);
                ++run.evictions;
            }
        }
        ck = oracle.next_after(static_cast<Time>(t));
        cache.insert({ck, p});
        std::vector<PageId> snapshot;
        snapshot.reserve(cache.size());
        for (const auto& e : cache) snapshot.push_back(e.second);
        std::sort(snapshot.begin(), snapshot.end());
        run.caches.push_back(std::move(snapshot));
    }
    return run;
}

// FiF on a whole trace with the trace's cache size, ignoring weights.
inline FifRun simulate_fif(const RequestTrace& trace, std::size_t m) {
    return simulate_fif(trace.page_sequence(), trace.num_pages(), m);
}

// Weighted load cost of a FiF run.
inline double fif_cost(const RequestTrace& trace, std::size_t m) {
    return validate_schedule(trace, simulate_fif(trace, m).caches).load;
}

} // namespace myopic
