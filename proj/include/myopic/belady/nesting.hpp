#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "myopic/belady/fif.hpp"
#include "myopic/belady/ranking.hpp"

namespace myopic {

struct NestingReport {
    bool ok = true;
    Time t = -1;        // request index after which the violation was seen
    std::size_t m = 0;  // cache size involved
    std::string kind;   // "containment" or "ranking"
};

struct DefaultRankingUpdate {
    template <class KeyFn>
    std::vector<std::size_t> operator()(std::vector<PageId>& order, std::size_t m0, KeyFn&& key) const {
        return update_ranking(order, m0, key);
    }
};

// Runs FiF for every capacity m = 1..n from the nested initial caches given
// by `initial` (prefixes) and checks that the caches stay nested and coincide
// with the prefixes of a ranking maintained by `update`.
template <class Update = DefaultRankingUpdate>
NestingReport verify_nesting_from(const std::vector<PageId>& seq, std::size_t num_pages, std::vector<PageId> initial,
                             Update update = {}) {
    NestingReport report;
    if (initial.size() != num_pages) throw InvalidArgument("initial order must list every page");
    MyopicOracle oracle(seq, num_pages);
    std::vector<FifRun> runs;
    for (std::size_t m = 1; m <= num_pages; ++m)
        runs.push_back(simulate_fif(seq, num_pages, m, std::vector<PageId>(initial.begin(), initial.begin() + static_cast<std::ptrdiff_t>(m))));
    std::vector<PageId> order = initial;
    std::vector<std::size_t> pos(num_pages);
    for (std::size_t t = 0; t < seq.size(); ++t) {
        for (std::size_t i = 0; i < num_pages; ++i) pos[static_cast<std::size_t>(order[i])] = i;
        const Time after = static_cast<Time>(t) + 1;
        update(order, pos[static_cast<std::size_t>(seq[t])], [&](PageId q) { return oracle.key(q, after); });
        for (std::size_t m = 1; m <= num_pages; ++m) {
            const auto& cur = runs[m - 1].caches[t];
            if (m > 1) {
                const auto& smaller = runs[m - 2].caches[t];
                if (!std::includes(cur.begin(), cur.end(), smaller.begin(), smaller.end()))
                    return {false, static_cast<Time>(t), m, "containment"};
            }
            std::vector<PageId> prefix(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
            std::sort(prefix.begin(), prefix.end());
            if (prefix != cur) return {false, static_cast<Time>(t), m, "ranking"};
        }
    }
    return report;
}

// Same check with the default initial order (first request, then page id).
template <class Update = DefaultRankingUpdate>
NestingReport verify_nesting(const std::vector<PageId>& seq, std::size_t num_pages, Update update = {}) {
    MyopicOracle oracle(seq, num_pages);
    std::vector<PageId> initial(num_pages);
    for (std::size_t p = 0; p < num_pages; ++p) initial[p] = static_cast<PageId>(p);
    std::sort(initial.begin(), initial.end(), [&](PageId a, PageId b) { return oracle.key(a, 0) < oracle.key(b, 0); });
    return verify_nesting_from(seq, num_pages, std::move(initial), update);
}

} // namespace myopic
