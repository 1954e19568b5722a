#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "myopic/belady/fif.hpp"
#include "myopic/belady/nesting.hpp"
#include "myopic/belady/potential.hpp"
#include "myopic/belady/ranking.hpp"
#include "test_support.hpp"

using namespace myopic;

namespace {

// Fewest faults over every eviction choice (exhaustive recursion).
std::int64_t min_faults_exhaustive(const std::vector<PageId>& seq, std::size_t m, std::size_t t, std::vector<PageId> cache) {
    if (t == seq.size()) return 0;
    PageId p = seq[t];
    if (std::find(cache.begin(), cache.end(), p) != cache.end()) return min_faults_exhaustive(seq, m, t + 1, cache);
    if (cache.size() < m) {
        cache.push_back(p);
        return 1 + min_faults_exhaustive(seq, m, t + 1, cache);
    }
    std::int64_t best = INT64_MAX;
    for (std::size_t i = 0; i < cache.size(); ++i) {
        auto next = cache;
        next[i] = p;
        best = std::min(best, 1 + min_faults_exhaustive(seq, m, t + 1, next));
    }
    return best;
}

} // namespace

// ============================================================ FiF

TEST(Fif, ClassicExample) {
    // a b c a b with two slots: evicting b at the c-request is the FiF choice
    std::vector<PageId> seq{0, 1, 2, 0, 1};
    auto run = simulate_fif(seq, 3, 2);
    EXPECT_EQ(run.faults, 4);
    EXPECT_EQ(run.caches[2], (std::vector<PageId>{0, 2}));
    EXPECT_EQ(min_faults_exhaustive(seq, 2, 0, {}), 4);
}

TEST(Fif, NoEvictionWhenEverythingFits) {
    std::vector<PageId> seq{3, 1, 3, 0, 2, 1, 0};
    EXPECT_EQ(simulate_fif(seq, 4, 4).faults, 4);
    EXPECT_EQ(simulate_fif(std::vector<PageId>{0, 0, 0}, 1, 1).faults, 1);
}

TEST(Fif, MatchesExhaustiveSearch) {
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 150; ++rep) {
        std::size_t n = 2 + static_cast<std::size_t>(rep % 4);
        std::size_t m = 1 + static_cast<std::size_t>(rep % 3);
        auto seq = fixtures::random_sequence(rng, n, 10);
        EXPECT_EQ(simulate_fif(seq, n, m).faults, min_faults_exhaustive(seq, m, 0, {}));
    }
}

// ============================================================ ranking update

TEST(Ranking, ChainExample) {
    // a b c, c requested; b comes back before a
    std::vector<PageId> order{0, 1, 2};
    std::map<PageId, int> next{{0, 10}, {1, 5}, {2, 20}};
    auto chain = update_ranking(order, 2, [&](PageId p) { return next[p]; });
    EXPECT_EQ(chain, (std::vector<std::size_t>{2, 0}));
    EXPECT_EQ(order, (std::vector<PageId>{2, 1, 0}));
}

TEST(Ranking, FrontRequestLeavesOrderAlone) {
    std::vector<PageId> order{4, 2, 7};
    update_ranking(order, 0, [](PageId p) { return p; });
    EXPECT_EQ(order, (std::vector<PageId>{4, 2, 7}));
}

TEST(Ranking, SecondPositionSwapsWithFront) {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<PageId> order{0, 1, 2, 3, 4, 5};
        std::shuffle(order.begin(), order.end(), rng);
        auto before = order;
        std::vector<int> key(6);
        for (auto& k : key) k = static_cast<int>(uniform_int(rng, 0, 1000));
        update_ranking(order, 1, [&](PageId p) { return key[static_cast<std::size_t>(p)]; });
        EXPECT_EQ(order[0], before[1]);
        EXPECT_EQ(order[1], before[0]);
        for (std::size_t i = 2; i < 6; ++i) EXPECT_EQ(order[i], before[i]);
    }
}

TEST(Ranking, ChainMatchesNestedFifDifferences) {
    // After the update, position m holds the page in FiF^m \ FiF^(m-1).
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 6;
        auto seq = fixtures::random_sequence(rng, n, 30);
        auto trace = make_unweighted_trace(seq, n, 1);
        MyopicOracle oracle(trace);
        BeladyRanking ranking(trace, oracle);
        std::vector<PageId> initial = ranking.order(0);
        std::vector<FifRun> runs;
        for (std::size_t m = 1; m <= n; ++m)
            runs.push_back(simulate_fif(seq, n, m, std::vector<PageId>(initial.begin(), initial.begin() + static_cast<std::ptrdiff_t>(m))));
        for (std::size_t t = 0; t < seq.size(); ++t) {
            ranking.advance();
            for (std::size_t m = 1; m <= n; ++m) {
                const auto& big = runs[m - 1].caches[t];
                std::vector<PageId> diff;
                if (m == 1) diff = big;
                else std::set_difference(big.begin(), big.end(), runs[m - 2].caches[t].begin(), runs[m - 2].caches[t].end(), std::back_inserter(diff));
                ASSERT_EQ(diff.size(), 1u);
                EXPECT_EQ(ranking.at(0, m), diff[0]);
            }
            EXPECT_EQ(ranking.position(seq[t]), 1u);
        }
    }
}

// ============================================================ nesting

TEST(Nesting, HoldsOnRandomTraces) {
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 100; ++rep) {
        auto seq = fixtures::random_sequence(rng, 6, 50);
        auto rep_ = verify_nesting(seq, 6);
        EXPECT_TRUE(rep_.ok) << rep_.kind << " t=" << rep_.t << " m=" << rep_.m;
    }
}

TEST(Nesting, HoldsFromArbitraryNestedStart) {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 50; ++rep) {
        auto seq = fixtures::random_sequence(rng, 5, 40);
        std::vector<PageId> initial{0, 1, 2, 3, 4};
        std::shuffle(initial.begin(), initial.end(), rng);
        EXPECT_TRUE(verify_nesting_from(seq, 5, initial).ok);
    }
}

TEST(Nesting, EmptyTrace) { EXPECT_TRUE(verify_nesting({}, 4).ok); }

TEST(Nesting, CorruptedUpdateIsCaught) {
    // move-to-front ignores the future, so some prefix must disagree with FiF
    auto mtf = [](std::vector<PageId>& order, std::size_t m0, auto&&) {
        std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m0), order.begin() + static_cast<std::ptrdiff_t>(m0) + 1);
        return std::vector<std::size_t>{m0};
    };
    std::vector<PageId> seq{0, 1, 2, 0, 1, 3, 0, 2};
    auto rep = verify_nesting(seq, 4, mtf);
    EXPECT_FALSE(rep.ok);
    EXPECT_EQ(rep.kind, "ranking");
}

// ============================================================ potential

TEST(FifPotential, IdenticalCachesGiveZero) {
    std::vector<PageId> by_rank{2, 0, 1, 3};
    std::vector<bool> c{true, false, true, false};
    EXPECT_EQ(fif_potential(by_rank, c, c), 0);
}

TEST(FifPotential, MissingFrontPage) {
    // offline holds the rank-1 page, online swapped it for another one
    std::vector<PageId> by_rank{0, 1, 2, 3};
    std::vector<bool> off{true, true, false, false};
    std::vector<bool> on{false, true, true, false};
    EXPECT_GE(fif_potential(by_rank, on, off), 1);
}

TEST(FifPotential, MatchesSuffixEnumeration) {
    std::mt19937_64 rng(10);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t n = 1 + static_cast<std::size_t>(rep % 5);
        std::vector<PageId> by_rank(n);
        for (std::size_t i = 0; i < n; ++i) by_rank[i] = static_cast<PageId>(i);
        std::shuffle(by_rank.begin(), by_rank.end(), rng);
        std::vector<bool> on(n), off(n);
        for (std::size_t i = 0; i < n; ++i) {
            on[i] = uniform01(rng) < 0.5;
            off[i] = uniform01(rng) < 0.5;
        }
        std::int64_t best = INT64_MIN;
        for (std::size_t s = 1; s <= n + 1; ++s) {
            std::int64_t e = 0;
            for (std::size_t i = s - 1; i < n; ++i) e += static_cast<int>(on[static_cast<std::size_t>(by_rank[i])]) - static_cast<int>(off[static_cast<std::size_t>(by_rank[i])]);
            best = std::max(best, e);
        }
        EXPECT_EQ(fif_potential(by_rank, on, off), best);
    }
}

TEST(FifPotential, StepwiseInequalityAgainstRandomOffline) {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 200; ++rep) {
        auto trace = fixtures::random_trace(rng, {"1"}, 6, 1 + rep % 4, 30);
        auto off = fixtures::random_integral_schedule(rng, trace);
        auto r = fif_stepwise_check(trace.page_sequence(), trace.num_pages(), static_cast<std::size_t>(trace.k()), off);
        EXPECT_TRUE(r.ok) << r.stage << " at " << r.t;
        EXPECT_LE(r.online_cost, r.offline_cost);
    }
}
