#include <gtest/gtest.h>

#include <random>

#include "myopic/belady/fif.hpp"
#include "myopic/core/oracle.hpp"
#include "myopic/core/schedule.hpp"
#include "myopic/core/trace_io.hpp"
#include "myopic/core/weights.hpp"
#include "test_support.hpp"

using namespace myopic;

// ============================================================ trace format

TEST(TraceIo, ParsesHeaderAndRequests) {
    auto t = load_trace("k=2; w=1,4\n1 a\n2 b\n1 a\n");
    EXPECT_EQ(t.k(), 2);
    EXPECT_EQ(t.num_classes(), 2u);
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(t.page_name(t[1].page), "b");
    EXPECT_EQ(t[1].cls, 1);
    EXPECT_EQ(t[0].page, t[2].page);
    EXPECT_DOUBLE_EQ(t.weights()[1], 4.0);
}

TEST(TraceIo, EmptyRequestList) {
    auto t = load_trace("k=3; w=1\n");
    EXPECT_EQ(t.size(), 0u);
    EXPECT_EQ(t.k(), 3);
}

TEST(TraceIo, UnknownClassIsRejected) {
    try {
        load_trace("k=2; w=1,4\n3 a\n");
        FAIL() << "expected an error";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("unknown class"), std::string::npos);
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(TraceIo, ValidationErrors) {
    EXPECT_THROW(load_trace("k=2; w=1,0\n"), ParseError);
    EXPECT_THROW(load_trace("k=2; w=1,-3\n"), ParseError);
    EXPECT_THROW(load_trace("k=2; w=2,2.0\n"), ParseError);
    EXPECT_THROW(load_trace("k=0; w=1\n"), ParseError);
    EXPECT_THROW(load_trace("k=2 w=1\n"), ParseError);
    EXPECT_THROW(load_trace("k=2; w=1\n1\n"), ParseError);
    EXPECT_THROW(load_trace("k=2; w=1\n1 a b\n"), ParseError);
    EXPECT_THROW(load_trace("k=2; w=1,2\n1 a\n2 a\n"), ParseError);
    EXPECT_THROW(load_trace("1 a\n"), ParseError);
    EXPECT_THROW(load_trace(""), ParseError);
}

TEST(TraceIo, CommentsAreIgnored) {
    auto t = load_trace("# leading\nk=1; w=2 # trailing\n\n1 x # hit\n# mid\n1 y\n");
    EXPECT_EQ(t.size(), 2u);
    EXPECT_EQ(t.page_name(t[1].page), "y");
}

TEST(TraceIo, CanonicalDocumentRoundTripsByteForByte) {
    const std::string doc = "k=3; w=1,2.50,1e3\n1 a\n3 zz\n2 b\n1 a\n";
    EXPECT_EQ(write_trace(load_trace(doc)), doc);
}

TEST(TraceIo, PaddedTraceWithOrderRoundTrips) {
    auto t = load_trace("k=2; w=1,4\n2 b\n1 a\n");
    t.pad_universe(3);
    std::vector<std::vector<PageId>> order(2);
    for (ClassId j = 0; j < 2; ++j) {
        order[static_cast<std::size_t>(j)] = t.universe(j);
        std::reverse(order[static_cast<std::size_t>(j)].begin(), order[static_cast<std::size_t>(j)].end());
    }
    t.set_initial_order(order);
    auto text = write_trace(t);
    auto back = load_trace(text);
    EXPECT_EQ(back, t);
    EXPECT_EQ(write_trace(back), text);
}

TEST(TraceIo, RandomTracesRoundTrip) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        auto t = fixtures::random_trace(rng, {"1", "3", "0.5"}, 4, 2, 30);
        auto back = load_trace(write_trace(t));
        EXPECT_EQ(write_trace(back), write_trace(t));
        EXPECT_EQ(back.requests().size(), t.requests().size());
        for (std::size_t r = 0; r < t.size(); ++r) EXPECT_EQ(back.page_name(back[r].page), t.page_name(t[r].page));
    }
}

// ============================================================ weights

TEST(Weights, RoundToPowersOfTwo) {
    auto r = round_weights({1, 3, 5, 8}, 2.0);
    ASSERT_EQ(r.table.size(), 3u);
    EXPECT_EQ(r.table[0], 1.0);
    EXPECT_EQ(r.table[1], 4.0);
    EXPECT_EQ(r.table[2], 8.0);
    EXPECT_EQ(r.assignment, (std::vector<ClassId>{0, 1, 2, 2}));
}

TEST(Weights, UnweightedAndExactPowers) {
    EXPECT_EQ(round_weights({1, 1, 1}, 2.0).table.size(), 1u);
    auto r = round_weights({1, 1024}, 2.0);
    ASSERT_EQ(r.table.size(), 2u);
    EXPECT_EQ(r.table[1], 1024.0);
}

TEST(Weights, RoundingErrors) {
    EXPECT_THROW(round_weights({0.5}, 2.0), InvalidArgument);
    EXPECT_THROW(round_weights({1.0}, 1.0), InvalidArgument);
    EXPECT_THROW(round_weights({1.0}, 0.5), InvalidArgument);
}

TEST(Weights, RoundingStaysWithinOneFactorOfBase) {
    std::mt19937_64 rng(11);
    for (double base : {2.0, 3.0, 1.5, 10.0}) {
        std::vector<double> raw;
        double W = 1.0;
        for (int i = 0; i < 200; ++i) {
            double w = std::exp(uniform01(rng) * 12.0);
            raw.push_back(w);
            W = std::max(W, w);
        }
        raw.push_back(std::pow(base, 3));
        auto r = round_weights(raw, base);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            EXPECT_LE(raw[i], r.rounded[i]);
            EXPECT_LT(r.rounded[i], base * raw[i] * (1 + 1e-12));
        }
        EXPECT_LE(r.table.size(), static_cast<std::size_t>(std::ceil(std::log(W) / std::log(base))) + 1);
    }
}

TEST(Weights, IntegerScaleIsExact) {
    WeightTable w(std::vector<std::string>{"0.5", "2", "1.25"});
    auto s = w.integer_scale();
    for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(Rational(s.weights[i]) / s.scale, w.exact(i));
}

// ============================================================ oracle

TEST(Oracle, NextRequestAndTieRule) {
    std::vector<PageId> seq{0, 1, 0, 2};
    MyopicOracle o(seq, 4);
    EXPECT_EQ(o.next_request(0, 1), 2);
    EXPECT_EQ(o.next_request(1, 2), kNever);
    EXPECT_TRUE(o.farther(0, 1, 1));
    // pages 1 and 3 are both never requested after time 2: larger id is farther
    EXPECT_TRUE(o.farther(3, 1, 2));
    EXPECT_FALSE(o.farther(1, 3, 2));
}

TEST(Oracle, RefusesCrossClassComparison) {
    auto t = load_trace("k=1; w=1,2\n1 a\n2 b\n");
    MyopicOracle o(t);
    EXPECT_THROW(o.farther(t[0].page, t[1].page, 0), InvalidArgument);
}

TEST(Oracle, ComparisonsIgnoreSuffixBeyondNextOccurrences) {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 5;
        auto seq = fixtures::random_sequence(rng, n, 20);
        auto t = static_cast<Time>(uniform_int(rng, 0, 19));
        MyopicOracle o(seq, n);
        // keep everything up to the last "next occurrence" at time t, shuffle the rest
        Time cut = t;
        for (std::size_t p = 0; p < n; ++p) {
            Time nx = o.next_request(static_cast<PageId>(p), t);
            if (nx != kNever) cut = std::max(cut, nx + 1);
        }
        auto mutated = seq;
        std::shuffle(mutated.begin() + cut, mutated.end(), rng);
        MyopicOracle m(mutated, n);
        for (PageId a = 0; a < static_cast<PageId>(n); ++a)
            for (PageId b = 0; b < static_cast<PageId>(n); ++b)
                if (a != b) {
                    EXPECT_EQ(o.farther(a, b, t), m.farther(a, b, t));
                }
    }
}

// ============================================================ schedules

TEST(Schedule, FullCacheCostsOnlyTheInitialFill) {
    auto t = load_trace("k=3; w=1,5\n1 a\n2 b\n1 c\n2 b\n1 a\n");
    IntegralSchedule all(t.size(), {0, 1, 2});
    auto c = validate_schedule(t, all);
    EXPECT_DOUBLE_EQ(c.load, 1 + 5 + 1);
    EXPECT_DOUBLE_EQ(c.evict, 0);
}

TEST(Schedule, SingleSlotCost) {
    auto t = load_trace("k=1; w=1,10\n1 a\n2 b\n1 a\n");
    IntegralSchedule s{{0}, {1}, {0}};
    EXPECT_DOUBLE_EQ(validate_schedule(t, s).load, 12.0);
}

TEST(Schedule, MissingPageIsInfeasible) {
    auto t = load_trace("k=2; w=1\n1 a\n1 b\n");
    IntegralSchedule s{{0}, {0}};
    try {
        validate_schedule(t, s);
        FAIL();
    } catch (const Infeasible& e) {
        EXPECT_NE(std::string(e.what()).find("infeasible"), std::string::npos);
    }
    IntegralSchedule over{{0}, {0, 1, 2}};
    t.add_page("c", 0);
    EXPECT_THROW(validate_schedule(t, over), Infeasible);
}

TEST(Schedule, FractionalMass) {
    auto t = load_trace("k=2; w=2\n1 a\n1 b\n");
    FractionalSchedule s{{1.0, 0.5}, {0.25, 1.0}};
    auto c = validate_schedule(t, s);
    EXPECT_DOUBLE_EQ(c.load, 2 * (1.0 + 0.5) + 2 * 0.5);
    EXPECT_DOUBLE_EQ(c.evict, 2 * 0.75);
}

TEST(Schedule, FifScheduleIsAlwaysFeasible) {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        auto t = fixtures::random_trace(rng, {"1", "2"}, 5, 1 + static_cast<int>(rep % 4), 40);
        EXPECT_NO_THROW(validate_schedule(t, simulate_fif(t, static_cast<std::size_t>(t.k())).caches));
    }
}

TEST(Schedule, MakeLazyNeverCostsMore) {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 200; ++rep) {
        auto t = fixtures::random_trace(rng, {"1", "3", "7"}, 3, 3, 25);
        auto s = fixtures::random_integral_schedule(rng, t);
        auto lazy = make_lazy(t, s);
        EXPECT_LE(validate_schedule(t, lazy).load, validate_schedule(t, s).load + 1e-9);
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i == 0) continue;
            for (PageId p : lazy[i])
                if (p != t[i].page) {
                    EXPECT_TRUE(std::binary_search(lazy[i - 1].begin(), lazy[i - 1].end(), p));
                }
        }
    }
}
