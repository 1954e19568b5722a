#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "myopic/belady/ranking.hpp"
#include "myopic/core/error.hpp"
#include "myopic/core/oracle.hpp"
#include "myopic/core/trace.hpp"

namespace myopic {

using PositionSequence = std::vector<std::size_t>;

// Positions (1-based) at which the requests of class j land in its Belady
// ranking, read just before each request.
inline PositionSequence to_position_sequence(const RequestTrace& trace, ClassId j) {
    MyopicOracle oracle(trace);
    BeladyRanking ranking(trace, oracle);
    PositionSequence h;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        ClassId c = trace[t].cls;
        std::size_t pos = ranking.advance();
        if (c == j) h.push_back(pos);
    }
    return h;
}

inline PositionSequence to_position_sequence(const RequestTrace& trace) {
    if (trace.num_classes() != 1) throw InvalidArgument("expected a single-class trace");
    return to_position_sequence(trace, 0);
}

struct RepeatViolation {
    std::size_t t1 = 0; // 1-based indices
    std::size_t t2 = 0;
    std::size_t missing = 0;
};

// First violation of the repeat property, if any: between two equal entries m
// every value in {2,...,m-1} must appear. Entries equal to 1 are skipped.
inline std::optional<RepeatViolation> find_repeat_violation(const PositionSequence& h) {
    // last[v] = index of the most recent occurrence of v (0 = none yet)
    std::size_t maxv = 0;
    for (auto v : h) maxv = std::max(maxv, v);
    std::vector<std::size_t> last(maxv + 1, 0);
    for (std::size_t i = 0; i < h.size(); ++i) {
        const std::size_t t = i + 1;
        const std::size_t m = h[i];
        if (m == 0) throw InvalidArgument("positions are 1-based");
        if (m >= 2 && last[m] != 0) {
            for (std::size_t v = 2; v < m; ++v)
                if (last[v] <= last[m]) return RepeatViolation{last[m], t, v};
        }
        last[m] = t;
    }
    return std::nullopt;
}

inline bool check_repeat_property(const PositionSequence& h) { return !find_repeat_violation(h).has_value(); }

// A single-class trace whose position sequence is h. Pages are "0".."n-1"
// with n = max h; the trace carries the identity as its initial ranking.
// Each request swaps the front page with the requested one, which is the
// ranking update forced by choosing next-request times as in the inverse
// construction.
inline RequestTrace realize_position_sequence(const PositionSequence& h, int k = 1) {
    if (auto v = find_repeat_violation(h))
        throw InvalidArgument("repeat property violated at (" + std::to_string(v->t1) + ", " + std::to_string(v->t2) +
                              "), missing " + std::to_string(v->missing));
    std::size_t n = 0;
    for (auto v : h) n = std::max(n, v);
    RequestTrace trace(WeightTable(std::vector<std::string>{"1"}), k);
    std::vector<PageId> arr(n);
    for (std::size_t p = 0; p < n; ++p) arr[p] = trace.add_page(std::to_string(p), 0);
    trace.set_initial_order({arr});
    for (auto pos : h) {
        PageId page = arr[pos - 1];
        trace.push_request(page);
        std::swap(arr[0], arr[pos - 1]);
    }
    return trace;
}

// Counting form of amortized convexity on the index range [first, last)
// (0-based): occurrences of m >= occurrences of m+1 minus one.
inline bool check_amortized_convexity(const PositionSequence& h, std::size_t first, std::size_t last, std::size_t m) {
    if (first > last || last > h.size()) throw InvalidArgument("interval out of range");
    if (m < 2) throw InvalidArgument("m must be at least 2");
    std::int64_t a = 0, b = 0;
    for (std::size_t i = first; i < last; ++i) {
        a += h[i] == m;
        b += h[i] == m + 1;
    }
    return a >= b - 1;
}

// Checks every interval and every m in O(T^2 + T * max h) using running
// counts per left endpoint.
inline bool check_amortized_convexity_all(const PositionSequence& h) {
    std::size_t maxv = 0;
    for (auto v : h) maxv = std::max(maxv, v);
    std::vector<std::int64_t> cnt(maxv + 2);
    for (std::size_t first = 0; first < h.size(); ++first) {
        std::fill(cnt.begin(), cnt.end(), 0);
        for (std::size_t i = first; i < h.size(); ++i) {
            std::size_t v = h[i];
            ++cnt[v];
            // only the pairs touched by v can change their verdict
            if (v >= 3 && cnt[v - 1] < cnt[v] - 1) return false;
        }
    }
    return true;
}

inline std::string format_positions(const PositionSequence& h) {
    std::ostringstream os;
    for (std::size_t i = 0; i < h.size(); ++i) os << (i ? " " : "") << h[i];
    return os.str();
}

inline PositionSequence parse_positions(const std::string& text) {
    std::istringstream is(text);
    PositionSequence h;
    std::string tok;
    while (is >> tok) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(tok, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("malformed position '" + tok + "'");
        }
        if (used != tok.size() || v == 0) throw InvalidArgument("malformed position '" + tok + "'");
        h.push_back(static_cast<std::size_t>(v));
    }
    return h;
}

} // namespace myopic
