#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <limits>
#include <map>
#include <vector>

#include "myopic/core/error.hpp"

namespace myopic {

// Per class: for every position v > 0, the stamp of the last pointer sweep
// that covered v. Piecewise constant; the piece (key, next key] carries the
// stamp stored at key.
class PositionTimeline {
public:
    static constexpr std::int64_t kNeverSwept = std::numeric_limits<std::int64_t>::min();

    struct Piece {
        double lo;
        double hi;
        std::int64_t stamp;
    };

    PositionTimeline() { bp_[0.0] = kNeverSwept; }

    // Marks (lo, hi] as swept at `stamp`.
    void record(double lo, double hi, std::int64_t stamp) {
        if (!(lo >= 0.0) || !(hi > lo)) throw InvalidArgument("sweep range must be a nonempty subset of (0, inf)");
        const std::int64_t after = stamp_at_right(hi);
        split(lo);
        bp_.erase(bp_.upper_bound(lo), bp_.lower_bound(hi));
        bp_[lo] = stamp;
        bp_[hi] = after;
        // Drop breakpoints that no longer change the stamp.
        for (auto it = std::next(bp_.begin()); it != bp_.end();) {
            if (it->second == std::prev(it)->second)
                it = bp_.erase(it);
            else
                ++it;
        }
    }

    // Stamp of the piece containing u (u <= 0 reads the first piece).
    std::int64_t stamp_at(double u) const {
        auto it = bp_.lower_bound(u);
        if (it == bp_.begin()) return it->second;
        return std::prev(it)->second;
    }

    // Pieces covering (lo, hi].
    std::vector<Piece> pieces(double lo, double hi) const {
        std::vector<Piece> out;
        if (!(hi > lo)) return out;
        auto it = bp_.upper_bound(std::max(lo, 0.0));
        if (it != bp_.begin()) --it;
        double a = std::max(lo, 0.0);
        if (lo < 0.0 && hi > lo) out.push_back({lo, std::min(hi, 0.0), bp_.begin()->second});
        for (; it != bp_.end() && a < hi; ++it) {
            auto nx = std::next(it);
            const double b = nx == bp_.end() ? hi : std::min(hi, nx->first);
            if (b > a) out.push_back({a, b, it->second});
            a = std::max(a, b);
        }
        return out;
    }

    // |{v in (y, x] : v swept after u}|; the whole window when u was never swept.
    double recent_overlap(double u, double y, double x) const { return overlap_after(stamp_at(u), y, x); }

    double overlap_after(std::int64_t stamp, double y, double x) const {
        if (!(x > y)) return 0.0;
        if (stamp == kNeverSwept) return x - y;
        double m = 0.0;
        for (const auto& p : pieces(y, x))
            if (p.stamp > stamp) m += p.hi - p.lo;
        return m;
    }

    std::size_t breakpoints() const noexcept { return bp_.size(); }

private:
    std::int64_t stamp_at_right(double v) const {
        auto it = bp_.upper_bound(v);
        return std::prev(it)->second;
    }
    void split(double v) {
        if (bp_.count(v)) return;
        bp_[v] = stamp_at_right(v);
    }

    std::map<double, std::int64_t> bp_;
};

} // namespace myopic
