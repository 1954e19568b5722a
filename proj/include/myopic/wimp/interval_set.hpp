#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "myopic/core/error.hpp"

namespace myopic {

// Half-open interval (lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

// Finite union of disjoint (lo, hi] intervals kept sorted; touching
// intervals are merged and empty ones dropped.
class IntervalSet {
public:
    // Gaps narrower than this are closed on insertion.
    static constexpr double kMergeGap = 1e-12;

    IntervalSet() = default;
    explicit IntervalSet(std::vector<Interval> parts) {
        for (const auto& iv : parts) {
            if (!(iv.lo <= iv.hi)) throw InvalidArgument("interval bounds out of order");
            insert(iv.lo, iv.hi);
        }
    }

    const std::vector<Interval>& intervals() const noexcept { return iv_; }
    bool empty() const noexcept { return iv_.empty(); }
    std::size_t size() const noexcept { return iv_.size(); }

    double measure() const {
        double m = 0.0;
        for (const auto& iv : iv_) m += iv.length();
        return m;
    }
    double inf() const { return iv_.empty() ? 0.0 : iv_.front().lo; }
    double sup() const { return iv_.empty() ? 0.0 : iv_.back().hi; }

    bool contains(double v) const {
        for (const auto& iv : iv_)
            if (iv.lo < v && v <= iv.hi) return true;
        return false;
    }
    // Whether the points just right of v belong to the set; a left endpoint
    // within `tol` of v counts as reached.
    bool contains_right_of(double v, double tol = 0.0) const {
        for (const auto& iv : iv_)
            if (iv.lo <= v + tol && v < iv.hi - tol) return true;
        return false;
    }

    // |S ∩ (a, b]|
    double measure_in(double a, double b) const {
        double m = 0.0;
        for (const auto& iv : iv_) {
            const double lo = std::max(iv.lo, a);
            const double hi = std::min(iv.hi, b);
            if (hi > lo) m += hi - lo;
        }
        return m;
    }
    // |S ∩ [y, inf)|
    double measure_above(double y) const {
        double m = 0.0;
        for (const auto& iv : iv_) {
            if (iv.hi <= y) continue;
            m += iv.hi - std::max(iv.lo, y);
        }
        return m;
    }

    // Smallest interval endpoint strictly greater than v.
    std::optional<double> next_boundary_after(double v) const {
        for (const auto& iv : iv_) {
            if (iv.lo > v) return iv.lo;
            if (iv.hi > v) return iv.hi;
        }
        return std::nullopt;
    }

    void insert(double lo, double hi) {
        if (!(hi > lo)) return;
        std::vector<Interval> out;
        out.reserve(iv_.size() + 1);
        Interval cur{lo, hi};
        bool placed = false;
        for (const auto& iv : iv_) {
            if (iv.hi < cur.lo - kMergeGap) {
                out.push_back(iv);
            } else if (iv.lo > cur.hi + kMergeGap) {
                if (!placed) {
                    out.push_back(cur);
                    placed = true;
                }
                out.push_back(iv);
            } else {
                cur.lo = std::min(cur.lo, iv.lo);
                cur.hi = std::max(cur.hi, iv.hi);
            }
        }
        if (!placed) out.push_back(cur);
        iv_ = std::move(out);
    }

    void remove_left(double amount) {
        check_removal(amount);
        while (amount > 0.0 && !iv_.empty()) {
            Interval& f = iv_.front();
            if (f.length() <= amount) {
                amount -= f.length();
                iv_.erase(iv_.begin());
            } else {
                f.lo += amount;
                amount = 0.0;
                if (!(f.hi > f.lo)) iv_.erase(iv_.begin());
            }
        }
    }

    void remove_right(double amount) {
        check_removal(amount);
        while (amount > 0.0 && !iv_.empty()) {
            Interval& b = iv_.back();
            if (b.length() <= amount) {
                amount -= b.length();
                iv_.pop_back();
            } else {
                b.hi -= amount;
                amount = 0.0;
                if (!(b.hi > b.lo)) iv_.pop_back();
            }
        }
    }

    // Adds `amount` of points of (a, b] \ S by pushing right the boundary of
    // the leftmost interval meeting (a, b]; with none, growth starts from an
    // empty interval at `anchor` (default a). Points are taken up to `fill_to`
    // (default b), so the range that picks the interval can be shorter than
    // the one being filled. Returns the amount added, which falls short only
    // when the range runs out of room.
    double add_from_range(double a, double b, double amount, std::optional<double> anchor = std::nullopt,
                          std::optional<double> fill_to = std::nullopt) {
        if (amount < 0.0) throw InvalidArgument("negative amount");
        const double end = std::max(b, fill_to.value_or(b));
        double cursor = std::clamp(anchor.value_or(a), a, b);
        for (const auto& iv : iv_) {
            if (iv.lo < b && iv.hi > a) {
                cursor = iv.hi;
                break;
            }
        }
        double left = amount;
        while (left > 0.0 && cursor < end) {
            // First interval reaching past the cursor.
            auto it = std::find_if(iv_.begin(), iv_.end(), [&](const Interval& iv) { return iv.hi > cursor; });
            if (it != iv_.end() && it->lo <= cursor) {
                cursor = it->hi;
                continue;
            }
            const double gap_end = it == iv_.end() ? end : std::min(end, it->lo);
            const double take = std::min(left, gap_end - cursor);
            if (take <= 0.0) {
                if (it == iv_.end()) break;
                cursor = it->hi;
                continue;
            }
            const double from = cursor;
            insert(from, from + take);
            left -= take;
            cursor = from + take;
        }
        return amount - left;
    }

    // Moves the rightmost boundary so the measure becomes `target`.
    void set_measure(double target, double fallback_start) {
        if (target < 0.0) throw InvalidArgument("negative measure");
        const double m = measure();
        if (m > target) {
            remove_right(m - target);
        } else if (m < target) {
            if (!iv_.empty() && !(iv_.back().hi > iv_.back().lo)) iv_.pop_back();
            if (iv_.empty())
                iv_.push_back({fallback_start, fallback_start + target});
            else
                iv_.back().hi += target - m;
        }
    }

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    void check_removal(double amount) const {
        if (amount < 0.0) throw InvalidArgument("negative amount");
        const double m = measure();
        if (amount > m * (1.0 + 1e-12) + 1e-15) throw InvalidArgument("removal exceeds measure");
    }

    std::vector<Interval> iv_;
};

} // namespace myopic
