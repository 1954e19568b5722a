#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "myopic/core/error.hpp"
#include "myopic/core/numeric.hpp"
#include "myopic/wimp/interval_set.hpp"
#include "myopic/wimp/timeline.hpp"

namespace myopic {

struct WimpLimits {
    double var_cap = 0.01;
    double feasibility_tol = 1e-10;
    std::int64_t max_substeps = 50'000'000;        // per request
    std::int64_t max_boundary_sweeps = 20'000'000;  // per request
};

// Fractional canonical algorithm state in page units (sum x = k).
struct WimpState {
    std::vector<double> w;
    double k = 0.0;
    std::vector<double> x;
    std::vector<double> rho;
    std::vector<IntervalSet> S;
    std::vector<PositionTimeline> timeline;
    std::int64_t stamp = 0;

    double pseudo = 0.0;
    double load = 0.0;      // weighted increase of x
    double movement = 0.0;  // weighted |dx|
    double ranking = 0.0;   // ranking-change cost
    std::int64_t substeps = 0;
    double max_measure_gap = 0.0;  // largest ||S_i| - rho_i| before repair
    double max_drift = 0.0;        // largest |sum x - k| before repair
    double max_below_x = 0.0;      // largest x_i - inf S_i
    std::int64_t scatter_checks = 0;
    std::int64_t scatter_failures = 0;

    std::size_t dim() const { return x.size(); }
    double delta() const { return 1.0 / static_cast<double>(x.size()); }
    double total_rate() const {
        double s = 0.0;
        for (double v : rho) s += v;
        return s;
    }
    double sweep_cost() const { return load + ranking; }
};

// x_i = k/l, rho_i = 1, S_i = (x_i, x_i + 1].
inline WimpState make_wimp_state(std::vector<double> weights, int k) {
    if (weights.empty()) throw InvalidArgument("at least one weight class is required");
    if (k < 1) throw InvalidArgument("cache size must be positive");
    for (double v : weights)
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("weights must be positive");
    WimpState s;
    const std::size_t l = weights.size();
    s.w = std::move(weights);
    s.k = k;
    s.x.assign(l, s.k / static_cast<double>(l));
    s.rho.assign(l, 1.0);
    s.timeline.resize(l);
    for (std::size_t i = 0; i < l; ++i) s.S.emplace_back(std::vector<Interval>{{s.x[i], s.x[i] + s.rho[i]}});
    return s;
}

struct WimpRates {
    std::vector<double> x;
    std::vector<double> rho;
    double gamma = 0.0;
};

// Rates while the pointer is ahead of x_r. Classes at zero (other than r)
// are frozen and leave gamma's sum.
inline WimpRates wimp_rates(const WimpState& s, std::size_t r, bool pointer_in_S) {
    const std::size_t l = s.dim();
    WimpRates R;
    R.x.assign(l, 0.0);
    R.rho.assign(l, 0.0);
    const double C = s.total_rate();
    const double delta = s.delta();
    std::vector<double> u(l, 0.0);
    for (std::size_t i = 0; i < l; ++i) {
        if (i != r && s.x[i] <= 0.0) continue;
        u[i] = C > 0.0 ? (s.rho[i] + delta * C) / (s.w[i] * C) : 2.0 * delta / s.w[i];
        R.gamma += u[i];
    }
    for (std::size_t i = 0; i < l; ++i) {
        const double share = u[i] / R.gamma;
        R.x[i] = (i == r ? 1.0 : 0.0) - share;
        R.rho[i] = share - (i == r && pointer_in_S ? 2.0 : 0.0);
    }
    return R;
}

struct WimpServeResult {
    double q = 0.0;
    double x_r_before = 0.0;
    double load = 0.0;
    double ranking = 0.0;
    double active_time = 0.0;  // time with the pointer ahead of x_r in the main sweep
    double pseudo = 0.0;
    std::size_t boundary_sweeps = 0;
    double cost() const { return load + ranking; }
};

namespace detail {

inline void wimp_repair(WimpState& s, std::size_t r) {
    const std::size_t l = s.dim();
    double sum = 0.0;
    for (double v : s.x) sum += v;
    s.max_drift = std::max(s.max_drift, std::abs(sum - s.k));
    double others = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
        if (s.x[i] < 0.0) s.x[i] = 0.0;
        if (s.rho[i] < 0.0) s.rho[i] = 0.0;
        if (i != r) others += s.x[i];
    }
    s.x[r] = std::max(0.0, s.k - others);
    for (std::size_t i = 0; i < l; ++i) {
        s.max_measure_gap = std::max(s.max_measure_gap, std::abs(s.S[i].measure() - s.rho[i]));
        s.S[i].set_measure(s.rho[i], s.x[i]);
        if (!s.S[i].empty()) s.max_below_x = std::max(s.max_below_x, s.x[i] - s.S[i].inf());
    }
}

// Velocity of an S_r endpoint under the removal rules.
inline double endpoint_velocity(const IntervalSet& S, double boundary, double xr_rate) {
    if (S.empty()) return 0.0;
    double v = 0.0;
    if (boundary == S.inf()) v += xr_rate;
    if (boundary == S.sup()) v -= 1.0;
    return v;
}

// One pointer sweep over (lo, hi] for class r at speed 8.
inline void wimp_sweep(WimpState& s, std::size_t r, double lo, double hi, const WimpLimits& lim, std::int64_t substep_end,
                       double& active_time, const std::vector<double>* y) {
    const std::size_t l = s.dim();
    s.timeline[r].record(lo, hi, ++s.stamp);
    double p = std::max(lo, std::min(hi, s.x[r]));
    const double anchor_base = lo;
    while (p < hi) {
        if (s.substeps >= substep_end) throw BudgetExceeded("wimp integration exceeded its substep budget");
        const bool in_S = s.S[r].contains_right_of(p, 1e-12 * std::max(1.0, p));
        const WimpRates R = wimp_rates(s, r, in_S);
        const double C = s.total_rate();
        const double floor_scale = s.delta() * C;
        double h = (hi - p) / 8.0;
        bool to_end = true;
        for (std::size_t i = 0; i < l; ++i) {
            if (R.x[i] != 0.0) h = std::min(h, lim.var_cap * std::max(s.x[i], floor_scale) / std::abs(R.x[i]));
            if (R.rho[i] != 0.0) h = std::min(h, lim.var_cap * std::max(s.rho[i], floor_scale) / std::abs(R.rho[i]));
        }
        if (h < (hi - p) / 8.0) to_end = false;
        // Pointer meeting the next endpoint of S_r.
        std::optional<double> cross_at;
        for (auto nb = s.S[r].next_boundary_after(p); nb && *nb < hi;) {
            const double closing = 8.0 - endpoint_velocity(s.S[r], *nb, R.x[r]);
            const double t = (*nb - p) / closing;
            if (*nb - p > 1e-13 * std::max(1.0, p)) {
                if (t < h) {
                    h = t;
                    to_end = false;
                    cross_at = p + 8.0 * t;
                }
                break;
            }
            nb = s.S[r].next_boundary_after(*nb);
        }
        constexpr std::size_t kNone = static_cast<std::size_t>(-1);
        std::size_t floor_hit = kNone;
        for (std::size_t i = 0; i < l; ++i) {
            if (i == r || R.x[i] >= 0.0) continue;
            const double t = s.x[i] / -R.x[i];
            if (t <= h) {
                h = t;
                floor_hit = i;
                to_end = false;
                cross_at.reset();
            }
        }
        bool rho_empty = false;
        if (R.rho[r] < 0.0) {
            const double t = s.rho[r] / -R.rho[r];
            if (t <= h) {
                h = t;
                rho_empty = true;
                floor_hit = kNone;
                to_end = false;
                cross_at.reset();
            }
        }
        const std::vector<double> x0 = s.x;
        double gamma = R.gamma;
        std::vector<double> dx(l), drho(l);
        if (floor_hit == kNone && !rho_empty) {
            // Midpoint rule with the frozen set and pointer membership of the start.
            WimpState mid;
            mid.w = s.w;
            mid.k = s.k;
            mid.x.resize(l);
            mid.rho.resize(l);
            for (std::size_t i = 0; i < l; ++i) {
                mid.x[i] = std::max(0.0, s.x[i] + 0.5 * h * R.x[i]);
                mid.rho[i] = std::max(0.0, s.rho[i] + 0.5 * h * R.rho[i]);
                if (i != r && s.x[i] <= 0.0) mid.x[i] = 0.0;
            }
            const WimpRates M = wimp_rates(mid, r, in_S);
            for (std::size_t i = 0; i < l; ++i) {
                dx[i] = h * M.x[i];
                drho[i] = h * M.rho[i];
            }
            gamma = M.gamma;
        } else {
            for (std::size_t i = 0; i < l; ++i) {
                dx[i] = h * R.x[i];
                drho[i] = h * R.rho[i];
            }
        }
        // Sets: classes other than r absorb what x_i sweeps over.
        for (std::size_t i = 0; i < l; ++i) {
            if (i == r) continue;
            double nx = s.x[i] + dx[i];
            if (floor_hit == i) nx = 0.0;
            nx = std::max(0.0, nx);
            if (nx < s.x[i]) s.S[i].insert(nx, s.x[i]);
            s.x[i] = nx;
            s.rho[i] += drho[i];
        }
        const double pnext = cross_at ? *cross_at : (to_end ? hi : p + 8.0 * h);
        // S_r: grow from the anchored interval, then trim right, then left.
        IntervalSet& Sr = s.S[r];
        if (!in_S) {
            std::optional<double> anchor;
            if (s.x[r] > anchor_base && s.x[r] <= hi) anchor = s.x[r];
            Sr.add_from_range(anchor_base, std::max(p, anchor_base), 2.0 * h, anchor, pnext);
        }
        const double scatter_before = y ? Sr.measure_above((*y)[r]) : 0.0;
        const double right_cut = std::min(h, Sr.measure());
        // Exact whenever all removed mass lies at or above y_r.
        const bool scatter_applies = y && right_cut > 0.0 && scatter_before >= right_cut;
        Sr.remove_right(right_cut);
        if (scatter_applies) {
            ++s.scatter_checks;
            if (std::abs(scatter_before - Sr.measure_above((*y)[r]) - right_cut) > 1e-12 * std::max(1.0, scatter_before)) ++s.scatter_failures;
        }
        if (dx[r] > 0.0) Sr.remove_left(std::min(dx[r], Sr.measure()));
        s.x[r] += dx[r];
        s.rho[r] += drho[r];
        if (rho_empty) {
            s.rho[r] = 0.0;
            Sr = IntervalSet();
        }
        wimp_repair(s, r);
        double moved = 0.0;
        double loaded = 0.0;
        for (std::size_t i = 0; i < l; ++i) {
            const double d = s.x[i] - x0[i];
            moved += s.w[i] * std::abs(d);
            loaded += s.w[i] * positive_part(d);
        }
        s.movement += moved;
        s.load += loaded;
        s.pseudo += h / gamma;
        active_time += h;
        ++s.substeps;
        p = to_end ? hi : pnext;
    }
}

} // namespace detail

// Serves a request to position q (1-based) of class r's ranking. If the
// requested page ends below full presence, position 1 is swept again until
// x_r >= 1 (the limit of repeating the request).
inline WimpServeResult wimp_serve(WimpState& s, std::size_t r, std::size_t q, const WimpLimits& lim = {},
                                  const std::vector<double>* y = nullptr) {
    if (r >= s.dim()) throw InvalidArgument("class out of range");
    if (q < 1) throw InvalidArgument("positions are 1-based");
    WimpServeResult res;
    res.q = static_cast<double>(q);
    res.x_r_before = s.x[r];
    const double load0 = s.load;
    const double pseudo0 = s.pseudo;
    res.ranking = s.w[r] * std::clamp(res.q - s.x[r], 0.0, 1.0);
    s.ranking += res.ranking;
    const std::int64_t substep_end = s.substeps + lim.max_substeps;
    detail::wimp_sweep(s, r, res.q - 1.0, res.q, lim, substep_end, res.active_time, y);
    const double target = std::min(1.0, s.k);
    double ignored = 0.0;
    while (s.x[r] < target - lim.feasibility_tol) {
        if (static_cast<std::int64_t>(++res.boundary_sweeps) > lim.max_boundary_sweeps)
            throw Infeasible("infeasible: requested page not loaded within the sweep budget");
        detail::wimp_sweep(s, r, 0.0, 1.0, lim, substep_end, ignored, y);
    }
    res.load = s.load - load0;
    res.pseudo = s.pseudo - pseudo0;
    return res;
}

} // namespace myopic
