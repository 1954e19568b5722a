#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "myopic/core/error.hpp"
#include "myopic/core/ledger.hpp"

namespace myopic {

// A charge of rate alpha in direction r for dt time units: the cost function
// has slope -1 and vanishes at x_r + alpha (measured when the event starts).
struct ChargeEvent {
    std::size_t r = 0;
    double alpha = 0.0;
    double dt = 0.0;
};

// Integration limits. Each substep changes no variable by more than
// `var_cap * max(value, delta*C)` and closes at most `gap_cap` of the
// remaining distance to the cost function's zero.
struct AllocLimits {
    double var_cap = 0.01;
    double gap_cap = 0.05;
    std::int64_t max_substeps = 2'000'000;
    double strict_tol = 1e-9;
};

struct AllocState {
    std::vector<double> w;  // weights per direction
    std::vector<double> x;  // online point on the simplex
    std::vector<double> c;  // region estimates, c_i >= x_i
    CostLedger ledger;      // service + movement
    double beta = 0.0;      // integral of alpha / (gamma w_r)
    std::int64_t substeps = 0;
    double max_drift = 0.0;      // largest |sum x - 1| seen before repair
    double max_c_deficit = 0.0;  // largest x_i - c_i seen before repair

    std::size_t dim() const { return x.size(); }
    double delta() const { return 1.0 / static_cast<double>(x.size()); }
    double rho(std::size_t i) const { return c[i] - x[i]; }
    std::vector<double> rho() const {
        std::vector<double> out(dim());
        for (std::size_t i = 0; i < dim(); ++i) out[i] = rho(i);
        return out;
    }
    double total_rate() const {
        double s = 0.0;
        for (std::size_t i = 0; i < dim(); ++i) s += rho(i);
        return s;
    }
};

// Uniform start with rho_i = 1/l.
inline AllocState make_alloc_state(std::vector<double> weights) {
    if (weights.empty()) throw InvalidArgument("at least one direction is required");
    for (double v : weights)
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("weights must be positive");
    AllocState s;
    const double l = static_cast<double>(weights.size());
    s.w = std::move(weights);
    s.x.assign(s.w.size(), 1.0 / l);
    s.c.assign(s.w.size(), 2.0 / l);
    return s;
}

// Instantaneous derivatives for a charge alpha in direction r.
struct AllocRates {
    std::vector<double> x;
    std::vector<double> c;
    std::vector<double> share;  // (rho_i + delta C)/(gamma w_i C), zero when frozen
    double gamma = 0.0;
    double beta = 0.0;  // alpha / (gamma w_r)
    int rule = 0;       // +1 c_r grows, -1 c_r shrinks, 0 c_r fixed
};

// Coordinates at zero (other than r) are frozen and left out of gamma.
// `rule_hint` forces the c-rule (used once c_r sits on the cost's zero).
inline AllocRates alloc_rates(const AllocState& s, std::size_t r, double alpha, std::optional<int> rule_hint = std::nullopt) {
    const std::size_t l = s.dim();
    if (r >= l) throw InvalidArgument("direction out of range");
    if (!std::isfinite(alpha) || alpha < 0.0) throw InvalidArgument("charge must be finite and nonnegative");
    AllocRates out;
    out.x.assign(l, 0.0);
    out.c.assign(l, 0.0);
    out.share.assign(l, 0.0);
    const double C = s.total_rate();
    const double delta = s.delta();
    std::vector<bool> active(l);
    for (std::size_t i = 0; i < l; ++i) active[i] = i == r || s.x[i] > 0.0;
    double gamma = 0.0;
    std::vector<double> u(l, 0.0);
    for (std::size_t i = 0; i < l; ++i) {
        if (!active[i]) continue;
        // With C = 0 every rho_i/C is taken as 1/l.
        u[i] = C > 0.0 ? (s.rho(i) + delta * C) / (s.w[i] * C) : 2.0 * delta / s.w[i];
        gamma += u[i];
    }
    out.gamma = gamma;
    const double scale = alpha / s.w[r];
    for (std::size_t i = 0; i < l; ++i) {
        out.share[i] = u[i] / gamma;
        out.x[i] = -scale * (out.share[i] - (i == r ? 1.0 : 0.0));
    }
    out.beta = alpha / (gamma * s.w[r]);
    int rule;
    if (rule_hint) {
        rule = *rule_hint;
    } else {
        const double rho_r = s.rho(r);
        const double tol = 1e-12 * std::max(1.0, rho_r);
        rule = alpha > rho_r + tol ? 1 : (alpha < rho_r - tol ? -1 : 0);
    }
    out.rule = rule;
    out.c[r] = rule * scale;
    return out;
}

namespace detail {

inline void repair(AllocState& s, std::size_t r) {
    double sum = 0.0;
    for (double v : s.x) sum += v;
    s.max_drift = std::max(s.max_drift, std::abs(sum - 1.0));
    for (std::size_t i = 0; i < s.dim(); ++i)
        if (s.x[i] < 0.0) s.x[i] = 0.0;
    double others = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i)
        if (i != r) others += s.x[i];
    s.x[r] = std::max(0.0, 1.0 - others);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        s.max_c_deficit = std::max(s.max_c_deficit, s.x[i] - s.c[i]);
        if (s.c[i] < s.x[i]) s.c[i] = s.x[i];
    }
}

// Drives x under the charge whose zero sits at `b` in direction r. Runs for
// `duration` time units, or until x_r >= b - strict_tol when duration is
// infinite. Returns the service integral of (b - x_r).
inline double integrate(AllocState& s, std::size_t r, double b, double duration, const AllocLimits& lim) {
    const bool strict = !std::isfinite(duration);
    const std::size_t l = s.dim();
    double left = duration;
    double service = 0.0;
    std::int64_t budget = lim.max_substeps;
    // Once c_r reaches b the two c-rules meet and c_r stays put.
    std::optional<int> pinned;
    if (s.c[r] == b) pinned = 0;
    while (strict || left > 0.0) {
        const double alpha = b - s.x[r];
        if (strict && s.x[r] >= b - lim.strict_tol) break;
        if (alpha <= 1e-14 * std::max(1.0, b)) {
            if (!strict) break;
        }
        if (--budget < 0) throw BudgetExceeded("allocation integration exceeded its substep budget");
        const AllocRates R = alloc_rates(s, r, alpha, pinned);
        const double C = s.total_rate();
        const double floor_scale = s.delta() * C;
        double h = strict ? std::numeric_limits<double>::infinity() : left;
        for (std::size_t i = 0; i < l; ++i) {
            const double dx = std::abs(R.x[i]);
            if (dx > 0.0) h = std::min(h, lim.var_cap * std::max(s.x[i], floor_scale) / dx);
            const double drho = std::abs(R.c[i] - R.x[i]);
            if (drho > 0.0) h = std::min(h, lim.var_cap * std::max(s.rho(i), floor_scale) / drho);
        }
        if (R.x[r] > 0.0) h = std::min(h, lim.gap_cap * alpha / R.x[r]);
        if (!std::isfinite(h)) {
            // Nothing moves (every other coordinate is frozen at zero).
            if (strict) throw Infeasible("strict threshold unreachable: no mass left to move");
            break;
        }
        // Events that end the substep early.
        std::optional<std::size_t> floor_hit;
        for (std::size_t i = 0; i < l; ++i) {
            if (i == r || R.x[i] >= 0.0) continue;
            const double t = s.x[i] / -R.x[i];
            if (t <= h) {
                h = t;
                floor_hit = i;
            }
        }
        bool c_hit = false;
        if (R.rule != 0) {
            const double t = (b - s.c[r]) / R.c[r];
            if (t >= 0.0 && t <= h) {
                h = t;
                c_hit = true;
                floor_hit.reset();
            }
        }
        const std::vector<double> x0 = s.x;
        double beta_rate = R.beta;
        if (!floor_hit && !c_hit) {
            // Midpoint rule.
            AllocState mid = s;
            for (std::size_t i = 0; i < l; ++i) {
                mid.x[i] = std::max(0.0, s.x[i] + 0.5 * h * R.x[i]);
                mid.c[i] = s.c[i] + 0.5 * h * R.c[i];
            }
            const double alpha_mid = b - mid.x[r];
            if (alpha_mid > 0.0) {
                AllocRates M = alloc_rates(mid, r, alpha_mid, pinned);
                // Keep the frozen set and rule of the substep start.
                for (std::size_t i = 0; i < l; ++i) {
                    if (i != r && s.x[i] <= 0.0) M.x[i] = 0.0;
                }
                if (M.rule != R.rule) M = R;
                for (std::size_t i = 0; i < l; ++i) {
                    s.x[i] += h * M.x[i];
                    s.c[i] += h * M.c[i];
                }
                beta_rate = M.beta;
            } else {
                for (std::size_t i = 0; i < l; ++i) {
                    s.x[i] += h * R.x[i];
                    s.c[i] += h * R.c[i];
                }
            }
        } else {
            for (std::size_t i = 0; i < l; ++i) {
                s.x[i] += h * R.x[i];
                s.c[i] += h * R.c[i];
            }
            if (floor_hit) s.x[*floor_hit] = 0.0;
            if (c_hit) {
                s.c[r] = b;
                pinned = 0;
            }
        }
        repair(s, r);
        double moved = 0.0;
        for (std::size_t i = 0; i < l; ++i) moved += s.w[i] * std::abs(s.x[i] - x0[i]);
        s.ledger.movement += moved;
        const double alpha_end = std::max(0.0, b - s.x[r]);
        service += 0.5 * h * (alpha + alpha_end);
        s.beta += h * beta_rate;
        ++s.substeps;
        if (!strict) left -= h;
    }
    return service;
}

} // namespace detail

// Applies one charge event; service cost is the integral of alpha(t).
inline void alloc_step(AllocState& s, const ChargeEvent& ev, const AllocLimits& lim = {}) {
    if (ev.r >= s.dim()) throw InvalidArgument("direction out of range");
    if (!std::isfinite(ev.alpha) || ev.alpha < 0.0) throw InvalidArgument("charge must be finite and nonnegative");
    if (!std::isfinite(ev.dt) || ev.dt < 0.0) throw InvalidArgument("duration must be finite and nonnegative");
    if (ev.alpha == 0.0 || ev.dt == 0.0) return;
    const double b = s.x[ev.r] + ev.alpha;
    s.ledger.service += detail::integrate(s, ev.r, b, ev.dt, lim);
}

// Strict threshold: keep charging (c - x_r)_+ until x_r reaches c. Only the
// movement is billed.
inline void serve_strict(AllocState& s, std::size_t r, double threshold, const AllocLimits& lim = {}) {
    if (r >= s.dim()) throw InvalidArgument("direction out of range");
    if (!(threshold < 1.0)) throw InvalidArgument("strict threshold must be below 1");
    if (!(threshold >= 0.0)) throw InvalidArgument("strict threshold must be nonnegative");
    if (threshold == 0.0 || s.x[r] >= threshold) return;
    detail::integrate(s, r, threshold, std::numeric_limits<double>::infinity(), lim);
}

// Tangent of a convex nonincreasing cost at x_r: value alpha and slope -scale.
struct SimplifiedCost {
    double alpha = 0.0;
    double scale = 0.0;
};

// Empty when the cost vanishes at x_r.
inline std::optional<SimplifiedCost> simplify_cost(const std::function<double(double)>& f, const std::function<double(double)>& df, double x_r) {
    const double alpha = f(x_r);
    if (std::isinf(alpha)) throw InvalidArgument("infinite cost at the current point: use serve_strict");
    if (!std::isfinite(alpha) || alpha < 0.0) throw InvalidArgument("cost must be finite and nonnegative");
    if (alpha == 0.0) return std::nullopt;
    const double slope = df(x_r);
    if (!std::isfinite(slope) || slope > 0.0) throw InvalidArgument("cost must be nonincreasing");
    return SimplifiedCost{alpha, -slope};
}

// The slope -s tangent charged for dt equals a slope -1 charge of alpha/s
// run for s*dt. A flat tangent cannot be reduced by moving and yields nothing.
inline std::optional<ChargeEvent> to_charge_event(std::size_t r, const SimplifiedCost& sc, double dt) {
    if (sc.scale <= 0.0) return std::nullopt;
    return ChargeEvent{r, sc.alpha / sc.scale, sc.scale * dt};
}

} // namespace myopic
