#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "myopic/alloc/allocation.hpp"
#include "myopic/alloc/events.hpp"
#include "myopic/alloc/potentials.hpp"
#include "myopic/core/error.hpp"
#include "myopic/core/numeric.hpp"

namespace myopic {

struct AllocMonitorConfig {
    double c_mon = 0.0;  // <= 0 selects 100 ln(l+1)
    double eps_per_step = 1e-6;
    AllocLimits limits;
};

// One checked window: an offline move or an online event.
struct AllocCheck {
    std::size_t index = 0;
    bool offline_move = false;
    double d_beta = 0.0;
    double d_theta = 0.0;
    double d_offline = 0.0;  // offline service + movement in the window
    double lhs = 0.0;        // 6 d_beta + d_theta
    double rhs = 0.0;        // c_mon d_offline + eps
    bool ok = true;
};

struct AllocMonitorReport {
    double c_mon = 0.0;
    std::size_t checks = 0;
    std::size_t violations = 0;
    std::vector<AllocCheck> failed;  // first few failures
    double worst_slack = 0.0;        // min over checks of rhs - lhs
    double needed_constant = 0.0;    // max lhs / d_offline over windows with d_offline > 0
    std::int64_t substeps = 0;
    AllocState final_state;
    bool ok() const { return violations == 0; }
};

inline double default_alloc_c_mon(std::size_t l) { return 100.0 * std::log(static_cast<double>(l) + 1.0); }

// Checks 6 d_beta + d_Theta <= c_mon (d_S* + offline movement) + eps per window.
// `y[t]` is the offline point during event t; it moves just before event t.
inline AllocMonitorReport monitor_alloc(AllocState s, const std::vector<AllocEvent>& events, const std::vector<std::vector<double>>& y,
                                        const AllocMonitorConfig& cfg = {}) {
    if (y.size() != events.size()) throw InvalidArgument("offline trajectory length does not match events");
    AllocMonitorReport rep;
    rep.c_mon = cfg.c_mon > 0.0 ? cfg.c_mon : default_alloc_c_mon(s.dim());
    rep.worst_slack = std::numeric_limits<double>::infinity();
    auto record = [&](AllocCheck chk) {
        chk.ok = chk.lhs <= chk.rhs;
        rep.worst_slack = std::min(rep.worst_slack, chk.rhs - chk.lhs);
        if (chk.d_offline > 0.0) rep.needed_constant = std::max(rep.needed_constant, chk.lhs / chk.d_offline);
        ++rep.checks;
        if (!chk.ok) {
            ++rep.violations;
            if (rep.failed.size() < 16) rep.failed.push_back(chk);
        }
    };
    for (std::size_t t = 0; t < events.size(); ++t) {
        if (y[t].size() != s.dim()) throw InvalidArgument("offline point has wrong dimension");
        if (t > 0 && y[t] != y[t - 1]) {
            double move = 0.0;
            for (std::size_t i = 0; i < s.dim(); ++i) move += s.w[i] * std::abs(y[t][i] - y[t - 1][i]);
            AllocCheck chk;
            chk.index = t;
            chk.offline_move = true;
            chk.d_theta = alloc_potentials(s, y[t]).theta - alloc_potentials(s, y[t - 1]).theta;
            chk.d_offline = move;
            chk.lhs = chk.d_theta;
            chk.rhs = rep.c_mon * move + cfg.eps_per_step;
            record(chk);
        }
        const double theta0 = alloc_potentials(s, y[t]).theta;
        const double beta0 = s.beta;
        const std::int64_t steps0 = s.substeps;
        double offline_service = 0.0;
        if (const auto* ch = std::get_if<ChargeEvent>(&events[t])) {
            const double b = s.x[ch->r] + ch->alpha;
            offline_service = positive_part(b - y[t][ch->r]) * ch->dt;
        } else {
            const auto& st = std::get<StrictEvent>(events[t]);
            if (y[t][st.r] < st.c - kTol) throw Infeasible("infeasible: offline point violates a strict threshold");
        }
        apply_event(s, events[t], cfg.limits);
        AllocCheck chk;
        chk.index = t;
        chk.d_beta = s.beta - beta0;
        chk.d_theta = alloc_potentials(s, y[t]).theta - theta0;
        chk.d_offline = offline_service;
        chk.lhs = 6.0 * chk.d_beta + chk.d_theta;
        chk.rhs = rep.c_mon * offline_service + cfg.eps_per_step * static_cast<double>(s.substeps - steps0);
        record(chk);
    }
    if (rep.checks == 0) rep.worst_slack = 0.0;
    rep.substeps = s.substeps;
    rep.final_state = std::move(s);
    return rep;
}

// Event stream plus an offline trajectory that serves it.
struct AllocSuite {
    std::vector<double> w;
    std::vector<AllocEvent> events;
    std::vector<std::vector<double>> y;
};

namespace detail {

template <class Engine>
std::vector<double> random_simplex_point(Engine& rng, std::size_t l) {
    std::vector<double> p(l);
    double s = 0.0;
    for (auto& v : p) {
        v = -std::log(1.0 - uniform01(rng));
        s += v;
    }
    for (auto& v : p) v /= s;
    return p;
}

template <class Engine>
std::vector<double> random_alloc_weights(Engine& rng, std::size_t l) {
    std::vector<double> w(l);
    for (auto& v : w) v = std::exp(uniform01(rng) * std::log(64.0));
    return w;
}

} // namespace detail

// Strict thresholds sitting below a hidden, occasionally jumping offline
// point, so the offline service is zero.
inline AllocSuite strict_alloc_suite(std::size_t l, std::size_t T, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    AllocSuite suite;
    suite.w = detail::random_alloc_weights(rng, l);
    std::vector<double> y = detail::random_simplex_point(rng, l);
    for (std::size_t t = 0; t < T; ++t) {
        if (uniform01(rng) < 0.05) y = detail::random_simplex_point(rng, l);
        const auto r = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(l) - 1));
        const double c = std::min(y[r] * (0.2 + 0.8 * uniform01(rng)), 0.999);
        suite.events.emplace_back(StrictEvent{r, c});
        suite.y.push_back(y);
    }
    return suite;
}

// Charges of log-uniform size in [1e-3, 1] against a jumping offline point.
inline AllocSuite charge_alloc_suite(std::size_t l, std::size_t T, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    AllocSuite suite;
    suite.w = detail::random_alloc_weights(rng, l);
    std::vector<double> y = detail::random_simplex_point(rng, l);
    for (std::size_t t = 0; t < T; ++t) {
        if (uniform01(rng) < 0.05) y = detail::random_simplex_point(rng, l);
        const auto r = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(l) - 1));
        const double alpha = std::pow(10.0, -3.0 + 3.0 * uniform01(rng));
        const double dt = 0.05 + 1.95 * uniform01(rng);
        suite.events.emplace_back(ChargeEvent{r, alpha, dt});
        suite.y.push_back(y);
    }
    return suite;
}

inline AllocMonitorReport monitor_alloc(const AllocSuite& suite, const AllocMonitorConfig& cfg = {}) {
    return monitor_alloc(make_alloc_state(suite.w), suite.events, suite.y, cfg);
}

} // namespace myopic
