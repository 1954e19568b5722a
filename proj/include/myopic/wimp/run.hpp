#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "myopic/belady/ranking.hpp"
#include "myopic/canonical/canonical.hpp"
#include "myopic/core/error.hpp"
#include "myopic/core/oracle.hpp"
#include "myopic/core/trace.hpp"
#include "myopic/offline/mincostflow.hpp"
#include "myopic/offline/profile.hpp"
#include "myopic/wimp/potentials.hpp"
#include "myopic/wimp/wimp.hpp"

namespace myopic {

struct WimpRunConfig {
    bool monitor = false;
    double c_mon = 100.0;        // multiplies ln(l + 1)
    double eps_per_event = 1e-6;
    bool keep_records = false;
    bool check_scatter = false;
    WimpLimits limits{};
};

struct WimpEventRecord {
    std::size_t t = 0;
    std::size_t r = 0;
    std::size_t q = 0;
    WimpPotentials pot;
    double d_pseudo = 0.0;
    double d_theta = 0.0;
    double offline = 0.0;  // offline movement + service of the window
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = true;
};

struct WimpMonitorReport {
    double c_mon = 0.0;
    std::size_t checks = 0;
    std::size_t violations = 0;
    double worst_slack = std::numeric_limits<double>::infinity();  // min rhs - lhs
    double needed_constant = 0.0;  // smallest c with every window passing (eps kept)
    std::vector<WimpEventRecord> records;
    std::vector<WimpEventRecord> failed;  // first few failures
    bool ok() const { return violations == 0; }
};

struct WimpRunResult {
    std::size_t l = 0;
    int k = 0;
    std::size_t T = 0;
    Profile profile;          // x / k after each request
    double sweep_cost = 0.0;  // weighted increase of x plus ranking-change cost
    double online = 0.0;      // load of the canonical algorithm driven by the profile
    double pseudo = 0.0;
    double opt = 0.0;
    double opt_canonical = 0.0;
    double min_feasibility = 1.0;  // smallest x_r after a request, capped at 1
    double max_measure_gap = 0.0;
    double max_drift = 0.0;
    double max_below_x = 0.0;
    double max_final_sum_error = 0.0;
    std::size_t boundary_sweeps = 0;
    std::int64_t substeps = 0;
    std::int64_t scatter_checks = 0;
    std::int64_t scatter_failures = 0;
    std::optional<WimpMonitorReport> monitor;

    double ratio() const { return opt > 0.0 ? online / opt : (online > 0.0 ? INFINITY : 1.0); }
    double ratio_canonical() const {
        return opt_canonical > 0.0 ? online / opt_canonical : (online > 0.0 ? INFINITY : 1.0);
    }
    double weight_sum = 0.0;
    // Pseudo-cost factor check with additive slack sum_i w_i k.
    bool pseudo_cost_check(double factor = 18.0) const {
        return online <= factor * pseudo + weight_sum * k + 1e-9;
    }
};

// Offline positions in page units from a canonical profile: class masses plus
// the still-empty slots spread evenly.
inline std::vector<double> offline_position(const std::vector<double>& row, int k) {
    const double kk = k;
    std::vector<double> y(row.size());
    double used = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        y[i] = kk * row[i];
        used += y[i];
    }
    const double spare = std::max(0.0, kk - used) / static_cast<double>(row.size());
    for (auto& v : y) v += spare;
    return y;
}

inline WimpRunResult wimp_run(const RequestTrace& input, const WimpRunConfig& cfg = {}) {
    RequestTrace trace = input;
    trace.pad_universe(static_cast<std::size_t>(trace.k()));
    const std::size_t l = trace.num_classes();
    std::vector<double> w(l);
    for (std::size_t j = 0; j < l; ++j) w[j] = trace.weights()[j];

    WimpRunResult res;
    res.l = l;
    res.k = trace.k();
    res.T = trace.size();
    for (double v : w) res.weight_sum += v;

    std::optional<OfflineSolution> sol;
    if (!trace.empty()) sol = opt_mincostflow(trace);
    std::vector<std::vector<double>> ys;
    if (cfg.monitor && sol) {
        const auto prof = canonical_offline_profile(trace, sol->schedule);
        for (const auto& row : prof.y) ys.push_back(offline_position(row, trace.k()));
    }
    if (cfg.monitor) {
        res.monitor.emplace();
        res.monitor->c_mon = cfg.c_mon;
    }

    MyopicOracle oracle(trace);
    BeladyRanking ranking(trace, oracle);
    WimpState s = make_wimp_state(w, trace.k());
    const double log_term = std::log(static_cast<double>(l) + 1.0);
    std::vector<double> y_prev = s.x;
    double theta_prev = cfg.monitor ? wimp_potentials(s, y_prev).theta : 0.0;

    for (std::size_t t = 0; t < trace.size(); ++t) {
        const Request& req = trace[t];
        const auto r = static_cast<std::size_t>(req.cls);
        const std::size_t q = ranking.advance();
        const double pseudo0 = s.pseudo;
        const std::vector<double>* yp = cfg.monitor && cfg.check_scatter ? &ys[t] : nullptr;
        const auto served = wimp_serve(s, r, q, cfg.limits, yp);
        res.boundary_sweeps += served.boundary_sweeps;
        res.min_feasibility = std::min(res.min_feasibility, std::min(1.0, s.x[r]));
        double sum = 0.0;
        std::vector<double> row(l);
        for (std::size_t i = 0; i < l; ++i) {
            sum += s.x[i];
            row[i] = s.x[i] / s.k;
        }
        res.max_final_sum_error = std::max(res.max_final_sum_error, std::abs(sum - s.k));
        res.profile.push_back(std::move(row));

        if (cfg.monitor) {
            const auto& y = ys[t];
            WimpEventRecord rec;
            rec.t = t;
            rec.r = r;
            rec.q = q;
            rec.pot = wimp_potentials(s, y);
            rec.d_pseudo = s.pseudo - pseudo0;
            rec.d_theta = rec.pot.theta - theta_prev;
            double off = w[r] * std::clamp(static_cast<double>(q) - y[r], 0.0, 1.0);
            for (std::size_t i = 0; i < l; ++i) off += w[i] * std::abs(y[i] - y_prev[i]);
            rec.offline = off;
            rec.lhs = rec.d_pseudo + rec.d_theta;
            rec.rhs = cfg.c_mon * log_term * off + cfg.eps_per_event;
            rec.pass = rec.lhs <= rec.rhs;
            auto& M = *res.monitor;
            ++M.checks;
            M.worst_slack = std::min(M.worst_slack, rec.rhs - rec.lhs);
            if (rec.lhs > cfg.eps_per_event) {
                const double need = off > 0.0 ? (rec.lhs - cfg.eps_per_event) / (log_term * off) : INFINITY;
                M.needed_constant = std::max(M.needed_constant, need);
            }
            if (!rec.pass) {
                ++M.violations;
                if (M.failed.size() < 16) M.failed.push_back(rec);
            }
            if (cfg.keep_records) M.records.push_back(rec);
            theta_prev = rec.pot.theta;
            y_prev = y;
        }
    }

    res.sweep_cost = s.sweep_cost();
    res.pseudo = s.pseudo;
    res.max_measure_gap = s.max_measure_gap;
    res.max_drift = s.max_drift;
    res.max_below_x = s.max_below_x;
    res.substeps = s.substeps;
    res.scatter_checks = s.scatter_checks;
    res.scatter_failures = s.scatter_failures;
    if (sol) {
        res.online = run_canonical(trace, res.profile).ledger.load;
        res.opt = sol->cost.value();
        res.opt_canonical = canonicalize(trace, sol->schedule).output.load;
    }
    return res;
}

inline nlohmann::json to_json(const WimpEventRecord& r) {
    return {{"t", r.t},
            {"class", r.r + 1},
            {"position", r.q},
            {"phi", r.pot.phi},
            {"lambda", r.pot.lambda},
            {"psi", r.pot.psi},
            {"scatter", r.pot.scatter},
            {"theta", r.pot.theta},
            {"d_pseudo", r.d_pseudo},
            {"d_theta", r.d_theta},
            {"offline", r.offline},
            {"lhs", r.lhs},
            {"rhs", r.rhs},
            {"pass", r.pass}};
}

// One JSON object per monitored request.
inline std::string monitor_jsonl(const WimpMonitorReport& m) {
    std::ostringstream os;
    for (const auto& r : m.records) os << to_json(r).dump() << '\n';
    return os.str();
}

} // namespace myopic
