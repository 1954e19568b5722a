#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "myopic/alloc/adversary.hpp"
#include "myopic/alloc/allocation.hpp"
#include "myopic/alloc/monitor.hpp"
#include "myopic/alloc/potentials.hpp"
#include "myopic/belady/fif.hpp"
#include "myopic/belady/potential.hpp"
#include "myopic/belady/ranking.hpp"
#include "myopic/canonical/canonical.hpp"
#include "myopic/core/oracle.hpp"
#include "myopic/core/trace_io.hpp"
#include "myopic/detpaging/detpaging.hpp"
#include "myopic/experiment/experiment.hpp"
#include "myopic/experiment/generators.hpp"
#include "myopic/experiment/report.hpp"
#include "myopic/offline/bruteforce.hpp"
#include "myopic/offline/mincostflow.hpp"
#include "myopic/posseq/posseq.hpp"
#include "myopic/wimp/potentials.hpp"
#include "myopic/wimp/run.hpp"
#include "test_support.hpp"

using namespace myopic;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects the first failure message; later failures only count.
struct Verdict {
    std::size_t failures = 0;
    std::string first;
    void fail(const std::string& msg) {
        if (failures++ == 0) first = msg;
    }
    bool ok() const { return failures == 0; }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

int64_t uniform_size(std::mt19937_64& rng, int64_t lo, int64_t hi) { return uniform_int(rng, lo, hi); }

Outcome fif_optimality() {
    std::mt19937_64 rng(101);
    Verdict v;
    std::size_t steps = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const auto n = static_cast<std::size_t>(uniform_size(rng, 1, 8));
        const int k = static_cast<int>(uniform_size(rng, 1, 4));
        const auto T = static_cast<std::size_t>(uniform_size(rng, 1, 20));
        auto t = fixtures::random_trace(rng, {"1"}, n, k, T);
        const auto fif = simulate_fif(t, static_cast<std::size_t>(k));
        const auto bf = opt_bruteforce(t);
        if (fif.faults != bf.scaled || bf.scale != 1) v.fail("instance " + std::to_string(rep) + ": fif cost differs from brute force");
        for (const auto& off : {opt_mincostflow(t).schedule, fixtures::random_integral_schedule(rng, t)}) {
            const auto r = fif_stepwise_check(t.page_sequence(), t.num_pages(), static_cast<std::size_t>(k), off);
            steps += t.size();
            if (!r.ok) v.fail("instance " + std::to_string(rep) + ": stepwise inequality fails at " + std::to_string(r.t) + " (" + r.stage + ")");
        }
    }
    return {v.ok(), v.ok() ? "1000 instances equal brute force; stepwise inequality exact over " + std::to_string(steps) + " requests"
                           : v.first};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(202);
    const std::vector<std::vector<std::string>> tables{{"1", "3"}, {"1", "2.5", "7"}, {"0.5", "1", "3", "9"}, {"2", "5"}};
    Verdict v;
    for (int rep = 0; rep < 500; ++rep) {
        const auto& w = tables[static_cast<std::size_t>(rep) % tables.size()];
        const auto per = static_cast<std::size_t>(uniform_size(rng, 1, static_cast<int64_t>(10 / w.size())));
        const int k = static_cast<int>(uniform_size(rng, 1, 5));
        const auto T = static_cast<std::size_t>(uniform_size(rng, 1, 25));
        auto t = fixtures::random_trace(rng, w, per, k, T);
        const auto flow = opt_mincostflow(t).cost;
        const auto bf = opt_bruteforce(t);
        if (Rational(flow.scaled) / flow.scale != Rational(bf.scaled) / bf.scale)
            v.fail("instance " + std::to_string(rep) + ": flow " + std::to_string(flow.value()) + " vs brute force " + std::to_string(bf.value()));
    }
    return {v.ok(), v.ok() ? "500 weighted instances agree exactly" : v.first};
}

Outcome det_competitiveness() {
    std::mt19937_64 rng(303);
    const std::vector<std::vector<std::string>> tables{{"1", "4"}, {"1", "3", "9"}, {"0.5", "1", "2", "8"}};
    Verdict v;
    double worst = 0.0;
    for (int rep = 0; rep < 500; ++rep) {
        const auto& w = tables[static_cast<std::size_t>(rep) % tables.size()];
        const auto per = static_cast<std::size_t>(uniform_size(rng, 2, 5));
        const int k = static_cast<int>(uniform_size(rng, 1, 5));
        const auto T = static_cast<std::size_t>(uniform_size(rng, 5, 60));
        auto t = fixtures::random_trace(rng, w, per, k, T);
        const auto opt = opt_mincostflow(t);
        const auto res = det_run(t, opt.schedule);
        const double l = static_cast<double>(w.size());
        const double bound = l * opt.cost.value() + t.weights().sum() * t.k();
        if (!res.monitor_ok) v.fail("instance " + std::to_string(rep) + ": monitor fails at " + std::to_string(res.violation_time) + " (" + res.violation_stage + ")");
        if (res.load() > bound + 1e-9) v.fail("instance " + std::to_string(rep) + ": cost above l*OPT + additive term");
        if (opt.cost.value() > 0) worst = std::max(worst, res.load() / opt.cost.value() / l);
    }
    return {v.ok(), v.ok() ? "500 instances; exact stepwise monitor passes; worst On/(l*OPT) = " + fmt("%.4f", worst) : v.first};
}

Outcome canonical_factor() {
    std::mt19937_64 rng(404);
    const std::vector<std::vector<std::string>> tables{{"1", "2", "5"}, {"1", "7"}, {"1", "2", "4", "16"}};
    Verdict v;
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto& w = tables[static_cast<std::size_t>(rep) % tables.size()];
        auto t = fixtures::random_trace(rng, w, static_cast<std::size_t>(uniform_size(rng, 2, 5)), static_cast<int>(uniform_size(rng, 1, 4)), 40);
        const auto res = canonicalize(t, fixtures::random_fractional_schedule(rng, t));
        worst = std::max(worst, res.ratio());
        if (!(res.ratio() <= 3.0 + 1e-9)) v.fail("schedule " + std::to_string(rep) + ": ratio " + fmt("%.6f", res.ratio()));
    }
    return {v.ok(), v.ok() ? "200 fractional schedules; worst ratio " + fmt("%.4f", worst) : v.first};
}

PositionSequence random_repeat_sequence(std::mt19937_64& rng, std::size_t len, std::size_t maxv) {
    PositionSequence h;
    while (h.size() < len) {
        h.push_back(static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int64_t>(maxv))));
        if (!check_repeat_property(h)) h.pop_back();
    }
    return h;
}

Outcome repeat_property() {
    std::mt19937_64 rng(505);
    Verdict v;
    for (int rep = 0; rep < 1000; ++rep) {
        const PositionSequence h = rep % 2 ? random_repeat_sequence(rng, 60, 1 + static_cast<std::size_t>(rep % 9))
                                           : mixed_positions(60, 2 + static_cast<std::size_t>(rep % 9), 0.3, rng);
        if (!check_repeat_property(h)) v.fail("sampled sequence " + std::to_string(rep) + " lacks the property");
        if (to_position_sequence(realize_position_sequence(h)) != h) v.fail("sequence " + std::to_string(rep) + " does not round-trip: " + format_positions(h));
        if (!check_amortized_convexity_all(h)) v.fail("sequence " + std::to_string(rep) + " fails the occurrence count check");
    }
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t l = 1 + static_cast<std::size_t>(rep % 3);
        std::vector<std::string> w;
        for (std::size_t j = 0; j < l; ++j) w.push_back(std::to_string(j + 1));
        auto t = fixtures::random_trace(rng, w, static_cast<std::size_t>(uniform_size(rng, 1, 9)), static_cast<int>(uniform_size(rng, 1, 4)), 60);
        for (std::size_t j = 0; j < l; ++j) {
            const auto h = to_position_sequence(t, static_cast<ClassId>(j));
            if (!check_repeat_property(h)) v.fail("trace " + std::to_string(rep) + " class " + std::to_string(j) + " fails the checker");
            if (!check_amortized_convexity_all(h)) v.fail("trace " + std::to_string(rep) + " class " + std::to_string(j) + " fails the occurrence count check");
        }
    }
    return {v.ok(), v.ok() ? "1000 sequences round-trip; 1000 traces pass the checker and the occurrence count check" : v.first};
}

Outcome convex_allocation() {
    std::mt19937_64 rng(606);
    Verdict v;
    std::size_t steps = 0;
    for (std::size_t l : {2u, 4u, 8u}) {
        auto s = make_alloc_state(std::vector<double>(l, 1.0));
        for (std::size_t i = 0; i < l; ++i) s.w[i] = std::pow(2.0, static_cast<double>(i));
        const std::size_t n = l == 8 ? 33334 : 33333;
        for (std::size_t t = 0; t < n; ++t, ++steps) {
            const auto r = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int64_t>(l) - 1));
            alloc_step(s, ChargeEvent{r, std::pow(10.0, -2.0 + 2.5 * uniform01(rng)), 0.5 * uniform01(rng)});
            double sum = 0.0;
            for (std::size_t i = 0; i < l; ++i) {
                if (s.x[i] < 0.0 || s.c[i] < s.x[i]) v.fail("l=" + std::to_string(l) + " step " + std::to_string(t) + ": c >= x >= 0 broken");
                sum += s.x[i];
            }
            if (std::abs(sum - 1.0) > 1e-9) v.fail("l=" + std::to_string(l) + " step " + std::to_string(t) + ": off the simplex");
        }
    }
    std::size_t fd = 0;
    for (int rep = 0; rep < 1000; ++rep, ++fd) {
        const std::size_t l = 2 + static_cast<std::size_t>(rep % 7);
        const double delta = 1.0 / static_cast<double>(l);
        const double rho = std::pow(10.0, -3.0 + 3.0 * uniform01(rng));
        const double d = std::pow(10.0, -3.0 + 3.0 * uniform01(rng));
        const double h = 1e-6 * (rho + d);
        const double fd_x = (phi_term(rho, d + h, delta) - phi_term(rho, d - h, delta)) / (2 * h);
        const double fd_rho = (phi_term(rho + h, d, delta) - phi_term(rho - h, d, delta)) / (2 * h);
        const double an_x = phi_term_dx(rho, d, delta);
        const double an_rho = phi_term_drho(rho, d, delta);
        const double cap = std::log(static_cast<double>(l) + 1.0) + 1.0 + 1e-12;
        if (std::abs(fd_x - an_x) > 1e-6 * std::max(1.0, std::abs(an_x)) || std::abs(fd_rho - an_rho) > 1e-6 * std::max(1.0, std::abs(an_rho)))
            v.fail("state " + std::to_string(rep) + ": finite difference mismatch");
        if (an_x < -1e-12 || an_x > cap || an_rho > cap) v.fail("state " + std::to_string(rep) + ": derivative bound violated");
    }
    std::size_t checks = 0;
    double needed = 0.0;
    for (std::size_t l : {2u, 4u, 8u}) {
        for (std::uint64_t seed : {61u, 62u}) {
            for (int kind = 0; kind < 2; ++kind) {
                const auto rep = monitor_alloc(kind ? charge_alloc_suite(l, 400, seed) : strict_alloc_suite(l, 400, seed));
                checks += rep.checks;
                needed = std::max(needed, rep.needed_constant / std::log(static_cast<double>(l) + 1.0));
                if (!rep.ok()) v.fail(std::string(kind ? "random-charge" : "strict-threshold") + " suite l=" + std::to_string(l) + " fails the monitor");
            }
        }
    }
    return {v.ok(), v.ok() ? std::to_string(steps) + " steps; " + std::to_string(fd) + " finite-difference states; " + std::to_string(checks) +
                                 " monitor windows, largest needed c/ln(l+1) = " + fmt("%.2f", needed)
                           : v.first};
}

Outcome soft_lower_bound() {
    const std::size_t l = 8;
    ConvexAllocPlayer player(l);
    const auto rep = soft_lb_adversary(player, l, 10 * l * l * l);
    const bool ok = rep.ratio() >= l / 2.0;
    return {ok, "l=8, T=" + std::to_string(rep.T) + ": ratio " + fmt("%.3f", rep.ratio()) + (ok ? " >= 4" : " < 4")};
}

double lambda_riemann(const IntervalSet& S, const PositionTimeline& tl, double x, double rho, double y, double delta, double res) {
    double total = 0.0;
    for (const auto& iv : S.intervals()) {
        for (double a = iv.lo; a < iv.hi; a += res) {
            const double b = std::min(iv.hi, a + res);
            const double m = tl.recent_overlap(0.5 * (a + b), y, x);
            const double den = rho + delta * (rho + m);
            total += (b - a) * (den > 0.0 ? m / den : 0.0);
        }
    }
    return total;
}

Outcome wimp_invariants() {
    Verdict v;
    std::size_t runs = 0;
    double worst_gap = 0.0, worst_sum = 0.0, worst_feas = 1.0, worst_pseudo = 0.0;
    for (Family f : {Family::cyclic, Family::mixed, Family::uniform}) {
        for (std::size_t l = 1; l <= 4; ++l) {
            for (std::uint64_t seed : {1u, 2u}) {
                GeneratorSpec g;
                g.family = f;
                g.l = l;
                g.k = static_cast<int>(2 + seed + l);
                g.n = 10;
                g.T = 2000;
                g.seed = 70 + seed;
                const auto run = wimp_run(generate(g));
                ++runs;
                worst_gap = std::max(worst_gap, run.max_measure_gap);
                worst_sum = std::max(worst_sum, run.max_final_sum_error);
                worst_feas = std::min(worst_feas, run.min_feasibility);
                if (run.pseudo > 0) worst_pseudo = std::max(worst_pseudo, (run.online - run.weight_sum * run.k) / run.pseudo);
                const std::string id = family_name(f) + " l=" + std::to_string(l) + " seed=" + std::to_string(g.seed);
                if (run.max_measure_gap > 1e-9) v.fail(id + ": |S_i| differs from rho_i by " + fmt("%.3g", run.max_measure_gap));
                if (run.max_final_sum_error > 1e-9) v.fail(id + ": sum x off by " + fmt("%.3g", run.max_final_sum_error));
                if (run.min_feasibility < 1.0 - 1e-9) v.fail(id + ": requested class below one page");
                if (!run.pseudo_cost_check()) v.fail(id + ": online cost above 18 * pseudo-cost + slack");
            }
        }
    }
    std::mt19937_64 rng(808);
    std::size_t compared = 0;
    for (int trial = 0; trial < 40; ++trial) {
        GeneratorSpec g;
        g.family = trial % 2 ? Family::mixed : Family::uniform;
        g.l = 2 + static_cast<std::size_t>(trial % 3);
        g.k = 2 + trial % 4;
        g.n = 8;
        g.T = 60;
        g.seed = 900 + static_cast<std::uint64_t>(trial);
        RequestTrace trace = generate(g);
        trace.pad_universe(static_cast<std::size_t>(trace.k()));
        MyopicOracle oracle(trace);
        BeladyRanking ranking(trace, oracle);
        std::vector<double> w(g.l);
        for (std::size_t j = 0; j < g.l; ++j) w[j] = trace.weights()[j];
        auto s = make_wimp_state(w, trace.k());
        for (std::size_t t = 0; t < trace.size(); ++t) {
            const std::size_t q = ranking.advance();
            wimp_serve(s, static_cast<std::size_t>(trace[t].cls), q);
            if (t % 20 != 19) continue;
            for (std::size_t i = 0; i < g.l; ++i) {
                const double y = s.x[i] * uniform01(rng);
                const double exact = lambda_class(s.S[i], s.timeline[i], s.x[i], s.rho[i], y, s.delta());
                const double approx = lambda_riemann(s.S[i], s.timeline[i], s.x[i], s.rho[i], y, s.delta(), 1e-4);
                ++compared;
                if (std::abs(exact - approx) > 1e-3) v.fail("non-convexity term " + fmt("%.6f", exact) + " vs oracle " + fmt("%.6f", approx));
            }
        }
    }
    std::ostringstream os;
    os << runs << " runs (T=2000): max | |S|-rho | " << fmt("%.2g", worst_gap) << ", max |sum x - k| " << fmt("%.2g", worst_sum)
       << ", min x_r " << fmt("%.12f", worst_feas) << ", worst (online - slack)/pseudo " << fmt("%.2f", worst_pseudo) << "; " << compared
       << " non-convexity evaluations match the oracle";
    return {v.ok(), v.ok() ? os.str() : v.first};
}

Outcome wimp_monitor_and_growth() {
    Verdict v;
    std::size_t runs = 0, checks = 0;
    double needed = 0.0;
    for (Family f : {Family::cyclic, Family::mixed, Family::uniform}) {
        for (std::size_t l : {2u, 4u, 8u, 16u}) {
            for (std::uint64_t seed : {1u, 2u}) {
                GeneratorSpec g;
                g.family = f;
                g.l = l;
                g.k = 6;
                g.n = 10;
                g.T = 1000;
                g.seed = 1000 + seed;
                WimpRunConfig cfg;
                cfg.monitor = true;
                cfg.c_mon = 100.0;
                const auto run = wimp_run(generate(g), cfg);
                ++runs;
                checks += run.monitor->checks;
                needed = std::max(needed, run.monitor->needed_constant);
                if (!run.monitor->ok())
                    v.fail(family_name(f) + " l=" + std::to_string(l) + " seed=" + std::to_string(g.seed) + ": " +
                           std::to_string(run.monitor->violations) + " monitor violations");
            }
        }
    }
    std::vector<double> mean(17, 0.0);
    const int seeds = 5;
    for (std::size_t l : {2u, 4u, 8u, 16u}) {
        for (int s = 0; s < seeds; ++s) {
            GeneratorSpec g;
            g.family = Family::mixed;
            g.l = l;
            g.k = 8;
            g.n = 12;
            g.T = 2000;
            g.seed = 2000 + static_cast<std::uint64_t>(s);
            mean[l] += wimp_run(generate(g)).ratio_canonical() / seeds;
        }
    }
    const double growth = mean[16] / mean[2];
    const double bound = 3.0 * std::log(17.0) / std::log(3.0);
    if (!(growth <= bound)) v.fail("ratio(16)/ratio(2) = " + fmt("%.3f", growth) + " exceeds " + fmt("%.3f", bound));
    std::ostringstream os;
    os << runs << " monitored runs, " << checks << " windows, c_mon 100, largest needed " << fmt("%.2f", needed)
       << "; mean ratio vs canonical OPT l=2,4,8,16: " << fmt("%.3f", mean[2]) << ", " << fmt("%.3f", mean[4]) << ", "
       << fmt("%.3f", mean[8]) << ", " << fmt("%.3f", mean[16]) << "; ratio(16)/ratio(2) = " << fmt("%.3f", growth) << " <= "
       << fmt("%.3f", bound);
    return {v.ok(), v.ok() ? os.str() : v.first};
}

Outcome reproducibility() {
    ExperimentConfig cfg;
    for (Family f : {Family::cyclic, Family::mixed, Family::uniform, Family::softlb}) {
        SuiteSpec s;
        s.gen.family = f;
        s.gen.l = 3;
        s.gen.k = 3;
        s.gen.T = f == Family::softlb ? 270 : 200;
        s.gen.seed = 31;
        s.runs = 2;
        cfg.suites.push_back(s);
    }
    const auto rows_a = run_experiment(cfg);
    cfg.threads = 3;
    const auto rows_b = run_experiment(cfg);
    const bool same_csv = report_csv(rows_a) == report_csv(rows_b);
    const bool same_json = report_summary(rows_a).dump() == report_summary(rows_b).dump();
    GeneratorSpec g;
    g.T = 500;
    g.l = 4;
    const bool same_trace = write_trace(generate(g)) == write_trace(generate(g));
    const bool ok = same_csv && same_json && same_trace;
    return {ok, ok ? std::to_string(rows_a.size()) + " report rows byte-identical across repeated and threaded runs"
                   : std::string("mismatch in ") + (same_csv ? "" : "csv ") + (same_json ? "" : "summary ") + (same_trace ? "" : "trace")};
}

struct Criterion {
    const char* name;
    double limit_s;  // 0 means no runtime bound
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"fif-optimality", 60, fif_optimality},
        {"oracle-equivalence", 120, oracle_equivalence},
        {"deterministic-l-competitive", 120, det_competitiveness},
        {"canonicalization-factor", 0, canonical_factor},
        {"repeat-property", 0, repeat_property},
        {"convex-allocation", 0, convex_allocation},
        {"soft-allocation-lower-bound", 0, soft_lower_bound},
        {"wimp-invariants", 0, wimp_invariants},
        {"wimp-monitor-and-growth", 600, wimp_monitor_and_growth},
        {"reproducibility", 0, reproducibility},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_s > 0 && secs > c.limit_s) {
            o.pass = false;
            o.detail += " (runtime " + fmt("%.1f", secs) + " s over the " + fmt("%.0f", c.limit_s) + " s limit)";
        }
        std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
