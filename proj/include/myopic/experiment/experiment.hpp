#pragma once

#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "myopic/alloc/adversary.hpp"
#include "myopic/belady/fif.hpp"
#include "myopic/core/error.hpp"
#include "myopic/detpaging/detpaging.hpp"
#include "myopic/experiment/generators.hpp"
#include "myopic/offline/mincostflow.hpp"
#include "myopic/wimp/run.hpp"

namespace myopic {

struct SuiteSpec {
    GeneratorSpec gen;
    std::size_t runs = 1;  // seeds gen.seed, gen.seed + 1, ...
};

struct ExperimentConfig {
    std::vector<SuiteSpec> suites;
    std::vector<std::string> algorithms{"fif", "det", "wimp"};
    bool monitor = true;
    double c_mon = 100.0;       // wimp monitor constant (times ln(l + 1))
    double tolerance = 1e-9;    // feasibility tolerance of the wimp boundary sweeps
    unsigned threads = 1;
};

// One (instance, algorithm) pair.
struct RunRecord {
    std::string family;
    std::size_t l = 0;
    int k = 0;
    std::size_t n = 0;
    std::size_t T = 0;
    std::uint64_t seed = 0;
    std::string algorithm;
    double online = 0.0;
    double opt = 0.0;
    double ratio = 0.0;
    double opt_canonical = 0.0;   // wimp only
    double ratio_canonical = 0.0; // wimp only
    double pseudo = 0.0;          // wimp only
    std::string monitor = "na";   // pass / fail / na
    std::size_t monitor_checks = 0;
    std::size_t monitor_violations = 0;
    double needed_constant = 0.0;
};

inline double safe_ratio(double on, double off) { return off > 0.0 ? on / off : (on > 0.0 ? INFINITY : 1.0); }

inline void validate(const ExperimentConfig& cfg) {
    for (const auto& s : cfg.suites) {
        validate(s.gen);
        if (s.runs < 1) throw InvalidArgument("spec inconsistency: a suite needs at least one run");
    }
    for (const auto& a : cfg.algorithms)
        if (a != "fif" && a != "det" && a != "wimp") throw InvalidArgument("unknown algorithm '" + a + "'");
    if (!(cfg.c_mon > 0.0)) throw InvalidArgument("monitor constant must be positive");
    if (!(cfg.tolerance > 0.0 && cfg.tolerance < 1.0)) throw InvalidArgument("tolerance must lie in (0, 1)");
}

namespace detail {

inline RunRecord base_record(const GeneratorSpec& g, const std::string& algorithm) {
    RunRecord r;
    r.family = family_name(g.family);
    r.l = g.l;
    r.k = g.k;
    r.n = g.n;
    r.T = g.T;
    r.seed = g.seed;
    r.algorithm = algorithm;
    return r;
}

inline std::vector<RunRecord> run_instance(const GeneratorSpec& g, const ExperimentConfig& cfg) {
    std::vector<RunRecord> out;
    if (g.family == Family::softlb) {
        ConvexAllocPlayer player(g.l);
        const auto rep = soft_lb_adversary(player, g.l, g.T);
        RunRecord r = base_record(g, "alloc");
        r.online = rep.online;
        r.opt = rep.offline;
        r.ratio = rep.ratio();
        out.push_back(r);
        return out;
    }
    const RequestTrace trace = generate(g);
    const auto sol = opt_mincostflow(trace);
    const double opt = sol.cost.value();
    for (const auto& alg : cfg.algorithms) {
        RunRecord r = base_record(g, alg);
        r.opt = opt;
        if (alg == "fif") {
            r.online = fif_cost(trace, static_cast<std::size_t>(trace.k()));
        } else if (alg == "det") {
            const auto d = cfg.monitor ? det_run(trace, sol.schedule) : det_run(trace);
            r.online = d.load();
            if (cfg.monitor) r.monitor = d.monitor_ok ? "pass" : "fail";
        } else {
            WimpRunConfig wc;
            wc.monitor = cfg.monitor;
            wc.c_mon = cfg.c_mon;
            wc.limits.feasibility_tol = std::min(cfg.tolerance, 1e-10);
            const auto w = wimp_run(trace, wc);
            r.online = w.online;
            r.opt_canonical = w.opt_canonical;
            r.ratio_canonical = w.ratio_canonical();
            r.pseudo = w.pseudo;
            if (w.monitor) {
                r.monitor = w.monitor->ok() ? "pass" : "fail";
                r.monitor_checks = w.monitor->checks;
                r.monitor_violations = w.monitor->violations;
                r.needed_constant = w.monitor->needed_constant;
            }
        }
        r.ratio = safe_ratio(r.online, r.opt);
        out.push_back(r);
    }
    return out;
}

} // namespace detail

// Rethrows any failure of `fn` with the instance family, class count and seed.
template <class Fn>
auto with_provenance(const GeneratorSpec& g, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw Error("family=" + family_name(g.family) + " l=" + std::to_string(g.l) + " seed=" + std::to_string(g.seed) + ": " +
                    e.what());
    }
}

// Runs every suite instance against every algorithm. Records come out in
// suite, seed, algorithm order whatever the thread count.
inline std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<GeneratorSpec> jobs;
    for (const auto& s : cfg.suites)
        for (std::size_t i = 0; i < s.runs; ++i) {
            GeneratorSpec g = s.gen;
            g.seed = s.gen.seed + i;
            jobs.push_back(g);
        }
    auto guarded = [&](const GeneratorSpec& g) { return with_provenance(g, [&] { return detail::run_instance(g, cfg); }); };
    std::vector<std::vector<RunRecord>> results(jobs.size());
    const unsigned threads = std::max(1u, cfg.threads);
    for (std::size_t start = 0; start < jobs.size(); start += threads) {
        const std::size_t stop = std::min(jobs.size(), start + threads);
        if (threads == 1) {
            results[start] = guarded(jobs[start]);
            continue;
        }
        std::vector<std::future<std::vector<RunRecord>>> futs;
        for (std::size_t j = start; j < stop; ++j) futs.push_back(std::async(std::launch::async, guarded, jobs[j]));
        for (std::size_t j = start; j < stop; ++j) results[j] = futs[j - start].get();
    }
    std::vector<RunRecord> out;
    for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
    return out;
}

inline nlohmann::json to_json(const GeneratorSpec& g) {
    return {{"family", family_name(g.family)}, {"l", g.l},       {"k", g.k},
            {"n", g.n},                        {"T", g.T},       {"seed", g.seed},
            {"weight_spread", g.weight_spread}, {"skew", g.skew}, {"new_cycle", g.new_cycle}};
}

// Generator fields; missing keys keep `base` values.
inline GeneratorSpec generator_from_json(const nlohmann::json& j, GeneratorSpec base = {}) {
    if (!j.is_object()) throw InvalidArgument("generator spec must be an object");
    if (j.contains("family")) base.family = parse_family(j.at("family").get<std::string>());
    if (j.contains("l")) base.l = j.at("l").get<std::size_t>();
    if (j.contains("k")) base.k = j.at("k").get<int>();
    if (j.contains("n")) base.n = j.at("n").get<std::size_t>();
    if (j.contains("T")) base.T = j.at("T").get<std::size_t>();
    if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("weight_spread")) base.weight_spread = j.at("weight_spread").get<double>();
    if (j.contains("skew")) base.skew = j.at("skew").get<double>();
    if (j.contains("new_cycle")) base.new_cycle = j.at("new_cycle").get<double>();
    return base;
}

// {"suites": [{...generator fields..., "runs": n}], "algorithms": [...],
//  "monitor": bool, "c_mon": x, "tolerance": x, "threads": n}
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    ExperimentConfig cfg;
    try {
        for (const auto& s : j.at("suites")) {
            SuiteSpec suite;
            suite.gen = generator_from_json(s);
            if (s.contains("runs")) suite.runs = s.at("runs").get<std::size_t>();
            cfg.suites.push_back(suite);
        }
        if (j.contains("algorithms")) cfg.algorithms = j.at("algorithms").get<std::vector<std::string>>();
        if (j.contains("monitor")) cfg.monitor = j.at("monitor").get<bool>();
        if (j.contains("c_mon")) cfg.c_mon = j.at("c_mon").get<double>();
        if (j.contains("tolerance")) cfg.tolerance = j.at("tolerance").get<double>();
        if (j.contains("threads")) cfg.threads = j.at("threads").get<unsigned>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("bad config: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

} // namespace myopic
