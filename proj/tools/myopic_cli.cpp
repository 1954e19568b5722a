#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "myopic/belady/fif.hpp"
#include "myopic/core/error.hpp"
#include "myopic/core/trace_io.hpp"
#include "myopic/detpaging/detpaging.hpp"
#include "myopic/experiment/experiment.hpp"
#include "myopic/experiment/generators.hpp"
#include "myopic/experiment/report.hpp"
#include "myopic/offline/mincostflow.hpp"
#include "myopic/offline/schedule_io.hpp"
#include "myopic/wimp/run.hpp"

using namespace myopic;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Writes to `out`, or stdout when it is empty.
void emit(const std::string& out, const std::string& text) {
    if (out.empty())
        std::cout << text;
    else
        write_text_file(out, text);
}

nlohmann::json read_config(const std::string& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, path + ": " + e.what());
    }
}

struct Options {
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<double> c_mon;
    std::optional<double> tolerance;
    std::string config;
    std::string trace;
    std::string algorithm = "wimp";
    GeneratorSpec gen;
    std::string family = "mixed";
    bool records = false;
};

GeneratorSpec gen_spec(const Options& o) {
    GeneratorSpec g = o.config.empty() ? o.gen : generator_from_json(read_config(o.config), o.gen);
    if (o.config.empty()) g.family = parse_family(o.family);
    if (o.seed) g.seed = *o.seed;
    return g;
}

ExperimentConfig experiment_config(const Options& o) {
    if (o.config.empty()) throw InvalidArgument("--config is required");
    ExperimentConfig cfg = config_from_json(read_config(o.config));
    if (o.seed)
        for (auto& s : cfg.suites) s.gen.seed = *o.seed;
    if (o.c_mon) cfg.c_mon = *o.c_mon;
    if (o.tolerance) cfg.tolerance = *o.tolerance;
    validate(cfg);
    return cfg;
}

WimpRunConfig wimp_config(const Options& o, bool monitor) {
    WimpRunConfig wc;
    wc.monitor = monitor;
    wc.keep_records = monitor && o.records;
    if (o.c_mon) wc.c_mon = *o.c_mon;
    if (o.tolerance) wc.limits.feasibility_tol = std::min(*o.tolerance, 1e-10);
    return wc;
}

int cmd_gen(const Options& o) {
    emit(o.out, write_trace(generate(gen_spec(o))));
    return 0;
}

int cmd_run(const Options& o) {
    const RequestTrace trace = load_trace_file(o.trace);
    nlohmann::json j{{"algorithm", o.algorithm}, {"T", trace.size()}, {"k", trace.k()}, {"l", trace.num_classes()}};
    const double opt = trace.empty() ? 0.0 : opt_mincostflow(trace).cost.value();
    double online = 0.0;
    if (o.algorithm == "fif") {
        online = fif_cost(trace, static_cast<std::size_t>(trace.k()));
    } else if (o.algorithm == "det") {
        const auto d = det_run(trace);
        online = d.load();
        j["faults"] = d.faults;
    } else if (o.algorithm == "wimp") {
        const auto w = wimp_run(trace, wimp_config(o, false));
        online = w.online;
        j["pseudo"] = w.pseudo;
        j["opt_canonical"] = w.opt_canonical;
        j["ratio_canonical"] = w.ratio_canonical();
    } else {
        throw InvalidArgument("unknown algorithm '" + o.algorithm + "'");
    }
    j["online"] = online;
    j["opt"] = opt;
    j["ratio"] = safe_ratio(online, opt);
    emit(o.out, j.dump(2) + "\n");
    return 0;
}

int cmd_opt(const Options& o) {
    const RequestTrace trace = load_trace_file(o.trace);
    const auto sol = opt_mincostflow(trace);
    std::cerr << "opt " << sol.cost.value() << "\n";
    emit(o.out, write_schedule_json(trace, sol.schedule));
    return 0;
}

int cmd_monitor(const Options& o) {
    const RequestTrace trace = load_trace_file(o.trace);
    if (o.algorithm == "det") {
        const auto sol = opt_mincostflow(trace);
        const auto d = det_run(trace, sol.schedule);
        nlohmann::json j{{"algorithm", "det"}, {"pass", d.monitor_ok}};
        if (!d.monitor_ok) j["violation"] = {{"t", d.violation_time}, {"stage", d.violation_stage}};
        emit(o.out, j.dump() + "\n");
        return d.monitor_ok ? 0 : 1;
    }
    if (o.algorithm != "wimp") throw InvalidArgument("monitor supports det and wimp");
    const auto w = wimp_run(trace, wimp_config(o, true));
    const auto& m = *w.monitor;
    nlohmann::json j{{"algorithm", "wimp"},       {"pass", m.ok()},
                     {"checks", m.checks},         {"violations", m.violations},
                     {"c_mon", m.c_mon},           {"needed_constant", m.needed_constant},
                     {"worst_slack", m.worst_slack}};
    emit(o.out, o.records ? monitor_jsonl(m) + j.dump() + "\n" : j.dump() + "\n");
    return m.ok() ? 0 : 1;
}

int cmd_report(const Options& o) {
    const auto rows = run_experiment(experiment_config(o));
    if (o.out.empty()) {
        std::cout << report_csv(rows);
        return 0;
    }
    const auto paths = emit_report(rows, o.out);
    std::cerr << "wrote " << paths.csv.string() << " and " << paths.summary.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted interleaved myopic paging toolkit"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--seed", o.seed, "Override the generator seed");
        c->add_option("--out", o.out, "Output file (directory for report); stdout when omitted");
    };
    auto add_monitor_flags = [&](CLI::App* c) {
        c->add_option("--c-mon", o.c_mon, "Monitor constant, multiplied by ln(l+1)")->check(CLI::PositiveNumber);
        c->add_option("--tolerance", o.tolerance, "Feasibility tolerance")->check(CLI::Range(0.0, 1.0));
    };

    auto* gen = app.add_subcommand("gen", "Generate a trace");
    add_common(gen);
    gen->add_option("--config", o.config, "JSON generator spec");
    gen->add_option("--family", o.family, "cyclic | mixed | uniform");
    gen->add_option("-l,--classes", o.gen.l, "Number of weight classes");
    gen->add_option("-k,--cache", o.gen.k, "Cache size");
    gen->add_option("-n,--pages", o.gen.n, "Pages per class");
    gen->add_option("-T,--length", o.gen.T, "Number of requests");
    gen->add_option("--spread", o.gen.weight_spread, "Largest / smallest weight");
    gen->add_option("--skew", o.gen.skew, "Class popularity exponent");
    gen->add_option("--new-cycle", o.gen.new_cycle, "Mixed family: chance to open a new cycle");

    auto* run = app.add_subcommand("run", "Run one algorithm on a trace file");
    add_common(run);
    add_monitor_flags(run);
    run->add_option("trace", o.trace, "Trace file")->required();
    run->add_option("-a,--algorithm", o.algorithm, "fif | det | wimp");

    auto* opt = app.add_subcommand("opt", "Offline optimum schedule as JSON");
    add_common(opt);
    opt->add_option("trace", o.trace, "Trace file")->required();

    auto* mon = app.add_subcommand("monitor", "Per-event potential monitor; exit code 1 on violation");
    add_common(mon);
    add_monitor_flags(mon);
    mon->add_option("trace", o.trace, "Trace file")->required();
    mon->add_option("-a,--algorithm", o.algorithm, "det | wimp");
    mon->add_flag("--records", o.records, "Emit one JSON line per request before the summary");

    auto* rep = app.add_subcommand("report", "Run an experiment config and write runs.csv + summary.json");
    add_common(rep);
    add_monitor_flags(rep);
    rep->add_option("--config", o.config, "JSON experiment config")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*gen) return cmd_gen(o);
        if (*run) return cmd_run(o);
        if (*opt) return cmd_opt(o);
        if (*mon) return cmd_monitor(o);
        if (*rep) return cmd_report(o);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
