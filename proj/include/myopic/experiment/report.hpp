#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "myopic/core/error.hpp"
#include "myopic/experiment/experiment.hpp"

namespace myopic {

inline const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> cols{"family", "l", "k", "n", "T", "seed", "algorithm",
                                               "online", "opt", "ratio", "opt_canonical", "ratio_canonical",
                                               "pseudo", "monitor", "monitor_checks", "monitor_violations",
                                               "needed_constant"};
    return cols;
}

// Same number text in CSV and JSON.
inline std::string format_number(double v) { return nlohmann::json(v).dump(); }

inline std::string report_csv(const std::vector<RunRecord>& rows) {
    std::ostringstream os;
    const auto& cols = report_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& r : rows) {
        os << r.family << ',' << r.l << ',' << r.k << ',' << r.n << ',' << r.T << ',' << r.seed << ',' << r.algorithm << ','
           << format_number(r.online) << ',' << format_number(r.opt) << ',' << format_number(r.ratio) << ','
           << format_number(r.opt_canonical) << ',' << format_number(r.ratio_canonical) << ',' << format_number(r.pseudo) << ','
           << r.monitor << ',' << r.monitor_checks << ',' << r.monitor_violations << ',' << format_number(r.needed_constant)
           << '\n';
    }
    return os.str();
}

// Per (family, algorithm): run count, max and mean ratio, monitor verdicts.
inline nlohmann::json report_summary(const std::vector<RunRecord>& rows) {
    struct Acc {
        std::size_t runs = 0;
        double max_ratio = 0.0;
        double sum_ratio = 0.0;
        double max_ratio_canonical = 0.0;
        std::size_t monitored = 0;
        std::size_t passed = 0;
        std::size_t checks = 0;
        std::size_t violations = 0;
        double needed_constant = 0.0;
    };
    std::map<std::pair<std::string, std::string>, Acc> acc;
    for (const auto& r : rows) {
        auto& a = acc[{r.family, r.algorithm}];
        ++a.runs;
        a.max_ratio = std::max(a.max_ratio, r.ratio);
        a.sum_ratio += r.ratio;
        a.max_ratio_canonical = std::max(a.max_ratio_canonical, r.ratio_canonical);
        if (r.monitor != "na") {
            ++a.monitored;
            if (r.monitor == "pass") ++a.passed;
        }
        a.checks += r.monitor_checks;
        a.violations += r.monitor_violations;
        a.needed_constant = std::max(a.needed_constant, r.needed_constant);
    }
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& [key, a] : acc) {
        groups.push_back({{"family", key.first},
                          {"algorithm", key.second},
                          {"runs", a.runs},
                          {"max_ratio", a.max_ratio},
                          {"mean_ratio", a.sum_ratio / static_cast<double>(a.runs)},
                          {"max_ratio_canonical", a.max_ratio_canonical},
                          {"monitored_runs", a.monitored},
                          {"monitor_pass_rate", a.monitored ? static_cast<double>(a.passed) / static_cast<double>(a.monitored) : 1.0},
                          {"monitor_checks", a.checks},
                          {"monitor_violations", a.violations},
                          {"needed_constant", a.needed_constant}});
    }
    return {{"runs", rows.size()}, {"groups", groups}};
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw Error("write failed for " + path.string());
}

struct ReportPaths {
    std::filesystem::path csv;
    std::filesystem::path summary;
};

// Writes <dir>/runs.csv and <dir>/summary.json.
inline ReportPaths emit_report(const std::vector<RunRecord>& rows, const std::filesystem::path& dir) {
    ReportPaths p{dir / "runs.csv", dir / "summary.json"};
    write_text_file(p.csv, report_csv(rows));
    write_text_file(p.summary, report_summary(rows).dump(2) + "\n");
    return p;
}

} // namespace myopic
