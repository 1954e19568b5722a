#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "myopic/belady/ranking.hpp"
#include "myopic/core/error.hpp"
#include "myopic/core/numeric.hpp"
#include "myopic/core/schedule.hpp"
#include "myopic/core/trace.hpp"

namespace myopic {

// Row t holds the per-class cache fractions x_1(t)..x_l(t) in force after
// serving request t.
using Profile = std::vector<std::vector<double>>;

inline void check_simplex(const std::vector<double>& x, double tol = 1e-9) {
    double s = 0.0;
    for (double v : x) {
        if (!(v >= -tol)) throw InvalidArgument("profile entry is negative");
        s += v;
    }
    if (std::abs(s - 1.0) > tol * static_cast<double>(x.size() + 1)) throw InvalidArgument("profile row is off the simplex");
}

// Adds the canonical configuration of one class to `state`: the first
// floor(mass) pages of `order` fully, plus the fractional remainder of the
// next one. Mass beyond the class size is dropped.
inline void add_canonical_class(const std::vector<PageId>& order, double mass, CacheState& state) {
    if (mass < 0) mass = 0;
    double left = mass;
    for (PageId p : order) {
        if (left <= 0) break;
        double take = std::min(1.0, left);
        state[static_cast<std::size_t>(p)] = take;
        left -= take;
    }
}

// Canonical configuration for per-class masses given in page units (k x_j).
inline CacheState canonical_config(const BeladyRanking& ranking, const std::vector<double>& masses, std::size_t num_pages) {
    if (masses.size() != ranking.num_classes()) throw InvalidArgument("mass vector has wrong dimension");
    CacheState s(num_pages, 0.0);
    for (std::size_t j = 0; j < masses.size(); ++j) add_canonical_class(ranking.order(static_cast<ClassId>(j)), masses[j], s);
    return s;
}

struct CanonicalRun {
    FractionalSchedule states;
    CostLedger ledger;     // load/evict from the actual states; movement/service from the decomposition
    double max_gap = 0.0;  // largest per-step (load - movement - service)
};

// Runs the canonical algorithm driven by a profile on the simplex. Each step
// first moves to the new profile under the old ranking (movement), then
// follows the ranking change of the requested class (service).
inline CanonicalRun run_canonical(const RequestTrace& trace, const Profile& profile, double tol = 1e-9) {
    if (profile.size() != trace.size()) throw InvalidArgument("profile length does not match trace");
    MyopicOracle oracle(trace);
    BeladyRanking ranking(trace, oracle);
    const auto k = static_cast<double>(trace.k());
    const std::size_t l = trace.num_classes();
    CanonicalRun run;
    std::vector<double> prev_mass(l, 0.0);
    CacheState prev(trace.num_pages(), 0.0);
    for (std::size_t t = 0; t < trace.size(); ++t) {
        check_simplex(profile[t], tol);
        std::vector<double> mass(l);
        double movement = 0.0;
        for (std::size_t j = 0; j < l; ++j) {
            mass[j] = k * profile[t][j];
            movement += trace.weights()[j] * positive_part(mass[j] - prev_mass[j]);
        }
        const Request& r = trace[t];
        std::size_t pos = ranking.advance();
        double service = trace.weights()[static_cast<std::size_t>(r.cls)] *
                         std::clamp(static_cast<double>(pos) - mass[static_cast<std::size_t>(r.cls)], 0.0, 1.0);
        CacheState cur = canonical_config(ranking, mass, trace.num_pages());
        if (cur[static_cast<std::size_t>(r.page)] < 1.0 - tol)
            throw Infeasible("infeasible: profile leaves the requested page partly out at time " + std::to_string(t));
        CostLedger step;
        accumulate_transition(trace, prev, cur, step);
        run.max_gap = std::max(run.max_gap, step.load - movement - service);
        run.ledger.load += step.load;
        run.ledger.evict += step.evict;
        run.ledger.movement += movement;
        run.ledger.service += service;
        run.states.push_back(cur);
        prev = std::move(cur);
        prev_mass = std::move(mass);
    }
    validate_schedule(trace, run.states, 1e-7);
    return run;
}

struct CanonicalizeResult {
    FractionalSchedule states;
    std::vector<std::vector<double>> masses; // per time, per class (page units)
    CostLedger input;
    CostLedger output;
    // paging cost (load + evict) ratio; 1 when both are zero
    double ratio() const {
        double a = input.paging(), b = output.paging();
        if (a <= 0) return b <= 0 ? 1.0 : INFINITY;
        return b / a;
    }
};

// Per-class masses of a schedule state.
inline std::vector<double> class_masses(const RequestTrace& trace, const CacheState& s) {
    std::vector<double> m(trace.num_classes(), 0.0);
    for (std::size_t p = 0; p < s.size(); ++p) m[static_cast<std::size_t>(trace.page_class(static_cast<PageId>(p)))] += s[p];
    return m;
}

// Replaces a feasible schedule by the canonical schedule with the same
// per-class masses. Both costs count loads and evictions from an empty cache;
// the canonical cost is at most three times the input cost.
inline CanonicalizeResult canonicalize(const RequestTrace& trace, const FractionalSchedule& schedule, double tol = 1e-9) {
    CanonicalizeResult res;
    res.input = validate_schedule(trace, schedule, tol);
    MyopicOracle oracle(trace);
    BeladyRanking ranking(trace, oracle);
    for (std::size_t t = 0; t < schedule.size(); ++t) {
        ranking.advance();
        auto m = class_masses(trace, schedule[t]);
        res.states.push_back(canonical_config(ranking, m, trace.num_pages()));
        res.masses.push_back(std::move(m));
    }
    res.output = validate_schedule(trace, res.states, 1e-7);
    if (res.output.paging() > 3.0 * res.input.paging() + 1e-9 * (1.0 + res.input.paging()))
        throw MonitorViolation("canonical schedule costs more than three times its input");
    return res;
}

inline CanonicalizeResult canonicalize(const RequestTrace& trace, const IntegralSchedule& schedule) {
    return canonicalize(trace, to_fractional(schedule, trace.num_pages()));
}

// Randomized integral version of a canonical fractional schedule. One uniform
// u per run drives systematic sampling over the class tails: class j keeps its
// tail page iff [F_{j-1}, F_j) contains a point of u + Z, where F are the
// cumulative tail fractions. Each tail page is cached with probability equal
// to its fraction and the cache never exceeds the total fractional mass
// rounded up.
inline IntegralSchedule round_online(const RequestTrace& trace, const std::vector<std::vector<double>>& masses,
                                     std::uint64_t seed) {
    if (masses.size() != trace.size()) throw InvalidArgument("mass stream length does not match trace");
    std::mt19937_64 rng(seed);
    const double u = uniform01(rng);
    MyopicOracle oracle(trace);
    BeladyRanking ranking(trace, oracle);
    IntegralSchedule out;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        ranking.advance();
        std::vector<PageId> cache;
        double cum = 0.0;
        for (std::size_t j = 0; j < masses[t].size(); ++j) {
            double m = std::max(0.0, masses[t][j]);
            double whole = std::floor(m + 1e-12);
            double frac = m - whole;
            if (frac < 1e-12) frac = 0.0;
            auto full = static_cast<std::size_t>(whole);
            // does [cum, cum + frac) contain u + integer?
            bool tail = frac > 0.0 && std::floor(cum + frac - u) > std::floor(cum - u);
            cum += frac;
            std::size_t keep = full + (tail ? 1 : 0);
            const auto& order = ranking.order(static_cast<ClassId>(j));
            for (std::size_t i = 0; i < keep && i < order.size(); ++i) cache.push_back(order[i]);
        }
        std::sort(cache.begin(), cache.end());
        out.push_back(std::move(cache));
    }
    return out;
}

inline std::string write_profile_csv(const Profile& profile) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& row : profile) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << row[j];
        os << '\n';
    }
    return os.str();
}

inline Profile read_profile_csv(const std::string& text) {
    Profile out;
    std::istringstream is(text);
    std::string line;
    std::size_t width = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw InvalidArgument("malformed profile cell '" + cell + "'");
            }
            row.push_back(v);
        }
        if (width == 0) width = row.size();
        if (row.size() != width) throw InvalidArgument("profile rows have different widths");
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace myopic
