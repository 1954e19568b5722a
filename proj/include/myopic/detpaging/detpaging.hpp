#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "myopic/belady/potential.hpp"
#include "myopic/core/error.hpp"
#include "myopic/core/numeric.hpp"
#include "myopic/core/oracle.hpp"
#include "myopic/core/schedule.hpp"
#include "myopic/core/trace.hpp"

namespace myopic {

// Level-based deterministic weighted paging. Every class carries a level
// starting at its weight; an eviction drains all classes present in the cache
// by the smallest level, and the class that hits zero loses its page with the
// farthest next request and gets its level back.
class DetPaging {
public:
    struct Step {
        bool hit = true;
        PageId evicted = kNoPage;
        ClassId evicted_class = -1;
        Rational drained{0};
    };

    enum class Stage { Drain, Evict, Fetch };

    DetPaging(const RequestTrace& trace, const MyopicOracle& oracle)
        : trace_(&trace), oracle_(&oracle), cached_(trace.num_pages(), false), count_(trace.num_classes(), 0),
          drained_(trace.num_classes(), Rational(0)) {
        for (std::size_t j = 0; j < trace.num_classes(); ++j) levels_.push_back(trace.weights().exact(j));
    }

    const std::vector<Rational>& levels() const noexcept { return levels_; }
    void set_levels(std::vector<Rational> levels) { levels_ = std::move(levels); }
    bool cached(PageId p) const { return cached_.at(static_cast<std::size_t>(p)); }
    const std::vector<bool>& membership() const noexcept { return cached_; }
    std::size_t size() const noexcept { return size_; }

    std::vector<PageId> cache() const {
        std::vector<PageId> out;
        for (std::size_t p = 0; p < cached_.size(); ++p)
            if (cached_[p]) out.push_back(static_cast<PageId>(p));
        return out;
    }

    // Places a page in the cache without cost (for setting up states).
    void insert(PageId p) {
        if (!cached_.at(static_cast<std::size_t>(p))) {
            cached_[static_cast<std::size_t>(p)] = true;
            ++count_[static_cast<std::size_t>(trace_->page_class(p))];
            ++size_;
        }
    }

    // Serves request t. `hook(stage, step)` runs after each sub-step of a fault.
    template <class Hook>
    Step serve(Time t, Hook&& hook) {
        const Request& r = (*trace_)[static_cast<std::size_t>(t)];
        Step step;
        if (cached(r.page)) return step;
        step.hit = false;
        if (size_ == static_cast<std::size_t>(trace_->k())) {
            ClassId victim_class = -1;
            for (std::size_t j = 0; j < levels_.size(); ++j)
                if (count_[j] > 0 && (victim_class < 0 || levels_[j] < levels_[static_cast<std::size_t>(victim_class)]))
                    victim_class = static_cast<ClassId>(j);
            if (victim_class < 0) throw Error("eviction needed but the cache holds no page");
            const Rational jump = levels_[static_cast<std::size_t>(victim_class)];
            for (std::size_t j = 0; j < levels_.size(); ++j)
                if (count_[j] > 0) {
                    levels_[j] -= jump;
                    drained_[j] += jump;
                }
            step.drained = jump;
            hook(Stage::Drain, step);

            PageId victim = kNoPage;
            for (PageId p : trace_->universe(victim_class))
                if (cached(p) && (victim == kNoPage || oracle_->key(p, t) > oracle_->key(victim, t))) victim = p;
            auto vc = static_cast<std::size_t>(victim_class);
            if (drained_[vc] != trace_->weights().exact(vc))
                throw MonitorViolation("level drained from class " + std::to_string(vc + 1) + " differs from its weight");
            drained_[vc] = 0;
            cached_[static_cast<std::size_t>(victim)] = false;
            --count_[vc];
            --size_;
            levels_[vc] = trace_->weights().exact(vc);
            step.evicted = victim;
            step.evicted_class = victim_class;
            hook(Stage::Evict, step);
        }
        insert(r.page);
        hook(Stage::Fetch, step);
        return step;
    }

    Step serve(Time t) {
        return serve(t, [](Stage, const Step&) {});
    }

private:
    const RequestTrace* trace_;
    const MyopicOracle* oracle_;
    std::vector<bool> cached_;
    std::vector<std::size_t> count_;
    std::size_t size_ = 0;
    std::vector<Rational> levels_;
    std::vector<Rational> drained_;
};

// Excess of class j at time t: max over suffixes of the next-request order of
// U_j (the empty suffix included) of online minus offline page counts.
inline std::int64_t class_excess(const RequestTrace& trace, const MyopicOracle& oracle, ClassId j, Time t,
                                 const std::vector<bool>& online, const std::vector<bool>& offline) {
    return fif_potential(next_request_order(oracle, trace.universe(j), t), online, offline);
}

// Sum over classes of l*beta_j - r_j.
inline Rational det_potential(const RequestTrace& trace, const std::vector<std::int64_t>& excess,
                              const std::vector<Rational>& levels) {
    const auto l = static_cast<std::int64_t>(trace.num_classes());
    Rational phi = 0;
    for (std::size_t j = 0; j < excess.size(); ++j) {
        if (excess[j] < 0) throw MonitorViolation("negative excess");
        Rational beta = 0;
        if (excess[j] >= 1) beta = trace.weights().exact(j) * Rational(excess[j] - 1) + levels[j];
        phi += Rational(l) * beta - levels[j];
    }
    return phi;
}

struct DetResult {
    IntegralSchedule schedule;
    Rational evict_cost{0};
    Rational load_cost{0};
    std::int64_t faults = 0;
    bool monitored = false;
    bool monitor_ok = true;
    Time violation_time = -1;
    std::string violation_stage;
    Rational offline_evict_cost{0};
    double load() const { return to_double(load_cost); }
};

// Runs the algorithm; with an offline schedule, checks
// On' + Phi' <= l * Off' (eviction accounting, exact) at every stage.
// The offline schedule is made lazy first if it is not.
inline DetResult det_run(const RequestTrace& trace, const std::optional<IntegralSchedule>& offline = std::nullopt) {
    MyopicOracle oracle(trace);
    DetPaging alg(trace, oracle);
    DetResult res;
    const std::size_t l = trace.num_classes();
    const Rational ell(static_cast<long long>(l));
    std::optional<IntegralSchedule> off_sched;
    if (offline) off_sched = make_lazy(trace, *offline);
    res.monitored = off_sched.has_value();
    std::vector<bool> off(trace.num_pages(), false);

    Time now = 0;
    auto excesses = [&]() {
        std::vector<std::int64_t> e(l);
        for (std::size_t j = 0; j < l; ++j)
            e[j] = class_excess(trace, oracle, static_cast<ClassId>(j), now, alg.membership(), off);
        return e;
    };
    Rational phi = 0;
    auto check = [&](const Rational& d_on, const Rational& d_off, const char* stage) {
        Rational next = det_potential(trace, excesses(), alg.levels());
        if (d_on + (next - phi) > ell * d_off && res.monitor_ok) {
            res.monitor_ok = false;
            res.violation_time = now;
            res.violation_stage = stage;
        }
        phi = next;
    };
    if (res.monitored) phi = det_potential(trace, excesses(), alg.levels());

    for (std::size_t t = 0; t < trace.size(); ++t) {
        now = static_cast<Time>(t);
        if (res.monitored) {
            const auto& target = (*off_sched)[t];
            std::vector<bool> keep(trace.num_pages(), false);
            for (PageId p : target) keep[static_cast<std::size_t>(p)] = true;
            for (std::size_t p = 0; p < off.size(); ++p)
                if (off[p] && !keep[p]) {
                    off[p] = false;
                    Rational w = trace.weights().exact(static_cast<std::size_t>(trace.page_class(static_cast<PageId>(p))));
                    res.offline_evict_cost += w;
                    check(0, w, "offline-evict");
                }
            for (std::size_t p = 0; p < off.size(); ++p)
                if (!off[p] && keep[p]) {
                    off[p] = true;
                    check(0, 0, "offline-fetch");
                }
        }
        auto step = alg.serve(now, [&](DetPaging::Stage s, const DetPaging::Step& st) {
            if (!res.monitored) return;
            switch (s) {
            case DetPaging::Stage::Drain: check(0, 0, "drain"); break;
            case DetPaging::Stage::Evict:
                check(trace.weights().exact(static_cast<std::size_t>(st.evicted_class)), 0, "evict");
                break;
            case DetPaging::Stage::Fetch: check(0, 0, "fetch"); break;
            }
        });
        if (!step.hit) {
            ++res.faults;
            res.load_cost += trace.weights().exact(static_cast<std::size_t>(trace[t].cls));
            if (step.evicted != kNoPage) {
                Rational w = trace.weights().exact(static_cast<std::size_t>(step.evicted_class));
                res.evict_cost += w;
            }
        }
        res.schedule.push_back(alg.cache());
        if (res.monitored) {
            now = static_cast<Time>(t) + 1;
            check(0, 0, "reinsert");
        }
    }
    return res;
}

} // namespace myopic
