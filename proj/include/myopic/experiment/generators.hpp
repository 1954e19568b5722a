#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "myopic/core/error.hpp"
#include "myopic/core/numeric.hpp"
#include "myopic/core/trace.hpp"
#include "myopic/core/weights.hpp"
#include "myopic/posseq/posseq.hpp"

namespace myopic {

enum class Family { cyclic, mixed, uniform, softlb };

inline std::string family_name(Family f) {
    switch (f) {
    case Family::cyclic: return "cyclic";
    case Family::mixed: return "mixed";
    case Family::uniform: return "uniform";
    case Family::softlb: return "softlb";
    }
    return "?";
}

inline Family parse_family(const std::string& s) {
    if (s == "cyclic") return Family::cyclic;
    if (s == "mixed") return Family::mixed;
    if (s == "uniform") return Family::uniform;
    if (s == "softlb") return Family::softlb;
    throw InvalidArgument("unknown family '" + s + "'");
}

struct GeneratorSpec {
    Family family = Family::mixed;
    std::size_t l = 2;
    int k = 2;
    std::size_t n = 6;         // pages per class
    std::size_t T = 100;
    std::uint64_t seed = 1;
    double weight_spread = 64.0;  // largest / smallest weight (integer weights)
    double skew = 0.0;            // class j drawn with probability ~ (j+1)^-skew
    double new_cycle = 0.3;       // mixed family: chance to open a new cycle
};

inline void validate(const GeneratorSpec& g) {
    if (g.l < 1) throw InvalidArgument("spec inconsistency: need at least one class");
    if (g.k < 1) throw InvalidArgument("spec inconsistency: cache size must be positive");
    if (g.family != Family::uniform && g.family != Family::softlb && g.n < 2)
        throw InvalidArgument("spec inconsistency: cyclic families need at least 2 pages per class");
    if (g.family == Family::softlb && g.l < 3)
        throw InvalidArgument("spec inconsistency: the soft lower bound needs at least 3 classes (threshold 1/(l-1) below 1)");
    if (g.n < 1) throw InvalidArgument("spec inconsistency: need at least one page per class");
    if (!(g.weight_spread >= 1.0)) throw InvalidArgument("spec inconsistency: weight spread below 1");
    if (!(g.new_cycle > 0.0 && g.new_cycle <= 1.0)) throw InvalidArgument("spec inconsistency: new-cycle chance outside (0, 1]");
}

// Strictly increasing integer weights, roughly geometric from 1 to the spread.
inline std::vector<double> spread_weights(std::size_t l, double spread) {
    std::vector<double> w(l, 1.0);
    for (std::size_t i = 1; i < l; ++i) {
        const double target = std::round(std::pow(spread, static_cast<double>(i) / static_cast<double>(l - 1)));
        w[i] = std::max(w[i - 1] + 1.0, target);
    }
    return w;
}

// 2,...,m_1 followed by 2,...,m_2 and so on.
inline PositionSequence cycle_positions(const std::vector<std::size_t>& ends) {
    PositionSequence h;
    for (std::size_t m : ends) {
        if (m < 2) throw InvalidArgument("spec inconsistency: cycle end point below 2");
        for (std::size_t v = 2; v <= m; ++v) h.push_back(v);
    }
    return h;
}

// Cycles 2..m with m uniform in [2, n], cut to length L.
template <class Engine>
PositionSequence cyclic_positions(std::size_t L, std::size_t n, Engine& rng) {
    if (n < 2) throw InvalidArgument("spec inconsistency: cycles need at least 2 pages");
    PositionSequence h;
    while (h.size() < L) {
        const auto m = static_cast<std::size_t>(uniform_int(rng, 2, static_cast<std::int64_t>(n)));
        const auto cycle = cycle_positions({m});
        for (std::size_t i = 0; i < cycle.size() && h.size() < L; ++i) h.push_back(cycle[i]);
    }
    return h;
}

// Several active incomplete cycles with end points m_1 > m_2 > ...; each
// request extends one of them by one position or opens a new cycle at 2.
// An extension to v is offered only while every position in 2..v-1 was
// requested since the last request at v (a younger cycle may not overtake a
// position an older one visited after it started). Cycles reaching n close;
// equal end points merge.
template <class Engine>
PositionSequence mixed_positions(std::size_t L, std::size_t n, double new_cycle, Engine& rng) {
    if (n < 2) throw InvalidArgument("spec inconsistency: cycles need at least 2 pages");
    PositionSequence h;
    std::vector<std::size_t> ends;           // decreasing
    std::vector<std::size_t> last(n + 2, 0);  // 1-based time of the last request at v
    auto extendable = [&](std::size_t v) {
        if (v > n) return false;
        for (std::size_t u = 2; u < v; ++u)
            if (last[u] <= last[v]) return false;
        return true;
    };
    while (h.size() < L) {
        std::size_t pos = 2;
        std::vector<std::size_t> options;
        for (std::size_t tau = 0; tau < ends.size(); ++tau)
            if (extendable(ends[tau] + 1)) options.push_back(tau);
        if (!options.empty() && uniform01(rng) >= new_cycle) {
            const auto pick = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(options.size()) - 1));
            pos = ++ends[options[pick]];
        } else {
            ends.push_back(2);
        }
        std::sort(ends.rbegin(), ends.rend());
        ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
        if (!ends.empty() && ends.front() >= n) ends.erase(ends.begin());
        h.push_back(pos);
        last[pos] = h.size();
    }
    return h;
}

template <class Engine>
std::vector<std::size_t> draw_classes(const GeneratorSpec& g, Engine& rng) {
    std::vector<double> cum(g.l);
    double total = 0.0;
    for (std::size_t j = 0; j < g.l; ++j) {
        total += std::pow(static_cast<double>(j + 1), -g.skew);
        cum[j] = total;
    }
    std::vector<std::size_t> cls(g.T);
    for (auto& c : cls) {
        const double u = uniform01(rng) * total;
        c = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
        c = std::min(c, g.l - 1);
    }
    return cls;
}

inline std::string class_page_name(std::size_t j, std::size_t p) { return std::to_string(j + 1) + "." + std::to_string(p); }

// Interleaves per-class position sequences. Each class sequence is realized
// on its own and its pages renamed "<class>.<page>"; unused pages up to n are
// appended to the initial order.
inline RequestTrace interleave_positions(const std::vector<PositionSequence>& per_class, const std::vector<std::size_t>& classes,
                                         const WeightTable& weights, int k, std::size_t n) {
    const std::size_t l = per_class.size();
    RequestTrace trace(weights, k);
    std::vector<std::vector<PageId>> order(l);
    std::vector<std::vector<PageId>> requests(l);
    for (std::size_t j = 0; j < l; ++j) {
        std::vector<PageId> local_to_global;
        if (!per_class[j].empty()) {
            const RequestTrace single = realize_position_sequence(per_class[j]);
            const auto& init = (*single.initial_order())[0];
            local_to_global.assign(single.num_pages(), 0);
            for (PageId p : init) {
                const PageId g = trace.add_page(class_page_name(j, static_cast<std::size_t>(p)), static_cast<ClassId>(j));
                local_to_global[static_cast<std::size_t>(p)] = g;
                order[j].push_back(g);
            }
            for (std::size_t t = 0; t < single.size(); ++t)
                requests[j].push_back(local_to_global[static_cast<std::size_t>(single[t].page)]);
        }
        for (std::size_t p = order[j].size(); p < n; ++p)
            order[j].push_back(trace.add_page(class_page_name(j, p), static_cast<ClassId>(j)));
    }
    std::vector<std::size_t> next(l, 0);
    for (std::size_t c : classes) trace.push_request(requests[c].at(next[c]++));
    trace.set_initial_order(std::move(order));
    return trace;
}

struct GeneratedInstance {
    RequestTrace trace;
    std::vector<PositionSequence> positions;  // per class; empty for the uniform family
};

inline GeneratedInstance generate_instance(const GeneratorSpec& g) {
    validate(g);
    if (g.family == Family::softlb) throw InvalidArgument("the softlb family drives an allocation player, not a trace");
    std::mt19937_64 rng(g.seed);
    const WeightTable weights = WeightTable::from_values(spread_weights(g.l, g.weight_spread));
    const auto classes = draw_classes(g, rng);
    GeneratedInstance out;
    if (g.family == Family::uniform) {
        RequestTrace trace(weights, g.k);
        for (std::size_t j = 0; j < g.l; ++j)
            for (std::size_t p = 0; p < g.n; ++p) trace.add_page(class_page_name(j, p), static_cast<ClassId>(j));
        for (std::size_t c : classes) {
            const auto p = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(g.n) - 1));
            trace.push_request(static_cast<ClassId>(c), class_page_name(c, p));
        }
        out.trace = std::move(trace);
        return out;
    }
    std::vector<std::size_t> counts(g.l, 0);
    for (std::size_t c : classes) ++counts[c];
    for (std::size_t j = 0; j < g.l; ++j) {
        PositionSequence h = g.family == Family::cyclic ? cyclic_positions(counts[j], g.n, rng)
                                                         : mixed_positions(counts[j], g.n, g.new_cycle, rng);
        if (!check_repeat_property(h)) throw Error("generated position sequence violates the repeat property");
        out.positions.push_back(std::move(h));
    }
    out.trace = interleave_positions(out.positions, classes, weights, g.k, g.n);
    return out;
}

inline RequestTrace generate(const GeneratorSpec& g) { return generate_instance(g).trace; }

} // namespace myopic
