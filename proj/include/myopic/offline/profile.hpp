#pragma once

#include <vector>

#include "myopic/canonical/canonical.hpp"
#include "myopic/offline/mincostflow.hpp"

namespace myopic {

struct OfflineProfile {
    Profile y;                 // per time, per class fractions (sum <= 1)
    CanonicalizeResult canon;  // canonical schedule and both costs
};

// Profile of the canonical version of a feasible integral schedule.
inline OfflineProfile canonical_offline_profile(const RequestTrace& trace, const IntegralSchedule& schedule) {
    OfflineProfile out;
    out.canon = canonicalize(trace, schedule);
    const double k = static_cast<double>(trace.k());
    for (const auto& m : out.canon.masses) {
        std::vector<double> row(m.size());
        for (std::size_t j = 0; j < m.size(); ++j) row[j] = m[j] / k;
        out.y.push_back(std::move(row));
    }
    return out;
}

} // namespace myopic
