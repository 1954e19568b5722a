#pragma once

#include <algorithm>
#include <vector>

#include "myopic/alloc/potentials.hpp"
#include "myopic/core/error.hpp"
#include "myopic/core/numeric.hpp"
#include "myopic/wimp/wimp.hpp"

namespace myopic {

struct WimpPotentials {
    double phi = 0.0;
    double lambda = 0.0;
    double psi = 0.0;
    double scatter = 0.0;
    double theta = 0.0;
};

inline double lambda_integrand(double m, double rho, double delta) {
    const double den = rho + delta * (rho + m);
    return den > 0.0 ? m / den : 0.0;
}

// Unweighted non-convexity term of one class, integrated exactly over the
// pieces of S on which the last-sweep stamp is constant.
inline double lambda_class(const IntervalSet& S, const PositionTimeline& tl, double x, double rho, double y, double delta) {
    if (!(x > y)) return 0.0;
    double total = 0.0;
    for (const auto& iv : S.intervals()) {
        for (const auto& piece : tl.pieces(iv.lo, iv.hi)) {
            const double m = tl.overlap_after(piece.stamp, y, x);
            total += (piece.hi - piece.lo) * lambda_integrand(m, rho, delta);
        }
    }
    return total;
}

inline WimpPotentials wimp_potentials(const WimpState& s, const std::vector<double>& y) {
    const std::size_t l = s.dim();
    if (y.size() != l) throw InvalidArgument("offline position has wrong dimension");
    const double delta = s.delta();
    WimpPotentials p;
    for (std::size_t i = 0; i < l; ++i) {
        const double d = s.x[i] - y[i];
        if (d >= 0.0) p.phi += s.w[i] * phi_term(s.rho[i], d, delta);
        p.lambda += s.w[i] * lambda_class(s.S[i], s.timeline[i], s.x[i], s.rho[i], y[i], delta);
        p.psi += s.w[i] * positive_part(s.rho[i] + 2.0 * d);
        p.scatter += s.w[i] * (s.S[i].measure_above(y[i]) + positive_part(d));
    }
    p.theta = 10.0 * p.phi + 5.0 * p.lambda + 2.0 * p.psi + 4.0 * p.scatter;
    return p;
}

} // namespace myopic
