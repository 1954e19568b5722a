#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "myopic/alloc/allocation.hpp"
#include "myopic/core/error.hpp"
#include "myopic/core/numeric.hpp"

namespace myopic {

// One summand of the primary potential (unweighted), for gap d = x_i - y_i >= 0.
inline double phi_term(double rho, double d, double delta) {
    if (d < 0.0) return 0.0;
    const double u = rho + d;
    if (u <= 0.0) return 0.0;
    return u * std::log((1.0 + delta) * u / (rho + delta * u));
}

// Partial derivative of phi_term in x_i (equals minus the one in y_i).
inline double phi_term_dx(double rho, double d, double delta) {
    const double u = rho + d;
    const double den = rho + delta * u;
    return std::log((1.0 + delta) * u / den) + 1.0 - delta * u / den;
}

inline double phi_term_drho(double rho, double d, double delta) {
    const double u = rho + d;
    const double den = rho + delta * u;
    return std::log((1.0 + delta) * u / den) + 1.0 - (1.0 + delta) * u / den;
}

struct AllocPotentials {
    double phi = 0.0;
    double psi = 0.0;
    double theta = 0.0;
    double L = 0.0;       // sum (x_i - y_i)_+
    double C = 0.0;       // sum rho_i
    double C_tilde = 0.0; // sum (rho_i + x_i - y_i)_+
};

inline AllocPotentials alloc_potentials(const std::vector<double>& w, const std::vector<double>& x, const std::vector<double>& rho,
                                        const std::vector<double>& y) {
    const std::size_t l = x.size();
    if (w.size() != l || rho.size() != l || y.size() != l) throw InvalidArgument("potential inputs differ in dimension");
    const double delta = 1.0 / static_cast<double>(l);
    AllocPotentials p;
    for (std::size_t i = 0; i < l; ++i) {
        const double d = x[i] - y[i];
        if (d >= 0.0) p.phi += w[i] * phi_term(rho[i], d, delta);
        p.psi += w[i] * positive_part(rho[i] + 2.0 * d);
        p.L += positive_part(d);
        p.C += rho[i];
        p.C_tilde += positive_part(rho[i] + d);
    }
    p.theta = 30.0 * p.phi + 12.0 * p.psi;
    return p;
}

inline AllocPotentials alloc_potentials(const AllocState& s, const std::vector<double>& y) {
    return alloc_potentials(s.w, s.x, s.rho(), y);
}

} // namespace myopic
