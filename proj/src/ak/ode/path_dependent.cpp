#include "ak/ode/path_dependent.hpp"

#include "ak/core/errors.hpp"
#include "ak/ode/riccati.hpp"

namespace ak::ode {

path_dependent_coefficients path_dependent_characteristics(double a0, double a1, double kappa, cplx psi_x0,
                                                           cplx psi_y0, double T, double q) {
    require(a0 > 0.0, "path_dependent_characteristics: a0 must be positive");
    require(a1 < 0.0, "path_dependent_characteristics: a1 must be negative");
    const cplx s = psi_x0 + psi_y0;
    // psi_y' = a1/2 psi_y^2 - kappa psi_y + (kappa s - q a1)
    const cplx source = kappa * s - q * a1;
    riccati_solution r = riccati_closed_form(0.5 * a1, -kappa, source, psi_y0, T);
    path_dependent_coefficients out;
    out.psi_y = r.psi;
    out.psi_x = s - r.psi;
    // int psi_y^2 follows from the Riccati equation itself.
    cplx int_sq = (2.0 / a1) * (r.psi - psi_y0 + kappa * r.integral - source * T);
    out.alpha = 0.5 * a0 * int_sq - q * a0 * T;
    return out;
}

path_dependent_coefficients path_dependent_characteristics(double a0, double a1, double kappa, double k, double l,
                                                           double T) {
    return path_dependent_characteristics(a0, a1, kappa, I * k, I * l, T, 0.0);
}

}  // namespace ak::ode
