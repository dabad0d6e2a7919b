#pragma once

#include <optional>

#include "ak/core/types.hpp"

namespace ak::ode {

// Exponents of u = exp(alpha + psi_x x + psi_y y) for the moving-average pair
//   dx = kappa (y - x) dt,  dy = sqrt(a0 + a1 (y - x)) dW,
// optionally killed at rate q (a0 + a1 (y - x)). psi_x + psi_y is conserved,
// which reduces the system to one scalar Riccati equation for psi_y.
struct path_dependent_coefficients {
    cplx alpha, psi_x, psi_y;
};

path_dependent_coefficients path_dependent_characteristics(double a0, double a1, double kappa, cplx psi_x0,
                                                           cplx psi_y0, double T, double q = 0.0);

// Fourier-mode form: psi_x0 = i k, psi_y0 = i l.
path_dependent_coefficients path_dependent_characteristics(double a0, double a1, double kappa, double k, double l,
                                                           double T);

}  // namespace ak::ode
