#pragma once

#include <optional>

#include "ak/core/types.hpp"

namespace ak::ode {

struct riccati_roots {
    cplx mu, zeta, lambda_plus, lambda_minus, omega_plus, omega_minus;
};

struct riccati_solution {
    riccati_roots roots;
    cplx psi;         // psi(T)
    cplx integral;    // int_0^T psi
    cplx log_omega;   // ln Omega(T), continuous in tau; Omega = exp(-a2 int psi)
    std::optional<double> blowup_time;  // first zero of Omega, real coefficients only
};

// Closed-form solution of psi' = a2 psi^2 + a1 psi + a0, psi(0) = psi0, on
// [0, T]. Linearized by psi = -Omega'/(a2 Omega) with Omega(0) = 1.
// Valid for a2 = 0 and for the double root zeta = 0 without special cases.
// Throws numerical_error if Omega vanishes inside (0, T].
riccati_solution riccati_closed_form(cplx a2, cplx a1, cplx a0, cplx psi0, double T);

// First positive zero of Omega for real coefficients, if any; unbounded
// horizon. Uses the arctan / atanh forms of the root equation.
std::optional<double> riccati_blowup_time(double a2, double a1, double a0, double psi0);

}  // namespace ak::ode
