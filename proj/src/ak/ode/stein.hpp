#pragma once

#include "ak/core/types.hpp"

namespace ak::ode {

// Exponents of u = exp(alpha + psi1 x + psi2 y^2 + psi3 y) for an OU factor
// dy = (chi - kappa y) dt + eps dW, solving in tau
//   psi2' = 2 eps^2 psi2^2 + 2 mu psi2 + c2
//   psi3' = (2 eps^2 psi2 + mu) psi3 + 2 chi psi2
//   alpha' = eps^2 psi3^2 / 2 + eps^2 psi2 + chi psi3
// where mu and c2 carry the coupling to x. Closed form through
// Omega = exp(mu tau) (w+ e^{zeta tau} + w- e^{-zeta tau}).
struct stein_coefficients {
    cplx mu, zeta, omega_plus, omega_minus;
    cplx n0, n_plus, n_minus;  // psi3 = (n0 + n+ E + n- / E) / G, E = e^{zeta tau}
    cplx a0, a_plus, a_minus;  // alpha = -ln(Omega)/2 + (a0 + a+ E + a- / E) / G + g tau
    cplx g;
    cplx log_omega, alpha, psi2, psi3;
    bool numeric_fallback = false;
};

stein_coefficients stein_riccati(double chi, double eps, cplx mu, cplx c2, cplx psi2_0, cplx psi3_0, double T);

// Correlated log-price system with driftless x (dx = y dW1, d<W1,W2> = rho dt):
// mu = rho eps psi1 - kappa, c2 = psi1^2 / 2, terminal data (i m1, i m2, i m3).
stein_coefficients stein_matrix_riccati(double chi, double kappa, double eps, double rho, double m1, double m2,
                                        double m3, double T);

}  // namespace ak::ode
