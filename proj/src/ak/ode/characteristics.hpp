#pragma once

#include "ak/ode/generator.hpp"

namespace ak::ode {

// Coefficients of u(t, z) = exp(alpha + psi . z) solving the backward
// equation with terminal data exp(psi0 . z) at tbar. For Fourier modes
// psi = i delta and psi0 = i m.
struct kelvin_coefficients {
    cplx alpha = 0.0;
    VectorXcd psi;
    VectorXcd psi0;
    bool exploded = false;
    double explosion_time = 0.0;   // tau = tbar - t at which |psi| crossed the guard
    double last_valid_tau = 0.0;

    VectorXcd delta() const { return -I * psi; }
};

inline constexpr double blowup_guard = 1e12;

// RK4 in tau = tbar - s with `steps` equal steps. On blow-up the last step is
// re-integrated with step halving until |psi| exceeds the guard.
kelvin_coefficients integrate_exponents(const affine_generator& gen, const VectorXcd& psi0, double t, double tbar,
                                        int steps = 256);

// Convenience form with real terminal wave numbers m, psi0 = i m.
kelvin_coefficients integrate_characteristics(const affine_generator& gen, const VectorXd& m, double t,
                                              double tbar, int steps = 256);

}  // namespace ak::ode
