#pragma once

#include <cmath>
#include <complex>
#include <functional>

namespace ak::ode {

// A_k(T) = exp(-k T)
inline double exp_A(double kappa, double T) { return std::exp(-kappa * T); }

// B_k(T) = (1 - exp(-k T)) / k, with B_0 = T. For constant k the forward and
// backward variants coincide.
inline double exp_B(double kappa, double T) {
    double x = kappa * T;
    if (std::abs(x) < 1e-8) return T * (1.0 - x / 2.0 + x * x / 6.0);
    return -std::expm1(-x) / kappa;
}

// (e^z - 1) / z and (e^z - 1 - z) / z^2 for complex z, series near zero.
std::complex<double> phi1(std::complex<double> z);
std::complex<double> phi2(std::complex<double> z);

// log(1 + x) / x, series near zero.
std::complex<double> log1p_ratio(std::complex<double> x);

// Time-dependent helpers for a rate k(s) on [t, tbar]:
//   A(t,tbar) = exp(-int_t^tbar k),  B(t,tbar) = int_t^tbar A(s,tbar) ds,
//   Bbar(t,tbar) = int_t^tbar A(t,s) ds.
struct exp_helpers {
    double A = 1.0, B = 0.0, Bbar = 0.0;
};

exp_helpers make_exp_helpers(const std::function<double(double)>& kappa, double t, double tbar,
                             int nodes = 64);
exp_helpers make_exp_helpers(double kappa, double T);

}  // namespace ak::ode
