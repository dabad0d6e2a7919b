#pragma once

#include "ak/core/types.hpp"

namespace ak::ng {

// Kolmogorov pair driven by a symmetric stable noise of index 2 nu:
//   d xbar = ybar dt,  d ybar = b dt + (fractional noise, symbol a |l|^{2 nu}).
// For nu = 1/2 the density is closed form in the scaled variables
//   zeta = (xbar - x - ybar T + b T^2/2) / (a T^2),  eta = (ybar - y - b T) / (a T).
struct anomalous_nondim {
    double zeta = 0.0, eta = 0.0;
    cplx D;                  // 1 + eta^2 - 4 i zeta - 2 i eta, never zero for real inputs
    cplx f_plus, f_minus;    // roots of chi^2 - (1 + i eta) chi + 1/2 - i zeta
};

anomalous_nondim make_anomalous_nondim(double zeta, double eta);
anomalous_nondim make_anomalous_nondim(double a, double b, double T, double x, double y, double xbar, double ybar);

// Density in (zeta, eta); integrates to one over the plane and does not
// depend on T.
double anomalous_kolmogorov_density_nondim(double zeta, double eta);

// Density in (xbar, ybar). nu = 1/2 uses the closed form; other nu in (0, 1)
// a two-dimensional Fourier inversion with the exact phase integral.
double anomalous_kolmogorov_tpdf(double a, double b, double t, double x, double y, double tbar, double xbar,
                                 double ybar, double nu = 0.5);

// The two-dimensional inversion itself, for any nu in (0, 1).
double anomalous_kolmogorov_tpdf_inversion(double a, double b, double t, double x, double y, double tbar,
                                           double xbar, double ybar, double nu);

// Mean-reverting process dy = (chi - kappa y) dt driven by Cauchy noise of
// scale a: a Cauchy law centred at e^{-kappa T} y + chi B_kappa(T) with
// half-width a B_kappa(T).
double anomalous_ou_tpdf(double chi, double kappa, double a, double t, double y, double tbar, double ybar);

}  // namespace ak::ng
