#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ak/core/types.hpp"
#include "ak/nongaussian/feller.hpp"
#include "ak/numerics/quadrature.hpp"

namespace ak::ng {

// k -> E exp(i k (xbar - x)); complex k gives exponential moments.
struct characteristic_slice {
    std::function<cplx(cplx)> cf;
    std::string domain_note;
};

// Feller factor y with a second coordinate x. Without rho, x is the running
// integral of y. With rho, dx = sqrt(y) dW with d<W, Z> = rho dt (driftless
// log-price of the variance model).
characteristic_slice aug_feller_cf(const feller_params& p, std::optional<double> rho, double t, double x, double y,
                                   double tbar);

// Joint density of (xbar, ybar): one inversion in k of a closed ybar profile
// (type I regularization, ybar > 0).
double aug_feller_tpdf(const feller_params& p, std::optional<double> rho, double t, double x, double y, double tbar,
                       double xbar, double ybar, const num::quadrature_spec& spec = {});

// Marginal density of xbar.
std::vector<double> aug_feller_marginal_x(const feller_params& p, std::optional<double> rho, double t, double x,
                                          double y, double tbar, std::span<const double> xbars,
                                          const num::quadrature_spec& spec = {});

// Finite-time explosion of E exp(p (xbar - x)).
struct explosion_report {
    // Exponents with a real root pair (no explosion): (-inf, p_hat] for the
    // integral, [p_minus, p_plus] for the correlated case.
    std::optional<double> p_hat, p_plus, p_minus;
    std::optional<double> t_star;  // horizon at which the moment becomes infinite
};

explosion_report moment_explosion(const feller_params& p, std::optional<double> rho, double p_exponent);

}  // namespace ak::ng
