#include "ak/numerics/special.hpp"

#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sf_expint.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "ak/core/errors.hpp"
#include "ak/numerics/gsl_util.hpp"

namespace ak::num {
namespace {

using detail::gsl_check;

double inu_scaled_nonneg(double nu, double z) {
    gsl_sf_result r;
    // The fractional-order routine returns NaN for nu = 0 at large z, so
    // integer orders go through the dedicated routine.
    if (nu == std::floor(nu) && nu < 1e4)
        gsl_check(gsl_sf_bessel_In_scaled_e(static_cast<int>(nu), z, &r), "bessel_i");
    else
        gsl_check(gsl_sf_bessel_Inu_scaled_e(nu, z, &r), "bessel_i");
    if (!std::isfinite(r.val)) throw numerical_error("bessel_i: non-finite result");
    return r.val;
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double bessel_i_scaled(double nu, double z) {
    detail::quiet_gsl();
    require(nu > -1.0, "bessel_i: order must exceed -1");
    require(z >= 0.0 && std::isfinite(z), "bessel_i: argument must be finite and nonnegative");
    if (z == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu > 0.0) return 0.0;
        return std::numeric_limits<double>::infinity();
    }
    if (nu >= 0.0) return inu_scaled_nonneg(nu, z);
    double a = -nu;
    gsl_sf_result k;
    gsl_check(gsl_sf_bessel_Knu_scaled_e(a, z, &k), "bessel_i");
    // e^{-z} I_{-a} = e^{-z} I_a + (2/pi) sin(a pi) e^{-2z} (e^{z} K_a)
    return inu_scaled_nonneg(a, z) +
           2.0 / std::numbers::pi * std::sin(a * std::numbers::pi) * std::exp(-2.0 * z) * k.val;
}

double bessel_i(double nu, double z) {
    double s = bessel_i_scaled(nu, z);
    if (z <= 50.0) return s * std::exp(z);
    double lg = std::log(s) + z;
    if (lg > std::log(std::numeric_limits<double>::max()))
        throw numerical_error("bessel_i: overflow, use bessel_i_scaled");
    return std::exp(lg);
}

double log_bessel_i(double nu, double z) { return std::log(bessel_i_scaled(nu, z)) + z; }

double exp_integral_e1(double x) {
    detail::quiet_gsl();
    require_domain(x > 0.0, "exp_integral_e1: argument must be positive");
    gsl_sf_result r;
    gsl_check(gsl_sf_expint_E1_e(x, &r), "exp_integral_e1");
    return r.val;
}

}  // namespace ak::num
