#pragma once

namespace ak::num {

double normal_cdf(double x);
double normal_pdf(double x);

// Modified Bessel function of the first kind I_nu(z) for nu > -1, z >= 0.
// Negative non-integer orders use I_{-nu} = I_nu + (2/pi) sin(nu pi) K_nu.
// Throws numerical_error when the unscaled value overflows; use the scaled
// variant in that case.
double bessel_i(double nu, double z);

// exp(-z) * I_nu(z), safe for large z.
double bessel_i_scaled(double nu, double z);

// log I_nu(z), finite whenever I_nu(z) > 0.
double log_bessel_i(double nu, double z);

// E1(x) = int_x^inf e^{-t}/t dt, x > 0.
double exp_integral_e1(double x);

}  // namespace ak::num
