#pragma once

#include <functional>

#include "ak/core/types.hpp"
#include "ak/gaussian/gaussian.hpp"

namespace ak::ng {

// Exponents of E exp(i m1 xbar + i m2 ybar^2 + i m3 ybar)
//   = exp(alpha + i m1 x + i delta2 y^2 + i delta3 y)
// for dx = y dW1, dy = (chi - kappa y) dt + eps dW2, d<W1, W2> = rho dt.
struct stein_exponents {
    cplx alpha, delta2, delta3;
    cplx value;
    bool numeric_fallback = false;
};

// Slice at fixed m1 over the quadratic and linear exponents (m2, m3).
struct stein_slice {
    std::function<stein_exponents(double, double)> at;
};

stein_slice stein_density_cf(const gauss::ou_params& p, double rho, double m1, double t, double x, double y, double tbar);

}  // namespace ak::ng
