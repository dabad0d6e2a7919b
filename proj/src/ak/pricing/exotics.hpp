#pragma once

#include "ak/core/types.hpp"
#include "ak/pricing/vanilla.hpp"

namespace ak::pricing {

enum class asian_kind { arithmetic_bachelier, geometric_bs };

// Fixed-strike Asian on the average of S over [t, tbar]. The arithmetic kind
// uses dS = r S dt + sigma dW (absolute sigma), the geometric kind lognormal S.
// Only call and put styles are accepted.
price_quote asian_price(asian_kind kind, const vanilla_spec& spec, double S, double sigma, double r);

// Mean and variance of int_0^T S dt under the arithmetic Bachelier dynamics.
struct asian_moments {
    double mean = 0.0, variance = 0.0;
};
asian_moments arithmetic_average_moments(double S, double sigma, double r, double T);

enum class swap_kind { vol_swap, vol_swaption, var_swap_feller, var_swap_ou2, var_swaption };

// Driving factor dy = (chi - kappa y) dt + eps dW (vol kinds and var_swap_ou2,
// with y the volatility) or eps sqrt(y) dW (var_swap_feller, var_swaption, with
// y the variance). Swaptions pay max(phi (xbar - strike), 0) at maturity on the
// running integral xbar = int y dt, discounted at r. Swaps return the fair
// strike of the time average.
struct swap_params {
    double chi = 0.0, kappa = 0.0, epsilon = 0.0;
    double r = 0.0;
    double phi = 1.0;
};

price_quote vol_var_swap(swap_kind kind, const swap_params& p, double y0, double T, double strike = 0.0);

}  // namespace ak::pricing
