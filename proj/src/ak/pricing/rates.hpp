#pragma once

#include "ak/core/types.hpp"
#include "ak/pricing/vanilla.hpp"

namespace ak::pricing {

enum class short_rate_model { vasicek, cir };

// Short rate dy = (chi - kappa y) dt + eps dW (Vasicek) or eps sqrt(y) dW (CIR).
struct bond_spec {
    short_rate_model model = short_rate_model::vasicek;
    double chi = 0.0, kappa = 0.0, epsilon = 0.0;
    double maturity = 1.0;  // T = tbar - t
    void validate() const;
};

// Zero-coupon bond E exp(-int_0^T y). For Vasicek both the affine closed form
// and the Gaussian expectation of the integrated rate are evaluated; their gap
// is reported as the error estimate (and a warning above 1e-12).
price_quote bond_price(const bond_spec& spec, double y);

struct vasicek_routes {
    double affine = 0.0, expectation = 0.0;
};
vasicek_routes vasicek_bond_routes(double chi, double kappa, double epsilon, double T, double y);

// Option expiring at `option_maturity` on the Vasicek bond maturing at
// `bond_maturity` (both measured from now); phi = +1 call, -1 put.
price_quote bond_option_price(const bond_spec& rate, double y, double option_maturity, double bond_maturity,
                              double strike, double phi);

// European option on lognormal S (volatility sigma) with a Vasicek short rate
// correlated at rho with the stock. Priced as the discount bond times Black's
// formula on the forward S / Z with the integrated forward variance.
price_quote stochastic_rate_european(const vanilla_spec& spec, double S, double sigma, double rho,
                                     const bond_spec& rate, double y);

// Total variance sigma^2 T + 2 rho eps sigma int B + eps^2 int B^2 of ln(S / Z).
double stochastic_rate_total_variance(double sigma, double rho, double kappa, double epsilon, double T);

}  // namespace ak::pricing
