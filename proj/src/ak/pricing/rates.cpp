#include "ak/pricing/rates.hpp"

#include <algorithm>
#include <cmath>

#include "ak/core/errors.hpp"
#include "ak/gaussian/gaussian.hpp"
#include "ak/numerics/special.hpp"
#include "ak/ode/exp_helpers.hpp"

namespace ak::pricing {

using num::normal_cdf;
using ode::exp_B;

namespace {

// int_0^T B_k(s) ds and int_0^T B_k(s)^2 ds.
double int_B(double k, double T) {
    if (std::abs(k * T) < 1e-4) return T * T * (0.5 - k * T / 6.0 + k * k * T * T / 24.0);
    return (T - exp_B(k, T)) / k;
}

double int_B2(double k, double T) {
    if (std::abs(k * T) < 1e-4) return T * T * T * (1.0 / 3.0 - k * T / 4.0 + 7.0 * k * k * T * T / 60.0);
    return (T - 2.0 * exp_B(k, T) + exp_B(2.0 * k, T)) / (k * k);
}

double vasicek_affine(double chi, double kappa, double eps, double T, double y) {
    double B = exp_B(kappa, T), e2 = eps * eps;
    // C = -chi int B + (eps^2 / 2) int B^2; reduces to the theta form for kappa > 0.
    double C = -chi * int_B(kappa, T) + 0.5 * e2 * int_B2(kappa, T);
    return std::exp(C - B * y);
}

double cir_bond(double chi, double kappa, double eps, double T, double y) {
    double gamma = std::sqrt(kappa * kappa + 2.0 * eps * eps);
    double em1 = std::expm1(gamma * T);
    double den = (gamma + kappa) * em1 + 2.0 * gamma;
    double B = 2.0 * em1 / den;
    double logC = (2.0 * chi / (eps * eps)) * (std::log(2.0 * gamma / den) + 0.5 * (kappa + gamma) * T);
    return std::exp(logC - B * y);
}

}  // namespace

void bond_spec::validate() const {
    require(maturity >= 0.0 && std::isfinite(maturity), "bond: maturity must be non-negative");
    require(kappa >= 0.0, "bond: kappa must be non-negative");
    require(epsilon >= 0.0, "bond: epsilon must be non-negative");
    if (model == short_rate_model::cir) {
        require(epsilon > 0.0, "bond: CIR needs epsilon > 0");
        require(chi >= 0.0, "bond: CIR needs chi >= 0");
    }
}

vasicek_routes vasicek_bond_routes(double chi, double kappa, double epsilon, double T, double y) {
    vasicek_routes r;
    r.affine = vasicek_affine(chi, kappa, epsilon, T, y);
    if (T < gauss::min_horizon || epsilon == 0.0) {
        double p = y * exp_B(kappa, T) + chi * int_B(kappa, T);
        r.expectation = std::exp(-p + 0.5 * epsilon * epsilon * int_B2(kappa, T));
        return r;
    }
    auto law = gauss::augmented_ou_tpdf({chi, kappa, epsilon}, T, 0.0, y);
    r.expectation = std::exp(-law.mean(0) + 0.5 * law.covariance(0, 0));
    return r;
}

price_quote bond_price(const bond_spec& spec, double y) {
    spec.validate();
    price_quote q;
    if (spec.model == short_rate_model::cir) {
        require_domain(y >= 0.0, "bond: CIR short rate must be non-negative");
        q.value = cir_bond(spec.chi, spec.kappa, spec.epsilon, spec.maturity, y);
        return q;
    }
    auto r = vasicek_bond_routes(spec.chi, spec.kappa, spec.epsilon, spec.maturity, y);
    q.value = r.affine;
    q.error_estimate = std::abs(r.affine - r.expectation);
    if (q.error_estimate > 1e-12 * std::max(1.0, r.affine))
        q.warnings.push_back("vasicek affine and expectation routes disagree");
    return q;
}

price_quote bond_option_price(const bond_spec& rate, double y, double option_maturity, double bond_maturity,
                              double strike, double phi) {
    rate.validate();
    require(rate.model == short_rate_model::vasicek, "bond_option_price: only the Vasicek model is supported");
    require(option_maturity > 0.0 && bond_maturity > option_maturity,
            "bond_option_price: need 0 < option maturity < bond maturity");
    require(strike > 0.0, "bond_option_price: strike must be positive");
    require(phi == 1.0 || phi == -1.0, "bond_option_price: phi must be +1 or -1");
    double Zs = vasicek_affine(rate.chi, rate.kappa, rate.epsilon, option_maturity, y);
    double Zl = vasicek_affine(rate.chi, rate.kappa, rate.epsilon, bond_maturity, y);
    double h2 = rate.epsilon * rate.epsilon * exp_B(2.0 * rate.kappa, option_maturity);
    double sig = std::sqrt(h2) * exp_B(rate.kappa, bond_maturity - option_maturity);
    price_quote q;
    if (sig == 0.0) {
        q.value = std::max(phi * (Zl - Zs * strike), 0.0);
        return q;
    }
    double dp = std::log(Zl / (Zs * strike)) / sig + 0.5 * sig, dm = dp - sig;
    q.value = phi * (Zl * normal_cdf(phi * dp) - Zs * strike * normal_cdf(phi * dm));
    return q;
}

double stochastic_rate_total_variance(double sigma, double rho, double kappa, double epsilon, double T) {
    return sigma * sigma * T + 2.0 * rho * epsilon * sigma * int_B(kappa, T) +
           epsilon * epsilon * int_B2(kappa, T);
}

price_quote stochastic_rate_european(const vanilla_spec& spec, double S, double sigma, double rho,
                                     const bond_spec& rate, double y) {
    spec.validate();
    rate.validate();
    require(rate.model == short_rate_model::vasicek, "stochastic_rate_european: only Vasicek rates are supported");
    require(S > 0.0 && sigma >= 0.0, "stochastic_rate_european: bad spot or volatility");
    require(rho >= -1.0 && rho <= 1.0, "stochastic_rate_european: rho must lie in [-1, 1]");
    double T = spec.maturity;
    double Z = vasicek_affine(rate.chi, rate.kappa, rate.epsilon, T, y);
    double F = S / Z;
    double v = std::max(stochastic_rate_total_variance(sigma, rho, rate.kappa, rate.epsilon, T), 0.0);
    // Black's formula through the zero-rate Black-Scholes pricer on the forward.
    double sigma_eff = std::sqrt(v / T);
    price_quote q;
    q.value = black_scholes_price(spec, F, sigma_eff, 0.0);
    if (spec.style != option_style::peakon) q.value *= Z;
    return q;
}

}  // namespace ak::pricing
