#include "ak/pricing/exotics.hpp"

#include <algorithm>
#include <cmath>

#include "ak/core/errors.hpp"
#include "ak/gaussian/gaussian.hpp"
#include "ak/nongaussian/aug_feller.hpp"
#include "ak/numerics/quadrature.hpp"
#include "ak/numerics/special.hpp"
#include "ak/ode/exp_helpers.hpp"

namespace ak::pricing {

using num::normal_cdf;
using num::normal_pdf;
using ode::exp_B;

namespace {

double option_sign(const vanilla_spec& spec) {
    require(spec.style == option_style::call || spec.style == option_style::put,
            "asian_price: only call and put styles are supported");
    return spec.style == option_style::call ? 1.0 : -1.0;
}

// phi (m - k) N(phi (m - k) / s) + s n((m - k) / s), the normal-payoff kernel.
double normal_kernel(double phi, double m, double s) {
    if (s <= 0.0) return std::max(phi * m, 0.0);
    double z = m / s;
    return phi * m * normal_cdf(phi * z) + s * normal_pdf(z);
}

}  // namespace

asian_moments arithmetic_average_moments(double S, double sigma, double r, double T) {
    require(T > 0.0, "asian: maturity must be positive");
    asian_moments m;
    m.mean = S * exp_B(-r, T);
    // int_0^T ((e^{r u} - 1) / r)^2 du
    double x = r * T, g;
    if (std::abs(x) < 1e-3) {
        g = T * T * T * (1.0 / 3.0 + x / 4.0 + 7.0 * x * x / 60.0 + x * x * x / 24.0);
    } else {
        g = (T - 2.0 * exp_B(-r, T) + exp_B(-2.0 * r, T)) / (r * r);
    }
    m.variance = sigma * sigma * g;
    return m;
}

price_quote asian_price(asian_kind kind, const vanilla_spec& spec, double S, double sigma, double r) {
    spec.validate();
    double phi = option_sign(spec);
    require(sigma >= 0.0, "asian_price: sigma must be non-negative");
    double T = spec.maturity, K = spec.strike;
    price_quote q;
    if (kind == asian_kind::arithmetic_bachelier) {
        auto mom = arithmetic_average_moments(S, sigma, r, T);
        q.value = std::exp(-r * T) / T * normal_kernel(phi, mom.mean - T * K, std::sqrt(mom.variance));
        return q;
    }
    require(S > 0.0, "asian_price: geometric averaging needs a positive spot");
    // ln G ~ N(ln S + (r - sigma^2/2) T / 2, sigma^2 T / 3)
    double v = sigma * sigma * T / 3.0;
    double lead = S * std::exp(-0.5 * (r + sigma * sigma / 6.0) * T), Z = std::exp(-r * T);
    if (v == 0.0) {
        q.value = std::max(phi * (lead - Z * K), 0.0);
        return q;
    }
    double s = std::sqrt(v);
    double dp = (std::log(S / K) + 0.5 * (r + sigma * sigma / 6.0) * T) / s, dm = dp - s;
    q.value = phi * (lead * normal_cdf(phi * dp) - Z * K * normal_cdf(phi * dm));
    return q;
}

namespace {

double average_factor(double kappa, double T) { return exp_B(kappa, T) / T; }

price_quote var_swaption(const swap_params& p, double y0, double T, double strike) {
    ng::feller_params fp{p.chi, p.kappa, p.epsilon};
    fp.validate();
    require(y0 >= 0.0, "var_swaption: variance must be non-negative");
    auto slice = ng::aug_feller_cf(fp, std::nullopt, 0.0, 0.0, y0, T);
    double mean = y0 * exp_B(p.kappa, T) +
                  p.chi * (std::abs(p.kappa * T) < 1e-8 ? 0.5 * T * T : (T - exp_B(p.kappa, T)) / p.kappa);
    // E max(phi u, 0) = (phi E u + E|u|) / 2 with u = xbar - strike and
    // E|u| = (2/pi) int_0^inf (1 - Re E e^{i k u}) / k^2 dk.
    auto integrand = [&](double k) {
        cplx c = slice.cf(cplx(k, 0.0)) * std::exp(cplx(0.0, -k * strike));
        return (1.0 - c.real()) / (k * k);
    };
    // Near k = 0 the numerator cancels; below k0 it is replaced by its
    // quadratic term k^2 E u^2 / 2, with E u^2 from a coarse difference.
    double scale = std::max({mean, std::abs(strike), 1e-12});
    double h = 1e-2 / scale;
    double second = 2.0 * integrand(h);
    double k0 = 1e-3 / std::sqrt(std::max(second, 1e-300));
    double e1 = 0.0, e2 = 0.0;
    double k_break = std::max(k0, 1.0 / scale);
    double head = 0.5 * second * k0 + num::integrate(integrand, k0, k_break, 1e-13, 1e-11, &e1);
    double tail = num::integrate_to_infinity(integrand, k_break, 1e-13, 1e-11, &e2);
    double abs_u = 2.0 / pi * (head + tail);
    price_quote q;
    double disc = std::exp(-p.r * T);
    q.value = disc * 0.5 * (p.phi * (mean - strike) + abs_u);
    q.error_estimate = disc / pi * (e1 + e2);
    return q;
}

}  // namespace

price_quote vol_var_swap(swap_kind kind, const swap_params& p, double y0, double T, double strike) {
    require(T > 0.0, "vol_var_swap: maturity must be positive");
    require(p.kappa > 0.0, "vol_var_swap: kappa must be positive");
    require(p.phi == 1.0 || p.phi == -1.0, "vol_var_swap: phi must be +1 or -1");
    double theta = p.chi / p.kappa, bt = average_factor(p.kappa, T);
    price_quote q;
    switch (kind) {
        case swap_kind::vol_swap:
            q.value = theta + (y0 - theta) * bt;
            return q;
        case swap_kind::var_swap_feller: {
            require(y0 >= 0.0, "var_swap_feller: variance must be non-negative");
            ng::feller_params{p.chi, p.kappa, p.epsilon}.validate();
            q.value = theta + (y0 - theta) * bt;
            return q;
        }
        case swap_kind::var_swap_ou2: {
            // (1/T) int_0^T (m(t)^2 + v(t)) dt with m = theta + (y0 - theta) e^{-kappa t},
            // v = eps^2 (1 - e^{-2 kappa t}) / (2 kappa).
            double d = y0 - theta, e2 = p.epsilon * p.epsilon;
            double b1 = exp_B(p.kappa, T), b2 = exp_B(2.0 * p.kappa, T);
            double integral = theta * theta * T + 2.0 * theta * d * b1 + d * d * b2 +
                              e2 / (2.0 * p.kappa) * (T - b2);
            q.value = integral / T;
            return q;
        }
        case swap_kind::vol_swaption: {
            require(p.epsilon > 0.0, "vol_swaption: epsilon must be positive");
            auto law = gauss::augmented_ou_tpdf({p.chi, p.kappa, p.epsilon}, T, 0.0, y0);
            double mean = law.mean(0), h0 = law.covariance(0, 0);
            q.value = std::exp(-p.r * T) * normal_kernel(p.phi, mean - strike, std::sqrt(h0));
            return q;
        }
        case swap_kind::var_swaption: return var_swaption(p, y0, T, strike);
    }
    throw invalid_argument("vol_var_swap: unknown kind");
}

}  // namespace ak::pricing
