#include "ak/pricing/vanilla.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ak/core/errors.hpp"
#include "ak/core/parallel.hpp"
#include "ak/numerics/special.hpp"
#include "ak/ode/exp_helpers.hpp"
#include "ak/ode/path_dependent.hpp"
#include "ak/ode/riccati.hpp"
#include "ak/ode/stein.hpp"

namespace ak::pricing {

using num::normal_cdf;
using num::normal_pdf;

namespace {

double sign_of(option_style s) { return s == option_style::put ? -1.0 : 1.0; }

// Map a covered-call value onto the requested style.
double from_covered_call(option_style style, double cc, double S, double Z, double K) {
    switch (style) {
        case option_style::forward: return S - Z * K;
        case option_style::call: return S - cc;
        case option_style::put: return Z * K - cc;
        case option_style::covered_call: return cc;
        case option_style::peakon: return cc / (Z * K * std::sqrt(S / (Z * K)));
    }
    return cc;
}

// Average of a deterministic variance curve v(t) over [0, T].
template <class F>
double time_average(F v, double T) {
    num::gauss_legendre gl(48, 0.0, T);
    double s = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * v(gl.nodes[i]);
    return s / T;
}

// The Fourier models carry their deviation from the Black-Scholes transform
// at a reference variance; the closed form handles the rest. This keeps the
// integrand decaying like the model cf difference over k^2 and makes the
// degenerate zero-volatility limits exact.
num::inversion_result invert_with_control(const std::function<cplx(double)>& model_cf, double ref_var, double T,
                                          std::span<const double> xs, const num::quadrature_spec& q) {
    double s2 = std::max(ref_var, 0.0) * T;
    auto diff = [&](double k) {
        double w = k * k + 0.25;
        return (model_cf(k) - std::exp(-0.5 * w * s2)) / w;
    };
    auto res = num::invert_fourier_1d(diff, xs, q);
    double s = std::sqrt(s2);
    for (std::size_t i = 0; i < xs.size(); ++i) res.values[i] += peakon_closed_form(xs[i], s);
    return res;
}

num::quadrature_spec batch_spec(num::quadrature_spec q, std::size_t n) {
    if (n >= 32 && q.scheme == num::quad_scheme::trapezoid) q.scheme = num::quad_scheme::fft_grid;
    return q;
}

bool is_fourier(const model_spec& m) {
    return std::holds_alternative<heston_model>(m) || std::holds_alternative<stein_stein_model>(m) ||
           std::holds_alternative<path_dependent_model>(m);
}

double model_rate(const model_spec& m) {
    return std::visit(
        [](const auto& p) {
            if constexpr (requires { p.r; }) return p.r;
            else return 0.0;
        },
        m);
}

}  // namespace

void vanilla_spec::validate() const {
    require(strike > 0.0 && std::isfinite(strike), "vanilla: strike must be positive");
    require(maturity > 0.0 && std::isfinite(maturity), "vanilla: maturity must be positive");
}

void heston_model::validate() const {
    require(epsilon > 0.0, "heston: epsilon must be positive");
    require(v0 >= 0.0, "heston: v0 must be non-negative");
    require(chi >= 0.0, "heston: chi must be non-negative");
    require(rho > -1.0 && rho < 1.0, "heston: rho must lie in (-1, 1)");
}

void stein_stein_model::validate() const {
    require(epsilon >= 0.0, "stein_stein: epsilon must be non-negative");
    require(rho >= -1.0 && rho <= 1.0, "stein_stein: rho must lie in [-1, 1]");
}

void path_dependent_model::validate(double S) const {
    require(a0 > 0.0, "path_dependent: a0 must be positive");
    require(a1 < 0.0, "path_dependent: a1 must be negative");
    require(kappa >= 0.0, "path_dependent: kappa must be non-negative");
    require(average > 0.0 && S > 0.0, "path_dependent: spot and average must be positive");
    require_domain(a0 + a1 * std::log(S / average) > 0.0, "path_dependent: initial variance a0 + a1 ln(S/A) <= 0");
}

double forward_price(double S, double Z) {
    require(Z > 0.0, "forward_price: discount factor must be positive");
    return S / Z;
}

double peakon_closed_form(double x, double s) {
    if (s <= 0.0) return std::exp(-0.5 * std::abs(x));
    return std::exp(0.5 * x) * normal_cdf(-x / s - 0.5 * s) + std::exp(-0.5 * x) * normal_cdf(x / s - 0.5 * s);
}

std::vector<double> peakon_price_bs(std::span<const double> xs, double s, const num::quadrature_spec& q) {
    require(s > 0.0, "peakon_price_bs: sigma sqrt(T) must be positive");
    auto cf = [s](double k) {
        double w = k * k + 0.25;
        return cplx(std::exp(-0.5 * w * s * s) / w, 0.0);
    };
    return num::invert_fourier_1d(cf, xs, q).values;
}

double black_scholes_price(const vanilla_spec& spec, double S, double sigma, double r) {
    spec.validate();
    require(S > 0.0, "black_scholes_price: spot must be positive");
    require(sigma >= 0.0, "black_scholes_price: sigma must be non-negative");
    double T = spec.maturity, K = spec.strike, Z = std::exp(-r * T);
    double s = sigma * std::sqrt(T);
    if (spec.style == option_style::peakon) return peakon_closed_form(std::log(S / (Z * K)), s);
    double call;
    if (s == 0.0) {
        call = std::max(S - Z * K, 0.0);
    } else {
        double d1 = (std::log(S / K) + r * T) / s + 0.5 * s, d2 = d1 - s;
        call = S * normal_cdf(d1) - Z * K * normal_cdf(d2);
    }
    if (spec.style == option_style::call) return call;
    if (spec.style == option_style::put) {
        if (s == 0.0) return std::max(Z * K - S, 0.0);
        double d1 = (std::log(S / K) + r * T) / s + 0.5 * s, d2 = d1 - s;
        return Z * K * normal_cdf(-d2) - S * normal_cdf(-d1);
    }
    return from_covered_call(spec.style, S - call, S, Z, K);
}

double bachelier_price(const vanilla_spec& spec, double S, double sigma, double r) {
    spec.validate();
    require(sigma >= 0.0, "bachelier_price: sigma must be non-negative");
    double T = spec.maturity, K = spec.strike, Z = std::exp(-r * T);
    // Variance of the discounted terminal price, (1 - e^{-2rT}) / (2r) -> T.
    double sig_t = sigma * std::sqrt(ode::exp_B(2.0 * r, T));
    double m = S - Z * K;
    auto value = [&](double phi) {
        if (sig_t == 0.0) return std::max(phi * m, 0.0);
        double z = m / sig_t;
        return phi * m * normal_cdf(phi * z) + sig_t * normal_pdf(z);
    };
    if (spec.style == option_style::call) return value(1.0);
    if (spec.style == option_style::put) return value(-1.0);
    require(spec.style != option_style::peakon || S > 0.0, "bachelier_price: peakon needs a positive spot");
    return from_covered_call(spec.style, S - value(1.0), S, Z, K);
}

num::inversion_result heston_peakon(const heston_model& m, double T, std::span<const double> xs,
                                    const num::quadrature_spec& q) {
    m.validate();
    require(T > 0.0, "heston: maturity must be positive");
    double e2 = m.epsilon * m.epsilon;
    double kappa_hat = m.kappa - 0.5 * m.rho * m.epsilon;
    auto cf = [&](double k) {
        auto sol = ode::riccati_closed_form(0.5 * e2, cplx(-kappa_hat, m.rho * m.epsilon * k),
                                            -0.5 * (k * k + 0.25), 0.0, T);
        return std::exp(m.chi * sol.integral + sol.psi * m.v0);
    };
    double ref = time_average(
        [&](double t) { return m.v0 * ode::exp_A(m.kappa, t) + m.chi * ode::exp_B(m.kappa, t); }, T);
    return invert_with_control(cf, ref, T, xs, q);
}

num::inversion_result stein_stein_peakon(const stein_stein_model& m, double T, std::span<const double> xs,
                                         const num::quadrature_spec& q) {
    m.validate();
    require(T > 0.0, "stein_stein: maturity must be positive");
    double e2 = m.epsilon * m.epsilon;
    auto avg_var = time_average(
        [&](double t) {
            double mean = m.sigma0 * ode::exp_A(m.kappa, t) + m.chi * ode::exp_B(m.kappa, t);
            return mean * mean + e2 * ode::exp_B(2.0 * m.kappa, t);
        },
        T);
    if (m.epsilon == 0.0) {
        // Deterministic volatility path: the transform is Black-Scholes at the average variance.
        num::inversion_result res;
        for (double x : xs) res.values.push_back(peakon_closed_form(x, std::sqrt(avg_var * T)));
        return res;
    }
    double kappa_hat = m.kappa - 0.5 * m.rho * m.epsilon;
    auto cf = [&](double k) {
        auto c = ode::stein_riccati(m.chi, m.epsilon, cplx(-kappa_hat, m.rho * m.epsilon * k),
                                    -0.5 * (k * k + 0.25), 0.0, 0.0, T);
        return std::exp(c.alpha + c.psi2 * m.sigma0 * m.sigma0 + c.psi3 * m.sigma0);
    };
    return invert_with_control(cf, avg_var, T, xs, q);
}

double path_dependent_peakon(const path_dependent_model& m, double T, double x, double y,
                             const num::quadrature_spec& q, double* error_estimate) {
    require(T > 0.0, "path_dependent: maturity must be positive");
    require(m.a0 > 0.0 && m.a1 < 0.0, "path_dependent: need a0 > 0 and a1 < 0");
    double v = m.a0 + m.a1 * (y - x);
    require_domain(v > 0.0, "path_dependent: initial variance a0 + a1 (y - x) <= 0");
    // In the e^{y/2} frame the log-price is driftless and killed at v / 8.
    auto cf = [&](double l) {
        auto c = ode::path_dependent_characteristics(m.a0, m.a1, m.kappa, 0.0, cplx(0.0, l), T, 0.125);
        return std::exp(c.alpha + c.psi_x * x + (c.psi_y - cplx(0.0, l)) * y);
    };
    double pt[1] = {y};
    auto res = invert_with_control(cf, v, T, pt, q);
    if (error_estimate) *error_estimate = res.error_estimate;
    return res.values[0];
}

std::vector<price_quote> price_strikes(option_style style, double T, std::span<const double> strikes, double S,
                                       const model_spec& model, const num::quadrature_spec& q) {
    require(S > 0.0, "price_strikes: spot must be positive");
    for (double K : strikes) vanilla_spec{K, T, style}.validate();
    std::vector<price_quote> out(strikes.size());
    if (!is_fourier(model)) {
        for (std::size_t i = 0; i < strikes.size(); ++i) {
            vanilla_spec spec{strikes[i], T, style};
            out[i].value = std::holds_alternative<bachelier_model>(model)
                               ? bachelier_price(spec, S, std::get<bachelier_model>(model).sigma,
                                                 std::get<bachelier_model>(model).r)
                               : black_scholes_price(spec, S, std::get<black_scholes_model>(model).sigma,
                                                     std::get<black_scholes_model>(model).r);
        }
        return out;
    }

    double r = model_rate(model), Z = std::exp(-r * T);
    std::vector<double> xs(strikes.size()), V(strikes.size()), err(strikes.size(), 0.0);
    std::vector<std::string> warnings;
    for (std::size_t i = 0; i < strikes.size(); ++i) xs[i] = std::log(S / (Z * strikes[i]));

    if (const auto* pd = std::get_if<path_dependent_model>(&model)) {
        pd->validate(S);
        // Each strike shifts both coordinates, so strikes are independent inversions.
        parallel_for(strikes.size(), [&](std::size_t i) {
            double K = strikes[i];
            V[i] = path_dependent_peakon(*pd, T, std::log(pd->average / K), std::log(S / K), q, &err[i]);
        });
    } else {
        auto qq = batch_spec(q, strikes.size());
        auto res = std::holds_alternative<heston_model>(model)
                       ? heston_peakon(std::get<heston_model>(model), T, xs, qq)
                       : stein_stein_peakon(std::get<stein_stein_model>(model), T, xs, qq);
        V = res.values;
        std::fill(err.begin(), err.end(), res.error_estimate);
        warnings = res.warnings;
    }

    for (std::size_t i = 0; i < strikes.size(); ++i) {
        double K = strikes[i], scale = Z * K * std::exp(0.5 * xs[i]);
        double cc = scale * V[i];
        auto& o = out[i];
        o.value = from_covered_call(style, cc, S, Z, K);
        o.error_estimate = style == option_style::forward ? 0.0
                           : style == option_style::peakon ? err[i]
                                                           : scale * err[i];
        o.warnings = warnings;
        if (!std::isfinite(o.value)) o.warnings.push_back("non-finite price");
    }
    return out;
}

price_quote price(const vanilla_spec& spec, double S, const model_spec& model, const num::quadrature_spec& q) {
    spec.validate();
    double K[1] = {spec.strike};
    return price_strikes(spec.style, spec.maturity, K, S, model, q)[0];
}

double implied_vol(double price, const vanilla_spec& spec, double S, double r) {
    spec.validate();
    require(spec.style == option_style::call || spec.style == option_style::put,
            "implied_vol: only calls and puts carry an implied volatility");
    require(S > 0.0 && std::isfinite(price), "implied_vol: bad inputs");
    double T = spec.maturity, K = spec.strike, Z = std::exp(-r * T);
    double phi = sign_of(spec.style);
    double lower = std::max(phi * (S - Z * K), 0.0);
    double upper = phi > 0 ? S : Z * K;
    double tol = 1e-10 * S;
    if (!(price > lower + 0.25 * tol && price < upper - 0.25 * tol))
        throw invalid_argument("implied_vol: price outside the no-arbitrage band");

    auto f = [&](double sig) { return black_scholes_price(spec, S, sig, r) - price; };
    double lo = 0.0, hi = 1.0;
    while (f(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e4) throw numerical_error("implied_vol: no volatility reproduces the price");
    }
    double sig = 0.5 * (lo + hi);
    double sqrtT = std::sqrt(T);
    for (int it = 0; it < 200; ++it) {
        double g = f(sig);
        if (g > 0.0) hi = sig;
        else lo = sig;
        double d1 = (std::log(S / K) + r * T) / (sig * sqrtT) + 0.5 * sig * sqrtT;
        double vega = S * normal_pdf(d1) * sqrtT;
        // Keep polishing past the price tolerance while Newton still moves sigma.
        if (std::abs(g) < tol && (g == 0.0 || std::abs(g) < 1e-13 * vega)) return sig;
        double next = vega > 0.0 ? sig - g / vega : std::numeric_limits<double>::quiet_NaN();
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo < 1e-15 * std::max(1.0, hi)) {
            if (std::abs(f(next)) < tol) return next;
            throw numerical_error("implied_vol: bracket collapsed without reaching the tolerance");
        }
        sig = next;
    }
    throw numerical_error("implied_vol: did not converge");
}

}  // namespace ak::pricing
