#pragma once

#include <span>
#include <variant>
#include <vector>

#include "ak/core/types.hpp"
#include "ak/numerics/quadrature.hpp"

namespace ak::pricing {

enum class option_style { forward, call, put, covered_call, peakon };

// European claim on S at maturity t + T. `peakon` returns the
// nondimensional covered-call value V at x = ln(F/K), where the covered call
// is Z K e^{x/2} V.
struct vanilla_spec {
    double strike = 1.0;
    double maturity = 1.0;  // year fraction T = tbar - t
    option_style style = option_style::call;
    void validate() const;
};

struct bachelier_model {
    double sigma = 0.0;  // absolute volatility, currency per sqrt(year)
    double r = 0.0;
};

struct black_scholes_model {
    double sigma = 0.0;
    double r = 0.0;
};

struct heston_model {
    double v0 = 0.0, chi = 0.0, kappa = 0.0, epsilon = 0.0, rho = 0.0, r = 0.0;
    void validate() const;
};

// Volatility itself is OU: d sigma = (chi - kappa sigma) dt + eps dZ.
struct stein_stein_model {
    double sigma0 = 0.0, chi = 0.0, kappa = 0.0, epsilon = 0.0, rho = 0.0, r = 0.0;
    void validate() const;
};

// dS/S = sqrt(a0 + a1 ln(S/A)) dW with ln A the exponential moving average
// of ln S at rate kappa; r = 0. `average` is the current A.
struct path_dependent_model {
    double a0 = 0.0, a1 = 0.0, kappa = 0.0, average = 1.0;
    void validate(double S) const;
};

using model_spec =
    std::variant<bachelier_model, black_scholes_model, heston_model, stein_stein_model, path_dependent_model>;

// F = S / Z.
double forward_price(double S, double Z);

double black_scholes_price(const vanilla_spec& spec, double S, double sigma, double r);

// Covered-call value in the e^{x/2} frame for total deviation s = sigma sqrt(T):
//   V = e^{x/2} N(-x/s - s/2) + e^{-x/2} N(x/s - s/2),  V(s = 0) = e^{-|x|/2}.
double peakon_closed_form(double x, double s);

// Same value from (1/2 pi) int exp(-(k^2 + 1/4) s^2 / 2 + i k x) / (k^2 + 1/4) dk.
std::vector<double> peakon_price_bs(std::span<const double> xs, double s, const num::quadrature_spec& q = {});

double bachelier_price(const vanilla_spec& spec, double S, double sigma, double r);

// Generic entry point; Fourier models return error estimates and warnings.
price_quote price(const vanilla_spec& spec, double S, const model_spec& model, const num::quadrature_spec& q = {});

// Several strikes at one maturity; the Fourier models share one inversion
// (FFT grid from 32 strikes on).
std::vector<price_quote> price_strikes(option_style style, double T, std::span<const double> strikes, double S,
                                       const model_spec& model, const num::quadrature_spec& q = {});

// Nondimensional peakon values of a stochastic-volatility model at the
// log-moneyness points xs.
num::inversion_result heston_peakon(const heston_model& m, double T, std::span<const double> xs,
                                    const num::quadrature_spec& q = {});
num::inversion_result stein_stein_peakon(const stein_stein_model& m, double T, std::span<const double> xs,
                                         const num::quadrature_spec& q = {});
// For the path-dependent model the state is (x, y) = (ln(A/K), ln(S/K)).
double path_dependent_peakon(const path_dependent_model& m, double T, double x, double y,
                             const num::quadrature_spec& q = {}, double* error_estimate = nullptr);

// Black-Scholes implied volatility of a call or put price; safeguarded Newton
// with bisection. Throws invalid_argument outside the no-arbitrage band.
double implied_vol(double price, const vanilla_spec& spec, double S, double r);

}  // namespace ak::pricing
