#pragma once

#include <span>
#include <vector>

namespace ak::amm {

enum class rule_kind { constant_sum, constant_product, mixed };

// Pool rule in normalized holdings x = X/N, y = Y/N starting at (1, 1).
// The mixed rule xy (1 + alpha ((x + y)/2 - 1)) = 1 interpolates between
// constant product (alpha -> 0) and constant sum (alpha -> inf).
struct pool_rule {
    rule_kind kind = rule_kind::constant_product;
    double alpha = 1.0;  // mixed only
    double depth = 1.0;  // N; results are reported per unit of depth
    void validate() const;
};

struct curve_point {
    double y, dy, d2y;
};

curve_point pool_curve(const pool_rule& rule, double x);

struct arb_result {
    double x_star = 0.0, y_star = 0.0;
    double omega_star = 0.0;  // arbitrageur's profit, in units of token 1
    double portfolio = 0.0;   // pi* = x* + S y*
    int iterations = 0;       // Newton steps (mixed rule)
};

// Optimal arbitrage against an external price S of token 2 in token 1.
arb_result optimal_arbitrage(const pool_rule& rule, double S);

struct loss {
    double omega = 0.0;   // (S + 1) - pi*
    double lambda = 0.0;  // omega / (S + 1)
};

loss impermanent_loss(const pool_rule& rule, double S);

// Heston dynamics for the price of token 2, r = 0:
//   dS/S = sqrt(v) dW,  dv = (chi - kappa v) dt + eps sqrt(v) dZ,  d<W, Z> = rho dt.
struct heston_params {
    double chi = 0.0, kappa = 0.0, epsilon = 0.0, rho = 0.0, v0 = 0.0;
    void validate() const;
};

// Value of the power contract paying S^nu after T, e^{alpha + beta v} S^nu.
struct power_value {
    double alpha = 0.0, beta = 0.0, value = 0.0;
};
power_value power_contract(const heston_params& m, double nu, double T, double S);

// Unit log contract S - 1 - ln S and entropy contract S ln S - (S - 1).
double log_contract(const heston_params& m, double T, double S);
double entropy_contract(const heston_params& m, double T, double S);

struct hedge_quote {
    double c_lc = 0.5, c_ec = 0.5;
    double u_lc = 0.0, u_ec = 0.0;  // c times the unit contract values
    double u_ex = 0.0;              // S + 1 - 2 Power(1/2), the exact constant-product loss
};

hedge_quote hedge_contracts(const heston_params& m, double T, double S);

struct hedge_gap_row {
    double T = 0.0, u_ex = 0.0, u_lc = 0.0, u_ec = 0.0, gap = 0.0;
};

// One row per maturity at S = 1; gap = max(u_lc, u_ec) - u_ex.
std::vector<hedge_gap_row> hedge_gap_report(const heston_params& m, std::span<const double> maturities);

}  // namespace ak::amm
