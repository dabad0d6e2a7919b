#include "ak/amm/amm.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ak/core/errors.hpp"
#include "ak/core/parallel.hpp"
#include "ak/ode/exp_helpers.hpp"
#include "ak/ode/riccati.hpp"

namespace ak::amm {

using ode::exp_B;

void pool_rule::validate() const {
    require(depth > 0.0, "pool_rule: depth must be positive");
    if (kind == rule_kind::mixed) require(alpha > 0.0 && std::isfinite(alpha), "pool_rule: alpha must be positive");
}

namespace {

// Positive root of alpha y^2 + b y - 2/x = 0, b = 2(1 - alpha) + alpha x.
// The roots have product -2/(alpha x) < 0, so the positive one is unique.
curve_point mixed_curve(double a, double x) {
    double b = 2.0 * (1.0 - a) + a * x;
    double D = b * b + 8.0 * a / x;
    double sD = std::sqrt(D);
    // Rationalized form avoids the cancellation -b + sqrt(D) when b > 0.
    double y = b > 0.0 ? 4.0 / (x * (sD + b)) : (sD - b) / (2.0 * a);
    double g = b - 4.0 / (x * x);  // D' / (2 alpha)
    double dy = 0.5 * (-1.0 + g / sD);
    double d2y = 0.5 * ((a + 8.0 / (x * x * x)) / sD - a * g * g / (D * sD));
    return {y, dy, d2y};
}

arb_result mixed_arbitrage(double a, double S) {
    auto g = [&](double x) { return mixed_curve(a, x).dy + 1.0 / S; };
    // g increases from -inf (x -> 0) to 1/S (x -> inf) since y is convex.
    double lo = 0.0, hi = std::max(2.0, 2.0 * std::sqrt(S));
    while (g(hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw numerical_error("optimal_arbitrage: no bracket for the mixed rule");
    }
    double x = std::sqrt(S);  // exact as alpha -> 0
    arb_result r;
    for (int it = 0; it < 100; ++it) {
        auto c = mixed_curve(a, x);
        double res = c.dy + 1.0 / S;
        r.iterations = it;
        if (std::abs(res) < 1e-14 * std::max(1.0, 1.0 / S)) break;
        if (res > 0.0) hi = std::min(hi, x);
        else lo = std::max(lo, x);
        double next = x - res / c.d2y;
        if (!(next > lo && next < hi)) next = lo > 0.0 ? 0.5 * (lo + hi) : 0.5 * hi;
        if (it == 99) throw numerical_error("optimal_arbitrage: Newton did not converge");
        x = next;
    }
    r.x_star = x;
    r.y_star = mixed_curve(a, x).y;
    return r;
}

}  // namespace

curve_point pool_curve(const pool_rule& rule, double x) {
    rule.validate();
    require_domain(x > 0.0 && std::isfinite(x), "pool_curve: x must be positive");
    switch (rule.kind) {
        case rule_kind::constant_sum:
            require_domain(x < 2.0, "pool_curve: constant sum needs x in (0, 2)");
            return {2.0 - x, -1.0, 0.0};
        case rule_kind::constant_product: return {1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x)};
        case rule_kind::mixed: return mixed_curve(rule.alpha, x);
    }
    throw invalid_argument("pool_curve: unknown rule");
}

arb_result optimal_arbitrage(const pool_rule& rule, double S) {
    rule.validate();
    require(S > 0.0 && std::isfinite(S), "optimal_arbitrage: price must be positive");
    arb_result r;
    switch (rule.kind) {
        case rule_kind::constant_sum:
            // Linear profit: exhaust whichever side is cheap.
            if (S > 1.0) r.x_star = 2.0, r.y_star = 0.0;
            else if (S < 1.0) r.x_star = 0.0, r.y_star = 2.0;
            else r.x_star = r.y_star = 1.0;
            break;
        case rule_kind::constant_product:
            r.x_star = std::sqrt(S);
            r.y_star = 1.0 / r.x_star;
            break;
        case rule_kind::mixed:
            // The rule is symmetric in x <-> y, so S < 1 mirrors the problem at 1/S,
            // where the sqrt(S) start is close and Newton stays in the bracket.
            if (S < 1.0) {
                r = mixed_arbitrage(rule.alpha, 1.0 / S);
                std::swap(r.x_star, r.y_star);
            } else {
                r = mixed_arbitrage(rule.alpha, S);
            }
            break;
    }
    r.omega_star = S * (1.0 - r.y_star) - (r.x_star - 1.0);
    r.portfolio = r.x_star + S * r.y_star;
    return r;
}

loss impermanent_loss(const pool_rule& rule, double S) {
    auto r = optimal_arbitrage(rule, S);
    loss l;
    l.omega = (S + 1.0) - r.portfolio;
    l.lambda = l.omega / (S + 1.0);
    return l;
}

void heston_params::validate() const {
    require(epsilon > 0.0, "heston: epsilon must be positive");
    require(v0 >= 0.0 && chi >= 0.0, "heston: v0 and chi must be non-negative");
    require(rho >= -1.0 && rho <= 1.0, "heston: rho must lie in [-1, 1]");
}

power_value power_contract(const heston_params& m, double nu, double T, double S) {
    m.validate();
    require(T >= 0.0, "power_contract: maturity must be non-negative");
    require(S > 0.0, "power_contract: price must be positive");
    power_value p;
    if (nu == 0.0 || nu == 1.0 || T == 0.0) {
        p.value = std::pow(S, nu);
        return p;
    }
    require(nu > 0.0 && nu < 1.0, "power_contract: exponent must lie in [0, 1]");
    double e2 = m.epsilon * m.epsilon;
    auto sol = ode::riccati_closed_form(0.5 * e2, -(m.kappa - nu * m.rho * m.epsilon), 0.5 * nu * (nu - 1.0), 0.0, T);
    p.beta = sol.psi.real();
    p.alpha = m.chi * sol.integral.real();
    p.value = std::exp(p.alpha + p.beta * m.v0) * std::pow(S, nu);
    return p;
}

namespace {

// alpha + beta v for the linear-in-variance contracts at mean-reversion rate k:
// (1/2) (chi int_0^T B_k + v B_k(T)).
double linear_leg(double chi, double k, double v, double T) {
    double B = exp_B(k, T);
    double intB = std::abs(k * T) < 1e-6 ? T * T * (0.5 - k * T / 6.0) : (T - B) / k;
    return 0.5 * (chi * intB + v * B);
}

}  // namespace

double log_contract(const heston_params& m, double T, double S) {
    m.validate();
    require(S > 0.0 && T >= 0.0, "log_contract: bad inputs");
    return linear_leg(m.chi, m.kappa, m.v0, T) + (S - 1.0 - std::log(S));
}

double entropy_contract(const heston_params& m, double T, double S) {
    m.validate();
    require(S > 0.0 && T >= 0.0, "entropy_contract: bad inputs");
    double k1 = m.kappa - m.epsilon * m.rho;
    return linear_leg(m.chi, k1, m.v0, T) * S + (S * std::log(S) - (S - 1.0));
}

hedge_quote hedge_contracts(const heston_params& m, double T, double S) {
    hedge_quote h;
    h.u_lc = h.c_lc * log_contract(m, T, S);
    h.u_ec = h.c_ec * entropy_contract(m, T, S);
    h.u_ex = S + 1.0 - 2.0 * power_contract(m, 0.5, T, S).value;
    return h;
}

std::vector<hedge_gap_row> hedge_gap_report(const heston_params& m, std::span<const double> maturities) {
    m.validate();
    std::vector<hedge_gap_row> rows(maturities.size());
    parallel_for(maturities.size(), [&](std::size_t i) {
        auto h = hedge_contracts(m, maturities[i], 1.0);
        rows[i] = {maturities[i], h.u_ex, h.u_lc, h.u_ec, std::max(h.u_lc, h.u_ec) - h.u_ex};
    });
    return rows;
}

}  // namespace ak::amm
