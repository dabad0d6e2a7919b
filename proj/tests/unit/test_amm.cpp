#include <doctest.h>

#include <cmath>
#include <vector>

#include "ak/amm/amm.hpp"
#include "ak/core/errors.hpp"
#include "ak/pricing/exotics.hpp"

using namespace ak::amm;

namespace {

const pool_rule sum_rule{rule_kind::constant_sum};
const pool_rule product_rule{rule_kind::constant_product};
pool_rule mixed(double a) { return {rule_kind::mixed, a}; }

double invariant(double a, double x, double y) { return x * y * (1.0 + a * (0.5 * (x + y) - 1.0)); }

// Golden-section maximum of the arbitrage profit S (1 - y(x)) - (x - 1).
double brute_force_x(const pool_rule& r, double S) {
    auto profit = [&](double x) { return S * (1.0 - pool_curve(r, x).y) - (x - 1.0); };
    double a = 1e-6, b = 50.0, g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    for (int i = 0; i < 200; ++i) {
        if (profit(c) > profit(d)) b = d;
        else a = c;
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("pool curves") {
    auto p = pool_curve(product_rule, 1.0);
    CHECK(p.y == 1.0);
    CHECK(p.dy == -1.0);
    CHECK(pool_curve(sum_rule, 0.5).y == 1.5);
    CHECK_THROWS_AS(pool_curve(sum_rule, 2.5), ak::domain_error);
    CHECK_THROWS_AS(pool_curve(product_rule, -1.0), ak::domain_error);
    CHECK_THROWS_AS(pool_curve(mixed(0.0), 1.0), ak::invalid_argument);

    CHECK(pool_curve(mixed(10.0), 1.0).y == doctest::Approx(1.0).epsilon(1e-15));
    for (double x : {0.5, 1.0, 2.0}) {
        auto m = pool_curve(mixed(1e-9), x);
        CHECK(m.y == doctest::Approx(1.0 / x).epsilon(1e-8));
        CHECK(m.dy == doctest::Approx(-1.0 / (x * x)).epsilon(1e-8));
    }

    // Invariant and derivatives by central differences.
    for (double a : {0.1, 1.0, 10.0, 80.0}) {
        for (double x : {0.05, 0.4, 1.0, 1.7, 6.0}) {
            auto c = pool_curve(mixed(a), x);
            CHECK(invariant(a, x, c.y) == doctest::Approx(1.0).epsilon(1e-13));
            double h = 1e-4 * x;
            double yp = pool_curve(mixed(a), x + h).y, ym = pool_curve(mixed(a), x - h).y;
            CHECK(c.dy == doctest::Approx((yp - ym) / (2.0 * h)).epsilon(1e-7));
            double H = 1e-3 * x;
            double Yp = pool_curve(mixed(a), x + H).y, Ym = pool_curve(mixed(a), x - H).y;
            CHECK(c.d2y == doctest::Approx((Yp - 2.0 * c.y + Ym) / (H * H)).epsilon(1e-5));
        }
    }
}

TEST_CASE("mixed rule has a unique positive holding for every x") {
    // Count sign changes of the invariant residual along a log grid in y.
    for (double a : {0.01, 0.5, 3.0, 30.0, 100.0}) {
        for (double x : {0.01, 0.3, 1.0, 4.0, 25.0, 99.0}) {
            int changes = 0;
            double prev = invariant(a, x, 1e-8) - 1.0;
            for (int i = 1; i <= 4000; ++i) {
                double y = 1e-8 * std::pow(1e12, i / 4000.0);
                double cur = invariant(a, x, y) - 1.0;
                if ((cur > 0) != (prev > 0)) ++changes;
                prev = cur;
            }
            CHECK(changes == 1);
        }
    }
}

TEST_CASE("optimal arbitrage") {
    auto p = optimal_arbitrage(product_rule, 4.0);
    CHECK(p.x_star == doctest::Approx(2.0));
    CHECK(p.y_star == doctest::Approx(0.5));
    CHECK(p.omega_star == doctest::Approx(1.0));
    CHECK(p.x_star / p.y_star == doctest::Approx(4.0));

    auto s = optimal_arbitrage(sum_rule, 3.0);
    CHECK(s.x_star == 2.0);
    CHECK(s.y_star == 0.0);
    CHECK(s.omega_star == doctest::Approx(2.0));
    auto s2 = optimal_arbitrage(sum_rule, 0.25);
    CHECK(s2.x_star == 0.0);
    CHECK(s2.y_star == 2.0);
    CHECK(s2.omega_star == doctest::Approx(0.75));

    auto m = optimal_arbitrage(mixed(10.0), 2.0);
    CHECK(std::abs(pool_curve(mixed(10.0), m.x_star).dy + 0.5) < 1e-12);
    CHECK(m.iterations <= 10);
    for (double a : {0.2, 10.0}) {
        for (double S : {0.2, 0.7, 2.0, 5.0}) {
            auto r = optimal_arbitrage(mixed(a), S);
            CHECK(r.x_star == doctest::Approx(brute_force_x(mixed(a), S)).epsilon(1e-6));
            CHECK(r.iterations <= 10);
        }
    }
    CHECK_THROWS_AS(optimal_arbitrage(product_rule, 0.0), ak::invalid_argument);
}

TEST_CASE("impermanent loss") {
    for (const auto& r : {sum_rule, product_rule, mixed(10.0)}) {
        CHECK(std::abs(impermanent_loss(r, 1.0).omega) < 1e-14);
        for (double S : {0.1, 0.5, 2.0, 7.0}) {
            auto a = optimal_arbitrage(r, S);
            CHECK(a.portfolio < S + 1.0);
            CHECK(impermanent_loss(r, S).omega > 0.0);
        }
    }
    auto l = impermanent_loss(product_rule, 4.0);
    CHECK(l.omega == doctest::Approx(1.0));
    CHECK(l.lambda == doctest::Approx(0.2));
    CHECK(impermanent_loss(sum_rule, 3.0).omega == doctest::Approx(2.0));
    double ws = impermanent_loss(sum_rule, 5.0).omega, wm = impermanent_loss(mixed(10.0), 5.0).omega,
           wp = impermanent_loss(product_rule, 5.0).omega;
    CHECK(ws > wm);
    CHECK(wm > wp);
}

TEST_CASE("hedge payoffs touch the loss to second order") {
    // Payoff derivatives at S = 1 by finite differences.
    auto omega = [](double S) { return S + 1.0 - 2.0 * std::sqrt(S); };
    auto lc = [](double S) { return 0.5 * (S - 1.0 - std::log(S)); };
    auto ec = [](double S) { return 0.5 * (S * std::log(S) - (S - 1.0)); };
    auto d = [](auto f, int order) {
        double h = 1e-3;
        switch (order) {
            case 1: return (f(1 + h) - f(1 - h)) / (2 * h);
            case 2: return (f(1 + h) - 2 * f(1.0) + f(1 - h)) / (h * h);
            default: return (f(1 + 2 * h) - 2 * f(1 + h) + 2 * f(1 - h) - f(1 - 2 * h)) / (2 * h * h * h);
        }
    };
    hedge_quote q;
    CHECK(q.c_lc == 0.5);
    CHECK(q.c_ec == 0.5);
    CHECK(omega(1.0) == 0.0);
    for (int k = 1; k <= 2; ++k) {
        CHECK(std::abs(d(lc, k) - d(omega, k)) < 1e-6);
        CHECK(std::abs(d(ec, k) - d(omega, k)) < 1e-6);
    }
    // Third derivatives: -1 and -1/2 around the loss's -3/4.
    CHECK(d(lc, 3) == doctest::Approx(-1.0).epsilon(1e-5));
    CHECK(d(ec, 3) == doctest::Approx(-0.5).epsilon(1e-5));
    CHECK(d(omega, 3) == doctest::Approx(-0.75).epsilon(1e-5));
    CHECK(std::abs(0.5 * (d(lc, 3) + d(ec, 3)) - d(omega, 3)) < 1e-5);
    // Pointwise the larger hedge payoff dominates.
    for (double S : {0.05, 0.3, 0.9, 1.1, 3.0, 20.0}) CHECK(std::max(lc(S), ec(S)) >= omega(S));
    // The exact loss is a combination of power payoffs.
    for (double S : {0.2, 1.0, 4.0}) CHECK(omega(S) == doctest::Approx(S + 1.0 - 2.0 * std::pow(S, 0.5)).epsilon(1e-15));
}

TEST_CASE("power, log and entropy contracts under heston") {
    heston_params m{0.2, 2.0, 0.2, -0.5, 0.15};
    CHECK(power_contract(m, 1.0, 1.0, 1.3).value == doctest::Approx(1.3));
    CHECK(power_contract(m, 0.0, 1.0, 1.3).value == doctest::Approx(1.0));

    // Hyperbolic closed form of the nu-exponents.
    for (double nu : {0.25, 0.5, 0.8}) {
        for (double T : {0.3, 1.0, 4.0}) {
            double kn = m.kappa - nu * m.rho * m.epsilon, e2 = m.epsilon * m.epsilon;
            double mu = -kn / 2.0, zeta = std::sqrt(kn * kn - e2 * nu * (nu - 1.0)) / 2.0;
            double den = zeta * std::cosh(zeta * T) - mu * std::sinh(zeta * T);
            double beta = nu * (nu - 1.0) * std::sinh(zeta * T) / (2.0 * den);
            double alpha = -(2.0 * m.chi / e2) * (-kn * T / 2.0 + std::log(den / zeta));
            auto p = power_contract(m, nu, T, 1.0);
            CHECK(p.beta == doctest::Approx(beta).epsilon(1e-12));
            CHECK(p.alpha == doctest::Approx(alpha).epsilon(1e-10));
        }
    }
    // beta <= 0 on a grid.
    for (double nu = 0.05; nu < 1.0; nu += 0.1)
        for (double rho : {-0.9, 0.0, 0.9})
            for (double T : {0.1, 1.0, 10.0}) CHECK(power_contract({0.3, 1.5, 0.8, rho, 0.2}, nu, T, 1.0).beta <= 0.0);

    // Log contract at S = 1 is half the expected integrated variance (variance-swap strike times T).
    double T = 1.5;
    ak::pricing::swap_params sp{m.chi, m.kappa, m.epsilon, 0.0, 1.0};
    double swap = ak::pricing::vol_var_swap(ak::pricing::swap_kind::var_swap_feller, sp, m.v0, T).value;
    CHECK(log_contract(m, T, 1.0) == doctest::Approx(0.5 * swap * T).epsilon(1e-13));

    // Log and entropy contracts as nu-derivatives of the power contract:
    // E ln S = d/dnu E S^nu at 0, E S ln S = d/dnu at 1 (Richardson on one-sided differences).
    auto slope = [&](double base, double sgn, double h) {
        return (power_contract(m, base + sgn * h, T, 1.0).value - std::pow(1.0, base)) / (sgn * h);
    };
    double h = 1e-3;
    double e_ln = 2.0 * slope(0.0, 1.0, h / 2) - slope(0.0, 1.0, h);
    double e_sln = 2.0 * slope(1.0, -1.0, h / 2) - slope(1.0, -1.0, h);
    CHECK(log_contract(m, T, 1.0) == doctest::Approx(-e_ln).epsilon(1e-5));
    CHECK(entropy_contract(m, T, 1.0) == doctest::Approx(e_sln).epsilon(1e-5));
}

TEST_CASE("hedge gap report") {
    for (const heston_params& m : {heston_params{0.2, 2.0, 0.2, -0.5, 0.15}, heston_params{0.8, 2.0, 0.9, -0.3, 0.6},
                                   heston_params{0.5, 1.0, 0.7, 0.4, 0.3}}) {
        std::vector<double> Ts = {0.25, 0.5, 1.0, 2.0};
        auto rows = hedge_gap_report(m, Ts);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(rows[i].gap >= 0.0);
            CHECK(rows[i].u_ex > 0.0);
            if (i > 0) CHECK(rows[i].gap > rows[i - 1].gap);
        }
        auto h = hedge_contracts(m, 1e-10, 1.0);
        CHECK(std::abs(h.u_ex) < 1e-9);
        CHECK(std::abs(h.u_lc) < 1e-9);
        CHECK(std::abs(h.u_ec) < 1e-9);
    }
}
