#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gsl/gsl_sf_gamma.h>

#include "ak/core/errors.hpp"
#include "ak/nongaussian/anomalous.hpp"
#include "ak/nongaussian/aug_feller.hpp"
#include "ak/nongaussian/feller.hpp"
#include "ak/nongaussian/stein_density.hpp"
#include "ak/numerics/quadrature.hpp"

using ak::cplx;
using ak::domain_error;
using ak::invalid_argument;
namespace num = ak::num;
using namespace ak::ng;
constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

namespace {

const feller_params regular{0.1, 1.2, 0.2};   // vartheta = 4
const feller_params singular{0.1, 1.2, 0.6};  // vartheta = -4/9

double feller_mean(const feller_params& p, double T, double y) {
    double th = p.chi / p.kappa, e = std::exp(-p.kappa * T);
    return th + (y - th) * e;
}

double feller_variance(const feller_params& p, double T, double y) {
    double th = p.chi / p.kappa, e = std::exp(-p.kappa * T), s2 = p.epsilon * p.epsilon;
    return y * s2 / p.kappa * (e - e * e) + th * s2 / (2 * p.kappa) * (1 - e) * (1 - e);
}

// int_0^inf f(ybar) ybar^n dybar via ybar = u^2, which tames ybar^vartheta
// singularities at the origin.
template <class F>
double moment(F f, int n) {
    return num::integrate_to_infinity(
        [&](double u) {
            double yb = u * u;
            return 2 * u * std::pow(yb, n) * f(yb);
        },
        0.0, 1e-13, 1e-11);
}

// Simpson rule on [a, b] with an even number of panels.
double simpson(const std::vector<double>& v, double h) {
    double s = v.front() + v.back();
    for (std::size_t i = 1; i + 1 < v.size(); ++i) s += (i % 2 ? 4.0 : 2.0) * v[i];
    return s * h / 3.0;
}

// First zero of Omega'' = a1 Omega' - a2 a0 Omega, Omega(0) = 1,
// Omega'(0) = 0, i.e. the blow-up time of psi' = a2 psi^2 + a1 psi + a0
// from psi(0) = 0. RK4 with step h, linear interpolation at the crossing.
double numeric_blowup(double a2, double a1, double a0, double t_max, double h = 1e-4) {
    double w = 1.0, v = 0.0, t = 0.0;
    auto f = [&](double w_, double v_) { return std::pair{v_, a1 * v_ - a2 * a0 * w_}; };
    while (t < t_max) {
        auto [k1w, k1v] = f(w, v);
        auto [k2w, k2v] = f(w + 0.5 * h * k1w, v + 0.5 * h * k1v);
        auto [k3w, k3v] = f(w + 0.5 * h * k2w, v + 0.5 * h * k2v);
        auto [k4w, k4v] = f(w + h * k3w, v + h * k3v);
        double wn = w + h / 6 * (k1w + 2 * k2w + 2 * k3w + k4w);
        double vn = v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
        if (wn <= 0.0) return t + h * w / (w - wn);
        w = wn;
        v = vn;
        t += h;
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace

TEST_CASE("feller parameters and validation") {
    CHECK(regular.vartheta() == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(singular.vartheta() == doctest::Approx(-4.0 / 9.0).epsilon(1e-14));
    feller_params bad{0.01, 1.0, 1.0};  // vartheta = -0.98 is fine
    CHECK_NOTHROW(bad.validate());
    feller_params worse{0.0, 1.0, 1.0};  // vartheta = -1
    CHECK_THROWS_AS(feller_tpdf(worse, regularization::type_I_reflecting, 0, 0.1, 1, 0.1), domain_error);
    CHECK_THROWS_AS(feller_tpdf(regular, regularization::type_I_reflecting, 1, 0.1, 1, 0.1), invalid_argument);
    CHECK_THROWS_AS(feller_tpdf(regular, regularization::type_II_absorbing, 0, 0.1, 1, 0.1), invalid_argument);
}

TEST_CASE("feller density: mass and moments") {
    const double y = 0.05;
    for (double T : {0.3, 1.0, 3.0}) {
        auto w = [&](double yb) { return feller_tpdf(regular, regularization::type_I_reflecting, 0, y, T, yb); };
        CHECK(moment(w, 0) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(moment(w, 1) == doctest::Approx(feller_mean(regular, T, y)).epsilon(1e-6));
        double m2 = moment(w, 2), m1 = feller_mean(regular, T, y);
        CHECK(m2 - m1 * m1 == doctest::Approx(feller_variance(regular, T, y)).epsilon(1e-5));
        CHECK(feller_mass(regular, regularization::type_I_reflecting, 0, y, T) == 1.0);
    }
    SUBCASE("singular type I keeps its mass and moments") {
        for (double T : {0.5, 2.0}) {
            auto w = [&](double yb) { return feller_tpdf(singular, regularization::type_I_reflecting, 0, y, T, yb); };
            CHECK(moment(w, 0) == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(moment(w, 1) == doctest::Approx(feller_mean(singular, T, y)).epsilon(1e-6));
        }
    }
    SUBCASE("density against inversion of the characteristic function") {
        const double T = 1.0;
        auto res = num::invert_fourier_1d([&](double k) { return feller_cf(regular, T, y, -k); },
                                          std::vector<double>{0.02, 0.05, 0.08, 0.15},
                                          num::quadrature_spec{0.0, 8192, 1e-12});
        int i = 0;
        for (double yb : {0.02, 0.05, 0.08, 0.15}) {
            double w = feller_tpdf(regular, regularization::type_I_reflecting, 0, y, T, yb);
            CHECK(res.values[i++] == doctest::Approx(w).epsilon(1e-6));
        }
    }
}

TEST_CASE("feller type II leaks mass through the origin") {
    const double y = 0.05;
    double prev = 1.0;
    const double th = singular.vartheta();
    for (double T : {0.1, 0.3, 1.0, 3.0}) {
        auto w = [&](double yb) { return feller_tpdf(singular, regularization::type_II_absorbing, 0, y, T, yb); };
        double mass = moment(w, 0);
        double MY = singular.M(T) * singular.Y(T, y);
        CHECK(mass < 1.0);
        CHECK(mass < prev);
        CHECK(mass == doctest::Approx(gsl_sf_gamma_inc_P(-th, MY)).epsilon(1e-6));
        CHECK(feller_mass(singular, regularization::type_II_absorbing, 0, y, T) ==
              doctest::Approx(mass).epsilon(1e-6));
        prev = mass;
    }
    CHECK_THROWS_AS(feller_mass(regular, regularization::type_II_absorbing, 0, y, 1.0), invalid_argument);
}

TEST_CASE("feller flux") {
    const double y = 0.05, T = 0.7;
    auto check_flux = [&](const feller_params& p, regularization reg) {
        for (double yb : {0.01, 0.04, 0.1}) {
            double h = 1e-5;
            auto g = [&](double u) { return u * feller_tpdf(p, reg, 0, y, T, u); };
            double d = (g(yb + h) - g(yb - h)) / (2 * h);
            double expect =
                -0.5 * p.epsilon * p.epsilon * d + (p.chi - p.kappa * yb) * feller_tpdf(p, reg, 0, y, T, yb);
            CHECK(feller_flux(p, reg, 0, y, T, yb) == doctest::Approx(expect).epsilon(1e-6).scale(1.0));
        }
    };
    check_flux(regular, regularization::type_I_reflecting);
    check_flux(singular, regularization::type_I_reflecting);
    check_flux(singular, regularization::type_II_absorbing);

    CHECK(std::abs(feller_flux(regular, regularization::type_I_reflecting, 0, y, T, 1e-8)) < 1e-6);

    // Leading boundary term of the absorbing flux.
    const double th = singular.vartheta();
    const double M = singular.M(T), MY = M * singular.Y(T, y);
    double lead = singular.epsilon * singular.epsilon * th * M * std::exp(-MY) /
                  (2 * std::tgamma(1 - th) * std::pow(MY, th));
    CHECK(feller_flux(singular, regularization::type_II_absorbing, 0, y, T, 1e-6) ==
          doctest::Approx(lead).epsilon(1e-2));
    CHECK(feller_flux(singular, regularization::type_II_absorbing, 0, y, T, 0.0) ==
          doctest::Approx(lead).epsilon(1e-12));

    // d(mass)/dtbar equals the flux through the origin.
    double h = 1e-4;
    double dm = (feller_mass(singular, regularization::type_II_absorbing, 0, y, T + h) -
                 feller_mass(singular, regularization::type_II_absorbing, 0, y, T - h)) /
                (2 * h);
    CHECK(dm == doctest::Approx(lead).epsilon(1e-6));
}

TEST_CASE("time-dependent feller") {
    const double y = 0.05, T = 1.5;
    std::vector<double> ys{0.01, 0.04, 0.08, 0.12, 0.2};
    SUBCASE("constant parameters reproduce the closed form") {
        feller_timedep p{[](double) { return 0.1; }, [](double) { return 1.2; }, [](double) { return 0.2; }};
        auto w = feller_tpdf_timedep(p, 0.0, y, T, ys, num::quadrature_spec{0.0, 8192, 1e-12});
        for (std::size_t i = 0; i < ys.size(); ++i)
            CHECK(w[i] == doctest::Approx(feller_tpdf(regular, regularization::type_I_reflecting, 0, y, T, ys[i]))
                              .epsilon(1e-6)
                              .scale(1.0));
        feller_timedep_kernel k(p, 0.0, T);
        CHECK(k.A() == doctest::Approx(std::exp(-1.2 * T)).epsilon(1e-12));
    }
    SUBCASE("kernel reproduces the exponential-affine cf for varying kappa and eps") {
        // chi / eps^2 constant, so the history integral vanishes and the cf
        // depends on kappa and eps only through A and G.
        auto kap = [](double s) { return 1.0 + 0.5 * std::cos(s); };
        auto eps = [](double s) { return 0.2 + 0.05 * s; };
        feller_timedep p{[&](double s) { return 2.5 * eps(s) * eps(s); }, kap, eps};
        feller_timedep_kernel k(p, 0.0, T);
        double A = std::exp(-num::integrate(kap, 0.0, T));
        double G = 0.5 * num::integrate(
                             [&](double s) { return eps(s) * eps(s) * std::exp(-num::integrate(kap, s, T)); }, 0.0, T);
        CHECK(k.A() == doctest::Approx(A).epsilon(1e-9));
        CHECK(k.G() == doctest::Approx(G).epsilon(1e-9));
        for (double l : {0.3, 5.0, 40.0}) {
            cplx d = 1.0 - I * l * G;
            cplx expect = std::exp(-5.0 * std::log(d) + I * l * A * y / d);
            CHECK(std::abs(k.cf(y, l) - expect) < 1e-9);
        }
    }
    SUBCASE("oscillating chi keeps unit mass and the exact mean") {
        auto chi = [](double s) { return 0.1 + 0.05 * std::sin(s); };
        feller_timedep p{chi, [](double) { return 1.2; }, [](double) { return 0.2; }};
        const int n = 2000;
        const double top = 0.6, h = top / n;
        std::vector<double> grid(n + 1);
        for (int i = 0; i <= n; ++i) grid[i] = i * h;
        auto w = feller_tpdf_timedep(p, 0.0, y, T, grid, num::quadrature_spec{0.0, 8192, 1e-12});
        CHECK(simpson(w, h) == doctest::Approx(1.0).epsilon(1e-5));
        std::vector<double> yw(w.size());
        for (int i = 0; i <= n; ++i) yw[i] = grid[i] * w[i];
        // The first moment solves m' = chi(s) - kappa m exactly.
        double mean = y * std::exp(-1.2 * T) +
                      num::integrate([&](double s) { return chi(s) * std::exp(-1.2 * (T - s)); }, 0.0, T);
        CHECK(simpson(yw, h) == doctest::Approx(mean).epsilon(1e-5));
    }
}

TEST_CASE("feller with exponential jumps") {
    feller_jump_params p{regular, 0.8, 20.0};
    const double y = 0.05, T = 1.0;
    SUBCASE("cf against RK4 on the exponent system") {
        for (double l : {0.7, 6.0, -15.0}) {
            // psi' = eps^2/2 psi^2 - kappa psi, alpha' = chi psi + lambda (phi/(phi - psi) - 1)
            cplx psi = I * l, alpha = 0.0;
            const int n = 20000;
            const double h = T / n;
            auto f = [&](cplx ps) {
                return std::pair{0.5 * 0.04 * ps * ps - 1.2 * ps, 0.1 * ps + 0.8 * (20.0 / (20.0 - ps) - 1.0)};
            };
            for (int i = 0; i < n; ++i) {
                auto [a1, b1] = f(psi);
                auto [a2, b2] = f(psi + 0.5 * h * a1);
                auto [a3, b3] = f(psi + 0.5 * h * a2);
                auto [a4, b4] = f(psi + h * a3);
                psi += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
                alpha += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
            }
            CHECK(std::abs(feller_jump_cf(p, T, y, l) - std::exp(alpha + psi * y)) < 1e-10);
        }
    }
    SUBCASE("density mass and mean") {
        const int n = 4000;
        const double top = 1.0, h = top / n;
        std::vector<double> grid(n + 1);
        for (int i = 0; i <= n; ++i) grid[i] = i * h;
        auto w = feller_jump_tpdf(p, T, y, grid, num::quadrature_spec{0.0, 16384, 1e-12});
        CHECK(simpson(w, h) == doctest::Approx(1.0).epsilon(1e-5));
        std::vector<double> yw(w.size());
        for (int i = 0; i <= n; ++i) yw[i] = grid[i] * w[i];
        double th = (0.1 + 0.8 / 20.0) / 1.2;
        CHECK(simpson(yw, h) == doctest::Approx(th + (y - th) * std::exp(-1.2 * T)).epsilon(1e-5));
    }
    SUBCASE("no jumps reduces to the plain process") {
        feller_jump_params q{regular, 0.0, 20.0};
        for (double l : {0.5, 12.0}) CHECK(std::abs(feller_jump_cf(q, T, y, l) - feller_cf(regular, T, y, l)) < 1e-14);
    }
}

TEST_CASE("augmented feller characteristic function") {
    const double x = 0.3, y = 0.05, T = 1.3;
    auto s = aug_feller_cf(regular, std::nullopt, 0.0, x, y, T);
    CHECK(std::abs(s.cf(0.0) - 1.0) < 1e-15);
    // Mean of the running integral by a central difference in k.
    const double h = 1e-5;
    cplx d = (s.cf(h) - s.cf(-h)) / (2 * h);
    const double th = regular.chi / regular.kappa, B = (1 - std::exp(-regular.kappa * T)) / regular.kappa;
    CHECK((-I * d).real() == doctest::Approx(th * T - B * (th - y)).epsilon(1e-8));

    auto c = aug_feller_cf(regular, -0.5, 0.0, x, y, T);
    CHECK(std::abs(c.cf(0.0) - 1.0) < 1e-15);
    // Driftless log-price: E[xbar - x] = 0, E[(xbar - x)^2] = E int y.
    cplx d1 = (c.cf(h) - c.cf(-h)) / (2 * h);
    cplx d2 = (c.cf(1e-3) - 2.0 * c.cf(0.0) + c.cf(-1e-3)) / 1e-6;
    CHECK(std::abs(d1) < 1e-9);
    CHECK(-d2.real() == doctest::Approx(th * T - B * (th - y)).epsilon(1e-5));
}

TEST_CASE("augmented feller joint density") {
    const double x = 0.0, y = 0.05, T = 1.0;
    SUBCASE("ybar marginal is the feller density") {
        for (double yb : {0.04, 0.09}) {
            const int n = 600;
            const double lo = 0.0, hi = 0.3, h = (hi - lo) / n;
            std::vector<double> w(n + 1);
            for (int i = 0; i <= n; ++i) w[i] = aug_feller_tpdf(regular, std::nullopt, 0.0, x, y, T, lo + i * h, yb);
            CHECK(simpson(w, h) ==
                  doctest::Approx(feller_tpdf(regular, regularization::type_I_reflecting, 0, y, T, yb)).epsilon(1e-4));
        }
    }
    SUBCASE("correlated ybar marginal") {
        const double yb = 0.07;
        const int n = 800;
        const double lo = -1.2, hi = 1.2, h = (hi - lo) / n;
        std::vector<double> w(n + 1);
        for (int i = 0; i <= n; ++i) w[i] = aug_feller_tpdf(regular, -0.5, 0.0, x, y, T, lo + i * h, yb);
        CHECK(simpson(w, h) ==
              doctest::Approx(feller_tpdf(regular, regularization::type_I_reflecting, 0, y, T, yb)).epsilon(1e-4));
    }
    SUBCASE("x marginal integrates to one") {
        const int n = 1600;
        const double lo = -3.0, hi = 3.0, h = (hi - lo) / n;
        std::vector<double> g(n + 1);
        for (int i = 0; i <= n; ++i) g[i] = lo + i * h;
        auto w = aug_feller_marginal_x(regular, -0.5, 0.0, x, y, T, g);
        CHECK(simpson(w, h) == doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("moment explosion") {
    SUBCASE("integrated variance") {
        auto r = moment_explosion(regular, std::nullopt, 10.0);
        REQUIRE(r.p_hat);
        CHECK(*r.p_hat == doctest::Approx(18.0).epsilon(1e-14));
        CHECK_FALSE(r.t_star);
        double prev = std::numeric_limits<double>::infinity();
        for (double p : {20.0, 30.0, 60.0, 200.0}) {
            auto e = moment_explosion(regular, std::nullopt, p);
            REQUIRE(e.t_star);
            CHECK(*e.t_star == doctest::Approx(numeric_blowup(0.02, -1.2, p, 50.0)).epsilon(1e-4));
            CHECK(*e.t_star < prev);
            prev = *e.t_star;
        }
    }
    SUBCASE("heston log-price") {
        feller_params h{0.1, 2.0, 0.2};
        auto r = moment_explosion(h, -0.5, 0.5);
        REQUIRE(r.p_plus);
        REQUIRE(r.p_minus);
        CHECK(*r.p_plus == doctest::Approx(20.0).epsilon(1e-12));
        CHECK(*r.p_minus == doctest::Approx(-20.0 / 3.0).epsilon(1e-12));
        CHECK_FALSE(r.t_star);
        CHECK_FALSE(moment_explosion(h, -0.5, 19.9).t_star);
        CHECK_FALSE(moment_explosion(h, -0.5, -6.6).t_star);
        double prev = std::numeric_limits<double>::infinity();
        for (double p : {21.0, 25.0, 40.0, 100.0}) {
            auto e = moment_explosion(h, -0.5, p);
            REQUIRE(e.t_star);
            double oracle = numeric_blowup(0.02, -0.5 * 0.2 * p - 2.0, 0.5 * p * p, 100.0);
            CHECK(*e.t_star == doctest::Approx(oracle).epsilon(1e-4));
            CHECK(*e.t_star < prev);
            prev = *e.t_star;
        }
        for (double p : {-8.0, -20.0}) {
            auto e = moment_explosion(h, -0.5, p);
            REQUIRE(e.t_star);
            CHECK(*e.t_star == doctest::Approx(numeric_blowup(0.02, -0.1 * p - 2.0, 0.5 * p * p, 100.0)).epsilon(1e-4));
        }
    }
}

TEST_CASE("anomalous kolmogorov: nondimensional density") {
    using ak::ng::anomalous_kolmogorov_density_nondim;
    SUBCASE("unit mass over the plane") {
        // zeta = tan(u), eta = tan(v) maps the plane onto a square.
        double mass = num::integrate(
            [](double v) {
                double eta = std::tan(v), jv = 1.0 / (std::cos(v) * std::cos(v));
                return jv * num::integrate(
                                [&](double u) {
                                    double c = std::cos(u);
                                    return anomalous_kolmogorov_density_nondim(std::tan(u), eta) / (c * c);
                                },
                                -pi / 2, pi / 2, 1e-10, 1e-8);
            },
            -pi / 2, pi / 2, 1e-9, 1e-7);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
    }
    SUBCASE("marginals are cauchy") {
        // Fourier exponent int_0^1 |L - K chi| dchi: eta ~ Cauchy(1),
        // zeta ~ Cauchy(1/2).
        for (double eta : {0.0, 0.7, -2.5}) {
            double m = num::integrate(
                [&](double u) {
                    double c = std::cos(u);
                    return anomalous_kolmogorov_density_nondim(std::tan(u), eta) / (c * c);
                },
                -pi / 2, pi / 2, 1e-12, 1e-9);
            CHECK(m == doctest::Approx(1.0 / (pi * (1 + eta * eta))).epsilon(1e-6));
        }
        for (double zeta : {0.0, 0.4, -3.0}) {
            double m = num::integrate(
                [&](double v) {
                    double c = std::cos(v);
                    return anomalous_kolmogorov_density_nondim(zeta, std::tan(v)) / (c * c);
                },
                -pi / 2, pi / 2, 1e-12, 1e-9);
            CHECK(m == doctest::Approx(0.5 / (pi * (0.25 + zeta * zeta))).epsilon(1e-6));
        }
    }
    SUBCASE("point symmetry and positivity") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-6, 6);
        for (int i = 0; i < 200; ++i) {
            double z = u(rng), e = u(rng);
            double w = anomalous_kolmogorov_density_nondim(z, e);
            CHECK(w > 0.0);
            CHECK(w == doctest::Approx(anomalous_kolmogorov_density_nondim(-z, -e)).epsilon(1e-12));
        }
    }
    SUBCASE("polynomial tails") {
        // Doubling the distance scales the density by a fixed power.
        double r1 = std::log2(anomalous_kolmogorov_density_nondim(10, 0) / anomalous_kolmogorov_density_nondim(20, 0));
        double r2 = std::log2(anomalous_kolmogorov_density_nondim(20, 0) / anomalous_kolmogorov_density_nondim(40, 0));
        CHECK(r1 > 1.0);
        CHECK(r1 < 4.0);
        CHECK(r2 == doctest::Approx(r1).epsilon(0.05));
        // A unit-scale Gaussian would be e^{-50} down at distance 10.
        CHECK(anomalous_kolmogorov_density_nondim(10, 0) / anomalous_kolmogorov_density_nondim(0, 0) > 1e6 * std::exp(-50.0));
    }
}

TEST_CASE("anomalous kolmogorov: closed form against 2-d inversion") {
    const double a = 2.5, b = 1.5, T = 1.5;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uz(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        double xb = uz(rng) * a * T * T, yb = uz(rng) * a * T + b * T;
        double closed = anomalous_kolmogorov_tpdf(a, b, 0.0, 0.0, 0.0, T, xb, yb);
        double inv = anomalous_kolmogorov_tpdf_inversion(a, b, 0.0, 0.0, 0.0, T, xb, yb, 0.5);
        worst = std::max(worst, std::abs(closed - inv));
    }
    CHECK(worst < 1e-5);
    SUBCASE("generic index keeps unit mass in ybar direction") {
        // The ybar marginal at fixed xbar is not closed, but the l-only slice
        // of the inversion at nu != 1/2 must remain nonnegative and symmetric.
        for (double nu : {0.3, 0.75}) {
            double p1 = anomalous_kolmogorov_tpdf(1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.2, 0.3, nu);
            double p2 = anomalous_kolmogorov_tpdf(1.0, 0.0, 0.0, 0.0, 0.0, 1.0, -0.2, -0.3, nu);
            CHECK(p1 > 0.0);
            CHECK(p1 == doctest::Approx(p2).epsilon(1e-7));
        }
    }
    CHECK_THROWS_AS(anomalous_kolmogorov_tpdf(0.0, b, 0, 0, 0, T, 0, 0), invalid_argument);
    CHECK_THROWS_AS(anomalous_kolmogorov_tpdf(a, b, 0, 0, 0, T, 0, 0, 1.0), invalid_argument);
}

TEST_CASE("anomalous ou is cauchy") {
    const double chi = 0.3, kappa = 0.8, a = 0.4;
    SUBCASE("fixed point centre") {
        for (double T : {0.1, 1.0, 5.0}) {
            double c = anomalous_ou_tpdf(chi, kappa, a, 0, chi / kappa, T, chi / kappa);
            double w = a * (1 - std::exp(-kappa * T)) / kappa;
            CHECK(c == doctest::Approx(1.0 / (pi * w)).epsilon(1e-13));
        }
    }
    SUBCASE("half-width saturates at a / kappa") {
        double w = a / kappa;
        CHECK(anomalous_ou_tpdf(chi, kappa, a, 0, 2.0, 60.0, chi / kappa) == doctest::Approx(1.0 / (pi * w)).epsilon(1e-12));
    }
    SUBCASE("mass with analytic tails") {
        const double y = 1.0, T = 0.7, R = 1e4;
        const double w = a * (1 - std::exp(-kappa * T)) / kappa;
        const double c = std::exp(-kappa * T) * y + chi * (1 - std::exp(-kappa * T)) / kappa;
        double body = num::integrate_with_breaks(
            [&](double u) { return anomalous_ou_tpdf(chi, kappa, a, 0, y, T, u); }, {-R, c - 1, c, c + 1, R}, 1e-13,
            1e-12);
        double tails = 1.0 - (std::atan((R - c) / w) + std::atan((R + c) / w)) / pi;
        CHECK(body + tails == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("stein density characteristic function") {
    ak::gauss::ou_params p{0.3, 1.5, 0.4};
    const double x = 0.2, y = 0.35, T = 1.1;
    SUBCASE("zero exponents") {
        auto s = stein_density_cf(p, -0.4, 0.0, 0.0, x, y, T);
        CHECK(std::abs(s.at(0.0, 0.0).value - 1.0) < 1e-14);
    }
    SUBCASE("m1 = 0 is the gaussian quadratic form") {
        auto s = stein_density_cf(p, -0.4, 0.0, 0.0, x, y, T);
        double e = std::exp(-p.kappa * T);
        double mu = e * y + p.chi / p.kappa * (1 - e);
        double v = p.epsilon * p.epsilon * (1 - e * e) / (2 * p.kappa);
        for (auto [m2, m3] : {std::pair{0.3, -0.7}, std::pair{-1.2, 2.0}, std::pair{0.0, 1.5}}) {
            cplx A = I * m2, B = I * m3;
            cplx d = 1.0 - 2.0 * A * v;
            cplx expect = std::exp((B * B * v / 2.0 + B * mu + A * mu * mu) / d) / std::sqrt(d);
            CHECK(std::abs(s.at(m2, m3).value - expect) < 1e-12);
        }
    }
    SUBCASE("backward equation residual") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const double rho = -0.4, hy = 1e-4, ht = 1e-4;
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            double m1 = 1.5 * u(rng), m2 = 0.5 * u(rng), m3 = u(rng), yy = 0.5 * u(rng), tt = 0.3 + 0.2 * u(rng);
            auto U = [&](double t, double yv) { return stein_density_cf(p, rho, m1, t, x, yv, T).at(m2, m3).value; };
            cplx u0 = U(tt, yy);
            cplx ut = (U(tt + ht, yy) - U(tt - ht, yy)) / (2 * ht);
            cplx uy = (U(tt, yy + hy) - U(tt, yy - hy)) / (2 * hy);
            cplx uyy = (U(tt, yy + hy) - 2.0 * u0 + U(tt, yy - hy)) / (hy * hy);
            cplx uxx = -m1 * m1 * u0, uxy = I * m1 * uy;
            cplx terms[] = {ut, 0.5 * yy * yy * uxx, rho * p.epsilon * yy * uxy, 0.5 * p.epsilon * p.epsilon * uyy,
                            (p.chi - p.kappa * yy) * uy};
            cplx sum = 0.0;
            double scale = 0.0;
            for (auto t : terms) {
                sum += t;
                scale += std::abs(t);
            }
            worst = std::max(worst, std::abs(sum) / scale);
        }
        CHECK(worst < 1e-7);
    }
    CHECK_THROWS_AS(stein_density_cf(p, 1.5, 0.0, 0.0, x, y, T), invalid_argument);
}
