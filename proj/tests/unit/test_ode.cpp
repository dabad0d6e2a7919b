#include <doctest.h>

#include <cmath>
#include <random>

#include "ak/core/errors.hpp"
#include "ak/ode/characteristics.hpp"
#include "ak/ode/exp_helpers.hpp"
#include "ak/ode/fundamental.hpp"
#include "ak/ode/path_dependent.hpp"
#include "ak/ode/riccati.hpp"
#include "ak/ode/stein.hpp"

using namespace ak;
using namespace ak::ode;
using Eigen::Matrix2d;

namespace {

affine_generator feller_generator(double chi, double kappa, double eps) {
    constant_coefficients cc;
    cc.b = VectorXd::Constant(1, chi);
    cc.B = MatrixXd::Constant(1, 1, -kappa);
    cc.A0 = MatrixXd::Zero(1, 1);
    cc.A_linear = {MatrixXd::Constant(1, 1, 0.5 * eps * eps)};
    return make_constant_generator(cc);
}

MatrixXd random_matrix(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = u(rng);
    return m;
}

}  // namespace

TEST_CASE("exp helpers") {
    CHECK(exp_B(0.0, 2.0) == 2.0);
    CHECK(std::abs(exp_B(1e-12, 3.0) - 3.0) < 1e-11);
    CHECK(std::abs(exp_B(1.3, 0.7) - (1 - std::exp(-0.91)) / 1.3) < 1e-15);
    auto h = make_exp_helpers([](double) { return 0.8; }, 0.5, 2.0);
    CHECK(std::abs(h.A - exp_A(0.8, 1.5)) < 1e-14);
    CHECK(std::abs(h.B - exp_B(0.8, 1.5)) < 1e-14);
    CHECK(std::abs(h.Bbar - exp_B(0.8, 1.5)) < 1e-14);
}

TEST_CASE("fundamental matrix closed forms") {
    CHECK(fundamental_matrix(MatrixXd::Zero(3, 3), 2.0).isApprox(MatrixXd::Identity(3, 3)));
    Matrix2d kol;
    kol << 0, 1, 0, 0;
    Matrix2d expect;
    expect << 1, 0, -2.5, 1;
    CHECK((fundamental_matrix(kol, 2.5) - expect).norm() < 1e-14);
    double kappa = 0.9, T = 1.7;
    Matrix2d ou;
    ou << 0, 1, 0, -kappa;
    Matrix2d ou_expect;
    ou_expect << 1, 0, -exp_B(-kappa, T), exp_A(-kappa, T);
    CHECK((fundamental_matrix(ou, T) - ou_expect).norm() < 1e-12);
}

TEST_CASE("liouville and semigroup identities") {
    std::mt19937_64 rng(7);
    for (int n : {2, 3}) {
        for (int trial = 0; trial < 5; ++trial) {
            MatrixXd B0 = random_matrix(rng, n), B1 = random_matrix(rng, n);
            MatrixXd L = fundamental_matrix(B0, 1.3);
            CHECK(std::abs(L.determinant() - std::exp(-B0.trace() * 1.3)) < 1e-10);
            matrix_fn Bt = [&](double s) { return (B0 + std::sin(s) * B1).eval(); };
            double t = 0.2, s = 0.9, tb = 1.6;
            MatrixXd Lt = fundamental_matrix(Bt, t, tb, 4000);
            double int_tr = B0.trace() * (tb - t) + B1.trace() * (std::cos(t) - std::cos(tb));
            CHECK(std::abs(Lt.determinant() - std::exp(-int_tr)) < 1e-10);
            MatrixXd composed = fundamental_matrix(Bt, s, tb, 4000) * fundamental_matrix(Bt, t, s, 4000);
            CHECK((composed - Lt).norm() < 1e-10);
            // Constant B: closed form agrees with RK4 and satisfies the semigroup law.
            matrix_fn Bc = [&](double) { return B0; };
            CHECK((fundamental_matrix(Bc, t, tb, 2000) - fundamental_matrix(B0, tb - t)).norm() < 1e-10);
            CHECK((fundamental_matrix(B0, 0.4) * fundamental_matrix(B0, 0.3) - fundamental_matrix(B0, 0.7)).norm() <
                  1e-12);
        }
    }
}

TEST_CASE("gaussian assembly for the kolmogorov pair") {
    double sigma = 0.8, b = 0.2, T = 5.0;
    constant_coefficients cc;
    cc.b = Eigen::Vector2d(0.0, b);
    cc.B = (Matrix2d() << 0, 1, 0, 0).finished();
    cc.A0 = (Matrix2d() << 0, 0, 0, 0.5 * sigma * sigma).finished();
    auto fs = assemble_gaussian_solution(make_constant_generator(cc), 0.0, T, 200);
    double s2 = sigma * sigma;
    Matrix2d expect;
    expect << s2 * T * T * T / 3, -s2 * T * T / 2, -s2 * T * T / 2, s2 * T;
    CHECK((fs.Cinv - expect).norm() < 1e-10 * expect.norm());
    CHECK(std::abs(fs.Cinv.inverse().determinant() - 12.0 / (s2 * s2 * T * T * T * T)) < 1e-12);
    CHECK(fs.e.norm() == 0.0);
    CHECK(fs.varsigma1 == 0.0);
    // d = int L^T b ds = (-b T^2/2, b T)
    CHECK(std::abs(fs.d(0) + b * T * T / 2) < 1e-10);
    CHECK(std::abs(fs.d(1) - b * T) < 1e-10);
}

TEST_CASE("killed gaussian matches the augmented integral oracle") {
    // OU with kill rate c + c1 y against the joint law of (y, int y).
    double chi = 0.05, kappa = 0.7, eps = 0.3, c = 0.01, c1 = 1.2, T = 1.4, y0 = 0.04;
    constant_coefficients k;
    k.b = VectorXd::Constant(1, chi);
    k.B = MatrixXd::Constant(1, 1, -kappa);
    k.A0 = MatrixXd::Constant(1, 1, 0.5 * eps * eps);
    k.c = c;
    k.c_linear = VectorXd::Constant(1, c1);
    auto fs = assemble_gaussian_solution(make_constant_generator(k), 0.0, T, 800);

    constant_coefficients a;  // state (y, I)
    a.b = Eigen::Vector2d(chi, 0.0);
    a.B = (Matrix2d() << -kappa, 0, 1, 0).finished();
    a.A0 = (Matrix2d() << 0.5 * eps * eps, 0, 0, 0).finished();
    auto ga = assemble_gaussian_solution(make_constant_generator(a), 0.0, T, 800);
    MatrixXd Lt_inv = ga.L.transpose().inverse();
    VectorXd mean = Lt_inv * (ga.d + Eigen::Vector2d(y0, 0.0));
    MatrixXd H = Lt_inv * ga.Cinv * ga.L.inverse();
    // E[exp(-c T - c1 I) ; y in dy]: tilt the joint Gaussian by -c1 along I.
    double mass = -c * T - c1 * mean(1) + 0.5 * c1 * c1 * H(1, 1);
    double tilted_mean = mean(0) - c1 * H(0, 1);

    MatrixXd Lkt_inv = fs.L.transpose().inverse();
    MatrixXd Hk = Lkt_inv * fs.Cinv * fs.L.inverse();
    VectorXd q = Lkt_inv * (fs.d + VectorXd::Constant(1, y0));
    VectorXd r = q - Hk * (fs.L * fs.e);
    double logR = -fs.e.dot(fs.d + VectorXd::Constant(1, y0)) + 0.5 * fs.e.dot(fs.Cinv * fs.e) - fs.varsigma1;
    CHECK(std::abs(Hk(0, 0) - H(0, 0)) < 1e-12);
    CHECK(std::abs(r(0) - tilted_mean) < 1e-12);
    CHECK(std::abs(logR - mass) < 1e-12);
}

TEST_CASE("riccati closed form: trivial and feller cases") {
    auto z = riccati_closed_form(0.02, -1.2, 0.0, 0.0, 3.0);
    CHECK(std::abs(z.psi) == 0.0);
    CHECK(std::abs(z.log_omega) == 0.0);
    double kappa = 1.2, eps = 0.2, T = 3.0;
    for (double l : {-7.0, -0.3, 0.5, 4.0, 40.0}) {
        cplx il = I * l;
        auto r = riccati_closed_form(0.5 * eps * eps, -kappa, 0.0, il, T);
        cplx expect = il * exp_A(kappa, T) / (1.0 - 0.5 * eps * eps * exp_B(kappa, T) * il);
        CHECK(std::abs(r.psi - expect) < 1e-14);
        // int psi = -(2/eps^2) ln(1 - eps^2 B il / 2)
        cplx int_expect = -(2.0 / (eps * eps)) * std::log(1.0 - 0.5 * eps * eps * exp_B(kappa, T) * il);
        CHECK(std::abs(r.integral - int_expect) < 1e-12);
        auto num = integrate_characteristics(feller_generator(0.1, kappa, eps), Eigen::VectorXd::Constant(1, l).eval(), 0.0, T, 512);
        CHECK(std::abs(num.psi(0) - r.psi) < 1e-8);
        CHECK(std::abs(num.alpha - 0.1 * r.integral) < 1e-8);
        CHECK(std::abs(r.roots.omega_plus + r.roots.omega_minus - 1.0) < 1e-14);
    }
}

TEST_CASE("riccati closed form solves its ODE for complex coefficients") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        cplx a2(0.5 * std::abs(u(rng)) + 0.01, 0.1 * u(rng)), a1(u(rng) - 1.0, u(rng)), a0(u(rng), u(rng)),
            p0(0.2 * u(rng), u(rng));
        double tau = 0.3 + 1.5 * std::abs(u(rng)), h = 1e-5;
        auto mid = riccati_closed_form(a2, a1, a0, p0, tau);
        auto up = riccati_closed_form(a2, a1, a0, p0, tau + h);
        auto dn = riccati_closed_form(a2, a1, a0, p0, tau - h);
        cplx dpsi = (up.psi - dn.psi) / (2 * h);
        cplx f = a2 * mid.psi * mid.psi + a1 * mid.psi + a0;
        CHECK(std::abs(dpsi - f) < 1e-8 * (1.0 + std::abs(f)));
        cplx dint = (up.integral - dn.integral) / (2 * h);
        CHECK(std::abs(dint - mid.psi) < 1e-8 * (1.0 + std::abs(mid.psi)));
    }
}

TEST_CASE("riccati closed form: linear, double root and tiny quadratic term") {
    auto lin = riccati_closed_form(0.0, -0.5, 0.3, cplx(0.1, 0.2), 2.0);
    cplx e = std::exp(-1.0);
    CHECK(std::abs(lin.psi - (cplx(0.1, 0.2) * e + 0.3 * (1.0 - e) / 0.5)) < 1e-14);
    auto grow = riccati_closed_form(0.0, 0.5, 0.3, 0.1, 2.0);
    CHECK(std::abs(grow.psi - (0.1 * std::exp(1.0) + 0.3 * (std::exp(1.0) - 1.0) / 0.5)) < 1e-13);
    // psi' = psi^2 - 2 psi + 1 has the double root psi = 1: psi = 1 - 1/(tau + 1/(1 - psi0)).
    auto dbl = riccati_closed_form(1.0, -2.0, 1.0, 0.5, 1.0);
    CHECK(std::abs(dbl.psi - (1.0 - 1.0 / (1.0 + 2.0))) < 1e-12);
    // a2 -> 0 limit agrees with the linear solution to first order.
    cplx a1(-0.8, 0.3), a0(-0.2, 0.1), p0(0.0, 0.0);
    auto tiny = riccati_closed_form(5e-13, a1, a0, p0, 5.0);
    auto flat = riccati_closed_form(0.0, a1, a0, p0, 5.0);
    CHECK(std::abs(tiny.integral - flat.integral) < 1e-10);
}

TEST_CASE("riccati blow-up: closed form versus numeric integration") {
    double eps = 0.6, kappa = 1.0, p = 2.0;  // 2 eps^2 p > kappa^2
    double s = std::sqrt(2 * eps * eps * p - kappa * kappa);
    double tstar = 2.0 * (pi - std::atan(s / kappa)) / s;
    auto closed = riccati_blowup_time(0.5 * eps * eps, -kappa, p, 0.0);
    REQUIRE(closed.has_value());
    CHECK(std::abs(*closed - tstar) < 1e-12);
    CHECK_THROWS_AS(riccati_closed_form(0.5 * eps * eps, -kappa, p, 0.0, tstar + 0.1), numerical_error);
    constant_coefficients cc;  // integrated variance (x, y): psi_x = p fixed, psi_y Riccati
    cc.b = Eigen::Vector2d(0.0, 0.04);
    cc.B = (Matrix2d() << 0, 1, 0, -kappa).finished();
    cc.A0 = Matrix2d::Zero();
    cc.A_linear = {Matrix2d::Zero(), (Matrix2d() << 0, 0, 0, 0.5 * eps * eps).finished()};
    auto num = integrate_exponents(make_constant_generator(cc), Eigen::Vector2cd(p, 0.0), 0.0, tstar + 1.0, 256);
    CHECK(num.exploded);
    CHECK(std::abs(num.explosion_time - tstar) < 1e-4);
    CHECK(!riccati_blowup_time(0.5 * eps * eps, -kappa, 0.1, 0.0).has_value());
}

TEST_CASE("integrate_characteristics: fourier degeneration, jumps and order") {
    constant_coefficients cc;
    cc.b = Eigen::Vector2d(0.3, -0.1);
    cc.B = Matrix2d::Zero();
    cc.A0 = (Matrix2d() << 0.2, 0.05, 0.05, 0.1).finished();
    cc.c = 0.02;
    auto g = make_constant_generator(cc);
    Eigen::Vector2d m(0.7, -1.1);
    auto kc = integrate_characteristics(g, VectorXd(m), 0.0, 2.0, 64);
    cplx im0 = I * m(0), im1 = I * m(1);
    cplx sym = 0.3 * im0 - 0.1 * im1 + 0.2 * im0 * im0 + 0.1 * im0 * im1 + 0.1 * im1 * im1 - 0.02;
    CHECK(std::abs(kc.alpha - 2.0 * sym) < 1e-13);
    CHECK((kc.delta() - m.cast<cplx>()).norm() < 1e-14);

    double chi = 0.1, kappa = 1.2, eps = 0.2, lambda = 0.7, phi = 3.0, T = 3.0, l = 1.3;
    auto jg = feller_generator(chi, kappa, eps);
    jg.jumps.push_back(exponential_jump(1, 0, lambda, phi));
    auto jk = integrate_characteristics(jg, Eigen::VectorXd::Constant(1, l).eval(), 0.0, T, 1024);
    cplx il = I * l;
    double A = exp_A(kappa, T), B = exp_B(kappa, T);
    cplx alpha1 = std::log((phi - (phi * eps * eps / 2 * B + A) * il) / (phi - il)) / (kappa - phi * eps * eps / 2);
    auto base = riccati_closed_form(0.5 * eps * eps, -kappa, 0.0, il, T);
    CHECK(std::abs(jk.alpha - (chi * base.integral + lambda * alpha1)) < 1e-9);

    // Fourth-order convergence in the step.
    auto ref = riccati_closed_form(0.5 * eps * eps, -kappa, 0.0, I * 30.0, T);
    auto fg = feller_generator(chi, kappa, eps);
    double e1 = std::abs(integrate_characteristics(fg, Eigen::VectorXd::Constant(1, 30.0).eval(), 0.0, T, 64).psi(0) - ref.psi);
    double e2 = std::abs(integrate_characteristics(fg, Eigen::VectorXd::Constant(1, 30.0).eval(), 0.0, T, 128).psi(0) - ref.psi);
    CHECK(e1 / e2 >= 12.0);
}

TEST_CASE("stein riccati closed form against numeric characteristics") {
    double chi = 0.08, kappa = 1.5, eps = 0.35, rho = -0.4, T = 1.2;
    CHECK(std::abs(stein_matrix_riccati(chi, kappa, eps, rho, 0, 0, 0, T).alpha) < 1e-15);
    // Augmented state (x, y^2, y): affine with state-linear diffusion.
    constant_coefficients cc;
    cc.b = Eigen::Vector3d(0.0, eps * eps, chi);
    cc.B = (Eigen::Matrix3d() << 0, 0, 0, 0, -2 * kappa, 2 * chi, 0, 0, -kappa).finished();
    cc.A0 = (Eigen::Matrix3d() << 0, 0, 0, 0, 0, 0, 0, 0, 0.5 * eps * eps).finished();
    Eigen::Matrix3d A2 = Eigen::Matrix3d::Zero(), A3 = Eigen::Matrix3d::Zero();
    A2(0, 0) = 0.5;             // var of x: z2
    A2(1, 1) = 2.0 * eps * eps;  // var of y^2: 4 eps^2 z2, halved
    A2(0, 1) = A2(1, 0) = rho * eps;        // cov(x, y^2) = 2 rho eps z2, halved
    A3(0, 2) = A3(2, 0) = 0.5 * rho * eps;  // cov(x, y) = rho eps, halved
    A3(1, 2) = A3(2, 1) = eps * eps;        // cov(y^2, y) = 2 eps^2 z3, halved
    cc.A_linear = {Eigen::Matrix3d::Zero(), A2, A3};
    auto gen = make_constant_generator(cc);
    for (auto m : {Eigen::Vector3d(0.8, 0.0, 0.0), Eigen::Vector3d(-1.5, 0.3, 0.6), Eigen::Vector3d(0.0, -0.7, 2.0)}) {
        auto s = stein_matrix_riccati(chi, kappa, eps, rho, m(0), m(1), m(2), T);
        auto n = integrate_characteristics(gen, VectorXd(m), 0.0, T, 1024);
        CHECK(std::abs(s.psi2 - n.psi(1)) < 1e-9);
        CHECK(std::abs(s.psi3 - n.psi(2)) < 1e-9);
        CHECK(std::abs(s.alpha - n.alpha) < 1e-9);
        CHECK(std::abs(s.omega_plus + s.omega_minus - 1.0) < 1e-15);
    }
}

TEST_CASE("stein riccati residuals at random times") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.05, 2.0);
    double chi = 0.1, eps = 0.4;
    cplx mu(-0.9, 0.3), c2(-0.6, 0.05), p2(0.0, 0.2), p3(0.0, -0.4);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        double tau = u(rng), h = 1e-5;
        auto m = stein_riccati(chi, eps, mu, c2, p2, p3, tau);
        auto a = stein_riccati(chi, eps, mu, c2, p2, p3, tau + h);
        auto b = stein_riccati(chi, eps, mu, c2, p2, p3, tau - h);
        double e2 = eps * eps;
        cplx r2 = (a.psi2 - b.psi2) / (2 * h) - (2 * e2 * m.psi2 * m.psi2 + 2.0 * mu * m.psi2 + c2);
        cplx r3 = (a.psi3 - b.psi3) / (2 * h) - ((2 * e2 * m.psi2 + mu) * m.psi3 + 2 * chi * m.psi2);
        cplx ra = (a.alpha - b.alpha) / (2 * h) - (0.5 * e2 * m.psi3 * m.psi3 + e2 * m.psi2 + chi * m.psi3);
        worst = std::max({worst, std::abs(r2), std::abs(r3), std::abs(ra)});
    }
    CHECK(worst < 1e-9);
    // Double root: mu^2 = 2 eps^2 c2 switches to the numeric path and stays consistent.
    cplx c2d = mu * mu / (2 * eps * eps);
    auto d = stein_riccati(chi, eps, mu, c2d, p2, p3, 1.0);
    auto dn = stein_riccati(chi, eps, mu, c2d * (1.0 + 1e-6), p2, p3, 1.0);
    CHECK(d.numeric_fallback);
    CHECK(std::abs(d.alpha - dn.alpha) < 1e-5);
}

TEST_CASE("path-dependent characteristics") {
    double a0 = 0.04, a1 = -0.03, kappa = 1.5, T = 1.0;
    for (auto [k, l] : {std::pair{0.0, 0.0}, {1.2, -0.4}, {-2.0, 3.0}}) {
        auto pc = path_dependent_characteristics(a0, a1, kappa, k, l, T);
        CHECK(std::abs(pc.psi_x + pc.psi_y - I * (k + l)) < 1e-14);
        constant_coefficients cc;
        cc.b = Eigen::Vector2d::Zero();
        cc.B = (Matrix2d() << -kappa, kappa, 0, 0).finished();
        cc.A0 = (Matrix2d() << 0, 0, 0, 0.5 * a0).finished();
        cc.A_linear = {(Matrix2d() << 0, 0, 0, -0.5 * a1).finished(), (Matrix2d() << 0, 0, 0, 0.5 * a1).finished()};
        auto n = integrate_characteristics(make_constant_generator(cc), VectorXd(Eigen::Vector2d(k, l)), 0.0, T, 512);
        CHECK(std::abs(n.psi(0) - pc.psi_x) < 1e-10);
        CHECK(std::abs(n.psi(1) - pc.psi_y) < 1e-10);
        CHECK(std::abs(n.alpha - pc.alpha) < 1e-10);
    }
    // Zero total wave number: psi_y decays under zero source.
    auto z = path_dependent_characteristics(a0, a1, kappa, -1.0, 1.0, 4.0);
    CHECK(std::abs(z.psi_y) < std::abs(I * 1.0) * std::exp(-kappa * 4.0) * 1.01);
}
