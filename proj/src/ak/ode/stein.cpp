#include "ak/ode/stein.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ak/core/errors.hpp"
#include "ak/numerics/quadrature.hpp"

namespace ak::ode {
namespace {

using stein_state = std::array<cplx, 4>;  // psi2, psi3, alpha, int psi2

struct stein_rhs {
    double chi, eps;
    cplx mu, c2;
    stein_state operator()(const stein_state& y) const {
        double e2 = eps * eps;
        return {2.0 * e2 * y[0] * y[0] + 2.0 * mu * y[0] + c2, (2.0 * e2 * y[0] + mu) * y[1] + 2.0 * chi * y[0],
                0.5 * e2 * y[1] * y[1] + e2 * y[0] + chi * y[1], y[0]};
    }
};

stein_state add(const stein_state& a, double h, const stein_state& b) {
    stein_state r;
    for (int j = 0; j < 4; ++j) r[j] = a[j] + h * b[j];
    return r;
}

// Fallback where the closed form cancels: the double root (0/0 as zeta -> 0)
// and eps -> 0 (the coefficients carry 1/eps^2).
void integrate_numerically(stein_coefficients& c, double chi, double eps, cplx c2, cplx psi2_0, cplx psi3_0,
                           double T) {
    stein_rhs f{chi, eps, c.mu, c2};
    stein_state y{psi2_0, psi3_0, 0.0, 0.0};
    double rate = (std::abs(c.zeta) + std::abs(c.mu)) * T;
    const int steps = static_cast<int>(std::clamp(400.0 * rate, 4096.0, 1e6));
    double h = T / steps;
    for (int i = 0; i < steps; ++i) {
        auto k1 = f(y);
        auto k2 = f(add(y, h / 2, k1));
        auto k3 = f(add(y, h / 2, k2));
        auto k4 = f(add(y, h, k3));
        for (int j = 0; j < 4; ++j) y[j] += h / 6 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    c.psi2 = y[0];
    c.psi3 = y[1];
    c.alpha = y[2];
    c.log_omega = -2.0 * eps * eps * y[3];
    c.numeric_fallback = true;
}

}  // namespace

stein_coefficients stein_riccati(double chi, double eps, cplx mu, cplx c2, cplx psi2_0, cplx psi3_0, double T) {
    require(eps > 0.0, "stein_riccati: eps must be positive");
    require(T >= 0.0, "stein_riccati: T must be nonnegative");
    const double e2 = eps * eps;
    stein_coefficients c;
    c.mu = mu;
    c.zeta = std::sqrt(mu * mu - 2.0 * e2 * c2);
    if (c.zeta.real() < 0.0) c.zeta = -c.zeta;
    if (T == 0.0) {
        c.psi2 = psi2_0;
        c.psi3 = psi3_0;
        return c;
    }
    // Relative size of the eps^2 shift of the discriminant; below ~1e-6 the
    // closed form loses more than 1e-10 to cancellation.
    double shift = e2 * std::max(std::abs(c2) / std::max(std::norm(mu), 1e-300), T / std::max(std::abs(mu), 1e-300));
    if (std::abs(c.zeta) * T < 1e-4 || shift < 1e-6) {
        integrate_numerically(c, chi, eps, c2, psi2_0, psi3_0, T);
        return c;
    }
    const cplx z = c.zeta;
    const cplx lp = mu + z, lm = mu - z;
    c.omega_plus = (-lm - 2.0 * e2 * psi2_0) / (2.0 * z);
    c.omega_minus = 1.0 - c.omega_plus;
    const cplx wp = c.omega_plus, wm = c.omega_minus;
    c.n_plus = -chi * lp * wp / (e2 * z);
    c.n_minus = chi * lm * wm / (e2 * z);
    c.n0 = psi3_0 + chi * (lp * wp - lm * wm) / (e2 * z);
    c.g = chi * chi * lp * lm / (2.0 * e2 * z * z);
    c.a0 = chi * mu * c.n0 / (z * z);
    cplx K = (0.5 * e2 * (c.n0 * c.n0 + 2.0 * c.n_plus * c.n_minus) + chi * (c.n_plus * wm + c.n_minus * wp) -
              2.0 * c.g * wp * wm) /
             (2.0 * z);
    c.a_plus = K - c.a0 * wp;
    c.a_minus = -c.a0 - c.a_plus;

    // Scaled forms with Einv = e^{-zeta tau}, |Einv| <= 1.
    auto scaled_g = [&](double tau) {
        cplx e2m = std::exp(-2.0 * z * tau);
        return wp + wm * e2m;
    };
    num::complex_log_tracker track;
    cplx lg = track(scaled_g(0.0));
    for (int n = 64, i = 1; i <= n; ++i) lg = track(scaled_g(T * i / n));
    c.log_omega = (mu + z) * T + lg;

    cplx Einv = std::exp(-z * T), E2inv = Einv * Einv;
    cplx Gs = wp + wm * E2inv;
    c.psi2 = -(mu + z * (wp - wm * E2inv) / Gs) / (2.0 * e2);
    c.psi3 = (c.n0 * Einv + c.n_plus + c.n_minus * E2inv) / Gs;
    c.alpha = -0.5 * c.log_omega + (c.a0 * Einv + c.a_plus + c.a_minus * E2inv) / Gs + c.g * T;
    return c;
}

stein_coefficients stein_matrix_riccati(double chi, double kappa, double eps, double rho, double m1, double m2,
                                        double m3, double T) {
    require(rho >= -1.0 && rho <= 1.0, "stein_matrix_riccati: rho must lie in [-1, 1]");
    cplx psi1 = I * m1;
    return stein_riccati(chi, eps, rho * eps * psi1 - kappa, 0.5 * psi1 * psi1, I * m2, I * m3, T);
}

}  // namespace ak::ode
