#include "ak/nongaussian/anomalous.hpp"

#include <algorithm>
#include <cmath>

#include "ak/core/errors.hpp"
#include "ak/numerics/quadrature.hpp"
#include "ak/ode/exp_helpers.hpp"

namespace ak::ng {
namespace {

// (2 pi)^2 a^2 T^3 J1 = int_0^1 dchi / ((chi - f+)(chi - f-))^2; the
// denominator has modulus >= 1/4 on [0, 1].
cplx j1_integral(const anomalous_nondim& v) {
    auto f = [&](double c) {
        cplx q = c * c - (1.0 + I * v.eta) * c + 0.5 - I * v.zeta;
        return 1.0 / (q * q);
    };
    double re = num::integrate([&](double c) { return f(c).real(); }, 0.0, 1.0, 1e-14, 1e-12);
    double im = num::integrate([&](double c) { return f(c).imag(); }, 0.0, 1.0, 1e-14, 1e-12);
    return {re, im};
}

cplx j1_closed(const anomalous_nondim& v) {
    const double u = 2.0 * v.zeta + v.eta;
    cplx sd = std::sqrt(v.D);
    cplx lg = std::log((u - sd) / (u + sd));
    cplx lead = 4.0 * (v.D + 2.0 * I * v.zeta + I * v.eta) / (v.D - u * u);
    return (lead - 2.0 * I / sd * lg) / v.D;
}

// Cheap 24-point Gauss-Legendre value used to check the branch of the log.
cplx j1_gl(const anomalous_nondim& v) {
    static const num::gauss_legendre gl(24, 0.0, 1.0);
    cplx s = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        double c = gl.nodes[i];
        cplx q = c * c - (1.0 + I * v.eta) * c + 0.5 - I * v.zeta;
        s += gl.weights[i] / (q * q);
    }
    return s;
}

// int_0^T |l - k s|^{2 nu} ds, exact.
double phase_integral(double k, double l, double T, double nu) {
    const double p = 2.0 * nu + 1.0;
    if (k == 0.0) return T * std::pow(std::abs(l), 2.0 * nu);
    auto F = [&](double u) { return std::copysign(std::pow(std::abs(u), p), u) / p; };
    return (F(l) - F(l - k * T)) / k;
}

}  // namespace

anomalous_nondim make_anomalous_nondim(double zeta, double eta) {
    anomalous_nondim v;
    v.zeta = zeta;
    v.eta = eta;
    v.D = 1.0 + eta * eta - 4.0 * I * zeta - 2.0 * I * eta;
    cplx sd = std::sqrt(v.D);
    v.f_plus = ((1.0 + I * eta) + I * sd) / 2.0;
    v.f_minus = ((1.0 + I * eta) - I * sd) / 2.0;
    return v;
}

anomalous_nondim make_anomalous_nondim(double a, double b, double T, double x, double y, double xbar, double ybar) {
    require(a > 0.0, "anomalous_kolmogorov: a must be positive");
    require(T > 0.0, "anomalous_kolmogorov: need tbar > t");
    return make_anomalous_nondim((xbar - x - ybar * T + 0.5 * b * T * T) / (a * T * T), (ybar - y - b * T) / (a * T));
}

double anomalous_kolmogorov_density_nondim(double zeta, double eta) {
    auto v = make_anomalous_nondim(zeta, eta);
    if (std::abs(v.D) < 1e-12) throw numerical_error("anomalous_kolmogorov: D vanished for real input");
    const double u = zeta + eta;
    double sides = ((1.0 - 2.0 * eta * u) / (1.0 + 4.0 * u * u) + (1.0 + 2.0 * eta * zeta) / (1.0 + 4.0 * zeta * zeta)) /
                   (1.0 + eta * eta);
    cplx j1 = j1_closed(v);
    cplx check = j1_gl(v);
    if (std::abs(j1 - check) > 1e-6 * std::max(1e-12, std::abs(check))) {
        // The cheap rule and the closed form disagree: either the log left its
        // branch or the rule is under-resolved. The adaptive integral decides.
        j1 = j1_integral(v);
    }
    // Regions pair up as conjugates; each side term is half of Re of its region.
    return (4.0 * sides + 2.0 * j1.real()) / (4.0 * pi * pi);
}

double anomalous_kolmogorov_tpdf(double a, double b, double t, double x, double y, double tbar, double xbar,
                                 double ybar, double nu) {
    require(a > 0.0, "anomalous_kolmogorov: a must be positive");
    require(nu > 0.0 && nu < 1.0, "anomalous_kolmogorov: nu must lie in (0, 1)");
    const double T = tbar - t;
    require(T > 0.0, "anomalous_kolmogorov: need tbar > t");
    if (nu == 0.5) {
        auto v = make_anomalous_nondim(a, b, T, x, y, xbar, ybar);
        return anomalous_kolmogorov_density_nondim(v.zeta, v.eta) / (a * a * T * T * T);
    }
    return anomalous_kolmogorov_tpdf_inversion(a, b, t, x, y, tbar, xbar, ybar, nu);
}

double anomalous_kolmogorov_tpdf_inversion(double a, double b, double t, double x, double y, double tbar,
                                           double xbar, double ybar, double nu) {
    require(a > 0.0, "anomalous_kolmogorov: a must be positive");
    require(nu > 0.0 && nu < 1.0, "anomalous_kolmogorov: nu must lie in (0, 1)");
    const double T = tbar - t;
    require(T > 0.0, "anomalous_kolmogorov: need tbar > t");
    const double X = xbar - x - ybar * T + 0.5 * b * T * T;
    const double Yv = ybar - y - b * T;
    const double cut = 40.0;  // e^{-40} relative truncation
    const double p = 2.0 * nu + 1.0;
    // min over l of the phase integral is 2 |k|^{2nu} (T/2)^p / p.
    const double k_max = std::pow(cut * p / (2.0 * a * std::pow(T / 2.0, p)), 1.0 / (2.0 * nu));
    auto inner = [&](double k) {
        double l_span = std::pow(cut / (a * T), 1.0 / (2.0 * nu)) + std::abs(k) * T;
        double lo = std::min(0.0, k * T) - l_span, hi = std::max(0.0, k * T) + l_span;
        std::vector<double> pts{lo, std::min(0.0, k * T), std::max(0.0, k * T), hi};
        if (pts[1] == pts[2]) pts.erase(pts.begin() + 2);
        return num::integrate_with_breaks(
            [&](double l) { return std::exp(-a * phase_integral(k, l, T, nu)) * std::cos(k * X + l * Yv); }, pts,
            1e-13, 1e-10);
    };
    double v = num::integrate(inner, 0.0, k_max, 1e-12, 1e-9);
    return 2.0 * v / (4.0 * pi * pi);
}

double anomalous_ou_tpdf(double chi, double kappa, double a, double t, double y, double tbar, double ybar) {
    require(a > 0.0, "anomalous_ou: a must be positive");
    require(kappa > 0.0, "anomalous_ou: kappa must be positive");
    const double T = tbar - t;
    require(T > 0.0, "anomalous_ou: need tbar > t");
    const double B = ode::exp_B(kappa, T);
    const double centre = ode::exp_A(kappa, T) * y + chi * B;
    const double w = a * B, d = ybar - centre;
    return w / (pi * (w * w + d * d));
}

}  // namespace ak::ng
