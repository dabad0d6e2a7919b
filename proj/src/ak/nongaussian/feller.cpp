#include "ak/nongaussian/feller.hpp"

#include <gsl/gsl_sf_gamma.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "ak/core/errors.hpp"
#include "ak/numerics/special.hpp"
#include "ak/ode/exp_helpers.hpp"

namespace ak::ng {
namespace {

using ode::exp_A;
using ode::exp_B;

struct feller_setup {
    double T, M, Y, vartheta, e2;
};

feller_setup setup(const feller_params& p, regularization reg, double t, double y, double tbar, double ybar) {
    p.validate();
    double T = tbar - t;
    require(T > 0.0, "feller: need tbar > t");
    require(y > 0.0, "feller: start point must be positive");
    require(ybar >= 0.0, "feller: ybar must be nonnegative");
    double th = p.vartheta();
    if (reg == regularization::type_II_absorbing && th > 0.0)
        throw invalid_argument("feller: the absorbing regularization only exists for vartheta <= 0");
    return {T, p.M(T), p.Y(T, y), th, p.epsilon * p.epsilon};
}

// M e^{-M(ybar+Y)} (ybar/Y)^{power/2} I_order(2 M sqrt(ybar Y)), ybar > 0.
double bessel_weight(const feller_setup& s, double ybar, double order, double power) {
    double Z = 2.0 * s.M * std::sqrt(ybar * s.Y);
    double sq = std::sqrt(ybar) - std::sqrt(s.Y);
    double log_w = std::log(s.M) - s.M * sq * sq + 0.5 * power * std::log(ybar / s.Y);
    return std::exp(log_w) * num::bessel_i_scaled(order, Z);
}

double boundary_density(const feller_setup& s, regularization reg) {
    double u = s.M * s.Y;
    if (reg == regularization::type_II_absorbing || s.vartheta == 0.0)
        return s.M * std::exp(-u - s.vartheta * std::log(u) - std::lgamma(1.0 - s.vartheta));
    if (s.vartheta > 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
}

}  // namespace

double feller_params::vartheta() const { return 2.0 * chi / (epsilon * epsilon) - 1.0; }
double feller_params::M(double T) const { return 2.0 / (epsilon * epsilon * exp_B(kappa, T)); }
double feller_params::Y(double T, double y) const { return exp_A(kappa, T) * y; }

void feller_params::validate() const {
    require(epsilon > 0.0, "feller: epsilon must be positive");
    require(chi >= 0.0, "feller: chi must be nonnegative");
    require_domain(vartheta() > -1.0, "feller: vartheta = 2 chi / eps^2 - 1 must exceed -1");
}

double feller_tpdf(const feller_params& p, regularization reg, double t, double y, double tbar, double ybar) {
    auto s = setup(p, reg, t, y, tbar, ybar);
    if (ybar == 0.0) return boundary_density(s, reg);
    bool absorbing = reg == regularization::type_II_absorbing && s.vartheta < 0.0;
    return bessel_weight(s, ybar, absorbing ? -s.vartheta : s.vartheta, s.vartheta);
}

double feller_flux(const feller_params& p, regularization reg, double t, double y, double tbar, double ybar) {
    auto s = setup(p, reg, t, y, tbar, ybar);
    const double drift_coef = 0.5 * s.e2 - p.kappa / s.M;
    bool absorbing = reg == regularization::type_II_absorbing && s.vartheta < 0.0;
    if (ybar == 0.0) {
        if (!absorbing) return 0.0;
        return 0.5 * s.e2 * s.vartheta * boundary_density(s, reg);
    }
    if (!absorbing) {
        double w1 = bessel_weight(s, ybar, s.vartheta + 1.0, s.vartheta + 1.0);
        double w0 = bessel_weight(s, ybar, s.vartheta, s.vartheta);
        return -0.5 * s.e2 * s.M * s.Y * w1 + drift_coef * s.M * ybar * w0;
    }
    double w1 = bessel_weight(s, ybar, 1.0 - s.vartheta, s.vartheta);
    double w0 = bessel_weight(s, ybar, -s.vartheta, s.vartheta);
    return -0.5 * s.e2 * s.M * std::sqrt(ybar * s.Y) * w1 + (0.5 * s.e2 * s.vartheta + drift_coef * s.M * ybar) * w0;
}

double feller_mass(const feller_params& p, regularization reg, double t, double y, double tbar) {
    auto s = setup(p, reg, t, y, tbar, 0.0);
    if (reg == regularization::type_I_reflecting || s.vartheta == 0.0) return 1.0;
    return gsl_sf_gamma_inc_P(-s.vartheta, s.M * s.Y);
}

cplx feller_cf(const feller_params& p, double T, double y, double l) {
    p.validate();
    double a2 = 0.5 * p.epsilon * p.epsilon;
    cplx d = 1.0 - I * l * a2 * exp_B(p.kappa, T);
    return std::exp(-(p.vartheta() + 1.0) * std::log(d) + I * l * exp_A(p.kappa, T) * y / d);
}

// ---- time-dependent parameters ----

feller_timedep_kernel::feller_timedep_kernel(const feller_timedep& p, double t, double tbar) : t_(t), tbar_(tbar) {
    require(p.chi && p.kappa && p.epsilon, "feller_timedep: all parameter functions must be set");
    require(tbar > t, "feller_timedep: need tbar > t");
    double e_t = p.epsilon(t);
    require(e_t > 0.0, "feller_timedep: epsilon must be positive");
    q_t_ = 2.0 * p.chi(t) / (e_t * e_t);
    require_domain(q_t_ > 1.0, "feller_timedep: need 2 chi / eps^2 - 1 > 0 on the horizon");

    std::vector<double> w, dq, G;
    build(p, 64, w, dq, G);
    const double probes[] = {0.5, 5.0, 50.0};
    for (int n = 128; n <= 1024; n *= 2) {
        std::vector<double> w2, dq2, G2;
        build(p, n, w2, dq2, G2);
        double diff = 0.0;
        for (double pr : probes) {
            double l = pr / G_t_;
            diff = std::max(diff, std::abs(alpha(l, w, dq, G) - alpha(l, w2, dq2, G2)));
        }
        w = std::move(w2);
        dq = std::move(dq2);
        G = std::move(G2);
        if (diff < 1e-9) break;
    }
    w_ = std::move(w);
    dq_ = std::move(dq);
    G_ = std::move(G);
}

void feller_timedep_kernel::build(const feller_timedep& p, int n, std::vector<double>& w, std::vector<double>& dq,
                                  std::vector<double>& G) {
    num::gauss_legendre gl(n, t_, tbar_);
    const double T = tbar_ - t_;
    auto q = [&](double s) {
        double e = p.epsilon(s);
        require(e > 0.0, "feller_timedep: epsilon must be positive");
        return 2.0 * p.chi(s) / (e * e);
    };
    const double h = 1e-3 * T;
    // (K, G) = (int_s^tbar kappa, 1/2 int_s^tbar eps^2 e^{-K}) integrated
    // backward from tbar with RK4 and visited at the nodes in descending order.
    auto rhs = [&](double s, double K) {
        double e = p.epsilon(s);
        return std::pair<double, double>{p.kappa(s), 0.5 * e * e * std::exp(-K)};
    };
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return gl.nodes[a] > gl.nodes[b]; });
    s_.assign(gl.nodes.begin(), gl.nodes.end());
    w.assign(gl.weights.begin(), gl.weights.end());
    G.assign(n, 0.0);
    dq.assign(n, 0.0);
    const double max_step = T / 4000.0;
    double s = tbar_, K = 0.0, g = 0.0;
    auto advance_to = [&](double target) {
        while (s > target) {
            double step = std::min(max_step, s - target);
            auto [k1, g1] = rhs(s, K);
            auto [k2, g2] = rhs(s - step / 2, K + step / 2 * k1);
            auto [k3, g3] = rhs(s - step / 2, K + step / 2 * k2);
            auto [k4, g4] = rhs(s - step, K + step * k3);
            K += step / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
            g += step / 6 * (g1 + 2 * g2 + 2 * g3 + g4);
            s -= step;
        }
    };
    for (int idx : order) {
        advance_to(gl.nodes[idx]);
        G[idx] = g;
        double sj = gl.nodes[idx];
        // Five-point derivative of q.
        dq[idx] = (-q(sj + 2 * h) + 8 * q(sj + h) - 8 * q(sj - h) + q(sj - 2 * h)) / (12 * h);
    }
    advance_to(t_);
    A_t_ = std::exp(-K);
    G_t_ = g;
}

cplx feller_timedep_kernel::alpha(double l, const std::vector<double>& w, const std::vector<double>& dq,
                                  const std::vector<double>& G) const {
    cplx a = -q_t_ * std::log(1.0 - I * l * G_t_);
    for (std::size_t j = 0; j < w.size(); ++j) a -= w[j] * dq[j] * std::log(1.0 - I * l * G[j]);
    return a;
}

cplx feller_timedep_kernel::cf(double y, double l) const {
    return std::exp(alpha(l, w_, dq_, G_) + I * l * A_t_ * y / (1.0 - I * l * G_t_));
}

std::vector<double> feller_tpdf_timedep(const feller_timedep& p, double t, double y, double tbar,
                                        std::span<const double> ybars, const num::quadrature_spec& spec,
                                        double* error_estimate) {
    require(y > 0.0, "feller_timedep: start point must be positive");
    feller_timedep_kernel kernel(p, t, tbar);
    auto res = num::invert_fourier_1d([&](double k) { return kernel.cf(y, -k); }, ybars, spec);
    if (error_estimate) *error_estimate = res.error_estimate;
    return res.values;
}

// ---- jumps ----

cplx feller_jump_cf(const feller_jump_params& p, double T, double y, double l) {
    p.base.validate();
    require(p.lambda >= 0.0, "feller_jump: intensity must be nonnegative");
    require(p.phi > 0.0, "feller_jump: jump rate must be positive");
    const double kappa = p.base.kappa, phi = p.phi;
    const double a2 = 0.5 * p.base.epsilon * p.base.epsilon;
    cplx alpha1;
    const double gap = kappa - phi * a2;
    const cplx il = I * l;
    auto denom = [&](double tau) { return phi - il * (phi * a2 * exp_B(kappa, tau) + exp_A(kappa, tau)); };
    if (std::abs(gap) * T > 1e-6) {
        // Both arguments lie in the right half-plane, so principal logs are continuous.
        alpha1 = (std::log(denom(T)) - std::log(phi - il)) / gap;
    } else {
        num::gauss_legendre gl(64, 0.0, T);
        alpha1 = 0.0;
        for (std::size_t j = 0; j < gl.nodes.size(); ++j)
            alpha1 += gl.weights[j] * il * exp_A(kappa, gl.nodes[j]) / denom(gl.nodes[j]);
    }
    return feller_cf(p.base, T, y, l) * std::exp(p.lambda * alpha1);
}

std::vector<double> feller_jump_tpdf(const feller_jump_params& p, double T, double y, std::span<const double> ybars,
                                     const num::quadrature_spec& spec) {
    require(T > 0.0, "feller_jump: need T > 0");
    require(y > 0.0, "feller_jump: start point must be positive");
    return num::invert_fourier_1d([&](double k) { return feller_jump_cf(p, T, y, -k); }, ybars, spec).values;
}

}  // namespace ak::ng
