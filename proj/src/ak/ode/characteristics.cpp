#include "ak/ode/characteristics.hpp"

#include <cmath>

#include "ak/core/errors.hpp"

namespace ak::ode {
namespace {

struct state {
    cplx alpha;
    VectorXcd psi;
};

state axpy(const state& y, double h, const state& k) { return {y.alpha + h * k.alpha, y.psi + h * k.psi}; }

struct rhs {
    const affine_generator& gen;
    double tbar;

    state operator()(double tau, const state& y) const {
        double s = tbar - tau;
        const VectorXcd& psi = y.psi;
        const int n = gen.dim;
        state d{0.0, VectorXcd::Zero(n)};
        VectorXcd b = gen.drift_const(s).cast<cplx>();
        Eigen::MatrixXcd B = gen.drift_linear(s).cast<cplx>();
        Eigen::MatrixXcd A0 = gen.diff_const(s).cast<cplx>();
        d.alpha = (b.transpose() * psi)(0) + (psi.transpose() * A0 * psi)(0) - gen.kill_const(s);
        d.psi = B.transpose() * psi - gen.kill_linear(s).cast<cplx>();
        for (std::size_t l = 0; l < gen.diff_linear.size(); ++l) {
            Eigen::MatrixXcd Al = gen.diff_linear[l](s).cast<cplx>();
            d.psi(l) += (psi.transpose() * Al * psi)(0);
        }
        for (const auto& j : gen.jumps) {
            cplx jump = j.mgf(psi) - 1.0;
            d.alpha += j.intensity_const(s) * jump;
            d.psi += j.intensity_linear(s).cast<cplx>() * jump;
        }
        return d;
    }
};

state rk4(const rhs& f, double tau, const state& y, double h) {
    state k1 = f(tau, y);
    state k2 = f(tau + h / 2, axpy(y, h / 2, k1));
    state k3 = f(tau + h / 2, axpy(y, h / 2, k2));
    state k4 = f(tau + h, axpy(y, h, k3));
    state out = y;
    out.alpha += h / 6 * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha);
    out.psi += h / 6 * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi);
    return out;
}

bool healthy(const state& y) {
    if (!std::isfinite(y.alpha.real()) || !std::isfinite(y.alpha.imag())) return false;
    for (int i = 0; i < y.psi.size(); ++i) {
        if (!std::isfinite(y.psi(i).real()) || !std::isfinite(y.psi(i).imag())) return false;
        if (std::abs(y.psi(i)) > blowup_guard) return false;
    }
    return true;
}

// Step-doubling error control across [tau0, tau_end]. Returns false and the
// guard-crossing time in `tau_out` on blow-up; otherwise advances y.
bool adaptive_segment(const rhs& f, double tau0, state& y, double tau_end, double& tau_out) {
    double tau = tau0;
    double h = (tau_end - tau0) / 16;
    while (tau < tau_end) {
        h = std::min(h, tau_end - tau);
        if (h <= 1e-14 * std::max(1.0, tau)) {
            tau_out = tau;
            return false;
        }
        state full = rk4(f, tau, y, h);
        state half = rk4(f, tau + h / 2, rk4(f, tau, y, h / 2), h / 2);
        if (!healthy(full) || !healthy(half) ||
            (full.psi - half.psi).norm() > 1e-10 * (1.0 + half.psi.norm())) {
            h /= 2;
            continue;
        }
        tau += h;
        y = half;
        h *= 1.5;
    }
    tau_out = tau_end;
    return true;
}

}  // namespace

kelvin_coefficients integrate_exponents(const affine_generator& gen, const VectorXcd& psi0, double t, double tbar,
                                        int steps) {
    gen.validate();
    require(psi0.size() == gen.dim, "integrate_characteristics: terminal data has wrong dimension");
    require(steps >= 64, "integrate_characteristics: steps must be at least 64");
    require(tbar >= t, "integrate_characteristics: tbar must not precede t");
    rhs f{gen, tbar};
    double T = tbar - t;
    double h = T / steps;
    state y{0.0, psi0};
    kelvin_coefficients out;
    out.psi0 = psi0;
    for (int i = 0; i < steps && h > 0; ++i) {
        double tau = i * h;
        state full = rk4(f, tau, y, h);
        state half = rk4(f, tau + h / 2, rk4(f, tau, y, h / 2), h / 2);
        bool suspicious = !healthy(full) || !healthy(half) ||
                          (full.psi - half.psi).norm() > 1e-4 * (1.0 + half.psi.norm());
        if (!suspicious) {
            y = half;
            continue;
        }
        // Possible singularity inside this step: resolve it adaptively.
        double reached = 0.0;
        if (!adaptive_segment(f, tau, y, tau + h, reached)) {
            out.exploded = true;
            out.explosion_time = reached;
            out.last_valid_tau = reached;
            out.alpha = y.alpha;
            out.psi = y.psi;
            return out;
        }
    }
    out.alpha = y.alpha;
    out.psi = y.psi;
    out.last_valid_tau = T;
    return out;
}

kelvin_coefficients integrate_characteristics(const affine_generator& gen, const VectorXd& m, double t,
                                              double tbar, int steps) {
    return integrate_exponents(gen, (I * m.cast<cplx>()).eval(), t, tbar, steps);
}

}  // namespace ak::ode
