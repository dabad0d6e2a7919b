#include "ak/ode/riccati.hpp"

#include <cmath>
#include <sstream>

#include "ak/core/errors.hpp"
#include "ak/ode/exp_helpers.hpp"
#include "ak/numerics/quadrature.hpp"

namespace ak::ode {
namespace {

// psi = psi_b + u, where psi_b = a0 / (zeta - mu) is a fixed point and
// u = u0 E / D with E = exp(-2 zeta tau), D = 1 - a2 u0 tau phi1(-2 zeta tau).
// The sign of zeta is chosen opposite to mu so psi_b stays finite as a2 -> 0.
struct closed_form {
    cplx a2, a1, a0, mu, zeta, psi_b, u0;
    bool grows;  // Re(-2 zeta) > 0: evaluate in the E^{-1} representation

    // D / E in the growing branch, D otherwise.
    cplx denom(double tau) const {
        if (grows) return std::exp(2.0 * zeta * tau) - a2 * u0 * tau * phi1(2.0 * zeta * tau);
        return 1.0 - a2 * u0 * tau * phi1(-2.0 * zeta * tau);
    }
    cplx psi(double tau) const {
        cplx d = denom(tau);
        return psi_b + (grows ? u0 / d : u0 * std::exp(-2.0 * zeta * tau) / d);
    }
};

closed_form make_form(cplx a2, cplx a1, cplx a0, cplx psi0) {
    closed_form f{a2, a1, a0, a1 / 2.0, 0.0, 0.0, 0.0, false};
    f.zeta = std::sqrt(f.mu * f.mu - a2 * a0);
    if ((f.zeta * std::conj(f.mu)).real() > 0.0) f.zeta = -f.zeta;
    cplx gap = f.zeta - f.mu;
    if (std::abs(gap) > 0.0) {
        f.psi_b = a0 / gap;
    } else {
        // mu = zeta = 0 forces a1 = 0 and a2 a0 = 0; psi' = a2 psi^2 or psi' = a0.
        f.psi_b = 0.0;
    }
    f.u0 = psi0 - f.psi_b;
    f.grows = (-2.0 * f.zeta).real() > 0.0;
    return f;
}

}  // namespace

riccati_solution riccati_closed_form(cplx a2, cplx a1, cplx a0, cplx psi0, double T) {
    require(T >= 0.0 && std::isfinite(T), "riccati_closed_form: T must be finite and nonnegative");
    riccati_solution out;
    closed_form f = make_form(a2, a1, a0, psi0);
    bool degenerate = f.mu == 0.0 && f.zeta == 0.0 && a0 != 0.0;

    auto& r = out.roots;
    r.mu = f.mu;
    r.zeta = std::abs(f.zeta) > 0 && f.zeta.real() < 0 ? -f.zeta : f.zeta;
    r.lambda_plus = r.mu + r.zeta;
    r.lambda_minus = r.mu - r.zeta;
    if (std::abs(r.zeta) > 0.0) {
        r.omega_plus = (-a2 * psi0 - r.lambda_minus) / (2.0 * r.zeta);
        r.omega_minus = (r.lambda_plus + a2 * psi0) / (2.0 * r.zeta);
    } else {
        r.omega_plus = r.omega_minus = 0.5;
    }

    bool real_coeffs = a2.imag() == 0.0 && a1.imag() == 0.0 && a0.imag() == 0.0 && psi0.imag() == 0.0;
    if (real_coeffs) {
        out.blowup_time = riccati_blowup_time(a2.real(), a1.real(), a0.real(), psi0.real());
        if (out.blowup_time && *out.blowup_time <= T) {
            std::ostringstream os;
            os << "riccati_closed_form: solution blows up at tau = " << *out.blowup_time;
            throw numerical_error(os.str());
        }
    }

    if (degenerate) {
        // a1 = 0, a2 = 0: psi = psi0 + a0 tau.
        out.psi = psi0 + a0 * T;
        out.integral = psi0 * T + 0.5 * a0 * T * T;
        out.log_omega = -a2 * out.integral;
        return out;
    }

    // Unwrap the log of the denominator along tau so ln Omega is continuous.
    cplx logd = 0.0;
    if (T > 0.0) {
        for (int n = 16;; n *= 2) {
            num::complex_log_tracker track;
            cplx prev = track(f.denom(0.0));
            bool smooth = true;
            for (int i = 1; i <= n && smooth; ++i) {
                cplx cur = track(f.denom(T * i / n));
                if (std::abs(cur.imag() - prev.imag()) > pi / 2) smooth = false;
                prev = cur;
            }
            if (smooth || n >= (1 << 14)) {
                logd = prev;
                break;
            }
        }
    }
    out.psi = f.psi(T);
    // int u = -(1/a2) ln D, where ln D = ln(denom) - 2 zeta T in the growing branch.
    cplx lnD = f.grows ? logd - 2.0 * f.zeta * T : logd;
    cplx int_u;
    cplx q = T * phi1(-2.0 * f.zeta * T);
    cplx x = -a2 * f.u0 * q;
    if (std::abs(a2) == 0.0) {
        int_u = f.u0 * q;
    } else if (std::isfinite(x.real()) && std::isfinite(x.imag()) && std::abs(x) < 1e-3 &&
               std::abs(lnD - std::log(1.0 + x)) < 1e-6) {
        // Small-a2 regime: -(1/a2) log(1 + x) without cancellation.
        int_u = f.u0 * q * log1p_ratio(x);
    } else {
        int_u = -lnD / a2;
    }
    out.integral = f.psi_b * T + int_u;
    out.log_omega = -a2 * out.integral;
    return out;
}

std::optional<double> riccati_blowup_time(double a2, double a1, double a0, double psi0) {
    if (a2 == 0.0) return std::nullopt;
    // Omega = e^{mu tau} (cosh(zeta tau) + c sinh(zeta tau)/zeta), c = -(mu + a2 psi0).
    double mu = a1 / 2.0;
    double c = -(mu + a2 * psi0);
    double disc = mu * mu - a2 * a0;
    if (disc < 0.0) {
        double w = std::sqrt(-disc);
        // cos(w tau) + c sin(w tau)/w = 0
        if (c < 0.0) return std::atan(w / -c) / w;
        if (c > 0.0) return (pi - std::atan(w / c)) / w;
        return pi / (2.0 * w);
    }
    if (disc == 0.0) {
        if (c < 0.0) return -1.0 / c;
        return std::nullopt;
    }
    double z = std::sqrt(disc);
    // cosh + c sinh / z = 0 needs tanh(z tau) = -z / c in (0, 1)
    if (c < -z) return std::atanh(z / -c) / z;
    return std::nullopt;
}

}  // namespace ak::ode
