#include "ak/nongaussian/aug_feller.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "ak/core/errors.hpp"
#include "ak/ode/exp_helpers.hpp"
#include "ak/ode/riccati.hpp"

namespace ak::ng {
namespace {

using lcplx = std::complex<long double>;

struct riccati_coeffs {
    cplx a2, a1, a0;
};

riccati_coeffs coefficients(const feller_params& p, const std::optional<double>& rho, cplx k) {
    const double a2 = 0.5 * p.epsilon * p.epsilon;
    if (!rho) return {a2, -p.kappa, I * k};
    return {a2, I * (*rho) * p.epsilon * k - p.kappa, -0.5 * k * k};
}

void check_rho(const std::optional<double>& rho) {
    if (rho) require(*rho > -1.0 && *rho < 1.0, "aug_feller: rho must lie in (-1, 1)");
}

// log S(z) with S(z) = sum_j z^j / (j! Gamma(j + nu + 1)) = z^{-nu/2} I_nu(2 sqrt z).
cplx log_bessel_series(cplx z, double nu) {
    if (std::abs(z) <= 150.0) {
        lcplx zl(z.real(), z.imag());
        lcplx term = 1.0L / std::tgamma(static_cast<long double>(nu) + 1.0L);
        lcplx sum = term;
        for (int j = 0; j < 2000; ++j) {
            term *= zl / (static_cast<long double>(j + 1) * (static_cast<long double>(j) + nu + 1.0L));
            sum += term;
            if (j > std::abs(z) && std::abs(term) < 1e-19L * std::abs(sum)) break;
        }
        return std::log(cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag())));
    }
    // Hankel expansion of I_nu(xi), xi = 2 sqrt z with Re xi >= 0, keeping
    // the recessive exponential so the form holds near the imaginary axis.
    cplx xi = 2.0 * std::sqrt(z);
    const double mu4 = 4.0 * nu * nu;
    cplx s_plus = 1.0, s_minus = 1.0, a = 1.0;
    for (int k = 1; k <= 30; ++k) {
        a *= (mu4 - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * xi);
        if (std::abs(a) < 1e-17) break;
        s_plus += (k % 2 ? -a : a);
        s_minus += a;
    }
    double sgn = xi.imag() >= 0.0 ? 1.0 : -1.0;
    cplx rec = sgn * I * std::exp(sgn * I * nu * pi) * std::exp(-2.0 * xi) * s_minus;
    cplx log_i = xi - 0.5 * std::log(2.0 * pi * xi) + std::log(s_plus + rec);
    return log_i - 0.5 * nu * std::log(z);
}

// Ingredients of the k-slice of the joint transform. With Omega = c - a2 s psi0
// (c, s the two fundamental solutions of Omega'' - a1 Omega' + a2 a0 Omega = 0),
// psi(T) = beta0 + beta1 / (1 - i l / m), m = c / (a2 s), beta1 = e^{a1 T}/(a2 s c).
struct slice {
    cplx log_a2s;     // ln(a2 s)
    cplx beta0;       // -s'/(a2 s)
    cplx log_m;       // ln(c / (a2 s))
    cplx log_scale;   // a1 T - 2 ln(a2 s), so that m beta1 = e^{log_scale}
};

slice make_slice(const riccati_coeffs& c, double T) {
    cplx mu = c.a1 / 2.0;
    cplx zeta = std::sqrt(mu * mu - c.a2 * c.a0);
    if (zeta.real() < 0.0) zeta = -zeta;
    cplx w = zeta * T;
    cplx f = ode::phi1(-2.0 * w);  // (1 - e^{-2w}) / (2w), argument inside (-pi, pi)
    cplx log_s = mu * T + w + std::log(T) + std::log(f);
    cplx zeta_coth = (1.0 + std::exp(-2.0 * w)) / (2.0 * f * T);
    cplx ds_over_s = mu + zeta_coth;
    auto sol = ode::riccati_closed_form(c.a2, c.a1, c.a0, 0.0, T);
    cplx log_c = sol.log_omega;
    slice sl;
    sl.log_a2s = std::log(c.a2) + log_s;
    sl.beta0 = -ds_over_s / c.a2;
    sl.log_m = log_c - sl.log_a2s;
    sl.log_scale = c.a1 * T - 2.0 * sl.log_a2s;
    return sl;
}

}  // namespace

characteristic_slice aug_feller_cf(const feller_params& p, std::optional<double> rho, double t, double x, double y,
                                   double tbar) {
    p.validate();
    check_rho(rho);
    (void)x;
    const double T = tbar - t;
    require(T > 0.0, "aug_feller: need tbar > t");
    require(y >= 0.0, "aug_feller: y must be nonnegative");
    characteristic_slice out;
    out.cf = [p, rho, T, y](cplx k) {
        auto c = coefficients(p, rho, k);
        auto sol = ode::riccati_closed_form(c.a2, c.a1, c.a0, 0.0, T);
        return std::exp(p.chi * sol.integral + sol.psi * y);
    };
    std::ostringstream note;
    if (!rho) {
        note << "E exp(p x) finite for all T when p <= " << p.kappa * p.kappa / (2 * p.epsilon * p.epsilon);
    } else {
        auto r = moment_explosion(p, rho, 0.0);
        note << "E exp(p x) finite for all T when p in [" << *r.p_minus << ", " << *r.p_plus << "]";
    }
    out.domain_note = note.str();
    return out;
}

double aug_feller_tpdf(const feller_params& p, std::optional<double> rho, double t, double x, double y, double tbar,
                       double xbar, double ybar, const num::quadrature_spec& spec) {
    p.validate();
    check_rho(rho);
    const double T = tbar - t;
    require(T > 0.0, "aug_feller: need tbar > t");
    require(y > 0.0, "aug_feller: y must be positive");
    require(ybar > 0.0, "aug_feller_tpdf: ybar must be positive");
    const double th = p.vartheta();
    const double log_ybar = std::log(ybar);
    auto profile = [&](double k) -> cplx {
        auto sl = make_slice(coefficients(p, rho, k), T);
        cplx m = std::exp(sl.log_m);
        cplx z = std::exp(sl.log_scale) * y * ybar;
        cplx log_f = th * log_ybar - (th + 1.0) * sl.log_a2s + sl.beta0 * y - m * ybar + log_bessel_series(z, th);
        return std::exp(log_f);
    };
    double xs[] = {xbar - x};
    // (1/2pi) int e^{-ik X} F(k) dk, with F(-k) = conj F(k).
    auto res = num::invert_fourier_1d([&](double k) { return profile(-k); }, xs, spec);
    return res.values[0];
}

std::vector<double> aug_feller_marginal_x(const feller_params& p, std::optional<double> rho, double t, double x,
                                          double y, double tbar, std::span<const double> xbars,
                                          const num::quadrature_spec& spec) {
    auto slice = aug_feller_cf(p, rho, t, x, y, tbar);
    std::vector<double> shifted(xbars.begin(), xbars.end());
    for (double& v : shifted) v -= x;
    return num::invert_fourier_1d([&](double k) { return slice.cf(cplx(-k, 0.0)); }, shifted, spec).values;
}

explosion_report moment_explosion(const feller_params& p, std::optional<double> rho, double p_exponent) {
    p.validate();
    check_rho(rho);
    explosion_report r;
    const double a2 = 0.5 * p.epsilon * p.epsilon;
    if (!rho) {
        r.p_hat = p.kappa * p.kappa / (2.0 * p.epsilon * p.epsilon);
        r.t_star = ode::riccati_blowup_time(a2, -p.kappa, p_exponent, 0.0);
        return r;
    }
    const double rh = *rho, e = p.epsilon, k = p.kappa;
    const double rb2 = 1.0 - rh * rh;
    r.p_plus = (1.0 - rh) * k / (rb2 * e);
    r.p_minus = (-1.0 - rh) * k / (rb2 * e);
    r.t_star = ode::riccati_blowup_time(a2, rh * e * p_exponent - k, 0.5 * p_exponent * p_exponent, 0.0);
    return r;
}

}  // namespace ak::ng
