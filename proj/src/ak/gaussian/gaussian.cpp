#include "ak/gaussian/gaussian.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "ak/core/errors.hpp"
#include "ak/numerics/quadrature.hpp"
#include "ak/numerics/special.hpp"
#include "ak/ode/exp_helpers.hpp"
#include "ak/ode/fundamental.hpp"

namespace ak::gauss {
namespace {

using std::numbers::pi;
using ode::exp_A;
using ode::exp_B;

void require_horizon(double T) {
    require(T >= min_horizon, "transition law needs tbar - t >= 1e-9 (the limit is a point mass)");
}

gaussian_law make_law(VectorXd start, VectorXd mean, MatrixXd cov) {
    gaussian_law g;
    g.prefactor_linear = VectorXd::Zero(start.size());
    g.start = std::move(start);
    g.mean = std::move(mean);
    g.covariance = std::move(cov);
    return g;
}

}  // namespace

gaussian_law gaussian_tpdf(const ode::affine_generator& gen, double t, const VectorXd& z, double tbar, int steps) {
    require_horizon(tbar - t);
    require(z.size() == gen.dim, "gaussian_tpdf: start state has wrong dimension");
    auto fs = ode::assemble_gaussian_solution(gen, t, tbar, steps);
    Eigen::FullPivLU<MatrixXd> lu(fs.L);
    if (!lu.isInvertible()) throw numerical_error("gaussian_tpdf: fundamental matrix is singular");
    MatrixXd Lt_inv = fs.L.transpose().inverse();
    MatrixXd H = Lt_inv * fs.Cinv * fs.Linv;
    H = 0.5 * (H + H.transpose());
    VectorXd Le = fs.L * fs.e;
    gaussian_law g;
    g.start = z;
    g.mean = Lt_inv * (fs.d + z) - H * Le;
    g.covariance = H;
    g.prefactor_const = -fs.e.dot(fs.d) + 0.5 * fs.e.dot(fs.Cinv * fs.e) - fs.varsigma1;
    g.prefactor_linear = -fs.e;
    return g;
}

gaussian_law kolmogorov_tpdf(const std::function<double(double)>& b, const std::function<double(double)>& sigma,
                             double t, double x, double y, double tbar) {
    require_horizon(tbar - t);
    num::gauss_legendre gl(64, t, tbar);
    double phi0 = 0, phi1 = 0, v00 = 0, v01 = 0, v11 = 0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        double s = gl.nodes[i], w = gl.weights[i], u = tbar - s;
        double bs = b(s), s2 = sigma(s) * sigma(s);
        require(s2 > 0.0, "kolmogorov_tpdf: sigma must be positive");
        phi0 += w * bs;
        phi1 += w * u * bs;
        v00 += w * u * u * s2;
        v01 += w * u * s2;
        v11 += w * s2;
    }
    double T = tbar - t;
    MatrixXd H(2, 2);
    H << v00, v01, v01, v11;
    return make_law(Eigen::Vector2d(x, y), Eigen::Vector2d(x + y * T + phi1, y + phi0), H);
}

gaussian_law kolmogorov_tpdf(double b, double sigma, double T, double x, double y) {
    require_horizon(T);
    require(sigma > 0.0, "kolmogorov_tpdf: sigma must be positive");
    double s2 = sigma * sigma;
    MatrixXd H(2, 2);
    H << s2 * T * T * T / 3.0, s2 * T * T / 2.0, s2 * T * T / 2.0, s2 * T;
    return make_law(Eigen::Vector2d(x, y), Eigen::Vector2d(x + y * T + 0.5 * b * T * T, y + b * T), H);
}

double kolmogorov_uncorrected_density(double b, double sigma, double T, double x, double y, double xbar,
                                      double ybar) {
    double k = 0.5 * sigma * sigma;
    double dy = ybar - y - b * T;
    double dx = xbar - x - 0.5 * (ybar + y) * T;
    return 2.0 * std::sqrt(3.0) / (pi * k * k * T * T) *
           std::exp(-dy * dy / (4.0 * k * T) - 3.0 * dx * dx / (k * k * k * T * T * T));
}

double ou_params::theta() const {
    require_domain(kappa != 0.0, "ou_params: theta is undefined for kappa = 0");
    return chi / kappa;
}

gaussian_law ou_tpdf(const ou_params& p, double T, double y) {
    require_horizon(T);
    require(p.epsilon > 0.0, "ou_tpdf: epsilon must be positive");
    // Mean y A + chi B is valid for any kappa, including zero.
    double mean = y * exp_A(p.kappa, T) + p.chi * exp_B(p.kappa, T);
    MatrixXd H = MatrixXd::Constant(1, 1, p.epsilon * p.epsilon * exp_B(2.0 * p.kappa, T));
    return make_law(VectorXd::Constant(1, y), VectorXd::Constant(1, mean), H);
}

gaussian_law augmented_ou_tpdf(const ou_params& p, double T, double x, double y) {
    require_horizon(T);
    require(p.epsilon > 0.0, "augmented_ou_tpdf: epsilon must be positive");
    double k = p.kappa, e2 = p.epsilon * p.epsilon;
    double Bk = exp_B(k, T), B2k = exp_B(2.0 * k, T);
    double h0, h1 = 0.5 * e2 * Bk * Bk;
    if (std::abs(k * T) < 1e-4) {
        // (T - 2 B_k + B_2k) / k^2 -> T^3/3 - k T^4/4 + 7 k^2 T^5 / 60
        h0 = e2 * (T * T * T / 3.0 - k * T * T * T * T / 4.0 + 7.0 * k * k * std::pow(T, 5) / 60.0);
    } else {
        h0 = e2 / (k * k) * (T - 2.0 * Bk + B2k);
    }
    double h2 = e2 * B2k;
    MatrixXd H(2, 2);
    H << h0, h1, h1, h2;
    // Means through chi rather than theta so kappa = 0 is allowed.
    double q = y * exp_A(k, T) + p.chi * exp_B(k, T);
    double pbar = x + y * Bk + p.chi * (std::abs(k * T) < 1e-8 ? 0.5 * T * T : (T - Bk) / k);
    return make_law(Eigen::Vector2d(x, y), Eigen::Vector2d(pbar, q), H);
}

gaussian_law particle_tpdf(const particle_params& p, particle_kind kind, double T, double x, double y) {
    require_horizon(T);
    require(p.kappa > 0.0, "particle_tpdf: friction must be positive");
    require(p.epsilon > 0.0, "particle_tpdf: noise must be positive");
    if (kind == particle_kind::free || p.omega == 0.0) {
        auto g = augmented_ou_tpdf({0.0, p.kappa, p.epsilon}, T, x, y);
        return g;
    }
    using C = std::complex<double>;
    double k = p.kappa, w2 = p.omega * p.omega, e2 = p.epsilon * p.epsilon;
    C disc = C(k * k - 4.0 * w2);
    C zeta = std::sqrt(disc) / 2.0;
    if (std::abs(zeta) * T < 1e-4 || w2 * T * T < 1e-8) {
        // Critical damping or vanishing binding: closed form is 0/0.
        ode::constant_coefficients cc;
        cc.b = Eigen::Vector2d::Zero();
        cc.B = (MatrixXd(2, 2) << 0, 1, -w2, -k).finished();
        cc.A0 = (MatrixXd(2, 2) << 0, 0, 0, 0.5 * e2).finished();
        return gaussian_tpdf(ode::make_constant_generator(cc), 0.0, Eigen::Vector2d(x, y), T, 2000);
    }
    double mu = k / 2.0;
    C lp = mu + zeta, lm = mu - zeta;
    C Ep = std::exp(zeta * T), Em = std::exp(-zeta * T);
    double E0m2 = std::exp(-k * T);
    C dE = Ep - Em;
    C h0 = e2 / (2.0 * k * w2) * (1.0 - E0m2 * (w2 * dE * dE + (lp * Ep - lm * Em) * (lp * Ep - lm * Em)) / disc);
    C h1 = 0.5 * e2 * E0m2 * dE * dE / disc;
    C h2 = e2 / (2.0 * k) * (1.0 - E0m2 * (w2 * dE * dE + (lm * Ep - lp * Em) * (lm * Ep - lp * Em)) / disc);
    // Mean exp(B T) z with eigenvalues -mu +- zeta (Sylvester form).
    double E0inv = std::exp(-mu * T);
    C cosh_term = E0inv * (Ep + Em) / 2.0;
    C sinh_term = E0inv * dE / (2.0 * zeta);
    double m00 = (cosh_term + mu * sinh_term).real();
    double m01 = sinh_term.real();
    double m10 = (-w2 * sinh_term).real();
    double m11 = (cosh_term - mu * sinh_term).real();
    MatrixXd H(2, 2);
    H << h0.real(), h1.real(), h1.real(), h2.real();
    return make_law(Eigen::Vector2d(x, y), Eigen::Vector2d(m00 * x + m01 * y, m10 * x + m11 * y), H);
}

void vorticity_params::validate() const {
    require_domain(w > std::abs(s), "vorticity_2d: need w > |s| (elliptic streamlines)");
    require(nu > 0.0, "vorticity_2d: viscosity must be positive");
}

vorticity_solution vorticity_2d(const vorticity_params& p, double T, double x1, double x2) {
    p.validate();
    require_horizon(T);
    const double s = p.s, w = p.w, nu = p.nu;
    const double z = std::sqrt(w * w - s * s) / 2.0;  // |zeta|
    const double c1 = std::cos(z * T), s1 = std::sin(z * T);
    const double c2 = std::cos(2 * z * T), s2 = std::sin(2 * z * T);
    // exp(B u) = cos(|zeta| u) I + sin(|zeta| u) / |zeta| B, so the covariance
    // 2 nu int exp(B u) exp(B^T u) du needs three scalar integrals.
    const double i_cc = 0.5 * T + s2 / (4 * z);
    const double i_cs = (1 - c2) / (4 * z * z);
    const double i_ss = (0.5 * T - s2 / (4 * z)) / (z * z);
    const double q = 0.25 * (s * s + w * w);
    double h0 = 2 * nu * (i_cc + s * i_cs + q * i_ss);
    double h2 = 2 * nu * (i_cc - s * i_cs + q * i_ss);
    double h1 = nu * s * w * i_ss;
    double a = s / (2 * z), bb = w / (2 * z);
    double r1 = (c1 + a * s1) * x1 - bb * s1 * x2;
    double r2 = bb * s1 * x1 + (c1 - a * s1) * x2;
    MatrixXd H(2, 2);
    H << h0, h1, h1, h2;
    return {make_law(Eigen::Vector2d(x1, x2), Eigen::Vector2d(r1, r2), H), s == 0.0};
}

double base_stream_function(const vorticity_params& p, double x1, double x2) {
    return 0.25 * (2.0 * p.s * x1 * x2 - p.w * (x1 * x1 + x2 * x2));
}

double vortex_stream_function(double R) {
    require_domain(R > 0.0, "vortex_stream_function: R must be positive");
    return (std::log(R) + 0.5 * num::exp_integral_e1(0.5 * R * R)) / (2.0 * pi);
}

double vortex_stream_function_derivative(double R) {
    require_domain(R > 0.0, "vortex_stream_function: R must be positive");
    return -std::expm1(-0.5 * R * R) / (2.0 * pi * R);
}

}  // namespace ak::gauss
