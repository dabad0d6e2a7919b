#pragma once

#include <functional>

#include "ak/gaussian/gaussian_law.hpp"
#include "ak/ode/generator.hpp"

namespace ak::gauss {

// Law of z(tbar) given z(t) = z for a generator with state-independent
// diffusion and affine kill rate.
gaussian_law gaussian_tpdf(const ode::affine_generator& gen, double t, const VectorXd& z, double tbar,
                           int steps = 1000);

// Kolmogorov pair dx = y dt, dy = b(t) dt + sigma(t) dW.
gaussian_law kolmogorov_tpdf(const std::function<double(double)>& b, const std::function<double(double)>& sigma,
                             double t, double x, double y, double tbar);
gaussian_law kolmogorov_tpdf(double b, double sigma, double T, double x, double y);

// The historical closed form with diffusion coefficient k = sigma^2 / 2 and
// wrong powers of k; kept only as a negative control for residual tests.
double kolmogorov_uncorrected_density(double b, double sigma, double T, double x, double y, double xbar,
                                      double ybar);

// OU factor dy = (chi - kappa y) dt + eps dW with theta = chi / kappa.
struct ou_params {
    double chi = 0.0;
    double kappa = 0.0;
    double epsilon = 0.0;
    double theta() const;
};

gaussian_law ou_tpdf(const ou_params& p, double T, double y);

// OU factor together with its running integral x = int y.
gaussian_law augmented_ou_tpdf(const ou_params& p, double T, double x, double y);

// Particle with friction kappa, binding frequency omega and noise eps:
//   dx = y dt, dy = (-omega^2 x - kappa y) dt + eps dW.
struct particle_params {
    double kappa = 0.0;
    double omega = 0.0;
    double epsilon = 0.0;
};

enum class particle_kind { free, bound };

gaussian_law particle_tpdf(const particle_params& p, particle_kind kind, double T, double x, double y);

// Planar linear flow with strain s, rotation w and viscosity nu; vorticity is
// transported like the density of dz = B z dt + sqrt(2 nu) dW.
struct vorticity_params {
    double s = 0.0;
    double w = 1.0;
    double nu = 0.0;
    void validate() const;
};

struct vorticity_solution {
    gaussian_law law;
    bool has_stream_function = false;  // true for s = 0
};

vorticity_solution vorticity_2d(const vorticity_params& p, double T, double x1, double x2);

// Stream function of the base flow; conserved along the mean path.
double base_stream_function(const vorticity_params& p, double x1, double x2);

// Radial stream function of the s = 0 vortex in units of sqrt(2 nu T):
// psi(R) = (ln R + E1(R^2/2) / 2) / (2 pi), and its derivative.
double vortex_stream_function(double R);
double vortex_stream_function_derivative(double R);

}  // namespace ak::gauss
