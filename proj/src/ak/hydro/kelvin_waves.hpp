#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace ak::hydro {

using Eigen::Matrix3d;
using Eigen::Vector3d;

// Velocity gradient of a linear flow V = L(t) x. Planar flows are embedded
// with a zero third row and column.
class linear_flow {
  public:
    // Constant gradient; trace must vanish.
    explicit linear_flow(const Matrix3d& L);
    explicit linear_flow(const Eigen::Matrix2d& L);
    // Time-dependent gradient; the trace is checked at t = 0 and during
    // evolution.
    explicit linear_flow(std::function<Matrix3d(double)> L);

    // V = 1/2 (s x1 - w x2, w x1 - s x2, 0). Only the elliptic family
    // |s| < w is accepted.
    static linear_flow planar_elliptic(double s, double w);

    Matrix3d at(double t) const { return constant_ ? L0_ : L_(t); }
    bool is_constant() const { return constant_; }

  private:
    std::function<Matrix3d(double)> L_;
    Matrix3d L0_ = Matrix3d::Zero();
    bool constant_ = true;
};

// Kelvin wave v = a(t) exp(i beta(t) . (x - r(t))) with beta . a = 0.
struct kelvin_triplet {
    Vector3d r = Vector3d::Zero();
    Vector3d beta = Vector3d::UnitX();
    Vector3d a = Vector3d::UnitY();
    double nu = 0.0;  // kinematic viscosity

    // Throws if beta vanishes, nu < 0, or beta . a is not zero to 1e-12
    // relative accuracy.
    void validate() const;
};

struct kelvin_trajectory {
    std::vector<double> t;
    std::vector<kelvin_triplet> states;
    // int_0^t |beta|^2 ds at each recorded time, for viscous damping checks.
    std::vector<double> beta_energy;
};

// RK4 for
//   r' = L r,  beta' = -L^T beta,
//   a' = -L a + 2 (L a . beta / beta . beta) beta - nu |beta|^2 a.
// After each step a is projected back onto beta-perpendicular vectors. Every
// `record_every`-th step is stored (the first and last always are).
kelvin_trajectory evolve_triplet(const linear_flow& flow, const kelvin_triplet& init, double T, double dt,
                                 int record_every = 1);

struct orientation_result {
    double angle = 0.0;        // polar angle of beta(0) from the x3 axis
    double exponent = 0.0;     // log(|a(T)| / |a(0)|) / T
    double growth_ratio = 1.0; // |a(T)| / |a(0)|
    bool bounded = true;       // growth_ratio <= 1e3
};

struct stability_report {
    std::vector<orientation_result> orientations;
    double max_exponent = 0.0;
    bool unstable = false;     // some orientation unbounded
};

// Sweeps beta(0) = (sin th, 0, cos th), a(0) = (0, 1, 0) over `grid`
// equally spaced th in [0, pi/2]. Orientations run in parallel.
stability_report classify_stability(const linear_flow& flow, int grid, double T, double dt, double nu);

}  // namespace ak::hydro
