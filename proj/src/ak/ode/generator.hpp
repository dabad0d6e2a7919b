#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "ak/core/types.hpp"

namespace ak::ode {

using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

using scalar_fn = std::function<double(double)>;
using vector_fn = std::function<VectorXd(double)>;
using matrix_fn = std::function<MatrixXd(double)>;

// One jump component: intensity lambda0 + lambda_l . z, and the moment
// generating function psi -> E[exp(psi . J)], which must equal 1 at psi = 0.
struct jump_term {
    scalar_fn intensity_const;
    vector_fn intensity_linear;
    std::function<cplx(const VectorXcd&)> mgf;
};

// Jumps of size Exp(rate) in coordinate j: E[e^{psi J}] = rate / (rate - psi_j).
jump_term exponential_jump(int dim, int j, double intensity, double rate);

// Affine generator
//   (b + B z) . grad + (A0 + sum_l z_l A_l) : grad grad - (c + cvec . z) + jumps,
// so that A = sigma sigma^T / 2 for an SDE with diffusion matrix sigma.
struct affine_generator {
    int dim = 0;
    vector_fn drift_const;
    matrix_fn drift_linear;
    matrix_fn diff_const;
    std::vector<matrix_fn> diff_linear;  // empty means all zero
    scalar_fn kill_const;
    vector_fn kill_linear;
    std::vector<jump_term> jumps;
    bool time_homogeneous = true;

    bool gaussian() const { return diff_linear.empty() && jumps.empty(); }
    void validate() const;
};

struct constant_coefficients {
    VectorXd b;
    MatrixXd B;
    MatrixXd A0;
    std::vector<MatrixXd> A_linear;
    double c = 0.0;
    VectorXd c_linear;  // empty means zero
};

affine_generator make_constant_generator(const constant_coefficients& cc, std::vector<jump_term> jumps = {});

}  // namespace ak::ode
