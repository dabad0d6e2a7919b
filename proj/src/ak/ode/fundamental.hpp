#pragma once

#include "ak/ode/generator.hpp"

namespace ak::ode {

// Linear-Gaussian building blocks over [t, tbar] for a generator without
// state-dependent diffusion or jumps:
//   L:     d/ds L = -B^T L, L(t) = I
//   e:     int L^{-1} cvec ds
//   Cinv:  2 int L^T A L ds
//   d:     int L^T (b + 2 A L e) ds
//   varsigma0 = int tr B ds,  varsigma1 = int (c - e.L^T A L e - e.L^T b) ds
struct fundamental_solution {
    MatrixXd L;
    MatrixXd Linv;
    MatrixXd Cinv;
    VectorXd d;
    VectorXd e;
    double varsigma0 = 0.0;
    double varsigma1 = 0.0;
};

// Closed form exp(-B^T T) for constant B.
MatrixXd fundamental_matrix(const MatrixXd& B, double T);

// RK4 for time-dependent B on [t, tbar].
MatrixXd fundamental_matrix(const matrix_fn& B, double t, double tbar, int steps = 2000);

fundamental_solution assemble_gaussian_solution(const affine_generator& gen, double t, double tbar,
                                                int steps = 1000);

}  // namespace ak::ode
