#pragma once

#include <Eigen/Dense>

namespace ak::gauss {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Possibly killed Gaussian transition law:
//   density(zbar) = R(z) N(zbar | mean, covariance),
//   log R(z) = prefactor_const + prefactor_linear . z.
// Kill-free laws have R = 1.
struct gaussian_law {
    VectorXd start;
    VectorXd mean;
    MatrixXd covariance;
    double prefactor_const = 0.0;
    VectorXd prefactor_linear;

    double log_prefactor() const;
    double prefactor() const;
    double log_density(const VectorXd& zbar) const;
    double density(const VectorXd& zbar) const;
    // Marginal of one coordinate.
    double marginal_density(int i, double value) const;
};

// Refuse laws whose horizon is below this; the small-time limit is a delta.
inline constexpr double min_horizon = 1e-9;

}  // namespace ak::gauss
