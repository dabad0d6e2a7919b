#include "ak/gaussian/gaussian_law.hpp"

#include <cmath>
#include <numbers>

#include "ak/core/errors.hpp"

namespace ak::gauss {

double gaussian_law::log_prefactor() const {
    double lp = prefactor_const;
    if (prefactor_linear.size() == start.size() && start.size() > 0) lp += prefactor_linear.dot(start);
    return lp;
}

double gaussian_law::prefactor() const { return std::exp(log_prefactor()); }

double gaussian_law::log_density(const VectorXd& zbar) const {
    require(zbar.size() == mean.size(), "gaussian_law: point has wrong dimension");
    Eigen::LLT<MatrixXd> llt(covariance);
    if (llt.info() != Eigen::Success) throw numerical_error("gaussian_law: covariance is not positive definite");
    VectorXd dz = zbar - mean;
    VectorXd w = llt.matrixL().solve(dz);
    double logdet = 0.0;
    for (int i = 0; i < mean.size(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
    return log_prefactor() - 0.5 * w.squaredNorm() - 0.5 * logdet -
           0.5 * mean.size() * std::log(2.0 * std::numbers::pi);
}

double gaussian_law::density(const VectorXd& zbar) const { return std::exp(log_density(zbar)); }

double gaussian_law::marginal_density(int i, double value) const {
    require(i >= 0 && i < mean.size(), "gaussian_law: coordinate out of range");
    double v = covariance(i, i);
    double d = value - mean(i);
    return prefactor() * std::exp(-0.5 * d * d / v) / std::sqrt(2.0 * std::numbers::pi * v);
}

}  // namespace ak::gauss
