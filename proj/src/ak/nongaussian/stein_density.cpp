#include "ak/nongaussian/stein_density.hpp"

#include "ak/core/errors.hpp"
#include "ak/ode/stein.hpp"

namespace ak::ng {

stein_slice stein_density_cf(const gauss::ou_params& p, double rho, double m1, double t, double x, double y, double tbar) {
    require(rho >= -1.0 && rho <= 1.0, "stein_density_cf: rho must lie in [-1, 1]");
    require(p.epsilon > 0.0, "stein_density_cf: epsilon must be positive");
    const double T = tbar - t;
    require(T >= 0.0, "stein_density_cf: need tbar >= t");
    return {[=](double m2, double m3) {
        auto c = ode::stein_matrix_riccati(p.chi, p.kappa, p.epsilon, rho, m1, m2, m3, T);
        stein_exponents e;
        e.alpha = c.alpha;
        e.delta2 = -I * c.psi2;
        e.delta3 = -I * c.psi3;
        e.numeric_fallback = c.numeric_fallback;
        e.value = std::exp(c.alpha + I * m1 * x + c.psi2 * y * y + c.psi3 * y);
        return e;
    }};
}

}  // namespace ak::ng
