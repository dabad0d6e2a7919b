#include "ak/ode/generator.hpp"

#include "ak/core/errors.hpp"

namespace ak::ode {

jump_term exponential_jump(int dim, int j, double intensity, double rate) {
    require(j >= 0 && j < dim, "exponential_jump: coordinate out of range");
    require(rate > 0.0 && intensity >= 0.0, "exponential_jump: rate must be positive, intensity nonnegative");
    return {[intensity](double) { return intensity; }, [dim](double) { return VectorXd::Zero(dim).eval(); },
            [j, rate](const VectorXcd& psi) { return cplx(rate) / (rate - psi(j)); }};
}

void affine_generator::validate() const {
    require(dim > 0, "affine_generator: dimension must be positive");
    require(drift_const && drift_linear && diff_const && kill_const && kill_linear,
            "affine_generator: all coefficient functions must be set");
    require(diff_linear.empty() || static_cast<int>(diff_linear.size()) == dim,
            "affine_generator: need one state-linear diffusion matrix per coordinate");
    for (const auto& j : jumps) require(j.intensity_const && j.intensity_linear && j.mgf, "affine_generator: incomplete jump term");
}

affine_generator make_constant_generator(const constant_coefficients& cc, std::vector<jump_term> jumps) {
    const int n = static_cast<int>(cc.b.size());
    require(n > 0, "constant generator: empty drift");
    require(cc.B.rows() == n && cc.B.cols() == n, "constant generator: drift matrix shape");
    require(cc.A0.rows() == n && cc.A0.cols() == n, "constant generator: diffusion matrix shape");
    require(cc.A0.isApprox(cc.A0.transpose()), "constant generator: diffusion matrix must be symmetric");
    require(cc.A_linear.empty() || static_cast<int>(cc.A_linear.size()) == n,
            "constant generator: need one state-linear diffusion matrix per coordinate");
    require(cc.c_linear.size() == 0 || cc.c_linear.size() == n, "constant generator: kill vector shape");
    affine_generator g;
    g.dim = n;
    g.drift_const = [b = cc.b](double) { return b; };
    g.drift_linear = [B = cc.B](double) { return B; };
    g.diff_const = [A = cc.A0](double) { return A; };
    for (const auto& A : cc.A_linear) {
        require(A.rows() == n && A.cols() == n, "constant generator: state-linear diffusion shape");
        g.diff_linear.push_back([A](double) { return A; });
    }
    g.kill_const = [c = cc.c](double) { return c; };
    VectorXd cl = cc.c_linear.size() ? cc.c_linear : VectorXd::Zero(n);
    g.kill_linear = [cl](double) { return cl; };
    g.jumps = std::move(jumps);
    g.time_homogeneous = true;
    return g;
}

}  // namespace ak::ode
