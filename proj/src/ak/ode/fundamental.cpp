#include "ak/ode/fundamental.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "ak/core/errors.hpp"

namespace ak::ode {
namespace {

template <class State, class Deriv>
State rk4_step(const State& y, double s, double h, const Deriv& f) {
    State k1 = f(s, y);
    State k2 = f(s + h / 2, y + (h / 2) * k1);
    State k3 = f(s + h / 2, y + (h / 2) * k2);
    State k4 = f(s + h, y + h * k3);
    return y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

// Packed layout of the augmented Gaussian system.
struct layout {
    int n;
    int L() const { return 0; }
    int Linv() const { return n * n; }
    int Cinv() const { return 2 * n * n; }
    int e() const { return 3 * n * n; }
    int d() const { return 3 * n * n + n; }
    int s0() const { return 3 * n * n + 2 * n; }
    int s1() const { return s0() + 1; }
    int size() const { return s1() + 1; }
};

}  // namespace

MatrixXd fundamental_matrix(const MatrixXd& B, double T) {
    require(B.rows() == B.cols(), "fundamental_matrix: B must be square");
    require(T >= 0.0, "fundamental_matrix: tbar must not precede t");
    MatrixXd M = -B.transpose() * T;
    return M.exp();
}

MatrixXd fundamental_matrix(const matrix_fn& B, double t, double tbar, int steps) {
    require(tbar >= t, "fundamental_matrix: tbar must not precede t");
    require(steps >= 1, "fundamental_matrix: steps must be positive");
    MatrixXd L = MatrixXd::Identity(B(t).rows(), B(t).cols());
    double h = (tbar - t) / steps;
    auto f = [&](double s, const MatrixXd& y) -> MatrixXd { return -B(s).transpose() * y; };
    for (int i = 0; i < steps; ++i) L = rk4_step(L, t + i * h, h, f);
    return L;
}

fundamental_solution assemble_gaussian_solution(const affine_generator& gen, double t, double tbar, int steps) {
    gen.validate();
    require(gen.gaussian(), "assemble_gaussian_solution: generator must have state-independent diffusion and no jumps");
    require(tbar >= t, "assemble_gaussian_solution: tbar must not precede t");
    require(steps >= 1, "assemble_gaussian_solution: steps must be positive");
    const int n = gen.dim;
    layout lay{n};
    using Map = Eigen::Map<const MatrixXd>;
    using VMap = Eigen::Map<const VectorXd>;

    auto f = [&](double s, const VectorXd& y) -> VectorXd {
        Map L(y.data() + lay.L(), n, n), Linv(y.data() + lay.Linv(), n, n);
        VMap e(y.data() + lay.e(), n);
        MatrixXd B = gen.drift_linear(s), A = gen.diff_const(s);
        VectorXd b = gen.drift_const(s), cv = gen.kill_linear(s);
        double c = gen.kill_const(s);
        VectorXd Le = L * e;
        VectorXd out(lay.size());
        Eigen::Map<MatrixXd>(out.data() + lay.L(), n, n) = -B.transpose() * L;
        Eigen::Map<MatrixXd>(out.data() + lay.Linv(), n, n) = Linv * B.transpose();
        Eigen::Map<MatrixXd>(out.data() + lay.Cinv(), n, n) = 2.0 * L.transpose() * A * L;
        Eigen::Map<VectorXd>(out.data() + lay.e(), n) = Linv * cv;
        Eigen::Map<VectorXd>(out.data() + lay.d(), n) = L.transpose() * (b + 2.0 * A * Le);
        out(lay.s0()) = B.trace();
        out(lay.s1()) = c - Le.dot(A * Le) - Le.dot(b);
        return out;
    };

    VectorXd y = VectorXd::Zero(lay.size());
    Eigen::Map<MatrixXd>(y.data() + lay.L(), n, n) = MatrixXd::Identity(n, n);
    Eigen::Map<MatrixXd>(y.data() + lay.Linv(), n, n) = MatrixXd::Identity(n, n);
    double h = (tbar - t) / steps;
    for (int i = 0; i < steps && h > 0; ++i) y = rk4_step(y, t + i * h, h, f);

    fundamental_solution out;
    out.L = Map(y.data() + lay.L(), n, n);
    out.Linv = Map(y.data() + lay.Linv(), n, n);
    MatrixXd C = Map(y.data() + lay.Cinv(), n, n);
    out.Cinv = 0.5 * (C + C.transpose());
    out.e = VMap(y.data() + lay.e(), n);
    out.d = VMap(y.data() + lay.d(), n);
    out.varsigma0 = y(lay.s0());
    out.varsigma1 = y(lay.s1());
    return out;
}

}  // namespace ak::ode
