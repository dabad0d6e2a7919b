#include "ak/hydro/kelvin_waves.hpp"

#include <cmath>
#include <limits>

#include "ak/core/errors.hpp"
#include "ak/core/parallel.hpp"
#include "ak/core/types.hpp"

namespace ak::hydro {
namespace {

void check_trace(const Matrix3d& L) {
    require(std::abs(L.trace()) <= 1e-12 * (1.0 + L.cwiseAbs().maxCoeff()),
            "linear_flow: the velocity gradient must be trace free");
}

struct rhs_state {
    Vector3d r, beta, a;
    double energy;
};

rhs_state rhs(const Matrix3d& L, double nu, const rhs_state& s) {
    const double bb = s.beta.squaredNorm();
    Vector3d La = L * s.a;
    return {L * s.r, -L.transpose() * s.beta, -La + 2.0 * La.dot(s.beta) / bb * s.beta - nu * bb * s.a, bb};
}

rhs_state axpy(const rhs_state& s, double h, const rhs_state& k) {
    return {s.r + h * k.r, s.beta + h * k.beta, s.a + h * k.a, s.energy + h * k.energy};
}

}  // namespace

linear_flow::linear_flow(const Matrix3d& L) : L0_(L), constant_(true) { check_trace(L); }

linear_flow::linear_flow(const Eigen::Matrix2d& L) : constant_(true) {
    L0_.topLeftCorner<2, 2>() = L;
    check_trace(L0_);
}

linear_flow::linear_flow(std::function<Matrix3d(double)> L) : L_(std::move(L)), constant_(false) {
    require(static_cast<bool>(L_), "linear_flow: gradient function must be set");
    check_trace(L_(0.0));
}

linear_flow linear_flow::planar_elliptic(double s, double w) {
    require(w > std::abs(s), "linear_flow: planar flow is elliptic only for |s| < w");
    Eigen::Matrix2d L;
    L << s, -w, w, -s;
    return linear_flow(Eigen::Matrix2d(0.5 * L));
}

void kelvin_triplet::validate() const {
    require(beta.norm() > 0.0, "kelvin_triplet: wave vector must be nonzero");
    require(nu >= 0.0, "kelvin_triplet: viscosity must be nonnegative");
    require(std::abs(beta.dot(a)) <= 1e-12 * beta.norm() * std::max(a.norm(), 1e-300),
            "kelvin_triplet: amplitude must be orthogonal to the wave vector");
}

kelvin_trajectory evolve_triplet(const linear_flow& flow, const kelvin_triplet& init, double T, double dt,
                                 int record_every) {
    require(dt > 0.0, "evolve_triplet: dt must be positive");
    require(T >= 0.0, "evolve_triplet: T must be nonnegative");
    require(record_every >= 1, "evolve_triplet: record_every must be at least 1");
    init.validate();

    const long steps = static_cast<long>(std::ceil(T / dt - 1e-12));
    const double h = steps > 0 ? T / steps : 0.0;
    kelvin_trajectory out;
    auto record = [&](double t, const rhs_state& s) {
        out.t.push_back(t);
        out.states.push_back({s.r, s.beta, s.a, init.nu});
        out.beta_energy.push_back(s.energy);
    };
    rhs_state s{init.r, init.beta, init.a, 0.0};
    record(0.0, s);
    for (long i = 0; i < steps; ++i) {
        const double t = i * h;
        Matrix3d L0 = flow.at(t), Lh = flow.is_constant() ? L0 : flow.at(t + 0.5 * h);
        Matrix3d L1 = flow.is_constant() ? L0 : flow.at(t + h);
        auto k1 = rhs(L0, init.nu, s);
        auto k2 = rhs(Lh, init.nu, axpy(s, 0.5 * h, k1));
        auto k3 = rhs(Lh, init.nu, axpy(s, 0.5 * h, k2));
        auto k4 = rhs(L1, init.nu, axpy(s, h, k3));
        s.r += h / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r);
        s.beta += h / 6.0 * (k1.beta + 2.0 * k2.beta + 2.0 * k3.beta + k4.beta);
        s.a += h / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
        s.energy += h / 6.0 * (k1.energy + 2.0 * k2.energy + 2.0 * k3.energy + k4.energy);
        // Incompressibility is conserved exactly by the ODE but drifts under
        // RK4; project it back.
        s.a -= s.a.dot(s.beta) / s.beta.squaredNorm() * s.beta;
        if (!s.a.allFinite()) throw numerical_error("evolve_triplet: amplitude overflow");
        if ((i + 1) % record_every == 0 || i + 1 == steps) record((i + 1) * h, s);
    }
    return out;
}

stability_report classify_stability(const linear_flow& flow, int grid, double T, double dt, double nu) {
    require(grid >= 8, "classify_stability: orientation grid must have at least 8 points");
    require(T > 0.0, "classify_stability: T must be positive");
    stability_report rep;
    rep.orientations.resize(grid);
    parallel_for(static_cast<std::size_t>(grid), [&](std::size_t j) {
        const double th = 0.5 * pi * static_cast<double>(j) / (grid - 1);
        kelvin_triplet k;
        k.beta = Vector3d(std::sin(th), 0.0, std::cos(th));
        k.a = Vector3d::UnitY();
        k.nu = nu;
        auto tr = evolve_triplet(flow, k, T, dt, std::numeric_limits<int>::max());
        double ratio = tr.states.back().a.norm();
        rep.orientations[j] = {th, std::log(ratio) / T, ratio, ratio <= 1e3};
    });
    rep.max_exponent = -std::numeric_limits<double>::infinity();
    for (const auto& o : rep.orientations) {
        rep.max_exponent = std::max(rep.max_exponent, o.exponent);
        rep.unstable = rep.unstable || !o.bounded;
    }
    return rep;
}

}  // namespace ak::hydro
