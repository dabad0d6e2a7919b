#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ak/core/errors.hpp"
#include "ak/hydro/kelvin_waves.hpp"

using ak::invalid_argument;
using namespace ak::hydro;
constexpr double pi = std::numbers::pi;

namespace {

kelvin_triplet oriented(double th, double nu = 0.0) {
    kelvin_triplet k;
    k.r = Vector3d(0.3, -0.2, 0.5);
    k.beta = Vector3d(std::sin(th), 0.0, std::cos(th));
    k.a = Vector3d(0.0, std::sin(th), 0.0);
    k.nu = nu;
    return k;
}

double max_norm(const kelvin_trajectory& tr) {
    double m = 0.0;
    for (const auto& s : tr.states) m = std::max(m, s.a.norm());
    return m;
}

}  // namespace

TEST_CASE("linear flow construction") {
    Matrix3d bad = Matrix3d::Identity();
    CHECK_THROWS_AS(linear_flow{bad}, invalid_argument);
    CHECK_THROWS_AS(linear_flow::planar_elliptic(1.5, 1.0), invalid_argument);
    CHECK_THROWS_AS(linear_flow::planar_elliptic(1.0, 1.0), invalid_argument);
    auto f = linear_flow::planar_elliptic(0.5, 1.0);
    CHECK(f.at(0.0)(0, 1) == doctest::Approx(-0.5));
    CHECK(f.at(3.0)(1, 0) == doctest::Approx(0.5));
    kelvin_triplet k;
    k.a = Vector3d(1.0, 0.0, 0.0);  // parallel to beta
    CHECK_THROWS_AS(evolve_triplet(f, k, 1.0, 0.01), invalid_argument);
    CHECK_THROWS_AS(evolve_triplet(f, oriented(0.3), 1.0, 0.0), invalid_argument);
    CHECK_THROWS_AS(classify_stability(f, 4, 1.0, 0.01, 0.0), invalid_argument);
}

TEST_CASE("still fluid") {
    linear_flow still{Matrix3d(Matrix3d::Zero())};
    auto k = oriented(0.7);
    auto tr = evolve_triplet(still, k, 5.0, 0.01);
    CHECK((tr.states.back().r - k.r).norm() < 1e-15);
    CHECK((tr.states.back().beta - k.beta).norm() < 1e-15);
    CHECK((tr.states.back().a - k.a).norm() < 1e-15);
    k.nu = 0.2;
    tr = evolve_triplet(still, k, 5.0, 0.01);
    CHECK(tr.states.back().a.norm() == doctest::Approx(k.a.norm() * std::exp(-0.2 * 5.0)).epsilon(1e-10));
}

TEST_CASE("conservation laws along the trajectory") {
    auto f = linear_flow::planar_elliptic(0.5, 1.0);
    for (double th : {pi / 4, pi / 3}) {
        auto k = oriented(th);
        auto tr = evolve_triplet(f, k, 100.0, 1e-3, 100);
        double br0 = k.beta.dot(k.r), worst_br = 0.0, worst_ba = 0.0;
        for (const auto& s : tr.states) {
            worst_br = std::max(worst_br, std::abs(s.beta.dot(s.r) - br0));
            worst_ba = std::max(worst_ba, std::abs(s.beta.dot(s.a)) / (s.beta.norm() * s.a.norm()));
        }
        CHECK(worst_br < 1e-10);
        CHECK(worst_ba < 1e-10);
    }
}

TEST_CASE("time-dependent flow matches the constant one") {
    auto f = linear_flow::planar_elliptic(0.3, 1.0);
    Matrix3d L = f.at(0.0);
    linear_flow g([L](double) { return L; });
    auto a = evolve_triplet(f, oriented(1.0), 10.0, 1e-3).states.back();
    auto b = evolve_triplet(g, oriented(1.0), 10.0, 1e-3).states.back();
    CHECK((a.a - b.a).norm() < 1e-14);
}

TEST_CASE("elliptic instability depends on orientation") {
    auto f = linear_flow::planar_elliptic(0.5, 1.0);
    auto calm = evolve_triplet(f, oriented(pi / 4), 100.0, 1e-3, 50);
    auto wild = evolve_triplet(f, oriented(pi / 3), 100.0, 1e-3, 50);
    double a0 = std::sin(pi / 4), a1 = std::sin(pi / 3);
    CHECK(max_norm(calm) / a0 < 10.0);
    CHECK(wild.states.back().a.norm() / a1 > 1e3);
}

TEST_CASE("viscous damping factor") {
    auto f = linear_flow::planar_elliptic(0.5, 1.0);
    const double nu = 0.07;
    auto inv = evolve_triplet(f, oriented(pi / 3), 30.0, 1e-3, 1000);
    auto vis = evolve_triplet(f, oriented(pi / 3, nu), 30.0, 1e-3, 1000);
    for (std::size_t i = 0; i < inv.states.size(); ++i) {
        double ratio = vis.states[i].a.norm() / inv.states[i].a.norm();
        CHECK(ratio == doctest::Approx(std::exp(-nu * inv.beta_energy[i])).epsilon(1e-9));
    }
}

TEST_CASE("stability sweep") {
    auto f = linear_flow::planar_elliptic(0.5, 1.0);
    auto r0 = classify_stability(f, 16, 100.0, 1e-2, 0.0);
    auto r1 = classify_stability(f, 16, 100.0, 1e-2, 0.07);
    CHECK(r0.unstable);
    CHECK(r0.max_exponent > 0.05);
    CHECK(r1.max_exponent < r0.max_exponent);
    CHECK(r1.max_exponent > 0.0);  // damped but not suppressed
    for (std::size_t j = 0; j < r0.orientations.size(); ++j)
        CHECK(r1.orientations[j].exponent < r0.orientations[j].exponent + 1e-12);

    SUBCASE("pure rotation is neutral") {
        auto rot = linear_flow::planar_elliptic(0.0, 1.0);
        auto r = classify_stability(rot, 12, 100.0, 1e-2, 0.0);
        CHECK_FALSE(r.unstable);
        CHECK(r.max_exponent < 1e-8);
    }
}
