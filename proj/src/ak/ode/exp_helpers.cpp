#include "ak/ode/exp_helpers.hpp"

#include "ak/numerics/quadrature.hpp"

namespace ak::ode {

std::complex<double> phi1(std::complex<double> z) {
    if (std::abs(z) < 1e-5) return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
    return (std::exp(z) - 1.0) / z;
}

std::complex<double> phi2(std::complex<double> z) {
    if (std::abs(z) < 1e-3) return 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0 + z * z * z * z / 720.0;
    return (std::exp(z) - 1.0 - z) / (z * z);
}

std::complex<double> log1p_ratio(std::complex<double> x) {
    if (std::abs(x) < 1e-4) return 1.0 - x / 2.0 + x * x / 3.0 - x * x * x / 4.0;
    return std::log(1.0 + x) / x;
}

exp_helpers make_exp_helpers(double kappa, double T) {
    double b = exp_B(kappa, T);
    return {exp_A(kappa, T), b, b};
}

exp_helpers make_exp_helpers(const std::function<double(double)>& kappa, double t, double tbar, int nodes) {
    // K(s) = int_t^s k; A(t,s) = e^{-K(s)}, A(s,tbar) = e^{K(s) - K(tbar)}.
    num::gauss_legendre outer(nodes, t, tbar);
    auto K = [&](double s) {
        num::gauss_legendre inner(nodes, t, s);
        double acc = 0.0;
        for (int i = 0; i < nodes; ++i) acc += inner.weights[i] * kappa(inner.nodes[i]);
        return acc;
    };
    double Kt = K(tbar);
    exp_helpers h;
    h.A = std::exp(-Kt);
    for (int i = 0; i < nodes; ++i) {
        double Ks = K(outer.nodes[i]);
        h.B += outer.weights[i] * std::exp(Ks - Kt);
        h.Bbar += outer.weights[i] * std::exp(-Ks);
    }
    return h;
}

}  // namespace ak::ode
