#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ak/core/types.hpp"

namespace ak::num {

enum class quad_scheme { trapezoid, adaptive, fft_grid };

struct quadrature_spec {
    // Wave-number bound L. Zero selects L automatically by doubling from 16
    // until |cf(L)| < abs_tol / 10.
    double truncation_halfwidth = 0.0;
    int node_count = 1024;
    double abs_tol = 1e-10;
    quad_scheme scheme = quad_scheme::trapezoid;
    // cf(-k) = conj(cf(k)); the inversion is then real and folds onto [0, L].
    bool hermitian = true;

    void validate() const;
};

struct inversion_result {
    std::vector<double> values;
    double error_estimate = 0.0;
    double truncation_halfwidth = 0.0;
    std::vector<std::string> warnings;
};

using cf_function = std::function<cplx(double)>;

// Evaluate (1/2pi) int_{-L}^{L} cf(k) e^{ikx} dk at each x (real part).
inversion_result invert_fourier_1d(const cf_function& cf, std::span<const double> xs,
                                   const quadrature_spec& spec);

// Smallest L = 16 * 2^j with |cf(L)| and |cf(-L)| below tol, capped at 2^20.
double auto_truncation(const cf_function& cf, double tol, bool hermitian);

// Principal log with the imaginary part unwrapped along a sequence of calls.
class complex_log_tracker {
  public:
    cplx operator()(cplx z);
    double previous_argument() const { return prev_arg_; }
    int accumulated_branch() const { return branch_; }

  private:
    double prev_arg_ = 0.0;
    int branch_ = 0;
    bool started_ = false;
};

// Gauss-Legendre nodes/weights on [a, b].
struct gauss_legendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    gauss_legendre(int n, double a, double b);
};

// Adaptive Gauss-Kronrod (GSL QAG / QAGIU / QAGP). Throws numerical_error
// on failure to reach the tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, double rel_tol = 1e-10, double* err = nullptr);
double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double abs_tol = 1e-12, double rel_tol = 1e-10,
                             double* err = nullptr);
double integrate_with_breaks(const std::function<double(double)>& f, std::vector<double> pts,
                             double abs_tol = 1e-12, double rel_tol = 1e-10,
                             double* err = nullptr);

}  // namespace ak::num
