#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ak/core/types.hpp"
#include "ak/numerics/quadrature.hpp"

namespace ak::ng {

// dy = (chi - kappa y) dt + eps sqrt(y) dW on y >= 0.
struct feller_params {
    double chi = 0.0;
    double kappa = 0.0;
    double epsilon = 0.0;

    double vartheta() const;         // 2 chi / eps^2 - 1
    double M(double T) const;        // 2 / (eps^2 B_kappa(T))
    double Y(double T, double y) const;  // e^{-kappa T} y
    void validate() const;           // eps > 0, chi >= 0, vartheta > -1
};

// For vartheta < 0 the boundary is attainable and the two regularizations
// describe different processes: type I keeps the mass (reflecting), type II
// lets it leak through y = 0 (absorbing). For vartheta >= 0 only type I is a
// density; vartheta = 0 is shared by both.
enum class regularization { type_I_reflecting, type_II_absorbing };

double feller_tpdf(const feller_params& p, regularization reg, double t, double y, double tbar, double ybar);

// Probability flux -eps^2/2 (ybar w)_ybar + (chi - kappa ybar) w.
double feller_flux(const feller_params& p, regularization reg, double t, double y, double tbar, double ybar);

// Total mass on [0, inf): 1 for type I, the regularized lower incomplete
// gamma P(-vartheta, M Y) for type II.
double feller_mass(const feller_params& p, regularization reg, double t, double y, double tbar);

// E exp(i l ybar) for the plain process.
cplx feller_cf(const feller_params& p, double T, double y, double l);

// Time-dependent parameters. The transition density is a single inversion in
// l of exp(alpha + psi y) where, with A(s) = exp(-int_s^tbar kappa) and
// G(s) = 1/2 int_s^tbar eps^2 A:
//   psi = i l A(t) / (1 - i l G(t)),
//   alpha = -q(t) ln(1 - i l G(t)) - int_t^tbar q'(s) ln(1 - i l G(s)) ds,
// q = 2 chi / eps^2 (differentiated numerically, so the parameter functions
// must be defined slightly beyond [t, tbar]). The history integral uses Gauss-Legendre nodes, doubled
// from 64 until alpha moves by less than 1e-9.
struct feller_timedep {
    std::function<double(double)> chi;
    std::function<double(double)> kappa;
    std::function<double(double)> epsilon;
};

class feller_timedep_kernel {
  public:
    feller_timedep_kernel(const feller_timedep& p, double t, double tbar);
    cplx cf(double y, double l) const;
    int nodes() const { return static_cast<int>(s_.size()); }
    double A() const { return A_t_; }
    double G() const { return G_t_; }

  private:
    cplx alpha(double l, const std::vector<double>& w, const std::vector<double>& dq,
               const std::vector<double>& G) const;
    void build(const feller_timedep& p, int n, std::vector<double>& w, std::vector<double>& dq,
               std::vector<double>& G);

    double t_, tbar_, q_t_ = 0.0, A_t_ = 1.0, G_t_ = 0.0;
    std::vector<double> s_, w_, dq_, G_;
};

std::vector<double> feller_tpdf_timedep(const feller_timedep& p, double t, double y, double tbar,
                                        std::span<const double> ybars, const num::quadrature_spec& spec = {},
                                        double* error_estimate = nullptr);

// Feller process with positive exponential jumps of rate phi at intensity
// lambda.
struct feller_jump_params {
    feller_params base;
    double lambda = 0.0;
    double phi = 1.0;
};

cplx feller_jump_cf(const feller_jump_params& p, double T, double y, double l);
std::vector<double> feller_jump_tpdf(const feller_jump_params& p, double T, double y, std::span<const double> ybars,
                                     const num::quadrature_spec& spec = {});

}  // namespace ak::ng
