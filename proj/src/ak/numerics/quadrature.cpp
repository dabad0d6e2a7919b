#include "ak/numerics/quadrature.hpp"

#include <fftw3.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <sstream>

#include "ak/core/errors.hpp"
#include "ak/numerics/gsl_util.hpp"

namespace ak::num {
namespace {

constexpr int max_doublings = 8;

// Callbacks run inside GSL's C frames, so exceptions are parked and rethrown.
struct gsl_callback {
    const std::function<double(double)>* f;
    std::exception_ptr error;

    static double call(double x, void* p) {
        auto* self = static_cast<gsl_callback*>(p);
        if (self->error) return 0.0;
        try {
            return (*self->f)(x);
        } catch (...) {
            self->error = std::current_exception();
            return 0.0;
        }
    }
};

struct workspace_deleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

using workspace_ptr = std::unique_ptr<gsl_integration_workspace, workspace_deleter>;

constexpr std::size_t workspace_size = 4000;

template <class Call>
double run_gsl(const std::function<double(double)>& f, double* err, Call&& call) {
    detail::quiet_gsl();
    workspace_ptr ws(gsl_integration_workspace_alloc(workspace_size));
    gsl_callback cb{&f, nullptr};
    gsl_function gf{&gsl_callback::call, &cb};
    double result = 0.0, abserr = 0.0;
    int status = call(&gf, ws.get(), &result, &abserr);
    if (cb.error) std::rethrow_exception(cb.error);
    if (status != GSL_SUCCESS && status != GSL_EROUND)
        throw numerical_error(std::string("integrate: ") + gsl_strerror(status));
    if (err) *err = abserr;
    return result;
}

cplx checked_cf(const cf_function& cf, double k) {
    cplx v = cf(k);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream os;
        os << "invert_fourier_1d: non-finite characteristic function at k = " << k;
        throw numerical_error(os.str());
    }
    return v;
}

// Trapezoid on k_n = k0 + n h, n = 0..N with half weights at both ends.
struct trapezoid_grid {
    double k0, h;
    std::vector<cplx> values;  // cf at the nodes
};

trapezoid_grid sample(const cf_function& cf, double k0, double k1, int n) {
    trapezoid_grid g{k0, (k1 - k0) / n, {}};
    g.values.resize(n + 1);
    for (int i = 0; i <= n; ++i) g.values[i] = checked_cf(cf, k0 + i * g.h);
    return g;
}

// Insert midpoints so the step halves; old nodes are reused.
trapezoid_grid refine(const cf_function& cf, const trapezoid_grid& g) {
    trapezoid_grid r{g.k0, g.h / 2, {}};
    std::size_t n = g.values.size() - 1;
    r.values.resize(2 * n + 1);
    for (std::size_t i = 0; i <= n; ++i) r.values[2 * i] = g.values[i];
    for (std::size_t i = 0; i < n; ++i) r.values[2 * i + 1] = checked_cf(cf, g.k0 + (2 * i + 1) * r.h);
    return r;
}

double trapezoid_value(const trapezoid_grid& g, double x, int stride) {
    std::size_t n = g.values.size() - 1;
    double h = g.h * stride;
    cplx sum = 0.0;
    for (std::size_t i = 0; i <= n; i += stride) {
        double k = g.k0 + i * g.h;
        double w = (i == 0 || i == n) ? 0.5 : 1.0;
        sum += w * g.values[i] * std::polar(1.0, k * x);
    }
    return (sum * h).real();
}

inversion_result invert_trapezoid(const cf_function& cf, std::span<const double> xs,
                                  const quadrature_spec& spec, double L) {
    double scale = spec.hermitian ? 1.0 / pi : 1.0 / (2.0 * pi);
    double k0 = spec.hermitian ? 0.0 : -L;
    auto grid = sample(cf, k0, L, spec.node_count);
    inversion_result out;
    out.truncation_halfwidth = L;
    for (int pass = 0;; ++pass) {
        out.values.assign(xs.size(), 0.0);
        double err = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            double fine = scale * trapezoid_value(grid, xs[j], 1);
            double coarse = scale * trapezoid_value(grid, xs[j], 2);
            out.values[j] = fine;
            err = std::max(err, std::abs(fine - coarse));
        }
        out.error_estimate = err;
        if (err <= spec.abs_tol) break;
        if (pass == max_doublings) {
            out.warnings.push_back("trapezoid inversion did not reach abs_tol");
            break;
        }
        grid = refine(cf, grid);
    }
    return out;
}

inversion_result invert_adaptive(const cf_function& cf, std::span<const double> xs,
                                 const quadrature_spec& spec, double L) {
    inversion_result out;
    out.truncation_halfwidth = L;
    double scale = spec.hermitian ? 1.0 / pi : 1.0 / (2.0 * pi);
    double lo = spec.hermitian ? 0.0 : -L;
    for (double x : xs) {
        std::function<double(double)> f = [&](double k) {
            return (checked_cf(cf, k) * std::polar(1.0, k * x)).real();
        };
        double err = 0.0;
        double v = integrate(f, lo, L, spec.abs_tol / scale, 1e-12, &err);
        out.values.push_back(scale * v);
        out.error_estimate = std::max(out.error_estimate, scale * err);
    }
    return out;
}

std::mutex fftw_planner_mutex;

inversion_result invert_fft(const cf_function& cf, std::span<const double> xs,
                            const quadrature_spec& spec, double L) {
    auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
    double xmin = *lo_it, xmax = *hi_it;
    double span = xmax - xmin;
    int n = std::max(spec.node_count, 16);
    // The grid period 2 pi / h must exceed the requested x-span with margin.
    while (2.0 * pi * n / L < 2.0 * span + 1.0) n *= 2;
    double h = L / n;
    double dx_target = std::min(0.01, std::max(span, 1e-3) / 64.0);
    std::size_t m = 1;
    while (m < static_cast<std::size_t>(n) || 2.0 * pi / (m * h) > dx_target) m *= 2;
    double dx = 2.0 * pi / (m * h);
    double x0 = xmin - 4.0 * dx;

    fftw_complex* buf = fftw_alloc_complex(m);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(m), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    for (std::size_t i = 0; i < m; ++i) {
        cplx v = 0.0;
        if (i <= static_cast<std::size_t>(n)) {
            double k = i * h;
            double w = (i == 0 || i == static_cast<std::size_t>(n)) ? 0.5 : 1.0;
            v = w * checked_cf(cf, k) * std::polar(1.0, k * x0);
        }
        buf[i][0] = v.real();
        buf[i][1] = v.imag();
    }
    fftw_execute(plan);
    std::size_t used = static_cast<std::size_t>(std::ceil((span + 8.0 * dx) / dx)) + 1;
    used = std::min(std::max<std::size_t>(used, 8), m);
    std::vector<double> gx(used), gy(used);
    for (std::size_t j = 0; j < used; ++j) {
        gx[j] = x0 + j * dx;
        gy[j] = buf[j][0] * h / pi;
    }
    {
        std::lock_guard lock(fftw_planner_mutex);
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);

    std::unique_ptr<gsl_interp_accel, decltype(&gsl_interp_accel_free)> acc(gsl_interp_accel_alloc(),
                                                                            &gsl_interp_accel_free);
    std::unique_ptr<gsl_spline, decltype(&gsl_spline_free)> spl(gsl_spline_alloc(gsl_interp_cspline, used),
                                                                &gsl_spline_free);
    gsl_spline_init(spl.get(), gx.data(), gy.data(), used);
    inversion_result out;
    out.truncation_halfwidth = L;
    for (double x : xs) out.values.push_back(gsl_spline_eval(spl.get(), x, acc.get()));

    // Spot-check the grid against direct quadrature at the extreme points.
    quadrature_spec direct = spec;
    direct.scheme = quad_scheme::trapezoid;
    double probe[2] = {xmin, xmax};
    auto ref = invert_trapezoid(cf, probe, direct, L);
    double dmin = std::abs(ref.values[0] - out.values[lo_it - xs.begin()]);
    double dmax = std::abs(ref.values[1] - out.values[hi_it - xs.begin()]);
    out.error_estimate = std::max({ref.error_estimate, dmin, dmax});
    if (out.error_estimate > spec.abs_tol) out.warnings.push_back("fft_grid inversion did not reach abs_tol");
    return out;
}

}  // namespace

void quadrature_spec::validate() const {
    require(truncation_halfwidth >= 0.0, "quadrature: truncation_halfwidth must be positive (0 = auto)");
    require(node_count >= 16, "quadrature: node_count must be at least 16");
    require(abs_tol > 0.0, "quadrature: abs_tol must be positive");
}

double auto_truncation(const cf_function& cf, double tol, bool hermitian) {
    double L = 16.0;
    for (; L < 1048576.0; L *= 2.0) {
        double a = std::abs(checked_cf(cf, L));
        double b = hermitian ? a : std::abs(checked_cf(cf, -L));
        if (std::max(a, b) < tol) return L;
    }
    return L;
}

inversion_result invert_fourier_1d(const cf_function& cf, std::span<const double> xs,
                                   const quadrature_spec& spec) {
    spec.validate();
    if (xs.empty()) return {};
    double L = spec.truncation_halfwidth > 0.0 ? spec.truncation_halfwidth
                                               : auto_truncation(cf, spec.abs_tol / 10.0, spec.hermitian);
    switch (spec.scheme) {
        case quad_scheme::adaptive:
            return invert_adaptive(cf, xs, spec, L);
        case quad_scheme::fft_grid:
            if (spec.hermitian && xs.size() >= 2) return invert_fft(cf, xs, spec, L);
            [[fallthrough]];
        case quad_scheme::trapezoid:
            break;
    }
    return invert_trapezoid(cf, xs, spec, L);
}

cplx complex_log_tracker::operator()(cplx z) {
    double arg = std::arg(z);
    if (started_) {
        double d = arg - prev_arg_;
        if (d > pi) --branch_;
        else if (d < -pi) ++branch_;
    }
    started_ = true;
    prev_arg_ = arg;
    return {std::log(std::abs(z)), arg + 2.0 * pi * branch_};
}

gauss_legendre::gauss_legendre(int n, double a, double b) {
    require(n >= 1, "gauss_legendre: need at least one node");
    detail::quiet_gsl();
    gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(n);
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) gsl_integration_glfixed_point(a, b, i, &nodes[i], &weights[i], t);
    gsl_integration_glfixed_table_free(t);
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double rel_tol, double* err) {
    if (a == b) return 0.0;
    return run_gsl(f, err, [&](gsl_function* gf, gsl_integration_workspace* ws, double* r, double* e) {
        return gsl_integration_qag(gf, a, b, abs_tol, rel_tol, workspace_size, GSL_INTEG_GAUSS41, ws, r, e);
    });
}

double integrate_to_infinity(const std::function<double(double)>& f, double a, double abs_tol,
                             double rel_tol, double* err) {
    return run_gsl(f, err, [&](gsl_function* gf, gsl_integration_workspace* ws, double* r, double* e) {
        return gsl_integration_qagiu(gf, a, abs_tol, rel_tol, workspace_size, ws, r, e);
    });
}

double integrate_with_breaks(const std::function<double(double)>& f, std::vector<double> pts,
                             double abs_tol, double rel_tol, double* err) {
    require(pts.size() >= 2, "integrate_with_breaks: need at least two points");
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 2) return 0.0;
    return run_gsl(f, err, [&](gsl_function* gf, gsl_integration_workspace* ws, double* r, double* e) {
        return gsl_integration_qagp(gf, pts.data(), pts.size(), abs_tol, rel_tol, workspace_size, ws, r, e);
    });
}

}  // namespace ak::num
