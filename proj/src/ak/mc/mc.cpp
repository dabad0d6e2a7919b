#include "ak/mc/mc.hpp"

#include <gsl/gsl_cdf.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ak/core/errors.hpp"
#include "ak/core/parallel.hpp"
#include "ak/core/types.hpp"
#include "ak/gaussian/gaussian.hpp"
#include "ak/numerics/quadrature.hpp"
#include "ak/ode/exp_helpers.hpp"

namespace ak::mc {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

bool is_feller_type(process_kind p) {
    return p == process_kind::feller || p == process_kind::augmented_feller || p == process_kind::heston_log;
}

bool has_exact_transition(process_kind p) {
    return p == process_kind::kolmogorov || p == process_kind::ou || p == process_kind::augmented_ou ||
           p == process_kind::anomalous_ou_cauchy;
}

void validate_params(process_kind process, const process_params& p) {
    require(std::isfinite(p.x0) && std::isfinite(p.y0), "simulate: initial state must be finite");
    require(p.epsilon >= 0.0 && p.sigma >= 0.0, "simulate: noise amplitudes must be non-negative");
    require(p.rho >= -1.0 && p.rho <= 1.0, "simulate: rho must lie in [-1, 1]");
    require(p.ema_rate >= 0.0, "simulate: ema_rate must be non-negative");
    if (is_feller_type(process)) {
        require(p.chi >= 0.0, "simulate: Feller drift chi must be non-negative");
        require(p.y0 >= 0.0, "simulate: Feller factor must start non-negative");
    }
    if (process == process_kind::path_dependent) {
        require(p.kappa_average >= 0.0, "simulate: averaging rate must be non-negative");
        require(p.a0 + p.a1 * (p.y0 - p.x0) >= 0.0, "simulate: initial variance a0 + a1 (y - x) is negative");
    }
}

// z' = M z + m + L xi for the Gaussian processes, built from the exact law at
// the basis states.
struct affine_map {
    double M[2][2] = {{1, 0}, {0, 1}};
    double m[2] = {0, 0};
    double L[2][2] = {{0, 0}, {0, 0}};
    bool two_d = true;
};

void set_cholesky(affine_map& a, double c00, double c01, double c11) {
    double l00 = std::sqrt(std::max(c00, 0.0));
    double l10 = l00 > 0.0 ? c01 / l00 : 0.0;
    a.L[0][0] = l00;
    a.L[1][0] = l10;
    a.L[1][1] = std::sqrt(std::max(c11 - l10 * l10, 0.0));
}

affine_map exact_map(process_kind process, const process_params& p, double h) {
    affine_map a;
    gauss::ou_params ou{p.chi, p.kappa, p.epsilon};
    if (process == process_kind::ou) {
        auto at = [&](double y) { return gauss::ou_tpdf(ou, h, y); };
        auto l0 = at(0.0), l1 = at(1.0);
        a.two_d = false;
        a.m[1] = l0.mean(0);
        a.M[1][1] = l1.mean(0) - l0.mean(0);
        a.L[1][1] = std::sqrt(std::max(l0.covariance(0, 0), 0.0));
        return a;
    }
    auto at = [&](double x, double y) {
        return process == process_kind::kolmogorov ? gauss::kolmogorov_tpdf(p.b, p.sigma, h, x, y)
                                                   : gauss::augmented_ou_tpdf(ou, h, x, y);
    };
    auto l0 = at(0.0, 0.0), lx = at(1.0, 0.0), ly = at(0.0, 1.0);
    for (int i = 0; i < 2; ++i) {
        a.m[i] = l0.mean(i);
        a.M[i][0] = lx.mean(i) - l0.mean(i);
        a.M[i][1] = ly.mean(i) - l0.mean(i);
    }
    set_cholesky(a, l0.covariance(0, 0), l0.covariance(0, 1), l0.covariance(1, 1));
    return a;
}

struct path_state {
    double x, y;
};

struct stepper {
    process_kind process;
    const process_params& p;
    scheme method;
    double h, sqh, rho_bar;
    affine_map exact;
    double cauchy_decay = 0.0, cauchy_B = 0.0;

    // Feller-type diffusion clamp: full truncation clamps drift and diffusion,
    // plain Euler only the square root.
    double drift_var(double v) const { return method == scheme::full_truncation_euler ? std::max(v, 0.0) : v; }

    void advance(path_state& s, path_rng& rng, std::normal_distribution<double>& normal) const {
        if (method == scheme::exact_gaussian) {
            if (process == process_kind::anomalous_ou_cauchy) {
                double c = std::tan(pi * (rng.uniform_open() - 0.5));
                s.y = cauchy_decay * s.y + p.chi * cauchy_B + p.epsilon * cauchy_B * c;
                return;
            }
            if (!exact.two_d) {
                s.y = exact.M[1][1] * s.y + exact.m[1] + exact.L[1][1] * normal(rng);
                return;
            }
            double z0 = normal(rng), z1 = normal(rng);
            double x = exact.M[0][0] * s.x + exact.M[0][1] * s.y + exact.m[0] + exact.L[0][0] * z0;
            double y = exact.M[1][0] * s.x + exact.M[1][1] * s.y + exact.m[1] + exact.L[1][0] * z0 +
                       exact.L[1][1] * z1;
            s = {x, y};
            return;
        }
        double z1 = normal(rng);
        double dwy = sqh * z1;
        // Only processes with a second driver draw it, so 1-D paths stay cheap.
        auto dwx = [&] { return sqh * (p.rho * z1 + rho_bar * normal(rng)); };
        switch (process) {
            case process_kind::kolmogorov: {
                double y = s.y + p.b * h + p.sigma * dwy;
                s.x += 0.5 * (s.y + y) * h;
                s.y = y;
                break;
            }
            case process_kind::ou: s.y += (p.chi - p.kappa * s.y) * h + p.epsilon * dwy; break;
            case process_kind::augmented_ou: {
                double y = s.y + (p.chi - p.kappa * s.y) * h + p.epsilon * dwy;
                s.x += 0.5 * (s.y + y) * h;
                s.y = y;
                break;
            }
            case process_kind::feller:
            case process_kind::augmented_feller: {
                double vp = std::max(s.y, 0.0);
                double y = s.y + (p.chi - p.kappa * drift_var(s.y)) * h + p.epsilon * std::sqrt(vp) * dwy;
                if (process == process_kind::augmented_feller) {
                    if (p.correlated) s.x += std::sqrt(vp) * dwx();
                    else s.x += 0.5 * (drift_var(s.y) + drift_var(y)) * h;
                }
                s.y = y;
                break;
            }
            case process_kind::heston_log: {
                double vp = std::max(s.y, 0.0);
                s.x += (p.r - 0.5 * vp) * h + std::sqrt(vp) * dwx();
                s.y += (p.chi - p.kappa * drift_var(s.y)) * h + p.epsilon * std::sqrt(vp) * dwy;
                break;
            }
            case process_kind::stein_stein:
                s.x += (p.r - 0.5 * s.y * s.y) * h + s.y * dwx();
                s.y += (p.chi - p.kappa * s.y) * h + p.epsilon * dwy;
                break;
            case process_kind::path_dependent: {
                double vp = std::max(p.a0 + p.a1 * (s.y - s.x), 0.0);
                double dx = p.kappa_average * (s.y - s.x) * h;
                s.y += (p.log_price_drift ? -0.5 * vp * h : 0.0) + std::sqrt(vp) * dwy;
                s.x += dx;
                break;
            }
            case process_kind::anomalous_ou_cauchy: {
                double c = std::tan(pi * (rng.uniform_open() - 0.5));
                s.y += (p.chi - p.kappa * s.y) * h + p.epsilon * h * c;
                break;
            }
            case process_kind::vasicek_rate_equity:
                s.x += (s.y - 0.5 * p.sigma * p.sigma) * h + p.sigma * dwx();
                s.y += (p.chi - p.kappa * s.y) * h + p.epsilon * dwy;
                break;
        }
    }
};

}  // namespace

void sim_spec::validate() const {
    require(dt > 0.0 && std::isfinite(dt), "sim_spec: dt must be positive");
    require(horizon > 0.0 && std::isfinite(horizon), "sim_spec: horizon must be positive");
    require(n_paths >= 100, "sim_spec: at least 100 paths are required");
}

path_rng::path_rng(std::uint64_t base_seed, std::uint64_t path_index)
    : state_(splitmix(base_seed) ^ splitmix(path_index + 0x632BE59BD9B4E019ull)) {}

path_rng::result_type path_rng::operator()() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double path_rng::uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

sim_result simulate(process_kind process, const process_params& params, const sim_spec& spec) {
    spec.validate();
    validate_params(process, params);
    sim_result res;
    if (spec.method == scheme::exact_gaussian)
        require(has_exact_transition(process), "simulate: exact sampling needs a Gaussian or Cauchy OU process");
    if (is_feller_type(process) && params.epsilon > 0.0) {
        double vartheta = 2.0 * params.chi / (params.epsilon * params.epsilon) - 1.0;
        if (spec.method == scheme::euler && vartheta < 1.0)
            res.warnings.push_back("plain Euler with vartheta < 1: the scheme can cross y = 0");
        if (spec.method == scheme::full_truncation_euler && vartheta < 0.0)
            res.warnings.push_back("full truncation with vartheta < 0 is biased near the attainable boundary");
    }

    std::size_t n_steps = static_cast<std::size_t>(std::ceil(spec.horizon / spec.dt - 1e-9));
    n_steps = std::max<std::size_t>(n_steps, 1);
    double h = spec.horizon / static_cast<double>(n_steps);
    stepper st{process, params, spec.method, h, std::sqrt(h), std::sqrt(1.0 - params.rho * params.rho), {}};
    if (spec.method == scheme::exact_gaussian) {
        if (process == process_kind::anomalous_ou_cauchy) {
            st.cauchy_decay = ode::exp_A(params.kappa, h);
            st.cauchy_B = ode::exp_B(params.kappa, h);
        } else {
            st.exact = exact_map(process, params, h);
        }
    }
    double ema_keep = std::exp(-params.ema_rate * h);

    std::size_t n = spec.n_paths;
    auto& s = res.samples;
    for (auto* v : {&s.x, &s.y, &s.int_x, &s.int_y, &s.int_exp_x, &s.ema_x, &s.min_y}) v->assign(n, 0.0);

    constexpr std::size_t block = 256;
    std::size_t n_blocks = (n + block - 1) / block;
    parallel_for(
        n_blocks,
        [&](std::size_t b) {
            for (std::size_t i = b * block; i < std::min(n, (b + 1) * block); ++i) {
                path_rng rng(spec.base_seed, i);
                std::normal_distribution<double> normal;
                path_state z{params.x0, params.y0};
                double ix = 0.0, iy = 0.0, iex = 0.0, ema = params.x0, mn = params.y0;
                for (std::size_t k = 0; k < n_steps; ++k) {
                    path_state prev = z;
                    st.advance(z, rng, normal);
                    ix += 0.5 * (prev.x + z.x) * h;
                    iy += 0.5 * (prev.y + z.y) * h;
                    iex += 0.5 * (std::exp(prev.x) + std::exp(z.x)) * h;
                    ema = ema_keep * ema + (1.0 - ema_keep) * 0.5 * (prev.x + z.x);
                    mn = std::min(mn, z.y);
                }
                s.x[i] = z.x;
                s.y[i] = z.y;
                s.int_x[i] = ix;
                s.int_y[i] = iy;
                s.int_exp_x[i] = iex;
                s.ema_x[i] = ema;
                s.min_y[i] = mn;
            }
        },
        spec.threads ? spec.threads : worker_count());

    res.steps = n_steps;
    res.x = sample_moment(s.x);
    res.y = sample_moment(s.y);
    res.correlation = sample_correlation(s.x, s.y);
    res.correlation_se = (1.0 - res.correlation * res.correlation) / std::sqrt(static_cast<double>(n));
    return res;
}

moment sample_moment(const std::vector<double>& v) {
    require(v.size() >= 2, "sample_moment: need at least two samples");
    double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double a : v) mean += a;
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double a : v) {
        double d = (a - mean) * (a - mean);
        m2 += d;
        m4 += d * d;
    }
    moment m;
    m.mean = mean;
    m.variance = m2 / (n - 1.0);
    m.mean_se = std::sqrt(m.variance / n);
    m4 /= n;
    double s2 = m2 / n;
    m.variance_se = std::sqrt(std::max(m4 - s2 * s2, 0.0) / n);
    return m;
}

double sample_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    require(a.size() == b.size() && a.size() >= 2, "sample_correlation: size mismatch");
    double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ma += a[i], mb += b[i];
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

namespace {

struct law_moments {
    double mean_x = 0, var_x = 0, mean_y = 0, var_y = 0, corr = 0;
};

law_moments integrate_moments(const analytic_density& law) {
    law_moments m;
    if (law.target == coordinate::joint) {
        require(static_cast<bool>(law.joint), "verify_density: joint density missing");
        num::gauss_legendre gx(160, law.x_lo, law.x_hi), gy(160, law.y_lo, law.y_hi);
        double mass = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        for (std::size_t i = 0; i < gx.nodes.size(); ++i)
            for (std::size_t j = 0; j < gy.nodes.size(); ++j) {
                double x = gx.nodes[i], y = gy.nodes[j];
                double w = gx.weights[i] * gy.weights[j] * law.joint(x, y);
                mass += w, sx += w * x, sy += w * y, sxx += w * x * x, syy += w * y * y, sxy += w * x * y;
            }
        m.mean_x = sx / mass;
        m.mean_y = sy / mass;
        m.var_x = sxx / mass - m.mean_x * m.mean_x;
        m.var_y = syy / mass - m.mean_y * m.mean_y;
        m.corr = (sxy / mass - m.mean_x * m.mean_y) / std::sqrt(m.var_x * m.var_y);
        return m;
    }
    require(static_cast<bool>(law.marginal), "verify_density: marginal density missing");
    bool on_x = law.target == coordinate::x;
    double lo = on_x ? law.x_lo : law.y_lo, hi = on_x ? law.x_hi : law.y_hi;
    num::gauss_legendre g(400, lo, hi);
    double mass = 0, s1 = 0, s2 = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        double w = g.weights[i] * law.marginal(g.nodes[i]);
        mass += w, s1 += w * g.nodes[i], s2 += w * g.nodes[i] * g.nodes[i];
    }
    double mean = s1 / mass, var = s2 / mass - mean * mean;
    (on_x ? m.mean_x : m.mean_y) = mean;
    (on_x ? m.var_x : m.var_y) = var;
    return m;
}

verdict moments_verdict(const analytic_density& law, const sim_result& s) {
    bool need_x = law.target != coordinate::y, need_y = law.target != coordinate::x;
    bool missing = (need_x && (!law.mean_x || !law.var_x)) || (need_y && (!law.mean_y || !law.var_y)) ||
                   (law.target == coordinate::joint && !law.corr);
    law_moments ref = missing ? integrate_moments(law) : law_moments{};
    auto pick = [](const std::optional<double>& given, double fallback) { return given ? *given : fallback; };

    verdict v;
    std::ostringstream detail;
    auto check = [&](const char* name, double sample, double target, double se) {
        double z = se > 0.0 ? std::abs(sample - target) / se : (sample == target ? 0.0 : INFINITY);
        v.statistic = std::max(v.statistic, z);
        ++v.cells;
        detail << (v.cells > 1 ? "; " : "") << name << " z=" << z;
    };
    auto mx = sample_moment(s.samples.x), my = sample_moment(s.samples.y);
    if (need_x) {
        check("mean_x", mx.mean, pick(law.mean_x, ref.mean_x), mx.mean_se);
        check("var_x", mx.variance, pick(law.var_x, ref.var_x), mx.variance_se);
    }
    if (need_y) {
        check("mean_y", my.mean, pick(law.mean_y, ref.mean_y), my.mean_se);
        check("var_y", my.variance, pick(law.var_y, ref.var_y), my.variance_se);
    }
    if (law.target == coordinate::joint) check("corr", s.correlation, pick(law.corr, ref.corr), s.correlation_se);
    v.pass = v.statistic < 3.0;
    v.detail = detail.str();
    return v;
}

// Cells are merged in order until each holds >= 20 expected counts; any
// grouping of cells keeps the statistic chi-square distributed.
verdict chi_square(std::vector<double> expected, std::vector<double> observed, double alpha) {
    constexpr double min_expected = 20.0;
    std::vector<double> e, o;
    double ae = 0.0, ao = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        ae += expected[i];
        ao += observed[i];
        if (ae >= min_expected) {
            e.push_back(ae), o.push_back(ao);
            ae = ao = 0.0;
        }
    }
    if (!e.empty()) e.back() += ae, o.back() += ao;
    verdict v;
    v.cells = static_cast<int>(e.size());
    if (e.size() < 2) throw numerical_error("verify_density: too few populated bins for a chi-square test");
    for (std::size_t i = 0; i < e.size(); ++i) v.statistic += (o[i] - e[i]) * (o[i] - e[i]) / e[i];
    v.p_value = gsl_cdf_chisq_Q(v.statistic, static_cast<double>(e.size() - 1));
    v.pass = v.p_value > alpha;
    std::ostringstream d;
    d << "chi2=" << v.statistic << " dof=" << e.size() - 1 << " p=" << v.p_value;
    v.detail = d.str();
    return v;
}

int pick_bins(std::size_t n, bool joint) {
    if (joint) return static_cast<int>(std::clamp(std::sqrt(static_cast<double>(n) / 40.0), 4.0, 40.0));
    return static_cast<int>(std::clamp(static_cast<double>(n) / 100.0, 10.0, 200.0));
}

verdict histogram_verdict(const analytic_density& law, const sim_result& s, double alpha) {
    double n = static_cast<double>(s.samples.y.size());
    int nb = law.bins > 0 ? law.bins : pick_bins(s.samples.y.size(), law.target == coordinate::joint);
    constexpr int gl_points = 8;
    if (law.target == coordinate::joint) {
        require(static_cast<bool>(law.joint), "verify_density: joint density missing");
        require(law.x_hi > law.x_lo && law.y_hi > law.y_lo, "verify_density: empty histogram box");
        double wx = (law.x_hi - law.x_lo) / nb, wy = (law.y_hi - law.y_lo) / nb;
        std::vector<double> expected(nb * nb + 1, 0.0), observed(nb * nb + 1, 0.0);
        double inside = 0.0;
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j) {
                num::gauss_legendre gx(gl_points, law.x_lo + i * wx, law.x_lo + (i + 1) * wx);
                num::gauss_legendre gy(gl_points, law.y_lo + j * wy, law.y_lo + (j + 1) * wy);
                double m = 0.0;
                for (int a = 0; a < gl_points; ++a)
                    for (int b = 0; b < gl_points; ++b)
                        m += gx.weights[a] * gy.weights[b] * law.joint(gx.nodes[a], gy.nodes[b]);
                expected[i * nb + j] = n * m;
                inside += m;
            }
        expected[nb * nb] = n * std::max(1.0 - inside, 0.0);
        for (std::size_t k = 0; k < s.samples.x.size(); ++k) {
            double fx = (s.samples.x[k] - law.x_lo) / wx, fy = (s.samples.y[k] - law.y_lo) / wy;
            bool in = fx >= 0 && fx < nb && fy >= 0 && fy < nb;
            observed[in ? static_cast<int>(fx) * nb + static_cast<int>(fy) : nb * nb] += 1.0;
        }
        return chi_square(std::move(expected), std::move(observed), alpha);
    }
    require(static_cast<bool>(law.marginal), "verify_density: marginal density missing");
    bool on_x = law.target == coordinate::x;
    const auto& data = on_x ? s.samples.x : s.samples.y;
    double lo = on_x ? law.x_lo : law.y_lo, hi = on_x ? law.x_hi : law.y_hi;
    require(hi > lo, "verify_density: empty histogram range");
    double w = (hi - lo) / nb;
    std::vector<double> expected(nb + 1, 0.0), observed(nb + 1, 0.0);
    double inside = 0.0;
    for (int i = 0; i < nb; ++i) {
        num::gauss_legendre g(gl_points, lo + i * w, lo + (i + 1) * w);
        double m = 0.0;
        for (int a = 0; a < gl_points; ++a) m += g.weights[a] * law.marginal(g.nodes[a]);
        expected[i] = n * m;
        inside += m;
    }
    expected[nb] = n * std::max(1.0 - inside, 0.0);
    for (double v : data) {
        double f = (v - lo) / w;
        observed[f >= 0 && f < nb ? static_cast<int>(f) : nb] += 1.0;
    }
    return chi_square(std::move(expected), std::move(observed), alpha);
}

}  // namespace

verdict verify_density(const analytic_density& law, const sim_result& samples, report_kind report, double alpha) {
    require(samples.samples.y.size() >= min_verify_samples, "verify_density: at least 10^4 samples are required");
    require(samples.samples.x.size() == samples.samples.y.size(), "verify_density: inconsistent samples");
    return report == report_kind::moments ? moments_verdict(law, samples) : histogram_verdict(law, samples, alpha);
}

}  // namespace ak::mc
