#include "affine_kelvin/affine_kelvin.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ak/amm/amm.hpp"
#include "ak/core/errors.hpp"
#include "ak/core/parallel.hpp"
#include "ak/gaussian/gaussian.hpp"
#include "ak/hydro/kelvin_waves.hpp"
#include "ak/mc/mc.hpp"
#include "ak/nongaussian/anomalous.hpp"
#include "ak/nongaussian/aug_feller.hpp"
#include "ak/nongaussian/feller.hpp"
#include "ak/ode/exp_helpers.hpp"
#include "ak/pricing/exotics.hpp"
#include "ak/pricing/rates.hpp"
#include "ak/pricing/vanilla.hpp"

struct ak_table {
    std::vector<std::string> columns;
    std::vector<double> data;
    std::vector<std::string> notes;
    std::vector<std::string> warnings;

    explicit ak_table(std::vector<std::string> cols) : columns(std::move(cols)) {}
    void add_row(std::initializer_list<double> values, std::string note = {}) {
        data.insert(data.end(), values.begin(), values.end());
        notes.push_back(std::move(note));
    }
    std::size_t rows() const { return notes.size(); }
};

struct ak_simulation {
    ak::mc::process_kind process;
    ak::mc::process_params params;
    ak::mc::sim_spec spec;
    ak::mc::sim_result result;
};

namespace {

thread_local std::string last_error;
const double not_a_number = std::numeric_limits<double>::quiet_NaN();

template <class F>
int guarded(F&& f) {
    last_error.clear();
    try {
        f();
        return AK_OK;
    } catch (const ak::invalid_argument& e) {
        last_error = e.what();
        return AK_INVALID_ARGUMENT;
    } catch (const ak::domain_error& e) {
        last_error = e.what();
        return AK_DOMAIN_ERROR;
    } catch (const ak::numerical_error& e) {
        last_error = e.what();
        return AK_NUMERICAL_ERROR;
    } catch (const std::exception& e) {
        last_error = e.what();
        return AK_INTERNAL_ERROR;
    } catch (...) {
        last_error = "unknown error";
        return AK_INTERNAL_ERROR;
    }
}

void need(const void* p, const char* what) { ak::require(p != nullptr, std::string(what) + " must not be null"); }

std::string join(const std::vector<std::string>& w) {
    std::string s;
    for (const auto& x : w) s += (s.empty() ? "" : "; ") + x;
    return s;
}

std::vector<double> linspace(double lo, double hi, int n) {
    ak::require(n >= 1, "grid needs at least one point");
    if (n == 1) return {lo};
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

ak::pricing::option_style to_style(ak_option_style s) {
    using ak::pricing::option_style;
    switch (s) {
        case AK_STYLE_FORWARD: return option_style::forward;
        case AK_STYLE_CALL: return option_style::call;
        case AK_STYLE_PUT: return option_style::put;
        case AK_STYLE_COVERED_CALL: return option_style::covered_call;
        case AK_STYLE_PEAKON: return option_style::peakon;
    }
    throw ak::invalid_argument("unknown option style");
}

ak::pricing::model_spec to_model(const ak_model& m) {
    using namespace ak::pricing;
    switch (m.kind) {
        case AK_MODEL_BACHELIER: return bachelier_model{m.sigma, m.r};
        case AK_MODEL_BLACK_SCHOLES: return black_scholes_model{m.sigma, m.r};
        case AK_MODEL_HESTON: return heston_model{m.v0, m.chi, m.kappa, m.epsilon, m.rho, m.r};
        case AK_MODEL_STEIN_STEIN: return stein_stein_model{m.sigma0, m.chi, m.kappa, m.epsilon, m.rho, m.r};
        case AK_MODEL_PATH_DEPENDENT: return path_dependent_model{m.a0, m.a1, m.kappa, m.average};
    }
    throw ak::invalid_argument("unknown model kind");
}

ak::num::quadrature_spec to_quadrature(const ak_quadrature* q) {
    ak::num::quadrature_spec s;
    if (!q) return s;
    switch (q->scheme) {
        case AK_QUAD_TRAPEZOID: s.scheme = ak::num::quad_scheme::trapezoid; break;
        case AK_QUAD_ADAPTIVE: s.scheme = ak::num::quad_scheme::adaptive; break;
        case AK_QUAD_FFT: s.scheme = ak::num::quad_scheme::fft_grid; break;
        default: throw ak::invalid_argument("unknown quadrature scheme");
    }
    s.node_count = q->node_count;
    s.truncation_halfwidth = q->truncation_halfwidth;
    s.abs_tol = q->abs_tol;
    s.validate();
    return s;
}

ak::pricing::bond_spec to_bond(const ak_rate& r, double maturity) {
    ak::pricing::bond_spec b;
    b.model = r.model == AK_RATE_CIR ? ak::pricing::short_rate_model::cir : ak::pricing::short_rate_model::vasicek;
    ak::require(r.model == AK_RATE_CIR || r.model == AK_RATE_VASICEK, "unknown short-rate model");
    b.chi = r.chi, b.kappa = r.kappa, b.epsilon = r.epsilon, b.maturity = maturity;
    b.validate();
    return b;
}

ak::mc::process_kind to_process(ak_process p) {
    using ak::mc::process_kind;
    ak::require(p >= AK_PROCESS_KOLMOGOROV && p <= AK_PROCESS_VASICEK_RATE_EQUITY, "unknown process");
    static const process_kind map[] = {
        process_kind::kolmogorov,   process_kind::ou,          process_kind::augmented_ou,
        process_kind::feller,       process_kind::augmented_feller, process_kind::heston_log,
        process_kind::stein_stein,  process_kind::path_dependent, process_kind::anomalous_ou_cauchy,
        process_kind::vasicek_rate_equity};
    return map[p];
}

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd z(2);
    z << a, b;
    return z;
}

// Reference law of a simulated process at its horizon.
ak::mc::analytic_density reference_law(const ak_simulation& s, ak::mc::report_kind report) {
    using namespace ak::mc;
    const auto& p = s.params;
    double T = s.spec.horizon;
    analytic_density d;
    auto box_from_samples = [&](const sim_result& r, double width) {
        d.x_lo = r.x.mean - width * std::sqrt(r.x.variance), d.x_hi = r.x.mean + width * std::sqrt(r.x.variance);
        d.y_lo = r.y.mean - width * std::sqrt(r.y.variance), d.y_hi = r.y.mean + width * std::sqrt(r.y.variance);
    };
    switch (s.process) {
        case process_kind::kolmogorov:
        case process_kind::augmented_ou: {
            auto law = s.process == process_kind::kolmogorov
                           ? ak::gauss::kolmogorov_tpdf(p.b, p.sigma, T, p.x0, p.y0)
                           : ak::gauss::augmented_ou_tpdf({p.chi, p.kappa, p.epsilon}, T, p.x0, p.y0);
            d.target = coordinate::joint;
            d.joint = [law](double x, double y) { return law.density(vec2(x, y)); };
            d.mean_x = law.mean(0), d.mean_y = law.mean(1);
            d.var_x = law.covariance(0, 0), d.var_y = law.covariance(1, 1);
            d.corr = law.covariance(0, 1) / std::sqrt(law.covariance(0, 0) * law.covariance(1, 1));
            double sx = std::sqrt(*d.var_x), sy = std::sqrt(*d.var_y);
            d.x_lo = *d.mean_x - 5 * sx, d.x_hi = *d.mean_x + 5 * sx;
            d.y_lo = *d.mean_y - 5 * sy, d.y_hi = *d.mean_y + 5 * sy;
            return d;
        }
        case process_kind::ou: {
            auto law = ak::gauss::ou_tpdf({p.chi, p.kappa, p.epsilon}, T, p.y0);
            d.marginal = [law](double y) { return law.marginal_density(0, y); };
            d.mean_y = law.mean(0), d.var_y = law.covariance(0, 0);
            double sy = std::sqrt(*d.var_y);
            d.y_lo = *d.mean_y - 5 * sy, d.y_hi = *d.mean_y + 5 * sy;
            return d;
        }
        case process_kind::feller: {
            ak::ng::feller_params f{p.chi, p.kappa, p.epsilon};
            f.validate();
            double A = ak::ode::exp_A(p.kappa, T), B = ak::ode::exp_B(p.kappa, T), e2 = p.epsilon * p.epsilon;
            d.mean_y = A * p.y0 + p.chi * B;
            d.var_y = p.y0 * e2 * A * B + 0.5 * p.chi * e2 * B * B;
            d.marginal = [f, y0 = p.y0, T](double y) {
                return y > 0.0 ? ak::ng::feller_tpdf(f, ak::ng::regularization::type_I_reflecting, 0.0, y0, T, y) : 0.0;
            };
            d.y_lo = 0.0, d.y_hi = *d.mean_y + 10.0 * std::sqrt(*d.var_y);
            return d;
        }
        case process_kind::augmented_feller: {
            ak::ng::feller_params f{p.chi, p.kappa, p.epsilon};
            f.validate();
            box_from_samples(s.result, 10.0);
            if (!p.correlated) d.x_lo = std::max(d.x_lo, p.x0);
            auto grid = linspace(d.x_lo, d.x_hi, 1025);
            std::optional<double> rho;
            if (p.correlated) rho = p.rho;
            auto w = ak::ng::aug_feller_marginal_x(f, rho, 0.0, p.x0, p.y0, T, grid);
            d.target = coordinate::x;
            d.marginal = [grid, w](double x) {
                if (x <= grid.front() || x >= grid.back()) return 0.0;
                double h = grid[1] - grid[0];
                std::size_t i = std::min(static_cast<std::size_t>((x - grid.front()) / h), grid.size() - 2);
                double t = (x - grid[i]) / h;
                return std::max((1.0 - t) * w[i] + t * w[i + 1], 0.0);
            };
            return d;
        }
        case process_kind::anomalous_ou_cauchy: {
            ak::require(report == report_kind::histogram_chi2, "mc verify: the Cauchy law has no moments");
            double half = p.epsilon * ak::ode::exp_B(p.kappa, T);
            double centre = ak::ode::exp_A(p.kappa, T) * p.y0 + p.chi * ak::ode::exp_B(p.kappa, T);
            d.marginal = [=](double y) { return ak::ng::anomalous_ou_tpdf(p.chi, p.kappa, p.epsilon, 0.0, p.y0, T, y); };
            d.y_lo = centre - 20.0 * half, d.y_hi = centre + 20.0 * half;
            return d;
        }
        default: throw ak::invalid_argument("mc verify: no closed reference law for this process");
    }
}

}  // namespace

extern "C" {

const char* ak_version(void) { return AK_VERSION; }
const char* ak_last_error(void) { return last_error.c_str(); }

size_t ak_table_rows(const ak_table* t) { return t ? t->rows() : 0; }
size_t ak_table_columns(const ak_table* t) { return t ? t->columns.size() : 0; }
const char* ak_table_column_name(const ak_table* t, size_t col) {
    return t && col < t->columns.size() ? t->columns[col].c_str() : nullptr;
}
double ak_table_value(const ak_table* t, size_t row, size_t col) {
    if (!t || row >= t->rows() || col >= t->columns.size()) return not_a_number;
    return t->data[row * t->columns.size() + col];
}
const char* ak_table_note(const ak_table* t, size_t row) {
    return t && row < t->rows() ? t->notes[row].c_str() : nullptr;
}
size_t ak_table_warning_count(const ak_table* t) { return t ? t->warnings.size() : 0; }
const char* ak_table_warning(const ak_table* t, size_t i) {
    return t && i < t->warnings.size() ? t->warnings[i].c_str() : nullptr;
}
void ak_table_free(ak_table* t) { delete t; }

void ak_density_request_init(ak_density_request* r) {
    if (!r) return;
    *r = {};
    r->model = AK_DENSITY_KOLMOGOROV;
    r->T = 1.0;
    r->sigma = 1.0;
    r->kappa = 1.0;
    r->epsilon = 1.0;
    r->x_lo = -3.0, r->x_hi = 3.0, r->y_lo = -3.0, r->y_hi = 3.0;
    r->nx = r->ny = 64;
}

int ak_density_grid(const ak_density_request* r, ak_table** out) {
    return guarded([&] {
        need(r, "request");
        need(out, "out");
        ak::require(r->T > 0.0, "density: T must be positive");
        bool joint = r->model == AK_DENSITY_KOLMOGOROV || r->model == AK_DENSITY_AUGMENTED_OU ||
                     r->model == AK_DENSITY_AUGMENTED_FELLER || r->model == AK_DENSITY_ANOMALOUS_KOLMOGOROV;
        auto ys = linspace(r->y_lo, r->y_hi, r->ny);
        auto xs = joint ? linspace(r->x_lo, r->x_hi, r->nx) : std::vector<double>{0.0};
        std::vector<double> values(xs.size() * ys.size());
        ak::gauss::ou_params ou{r->chi, r->kappa, r->epsilon};
        ak::ng::feller_params f{r->chi, r->kappa, r->epsilon};
        std::function<double(double, double)> pdf;
        switch (r->model) {
            case AK_DENSITY_KOLMOGOROV: {
                auto law = ak::gauss::kolmogorov_tpdf(r->b, r->sigma, r->T, r->x0, r->y0);
                pdf = [law](double x, double y) { return law.density(vec2(x, y)); };
                break;
            }
            case AK_DENSITY_OU: {
                auto law = ak::gauss::ou_tpdf(ou, r->T, r->y0);
                pdf = [law](double, double y) { return law.marginal_density(0, y); };
                break;
            }
            case AK_DENSITY_AUGMENTED_OU: {
                auto law = ak::gauss::augmented_ou_tpdf(ou, r->T, r->x0, r->y0);
                pdf = [law](double x, double y) { return law.density(vec2(x, y)); };
                break;
            }
            case AK_DENSITY_FELLER:
            case AK_DENSITY_FELLER_ABSORBING: {
                auto reg = r->model == AK_DENSITY_FELLER ? ak::ng::regularization::type_I_reflecting
                                                         : ak::ng::regularization::type_II_absorbing;
                pdf = [=](double, double y) { return ak::ng::feller_tpdf(f, reg, 0.0, r->y0, r->T, y); };
                break;
            }
            case AK_DENSITY_AUGMENTED_FELLER:
                pdf = [=](double x, double y) {
                    return ak::ng::aug_feller_tpdf(f, std::nullopt, 0.0, r->x0, r->y0, r->T, x, y);
                };
                break;
            case AK_DENSITY_ANOMALOUS_KOLMOGOROV:
                pdf = [=](double x, double y) {
                    return ak::ng::anomalous_kolmogorov_tpdf(r->sigma, r->b, 0.0, r->x0, r->y0, r->T, x, y);
                };
                break;
            case AK_DENSITY_ANOMALOUS_OU:
                pdf = [=](double, double y) {
                    return ak::ng::anomalous_ou_tpdf(r->chi, r->kappa, r->epsilon, 0.0, r->y0, r->T, y);
                };
                break;
            default: throw ak::invalid_argument("density: unknown model");
        }
        ak::parallel_for(values.size(), [&](std::size_t k) {
            values[k] = pdf(xs[k / ys.size()], ys[k % ys.size()]);
        });
        auto t = std::make_unique<ak_table>(joint ? std::vector<std::string>{"x", "y", "density"}
                                                  : std::vector<std::string>{"y", "density"});
        for (std::size_t k = 0; k < values.size(); ++k) {
            double x = xs[k / ys.size()], y = ys[k % ys.size()];
            if (joint) t->add_row({x, y, values[k]});
            else t->add_row({y, values[k]});
        }
        *out = t.release();
    });
}

void ak_model_init(ak_model* m, ak_model_kind kind) {
    if (!m) return;
    *m = {};
    m->kind = kind;
    m->sigma = 0.2;
    m->average = 1.0;
}

void ak_quadrature_init(ak_quadrature* q) {
    if (!q) return;
    ak::num::quadrature_spec s;
    q->scheme = AK_QUAD_TRAPEZOID;
    q->node_count = s.node_count;
    q->truncation_halfwidth = s.truncation_halfwidth;
    q->abs_tol = s.abs_tol;
}

int ak_price_surface(const ak_model* m, ak_option_style style, double spot, const double* strikes, size_t n_strikes,
                     const double* maturities, size_t n_maturities, const ak_quadrature* q, ak_table** out) {
    return guarded([&] {
        need(m, "model");
        need(out, "out");
        ak::require(n_strikes > 0 && n_maturities > 0, "price: need at least one strike and maturity");
        need(strikes, "strikes");
        need(maturities, "maturities");
        auto model = to_model(*m);
        auto st = to_style(style);
        auto quad = to_quadrature(q);
        double r = m->kind == AK_MODEL_PATH_DEPENDENT ? 0.0 : m->r;
        auto t = std::make_unique<ak_table>(
            std::vector<std::string>{"id", "maturity", "strike", "value", "error_estimate", "implied_vol"});
        std::vector<double> K(strikes, strikes + n_strikes);
        std::size_t id = 0;
        for (std::size_t j = 0; j < n_maturities; ++j) {
            double T = maturities[j];
            auto quotes = ak::pricing::price_strikes(st, T, K, spot, model, quad);
            for (std::size_t i = 0; i < n_strikes; ++i) {
                double iv = not_a_number;
                if (st == ak::pricing::option_style::call || st == ak::pricing::option_style::put) {
                    try {
                        iv = ak::pricing::implied_vol(quotes[i].value, {K[i], T, st}, spot, r);
                    } catch (const ak::invalid_argument&) {
                        quotes[i].warnings.push_back("implied volatility undefined");
                    }
                }
                t->add_row({static_cast<double>(id++), T, K[i], quotes[i].value, quotes[i].error_estimate, iv},
                           join(quotes[i].warnings));
            }
        }
        *out = t.release();
    });
}

int ak_implied_vol(double price, ak_option_style style, double strike, double maturity, double spot, double r,
                   double* vol) {
    return guarded([&] {
        need(vol, "vol");
        *vol = ak::pricing::implied_vol(price, {strike, maturity, to_style(style)}, spot, r);
    });
}

void ak_swap_request_init(ak_swap_request* r) {
    if (!r) return;
    *r = {};
    r->kind = AK_VAR_SWAP_FELLER;
    r->kappa = 1.0;
    r->phi = 1.0;
}

int ak_swap_values(const ak_swap_request* r, const double* maturities, size_t n_maturities, const double* strikes,
                   size_t n_strikes, ak_table** out) {
    return guarded([&] {
        need(r, "request");
        need(out, "out");
        need(maturities, "maturities");
        using ak::pricing::swap_kind;
        ak::require(r->kind >= AK_VOL_SWAP && r->kind <= AK_VAR_SWAPTION, "swap: unknown kind");
        static const swap_kind map[] = {swap_kind::vol_swap, swap_kind::vol_swaption, swap_kind::var_swap_feller,
                                        swap_kind::var_swap_ou2, swap_kind::var_swaption};
        swap_kind kind = map[r->kind];
        bool option = kind == swap_kind::vol_swaption || kind == swap_kind::var_swaption;
        std::vector<double> K = {0.0};
        if (option) {
            ak::require(strikes && n_strikes > 0, "swap: swaptions need strikes");
            K.assign(strikes, strikes + n_strikes);
        }
        ak::pricing::swap_params p{r->chi, r->kappa, r->epsilon, r->r, r->phi};
        auto t = std::make_unique<ak_table>(std::vector<std::string>{"maturity", "strike", "value", "error_estimate"});
        for (std::size_t j = 0; j < n_maturities; ++j)
            for (double k : K) {
                auto q = ak::pricing::vol_var_swap(kind, p, r->y0, maturities[j], k);
                t->add_row({maturities[j], option ? k : not_a_number, q.value, q.error_estimate}, join(q.warnings));
            }
        *out = t.release();
    });
}

int ak_bond_curve(const ak_rate* r, const double* maturities, size_t n, ak_table** out) {
    return guarded([&] {
        need(r, "rate");
        need(out, "out");
        need(maturities, "maturities");
        auto t = std::make_unique<ak_table>(std::vector<std::string>{"maturity", "price", "yield", "error_estimate"});
        for (std::size_t i = 0; i < n; ++i) {
            auto q = ak::pricing::bond_price(to_bond(*r, maturities[i]), r->y0);
            double T = maturities[i];
            t->add_row({T, q.value, T > 0.0 ? -std::log(q.value) / T : r->y0, q.error_estimate}, join(q.warnings));
        }
        *out = t.release();
    });
}

int ak_bond_option(const ak_rate* r, double option_maturity, double bond_maturity, double strike, double phi,
                   double* value) {
    return guarded([&] {
        need(r, "rate");
        need(value, "value");
        *value = ak::pricing::bond_option_price(to_bond(*r, option_maturity), r->y0, option_maturity, bond_maturity,
                                                strike, phi)
                     .value;
    });
}

int ak_stochastic_rate_european(const ak_rate* r, ak_option_style style, double spot, double strike, double maturity,
                                double sigma, double rho, double* value) {
    return guarded([&] {
        need(r, "rate");
        need(value, "value");
        *value = ak::pricing::stochastic_rate_european({strike, maturity, to_style(style)}, spot, sigma, rho,
                                                       to_bond(*r, maturity), r->y0)
                     .value;
    });
}

int ak_amm_loss_curve(ak_pool_rule rule, double alpha, const double* prices, size_t n, ak_table** out) {
    return guarded([&] {
        need(out, "out");
        need(prices, "prices");
        ak::amm::pool_rule pr;
        switch (rule) {
            case AK_RULE_SUM: pr.kind = ak::amm::rule_kind::constant_sum; break;
            case AK_RULE_PRODUCT: pr.kind = ak::amm::rule_kind::constant_product; break;
            case AK_RULE_MIXED: pr.kind = ak::amm::rule_kind::mixed; break;
            default: throw ak::invalid_argument("amm: unknown rule");
        }
        pr.alpha = alpha;
        auto t = std::make_unique<ak_table>(std::vector<std::string>{"S", "x_star", "y_star", "omega", "lambda"});
        for (std::size_t i = 0; i < n; ++i) {
            auto a = ak::amm::optimal_arbitrage(pr, prices[i]);
            auto l = ak::amm::impermanent_loss(pr, prices[i]);
            t->add_row({prices[i], a.x_star, a.y_star, l.omega, l.lambda});
        }
        *out = t.release();
    });
}

int ak_amm_hedge(const ak_heston* h, const double* maturities, size_t n, ak_table** out) {
    return guarded([&] {
        need(h, "heston");
        need(out, "out");
        need(maturities, "maturities");
        ak::amm::heston_params m{h->chi, h->kappa, h->epsilon, h->rho, h->v0};
        auto rows = ak::amm::hedge_gap_report(m, std::span<const double>(maturities, n));
        auto t = std::make_unique<ak_table>(std::vector<std::string>{"T", "u_ex", "u_lc", "u_ec", "gap"});
        for (const auto& r : rows) t->add_row({r.T, r.u_ex, r.u_lc, r.u_ec, r.gap});
        *out = t.release();
    });
}

int ak_hydro_stability(double s, double w, double nu, int grid, double T, double dt, ak_table** out) {
    return guarded([&] {
        need(out, "out");
        auto rep = ak::hydro::classify_stability(ak::hydro::linear_flow::planar_elliptic(s, w), grid, T, dt, nu);
        auto t = std::make_unique<ak_table>(std::vector<std::string>{"angle", "exponent", "growth_ratio", "bounded"});
        for (const auto& o : rep.orientations)
            t->add_row({o.angle, o.exponent, o.growth_ratio, o.bounded ? 1.0 : 0.0});
        if (rep.unstable) t->warnings.push_back("unbounded growth for some orientation");
        *out = t.release();
    });
}

void ak_process_params_init(ak_process_params* p) {
    if (p) *p = {};
}

void ak_sim_spec_init(ak_sim_spec* s) {
    if (!s) return;
    ak::mc::sim_spec d;
    s->dt = d.dt;
    s->n_paths = d.n_paths;
    s->horizon = d.horizon;
    s->base_seed = d.base_seed;
    s->scheme = AK_SCHEME_FULL_TRUNCATION;
}

int ak_simulate(ak_process process, const ak_process_params* p, const ak_sim_spec* s, ak_simulation** out) {
    return guarded([&] {
        need(p, "params");
        need(s, "spec");
        need(out, "out");
        auto sim = std::make_unique<ak_simulation>();
        sim->process = to_process(process);
        auto& q = sim->params;
        q.x0 = p->x0, q.y0 = p->y0, q.chi = p->chi, q.kappa = p->kappa, q.epsilon = p->epsilon;
        q.b = p->b, q.sigma = p->sigma, q.rho = p->rho, q.r = p->r;
        q.a0 = p->a0, q.a1 = p->a1, q.kappa_average = p->kappa_average;
        q.correlated = p->correlated != 0, q.log_price_drift = p->log_price_drift != 0, q.ema_rate = p->ema_rate;
        auto& sp = sim->spec;
        sp.dt = s->dt, sp.n_paths = s->n_paths, sp.horizon = s->horizon, sp.base_seed = s->base_seed;
        switch (s->scheme) {
            case AK_SCHEME_EULER: sp.method = ak::mc::scheme::euler; break;
            case AK_SCHEME_FULL_TRUNCATION: sp.method = ak::mc::scheme::full_truncation_euler; break;
            case AK_SCHEME_EXACT: sp.method = ak::mc::scheme::exact_gaussian; break;
            default: throw ak::invalid_argument("simulate: unknown scheme");
        }
        sim->result = ak::mc::simulate(sim->process, q, sp);
        *out = sim.release();
    });
}

void ak_simulation_free(ak_simulation* sim) { delete sim; }

int ak_simulation_samples(const ak_simulation* sim, ak_table** out) {
    return guarded([&] {
        need(sim, "simulation");
        need(out, "out");
        const auto& s = sim->result.samples;
        auto t = std::make_unique<ak_table>(
            std::vector<std::string>{"path_id", "x", "y", "int_x", "int_y", "int_exp_x", "ema_x", "min_y"});
        for (std::size_t i = 0; i < s.y.size(); ++i)
            t->add_row({static_cast<double>(i), s.x[i], s.y[i], s.int_x[i], s.int_y[i], s.int_exp_x[i], s.ema_x[i],
                        s.min_y[i]});
        *out = t.release();
    });
}

int ak_simulation_moments(const ak_simulation* sim, ak_table** out) {
    return guarded([&] {
        need(sim, "simulation");
        need(out, "out");
        const auto& r = sim->result;
        auto t = std::make_unique<ak_table>(std::vector<std::string>{"value", "standard_error"});
        t->add_row({r.x.mean, r.x.mean_se}, "mean_x");
        t->add_row({r.x.variance, r.x.variance_se}, "var_x");
        t->add_row({r.y.mean, r.y.mean_se}, "mean_y");
        t->add_row({r.y.variance, r.y.variance_se}, "var_y");
        t->add_row({r.correlation, r.correlation_se}, "corr_xy");
        t->warnings = r.warnings;
        *out = t.release();
    });
}

int ak_mc_verify(const ak_simulation* sim, ak_report report, double alpha, ak_table** out) {
    return guarded([&] {
        need(sim, "simulation");
        need(out, "out");
        ak::require(report == AK_REPORT_MOMENTS || report == AK_REPORT_CHI2, "mc verify: unknown report");
        auto kind = report == AK_REPORT_MOMENTS ? ak::mc::report_kind::moments : ak::mc::report_kind::histogram_chi2;
        auto v = ak::mc::verify_density(reference_law(*sim, kind), sim->result, kind, alpha);
        auto t = std::make_unique<ak_table>(std::vector<std::string>{"pass", "statistic", "p_value", "cells"});
        t->add_row({v.pass ? 1.0 : 0.0, v.statistic, kind == ak::mc::report_kind::moments ? not_a_number : v.p_value,
                    static_cast<double>(v.cells)},
                   v.detail);
        t->warnings = sim->result.warnings;
        *out = t.release();
    });
}

}  // extern "C"
