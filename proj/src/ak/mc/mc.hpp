#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ak::mc {

enum class process_kind {
    kolmogorov,           // dx = y dt, dy = b dt + sigma dW
    ou,                   // dy = (chi - kappa y) dt + eps dW; x stays at x0
    augmented_ou,         // ou with x = x0 + int y
    feller,               // dy = (chi - kappa y) dt + eps sqrt(y) dW; x stays at x0
    augmented_feller,     // feller with x = x0 + int y, or dx = sqrt(y) dW' (correlated)
    heston_log,           // x = ln S, dx = (r - y/2) dt + sqrt(y) dW, y the Feller variance
    stein_stein,          // x = ln S, dx = (r - y^2/2) dt + y dW, y the OU volatility
    path_dependent,       // x = ln(A/K), y = ln(S/K), dx = kappa (y - x) dt, dy = sqrt(v) dW
    anomalous_ou_cauchy,  // dy = (chi - kappa y) dt + eps dL, L symmetric Cauchy
    vasicek_rate_equity,  // y = short rate (ou), x = ln S, dx = (y - sigma^2/2) dt + sigma dW
};

enum class scheme { euler, full_truncation_euler, exact_gaussian };

// One flat parameter block; each process reads the fields named in its
// comment above. `rho` correlates the noise of x with the noise of y.
struct process_params {
    double x0 = 0.0, y0 = 0.0;
    double chi = 0.0, kappa = 0.0, epsilon = 0.0;
    double b = 0.0, sigma = 0.0;  // kolmogorov drift and noise; equity volatility
    double rho = 0.0;
    double r = 0.0;                       // heston_log, stein_stein
    double a0 = 0.0, a1 = 0.0;            // path_dependent: v = a0 + a1 (y - x)
    double kappa_average = 0.0;           // path_dependent averaging rate
    bool correlated = false;              // augmented_feller: x is the correlated log-price
    bool log_price_drift = false;         // path_dependent: add -v/2 so that S = K e^y is a martingale
    double ema_rate = 0.0;                // rate of the exponential average of x, 0 = off
};

struct sim_spec {
    double dt = 0.01;
    std::size_t n_paths = 10000;
    double horizon = 1.0;
    std::uint64_t base_seed = 1;
    scheme method = scheme::full_truncation_euler;
    unsigned threads = 0;  // 0 = worker_count()
    void validate() const;
};

struct moment {
    double mean = 0.0, mean_se = 0.0;
    double variance = 0.0, variance_se = 0.0;
};

// Per-path terminal values, indexed by path id.
struct sim_samples {
    std::vector<double> x, y;
    std::vector<double> int_x, int_y;  // trapezoidal time integrals
    std::vector<double> int_exp_x;     // int e^x dt, the arithmetic average for log-prices
    std::vector<double> ema_x;         // exponential average of x at ema_rate
    std::vector<double> min_y;         // running minimum of y
};

struct sim_result {
    sim_samples samples;
    moment x, y;
    double correlation = 0.0, correlation_se = 0.0;
    std::size_t steps = 0;
    std::vector<std::string> warnings;
};

sim_result simulate(process_kind process, const process_params& params, const sim_spec& spec);

// Mean, variance and their standard errors of any per-path statistic.
moment sample_moment(const std::vector<double>& v);
double sample_correlation(const std::vector<double>& a, const std::vector<double>& b);

// The generator behind every path: splitmix64 keyed by (base_seed, path_index).
class path_rng {
  public:
    using result_type = std::uint64_t;
    path_rng(std::uint64_t base_seed, std::uint64_t path_index);
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }
    result_type operator()();
    double uniform_open();  // in (0, 1)

  private:
    std::uint64_t state_;
};

enum class report_kind { moments, histogram_chi2 };
enum class coordinate { x, y, joint };

// Reference law for verify_density. Moments not given explicitly are
// integrated from the density over the box [x_lo, x_hi] x [y_lo, y_hi].
struct analytic_density {
    coordinate target = coordinate::y;
    std::function<double(double)> marginal;        // coordinate x or y
    std::function<double(double, double)> joint;   // (x, y)
    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
    std::optional<double> mean_x, var_x, mean_y, var_y, corr;
    int bins = 0;  // per axis; 0 picks from the sample size
};

struct verdict {
    bool pass = false;
    double statistic = 0.0;  // chi-square, or the largest |z| in moments mode
    double p_value = 1.0;    // histogram mode
    int cells = 0;           // bins after merging, or number of moment checks
    std::string detail;
};

// Moments pass when every z-score is below 3; the chi-square passes when
// p > alpha. Needs at least 10^4 samples.
verdict verify_density(const analytic_density& law, const sim_result& samples, report_kind report,
                       double alpha = 0.01);

inline constexpr std::size_t min_verify_samples = 10000;

}  // namespace ak::mc
