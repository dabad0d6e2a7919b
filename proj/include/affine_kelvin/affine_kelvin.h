#ifndef AFFINE_KELVIN_H
#define AFFINE_KELVIN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define AK_API __attribute__((visibility("default")))
#else
#define AK_API
#endif

/* Every function returning int returns one of these. On failure the message
 * is available from ak_last_error() on the calling thread until the next
 * call into the library from that thread. */
typedef enum {
    AK_OK = 0,
    AK_INVALID_ARGUMENT = 1, /* malformed input, out-of-range parameter */
    AK_DOMAIN_ERROR = 2,     /* well formed but outside the model's domain */
    AK_NUMERICAL_ERROR = 3,  /* quadrature failure, explosion, non-convergence */
    AK_INTERNAL_ERROR = 4
} ak_status;

AK_API const char* ak_version(void);
AK_API const char* ak_last_error(void);

/* ---- Result tables ------------------------------------------------------
 * Row-major numeric table with named columns, an optional note per row and
 * table-level warnings. Owned by the caller; release with ak_table_free. */
typedef struct ak_table ak_table;

AK_API size_t ak_table_rows(const ak_table* t);
AK_API size_t ak_table_columns(const ak_table* t);
AK_API const char* ak_table_column_name(const ak_table* t, size_t col);
AK_API double ak_table_value(const ak_table* t, size_t row, size_t col);
/* Semicolon-separated warnings for one row, "" if none. */
AK_API const char* ak_table_note(const ak_table* t, size_t row);
AK_API size_t ak_table_warning_count(const ak_table* t);
AK_API const char* ak_table_warning(const ak_table* t, size_t i);
AK_API void ak_table_free(ak_table* t);

/* ---- Transition densities ---------------------------------------------- */
typedef enum {
    AK_DENSITY_KOLMOGOROV,          /* joint (x, y): dx = y dt, dy = b dt + sigma dW */
    AK_DENSITY_OU,                  /* y only */
    AK_DENSITY_AUGMENTED_OU,        /* joint (x = int y, y) */
    AK_DENSITY_FELLER,              /* y only, reflecting (type I) */
    AK_DENSITY_FELLER_ABSORBING,    /* y only, absorbing (type II) */
    AK_DENSITY_AUGMENTED_FELLER,    /* joint (x = int y, y), type I */
    AK_DENSITY_ANOMALOUS_KOLMOGOROV,/* joint, Cauchy-driven Kolmogorov pair, noise scale sigma */
    AK_DENSITY_ANOMALOUS_OU         /* y only, Cauchy-driven OU, noise scale epsilon */
} ak_density_model;

typedef struct {
    ak_density_model model;
    double T;
    double x0, y0;
    double b, sigma;
    double chi, kappa, epsilon;
    double x_lo, x_hi, y_lo, y_hi;
    int nx, ny; /* grid points per axis, endpoints included; 1-D models ignore x */
} ak_density_request;

AK_API void ak_density_request_init(ak_density_request* r);
/* Columns: x, y, density for joint models; y, density otherwise. */
AK_API int ak_density_grid(const ak_density_request* r, ak_table** out);

/* ---- European options ---------------------------------------------------- */
typedef enum { AK_STYLE_FORWARD, AK_STYLE_CALL, AK_STYLE_PUT, AK_STYLE_COVERED_CALL, AK_STYLE_PEAKON } ak_option_style;

typedef enum {
    AK_MODEL_BACHELIER,    /* sigma, r */
    AK_MODEL_BLACK_SCHOLES,/* sigma, r */
    AK_MODEL_HESTON,       /* v0, chi, kappa, epsilon, rho, r */
    AK_MODEL_STEIN_STEIN,  /* sigma0, chi, kappa, epsilon, rho, r */
    AK_MODEL_PATH_DEPENDENT/* a0, a1, kappa, average; r = 0 */
} ak_model_kind;

typedef struct {
    ak_model_kind kind;
    double sigma, r;
    double v0, sigma0, chi, kappa, epsilon, rho;
    double a0, a1, average;
} ak_model;

typedef enum { AK_QUAD_TRAPEZOID, AK_QUAD_ADAPTIVE, AK_QUAD_FFT } ak_quad_scheme;

typedef struct {
    ak_quad_scheme scheme;
    int node_count;
    double truncation_halfwidth; /* 0 = automatic */
    double abs_tol;
} ak_quadrature;

AK_API void ak_model_init(ak_model* m, ak_model_kind kind);
AK_API void ak_quadrature_init(ak_quadrature* q);

/* Prices every (maturity, strike) pair. Columns: id, maturity, strike, value,
 * error_estimate, implied_vol (NaN where undefined, e.g. forwards or
 * prices outside the no-arbitrage band). The note holds pricer warnings. */
AK_API int ak_price_surface(const ak_model* m, ak_option_style style, double spot, const double* strikes,
                            size_t n_strikes, const double* maturities, size_t n_maturities, const ak_quadrature* q,
                            ak_table** out);

AK_API int ak_implied_vol(double price, ak_option_style style, double strike, double maturity, double spot, double r,
                          double* vol);

/* ---- Volatility and variance swaps --------------------------------------- */
typedef enum { AK_VOL_SWAP, AK_VOL_SWAPTION, AK_VAR_SWAP_FELLER, AK_VAR_SWAP_OU2, AK_VAR_SWAPTION } ak_swap_kind;

typedef struct {
    ak_swap_kind kind;
    double chi, kappa, epsilon;
    double r, phi; /* swaptions: discount rate, +1 payer / -1 receiver */
    double y0;
} ak_swap_request;

AK_API void ak_swap_request_init(ak_swap_request* r);
/* Columns: maturity, strike, value, error_estimate. Swaps ignore the strike. */
AK_API int ak_swap_values(const ak_swap_request* r, const double* maturities, size_t n_maturities,
                          const double* strikes, size_t n_strikes, ak_table** out);

/* ---- Short-rate models ---------------------------------------------------- */
typedef enum { AK_RATE_VASICEK, AK_RATE_CIR } ak_rate_model;

typedef struct {
    ak_rate_model model;
    double chi, kappa, epsilon;
    double y0; /* current short rate */
} ak_rate;

/* Columns: maturity, price, yield, error_estimate. */
AK_API int ak_bond_curve(const ak_rate* r, const double* maturities, size_t n, ak_table** out);
/* Vasicek only; phi = +1 call, -1 put. */
AK_API int ak_bond_option(const ak_rate* r, double option_maturity, double bond_maturity, double strike, double phi,
                          double* value);
/* Lognormal stock with volatility sigma correlated at rho with a Vasicek rate. */
AK_API int ak_stochastic_rate_european(const ak_rate* r, ak_option_style style, double spot, double strike,
                                       double maturity, double sigma, double rho, double* value);

/* ---- Automated market makers ---------------------------------------------- */
typedef enum { AK_RULE_SUM, AK_RULE_PRODUCT, AK_RULE_MIXED } ak_pool_rule;

/* Columns: S, x_star, y_star, omega, lambda. */
AK_API int ak_amm_loss_curve(ak_pool_rule rule, double alpha, const double* prices, size_t n, ak_table** out);

typedef struct {
    double chi, kappa, epsilon, rho, v0;
} ak_heston;

/* Columns: T, u_ex, u_lc, u_ec, gap, all at S = 1. */
AK_API int ak_amm_hedge(const ak_heston* h, const double* maturities, size_t n, ak_table** out);

/* ---- Kelvin waves ---------------------------------------------------------- */
/* Planar elliptic flow with strain s < w. Columns: angle, exponent,
 * growth_ratio, bounded (0/1). A warning is attached when some orientation
 * is unbounded. */
AK_API int ak_hydro_stability(double s, double w, double nu, int grid, double T, double dt, ak_table** out);

/* ---- Monte Carlo ------------------------------------------------------------ */
typedef enum {
    AK_PROCESS_KOLMOGOROV,
    AK_PROCESS_OU,
    AK_PROCESS_AUGMENTED_OU,
    AK_PROCESS_FELLER,
    AK_PROCESS_AUGMENTED_FELLER,
    AK_PROCESS_HESTON_LOG,
    AK_PROCESS_STEIN_STEIN,
    AK_PROCESS_PATH_DEPENDENT,
    AK_PROCESS_ANOMALOUS_OU_CAUCHY,
    AK_PROCESS_VASICEK_RATE_EQUITY
} ak_process;

typedef enum { AK_SCHEME_EULER, AK_SCHEME_FULL_TRUNCATION, AK_SCHEME_EXACT } ak_scheme;

typedef struct {
    double x0, y0;
    double chi, kappa, epsilon;
    double b, sigma, rho, r;
    double a0, a1, kappa_average;
    int correlated;      /* augmented Feller: x is the correlated log-price */
    int log_price_drift; /* path-dependent: martingale log-price */
    double ema_rate;
} ak_process_params;

typedef struct {
    double dt;
    size_t n_paths;
    double horizon;
    uint64_t base_seed;
    ak_scheme scheme;
} ak_sim_spec;

AK_API void ak_process_params_init(ak_process_params* p);
AK_API void ak_sim_spec_init(ak_sim_spec* s);

typedef struct ak_simulation ak_simulation;

AK_API int ak_simulate(ak_process process, const ak_process_params* p, const ak_sim_spec* s, ak_simulation** out);
AK_API void ak_simulation_free(ak_simulation* sim);
/* Columns: path_id, x, y, int_x, int_y, int_exp_x, ema_x, min_y. */
AK_API int ak_simulation_samples(const ak_simulation* sim, ak_table** out);
/* One row per statistic (mean_x, var_x, mean_y, var_y, corr_xy). Columns:
 * value, standard_error. Simulation warnings are attached to the table. */
AK_API int ak_simulation_moments(const ak_simulation* sim, ak_table** out);

typedef enum { AK_REPORT_MOMENTS, AK_REPORT_CHI2 } ak_report;

/* Compares the samples with the process's own transition law (Kolmogorov,
 * OU, augmented OU, Feller, augmented Feller integral, Cauchy OU). Columns:
 * pass, statistic, p_value, cells; the note holds the per-check detail. */
AK_API int ak_mc_verify(const ak_simulation* sim, ak_report report, double alpha, ak_table** out);

#ifdef __cplusplus
}
#endif

#endif
