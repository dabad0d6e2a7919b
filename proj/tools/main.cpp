// affine-kelvin command-line front end. Every subcommand resolves its
// configuration as defaults < JSON file < flags, echoes the resolved document
// in the CSV header and writes plot-ready CSV.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "affine_kelvin/affine_kelvin.h"

namespace cli {

using json = nlohmann::ordered_json;

constexpr int schema_version = 1;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Library failure carrying the C status code.
struct library_error : std::runtime_error {
    int status;
    library_error(int s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(int status) {
    if (status != AK_OK) throw library_error(status, ak_last_error());
}

enum class value_kind { number, text, list };

struct option_def {
    std::string block, key, flag, help;
    json fallback;
    value_kind kind = value_kind::number;
};

// ---- value parsing ---------------------------------------------------------

double parse_number(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw config_error(what + ": not a number: '" + s + "'");
    return v;
}

// "lo:hi:n" (inclusive, n points) or "a,b,c".
std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw config_error(what + ": range must be lo:hi:n");
        double lo = parse_number(parts[0], what), hi = parse_number(parts[1], what);
        double n = parse_number(parts[2], what);
        if (n < 1 || n != std::floor(n)) throw config_error(what + ": point count must be a positive integer");
        int k = static_cast<int>(n);
        for (int i = 0; i < k; ++i) out.push_back(k == 1 ? lo : lo + (hi - lo) * i / (k - 1));
        return out;
    }
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_number(p, what));
    if (out.empty()) throw config_error(what + ": empty list");
    return out;
}

// Options with integer defaults (counts, flags) only take integers.
json as_number(const option_def& o, double v) {
    if (!o.fallback.is_number_integer()) return v;
    if (v != std::floor(v) || std::abs(v) > 9e15) throw config_error(o.block + "." + o.key + " must be an integer");
    return static_cast<std::int64_t>(v);
}

json parse_value(const option_def& o, const std::string& text) {
    std::string what = o.block + "." + o.key;
    switch (o.kind) {
        case value_kind::number: return as_number(o, parse_number(text, what));
        case value_kind::text: return text;
        case value_kind::list: return parse_list(text, what);
    }
    return nullptr;
}

json coerce(const option_def& o, const json& v) {
    std::string what = o.block + "." + o.key;
    switch (o.kind) {
        case value_kind::number:
            if (!v.is_number()) throw config_error(what + " must be a number");
            return as_number(o, v.get<double>());
        case value_kind::text:
            if (!v.is_string()) throw config_error(what + " must be a string");
            return v;
        case value_kind::list:
            if (v.is_string()) return parse_list(v.get<std::string>(), what);
            if (!v.is_array() || v.empty()) throw config_error(what + " must be a non-empty array or range string");
            for (const auto& e : v)
                if (!e.is_number()) throw config_error(what + " must contain numbers");
            return v;
    }
    return nullptr;
}

std::string show(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (!v.is_array()) return v.dump();
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : ",") + e.dump();
    return s;
}

const char* type_name(value_kind k) {
    switch (k) {
        case value_kind::number: return "NUM";
        case value_kind::text: return "TEXT";
        case value_kind::list: return "LIST";
    }
    return "";
}

template <class E>
E pick(const std::string& value, const std::map<std::string, E>& options, const std::string& what) {
    auto it = options.find(value);
    if (it != options.end()) return it->second;
    std::string known;
    for (const auto& [k, _] : options) known += (known.empty() ? "" : ", ") + k;
    throw config_error(what + ": unknown value '" + value + "' (expected one of " + known + ")");
}

// ---- output ----------------------------------------------------------------

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

struct csv_table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct run_output {
    csv_table table;
    std::vector<std::string> warnings;
    std::vector<std::string> notes;  // extra header lines
};

using table_ptr = std::unique_ptr<ak_table, decltype(&ak_table_free)>;

table_ptr adopt(ak_table* t) { return table_ptr(t, &ak_table_free); }

// Copies a library table; a non-empty note_column appends the per-row notes.
csv_table from_library(const ak_table* t, const std::string& note_column = {}) {
    csv_table c;
    std::size_t nc = ak_table_columns(t), nr = ak_table_rows(t);
    for (std::size_t j = 0; j < nc; ++j) c.header.push_back(ak_table_column_name(t, j));
    if (!note_column.empty()) c.header.push_back(note_column);
    for (std::size_t i = 0; i < nr; ++i) {
        std::vector<std::string> row;
        for (std::size_t j = 0; j < nc; ++j) row.push_back(fmt(ak_table_value(t, i, j)));
        if (!note_column.empty()) row.push_back(ak_table_note(t, i));
        c.rows.push_back(std::move(row));
    }
    return c;
}

void collect_warnings(const ak_table* t, std::vector<std::string>& w) {
    for (std::size_t i = 0; i < ak_table_warning_count(t); ++i) w.push_back(ak_table_warning(t, i));
    for (std::size_t i = 0; i < ak_table_rows(t); ++i) {
        std::string n = ak_table_note(t, i);
        if (!n.empty()) w.push_back("row " + std::to_string(i) + ": " + n);
    }
}

void write_csv(std::ostream& os, const std::string& command, const json& cfg, const run_output& r) {
    os << "# affine-kelvin " << ak_version() << "\n";
    os << "# command: " << command << "\n";
    os << "# config: " << cfg.dump() << "\n";
    for (const auto& n : r.notes) os << "# " << n << "\n";
    if (r.warnings.empty()) os << "# warnings: none\n";
    for (const auto& w : r.warnings) os << "# warning: " << w << "\n";
    for (std::size_t j = 0; j < r.table.header.size(); ++j) os << (j ? "," : "") << r.table.header[j];
    os << "\n";
    for (const auto& row : r.table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << csv_field(row[j]);
        os << "\n";
    }
}

// ---- subcommands -------------------------------------------------------------

struct command_def {
    std::string name, help;
    std::vector<option_def> options;
    std::function<run_output(const json&)> run;
};

double num(const json& cfg, const std::string& block, const std::string& key) {
    return cfg.at(block).at(key).get<double>();
}
std::string text(const json& cfg, const std::string& block, const std::string& key) {
    return cfg.at(block).at(key).get<std::string>();
}
std::vector<double> list(const json& cfg, const std::string& block, const std::string& key) {
    return cfg.at(block).at(key).get<std::vector<double>>();
}

int whole(double v, const std::string& what, int lo = 1) {
    if (v != std::floor(v) || v < lo) throw config_error(what + " must be an integer >= " + std::to_string(lo));
    return static_cast<int>(v);
}

option_def num_opt(std::string block, std::string key, double v, std::string help, std::string flag = {}) {
    if (flag.empty()) flag = key;
    return {std::move(block), std::move(key), std::move(flag), std::move(help), v, value_kind::number};
}
option_def int_opt(std::string block, std::string key, std::int64_t v, std::string help, std::string flag = {}) {
    if (flag.empty()) flag = key;
    return {std::move(block), std::move(key), std::move(flag), std::move(help), v, value_kind::number};
}
option_def text_opt(std::string block, std::string key, std::string v, std::string help, std::string flag = {}) {
    if (flag.empty()) flag = key;
    return {std::move(block), std::move(key), std::move(flag), std::move(help), v, value_kind::text};
}
option_def list_opt(std::string block, std::string key, std::vector<double> v, std::string help,
                    std::string flag = {}) {
    if (flag.empty()) flag = key;
    return {std::move(block), std::move(key), std::move(flag), std::move(help), v, value_kind::list};
}

command_def density_command() {
    command_def c{"density", "Transition density on a grid", {}, {}};
    c.options = {
        text_opt("model", "kind", "kolmogorov",
                 "kolmogorov | ou | augmented_ou | feller | feller_absorbing | augmented_feller | "
                 "anomalous_kolmogorov | anomalous_ou",
                 "model"),
        num_opt("model", "T", 1.0, "horizon"),
        num_opt("model", "x0", 0.0, "initial x"),
        num_opt("model", "y0", 0.0, "initial y"),
        num_opt("model", "b", 0.0, "Kolmogorov drift"),
        num_opt("model", "sigma", 1.0, "Kolmogorov noise (Cauchy scale for anomalous_kolmogorov)"),
        num_opt("model", "chi", 0.0, "mean-reversion level times kappa"),
        num_opt("model", "kappa", 1.0, "mean-reversion rate"),
        num_opt("model", "epsilon", 1.0, "factor noise (Cauchy scale for anomalous_ou)"),
        text_opt("grid", "grid", "64x64", "points as NXxNY (NY only for 1-D models)"),
        text_opt("grid", "x_range", "-10:10", "x interval lo:hi"),
        text_opt("grid", "y_range", "-5:5", "y interval lo:hi"),
    };
    c.run = [](const json& cfg) {
        ak_density_request r;
        ak_density_request_init(&r);
        r.model = pick<ak_density_model>(text(cfg, "model", "kind"),
                                         {{"kolmogorov", AK_DENSITY_KOLMOGOROV},
                                          {"ou", AK_DENSITY_OU},
                                          {"augmented_ou", AK_DENSITY_AUGMENTED_OU},
                                          {"feller", AK_DENSITY_FELLER},
                                          {"feller_absorbing", AK_DENSITY_FELLER_ABSORBING},
                                          {"augmented_feller", AK_DENSITY_AUGMENTED_FELLER},
                                          {"anomalous_kolmogorov", AK_DENSITY_ANOMALOUS_KOLMOGOROV},
                                          {"anomalous_ou", AK_DENSITY_ANOMALOUS_OU}},
                                         "model.kind");
        r.T = num(cfg, "model", "T");
        r.x0 = num(cfg, "model", "x0"), r.y0 = num(cfg, "model", "y0");
        r.b = num(cfg, "model", "b"), r.sigma = num(cfg, "model", "sigma");
        r.chi = num(cfg, "model", "chi"), r.kappa = num(cfg, "model", "kappa");
        r.epsilon = num(cfg, "model", "epsilon");
        auto grid = text(cfg, "grid", "grid");
        auto x = grid.find('x');
        if (x == std::string::npos) throw config_error("grid.grid must look like 64x64");
        r.nx = whole(parse_number(grid.substr(0, x), "grid.grid"), "grid.grid", 2);
        r.ny = whole(parse_number(grid.substr(x + 1), "grid.grid"), "grid.grid", 2);
        auto range = [](const std::string& s, const std::string& what, double& lo, double& hi) {
            auto p = s.find(':');
            if (p == std::string::npos) throw config_error(what + " must be lo:hi");
            lo = parse_number(s.substr(0, p), what), hi = parse_number(s.substr(p + 1), what);
            if (!(hi > lo)) throw config_error(what + ": need lo < hi");
        };
        range(text(cfg, "grid", "x_range"), "grid.x_range", r.x_lo, r.x_hi);
        range(text(cfg, "grid", "y_range"), "grid.y_range", r.y_lo, r.y_hi);
        ak_table* t = nullptr;
        check(ak_density_grid(&r, &t));
        auto owned = adopt(t);
        run_output out{from_library(t), {}, {}};
        collect_warnings(t, out.warnings);
        return out;
    };
    return c;
}

command_def price_command() {
    command_def c{"price", "European option prices and implied volatilities", {}, {}};
    c.options = {
        text_opt("model", "kind", "heston", "heston | black_scholes | bachelier | stein_stein | path_dependent",
                 "model"),
        num_opt("model", "v0", 0.15, "Heston initial variance"),
        num_opt("model", "chi", 0.2, "variance (or volatility) drift level times kappa"),
        num_opt("model", "kappa", 2.0, "mean-reversion rate (averaging rate for path_dependent)"),
        num_opt("model", "epsilon", 0.2, "vol of vol"),
        num_opt("model", "rho", -0.5, "spot/vol correlation"),
        num_opt("model", "r", 0.0, "interest rate"),
        num_opt("model", "sigma", 0.2, "Black-Scholes or Bachelier volatility"),
        num_opt("model", "sigma0", 0.2, "Stein-Stein initial volatility"),
        num_opt("model", "a0", 0.04, "path-dependent base variance"),
        num_opt("model", "a1", -0.3, "path-dependent slope (negative)"),
        num_opt("model", "average", 1.0, "path-dependent current average A"),
        text_opt("instrument", "style", "call", "call | put | forward | covered_call | peakon"),
        num_opt("instrument", "spot", 1.0, "spot price"),
        list_opt("instrument", "strikes", {1.0}, "strikes, lo:hi:n or a,b,c"),
        list_opt("instrument", "maturities", {1.0}, "maturities, lo:hi:n or a,b,c", "mats"),
        text_opt("quadrature", "scheme", "trapezoid", "trapezoid | adaptive | fft"),
        int_opt("quadrature", "nodes", 1024, "quadrature nodes"),
        num_opt("quadrature", "halfwidth", 0.0, "wave-number truncation, 0 = automatic"),
        num_opt("quadrature", "abs_tol", 1e-10, "absolute tolerance"),
    };
    c.run = [](const json& cfg) {
        auto kind = pick<ak_model_kind>(text(cfg, "model", "kind"),
                                        {{"heston", AK_MODEL_HESTON},
                                         {"black_scholes", AK_MODEL_BLACK_SCHOLES},
                                         {"bachelier", AK_MODEL_BACHELIER},
                                         {"stein_stein", AK_MODEL_STEIN_STEIN},
                                         {"path_dependent", AK_MODEL_PATH_DEPENDENT}},
                                        "model.kind");
        ak_model m;
        ak_model_init(&m, kind);
        m.v0 = num(cfg, "model", "v0"), m.chi = num(cfg, "model", "chi"), m.kappa = num(cfg, "model", "kappa");
        m.epsilon = num(cfg, "model", "epsilon"), m.rho = num(cfg, "model", "rho"), m.r = num(cfg, "model", "r");
        m.sigma = num(cfg, "model", "sigma"), m.sigma0 = num(cfg, "model", "sigma0");
        m.a0 = num(cfg, "model", "a0"), m.a1 = num(cfg, "model", "a1"), m.average = num(cfg, "model", "average");
        auto style = pick<ak_option_style>(text(cfg, "instrument", "style"),
                                           {{"call", AK_STYLE_CALL},
                                            {"put", AK_STYLE_PUT},
                                            {"forward", AK_STYLE_FORWARD},
                                            {"covered_call", AK_STYLE_COVERED_CALL},
                                            {"peakon", AK_STYLE_PEAKON}},
                                           "instrument.style");
        ak_quadrature q;
        ak_quadrature_init(&q);
        q.scheme = pick<ak_quad_scheme>(text(cfg, "quadrature", "scheme"),
                                        {{"trapezoid", AK_QUAD_TRAPEZOID},
                                         {"adaptive", AK_QUAD_ADAPTIVE},
                                         {"fft", AK_QUAD_FFT}},
                                        "quadrature.scheme");
        q.node_count = whole(num(cfg, "quadrature", "nodes"), "quadrature.nodes");
        q.truncation_halfwidth = num(cfg, "quadrature", "halfwidth");
        q.abs_tol = num(cfg, "quadrature", "abs_tol");
        auto K = list(cfg, "instrument", "strikes"), T = list(cfg, "instrument", "maturities");
        ak_table* t = nullptr;
        check(ak_price_surface(&m, style, num(cfg, "instrument", "spot"), K.data(), K.size(), T.data(), T.size(), &q,
                               &t));
        auto owned = adopt(t);
        run_output out{from_library(t, "warnings"), {}, {}};
        collect_warnings(t, out.warnings);
        return out;
    };
    return c;
}

command_def swap_command() {
    command_def c{"swap", "Volatility and variance swaps and swaptions", {}, {}};
    c.options = {
        text_opt("model", "kind", "var_swap_feller", "vol_swap | vol_swaption | var_swap_feller | var_swap_ou2 | var_swaption",
                 "kind"),
        num_opt("model", "chi", 0.08, "factor drift level times kappa"),
        num_opt("model", "kappa", 2.0, "mean-reversion rate"),
        num_opt("model", "epsilon", 0.3, "factor noise"),
        num_opt("model", "y0", 0.04, "initial factor (variance or volatility)"),
        num_opt("model", "r", 0.0, "discount rate for swaptions"),
        num_opt("instrument", "phi", 1.0, "+1 payer, -1 receiver"),
        list_opt("instrument", "maturities", {1.0}, "maturities", "mats"),
        list_opt("instrument", "strikes", {0.04}, "swaption strikes on the running integral"),
    };
    c.run = [](const json& cfg) {
        ak_swap_request r;
        ak_swap_request_init(&r);
        r.kind = pick<ak_swap_kind>(text(cfg, "model", "kind"),
                                    {{"vol_swap", AK_VOL_SWAP},
                                     {"vol_swaption", AK_VOL_SWAPTION},
                                     {"var_swap_feller", AK_VAR_SWAP_FELLER},
                                     {"var_swap_ou2", AK_VAR_SWAP_OU2},
                                     {"var_swaption", AK_VAR_SWAPTION}},
                                    "model.kind");
        r.chi = num(cfg, "model", "chi"), r.kappa = num(cfg, "model", "kappa");
        r.epsilon = num(cfg, "model", "epsilon"), r.y0 = num(cfg, "model", "y0"), r.r = num(cfg, "model", "r");
        r.phi = num(cfg, "instrument", "phi");
        auto T = list(cfg, "instrument", "maturities"), K = list(cfg, "instrument", "strikes");
        ak_table* t = nullptr;
        check(ak_swap_values(&r, T.data(), T.size(), K.data(), K.size(), &t));
        auto owned = adopt(t);
        run_output out{from_library(t, "warnings"), {}, {}};
        collect_warnings(t, out.warnings);
        return out;
    };
    return c;
}

command_def bond_command() {
    command_def c{"bond", "Zero-coupon curves and Vasicek bond options", {}, {}};
    c.options = {
        text_opt("model", "kind", "vasicek", "vasicek | cir", "model"),
        num_opt("model", "chi", 0.05, "rate drift level times kappa"),
        num_opt("model", "kappa", 1.0, "mean-reversion rate"),
        num_opt("model", "epsilon", 0.02, "rate noise"),
        num_opt("model", "y0", 0.03, "current short rate"),
        text_opt("instrument", "type", "curve", "curve | option"),
        list_opt("instrument", "maturities", {0.5, 1, 2, 5, 10}, "bond maturities", "mats"),
        num_opt("instrument", "expiry", 0.25, "option expiry (type option)"),
        num_opt("instrument", "strike", 0.9, "option strike (type option)"),
        num_opt("instrument", "phi", 1.0, "+1 call, -1 put (type option)"),
    };
    c.run = [](const json& cfg) {
        ak_rate r{};
        r.model = pick<ak_rate_model>(text(cfg, "model", "kind"), {{"vasicek", AK_RATE_VASICEK}, {"cir", AK_RATE_CIR}},
                                      "model.kind");
        r.chi = num(cfg, "model", "chi"), r.kappa = num(cfg, "model", "kappa");
        r.epsilon = num(cfg, "model", "epsilon"), r.y0 = num(cfg, "model", "y0");
        auto T = list(cfg, "instrument", "maturities");
        auto type = text(cfg, "instrument", "type");
        run_output out;
        if (type == "curve") {
            ak_table* t = nullptr;
            check(ak_bond_curve(&r, T.data(), T.size(), &t));
            auto owned = adopt(t);
            out.table = from_library(t, "warnings");
            collect_warnings(t, out.warnings);
            return out;
        }
        if (type != "option") throw config_error("instrument.type must be curve or option");
        double expiry = num(cfg, "instrument", "expiry"), K = num(cfg, "instrument", "strike");
        double phi = num(cfg, "instrument", "phi");
        out.table.header = {"expiry", "bond_maturity", "strike", "phi", "value"};
        for (double m : T) {
            double v = 0.0;
            check(ak_bond_option(&r, expiry, m, K, phi, &v));
            out.table.rows.push_back({fmt(expiry), fmt(m), fmt(K), fmt(phi), fmt(v)});
        }
        return out;
    };
    return c;
}

command_def amm_command() {
    command_def c{"amm", "Impermanent loss curves and hedge bounds", {}, {}};
    c.options = {
        text_opt("pool", "rule", "product", "sum | product | mixed"),
        num_opt("pool", "alpha", 1.0, "mixing parameter of the mixed rule"),
        text_opt("pool", "report", "loss", "loss | hedge"),
        list_opt("grid", "prices", {0.5, 1.0, 2.0, 4.0}, "external prices S (report loss)", "S"),
        list_opt("grid", "maturities", {0.25, 0.5, 1.0, 2.0}, "maturities (report hedge)", "mats"),
        num_opt("heston", "chi", 0.08, "variance drift level times kappa"),
        num_opt("heston", "kappa", 2.0, "mean-reversion rate"),
        num_opt("heston", "epsilon", 0.3, "vol of vol"),
        num_opt("heston", "rho", -0.5, "correlation"),
        num_opt("heston", "v0", 0.04, "initial variance"),
    };
    c.run = [](const json& cfg) {
        ak_table* t = nullptr;
        auto report = text(cfg, "pool", "report");
        if (report == "loss") {
            auto rule = pick<ak_pool_rule>(text(cfg, "pool", "rule"),
                                           {{"sum", AK_RULE_SUM}, {"product", AK_RULE_PRODUCT}, {"mixed", AK_RULE_MIXED}},
                                           "pool.rule");
            auto S = list(cfg, "grid", "prices");
            check(ak_amm_loss_curve(rule, num(cfg, "pool", "alpha"), S.data(), S.size(), &t));
        } else if (report == "hedge") {
            ak_heston h{num(cfg, "heston", "chi"), num(cfg, "heston", "kappa"), num(cfg, "heston", "epsilon"),
                        num(cfg, "heston", "rho"), num(cfg, "heston", "v0")};
            auto T = list(cfg, "grid", "maturities");
            check(ak_amm_hedge(&h, T.data(), T.size(), &t));
        } else {
            throw config_error("pool.report must be loss or hedge");
        }
        auto owned = adopt(t);
        run_output out{from_library(t), {}, {}};
        collect_warnings(t, out.warnings);
        return out;
    };
    return c;
}

command_def hydro_command() {
    command_def c{"hydro", "Kelvin-wave stability of a planar elliptic flow", {}, {}};
    c.options = {
        num_opt("flow", "s", 0.5, "strain (|s| < w)"),
        num_opt("flow", "w", 1.0, "rotation"),
        num_opt("flow", "nu", 0.0, "kinematic viscosity"),
        int_opt("grid", "orientations", 19, "polar angles in [0, pi/2]"),
        num_opt("grid", "T", 100.0, "horizon"),
        num_opt("grid", "dt", 0.01, "RK4 step"),
    };
    c.run = [](const json& cfg) {
        ak_table* t = nullptr;
        check(ak_hydro_stability(num(cfg, "flow", "s"), num(cfg, "flow", "w"), num(cfg, "flow", "nu"),
                                 whole(num(cfg, "grid", "orientations"), "grid.orientations", 2),
                                 num(cfg, "grid", "T"), num(cfg, "grid", "dt"), &t));
        auto owned = adopt(t);
        run_output out{from_library(t), {}, {}};
        collect_warnings(t, out.warnings);
        return out;
    };
    return c;
}

command_def mc_command() {
    command_def c{"mc-verify", "Monte Carlo moments and a verdict against the process's own law", {}, {}};
    c.options = {
        text_opt("process", "kind", "kolmogorov",
                 "kolmogorov | ou | augmented_ou | feller | augmented_feller | heston_log | stein_stein | "
                 "path_dependent | anomalous_ou_cauchy | vasicek_rate_equity",
                 "process"),
        num_opt("process", "x0", 0.0, "initial x"),
        num_opt("process", "y0", 0.0, "initial y"),
        num_opt("process", "chi", 0.0, "factor drift level times kappa"),
        num_opt("process", "kappa", 0.0, "mean-reversion rate"),
        num_opt("process", "epsilon", 0.0, "factor noise"),
        num_opt("process", "b", 0.2, "Kolmogorov drift"),
        num_opt("process", "sigma", 0.8, "Kolmogorov noise or equity volatility"),
        num_opt("process", "rho", 0.0, "correlation of the x noise with the y noise"),
        num_opt("process", "r", 0.0, "rate for heston_log and stein_stein"),
        num_opt("process", "a0", 0.04, "path-dependent base variance"),
        num_opt("process", "a1", -0.3, "path-dependent slope"),
        num_opt("process", "kappa_average", 1.0, "path-dependent averaging rate"),
        int_opt("process", "correlated", 0, "augmented_feller: 1 = x is the correlated log-price"),
        int_opt("process", "log_price_drift", 0, "path_dependent: 1 = martingale log-price"),
        num_opt("simulation", "T", 5.0, "horizon"),
        num_opt("simulation", "dt", 0.01, "time step"),
        int_opt("simulation", "paths", 100000, "number of paths"),
        text_opt("simulation", "scheme", "full_truncation", "euler | full_truncation | exact"),
        text_opt("report", "mode", "moments", "moments | chi2", "report"),
        num_opt("report", "alpha", 0.01, "chi-square significance level"),
        text_opt("report", "samples_output", "", "optional CSV of raw samples (path_id, x, y)", "dump-samples"),
    };
    c.run = [](const json& cfg) {
        auto process = pick<ak_process>(text(cfg, "process", "kind"),
                                        {{"kolmogorov", AK_PROCESS_KOLMOGOROV},
                                         {"ou", AK_PROCESS_OU},
                                         {"augmented_ou", AK_PROCESS_AUGMENTED_OU},
                                         {"feller", AK_PROCESS_FELLER},
                                         {"augmented_feller", AK_PROCESS_AUGMENTED_FELLER},
                                         {"heston_log", AK_PROCESS_HESTON_LOG},
                                         {"stein_stein", AK_PROCESS_STEIN_STEIN},
                                         {"path_dependent", AK_PROCESS_PATH_DEPENDENT},
                                         {"anomalous_ou_cauchy", AK_PROCESS_ANOMALOUS_OU_CAUCHY},
                                         {"vasicek_rate_equity", AK_PROCESS_VASICEK_RATE_EQUITY}},
                                        "process.kind");
        ak_process_params p;
        ak_process_params_init(&p);
        p.x0 = num(cfg, "process", "x0"), p.y0 = num(cfg, "process", "y0");
        p.chi = num(cfg, "process", "chi"), p.kappa = num(cfg, "process", "kappa");
        p.epsilon = num(cfg, "process", "epsilon"), p.b = num(cfg, "process", "b");
        p.sigma = num(cfg, "process", "sigma"), p.rho = num(cfg, "process", "rho"), p.r = num(cfg, "process", "r");
        p.a0 = num(cfg, "process", "a0"), p.a1 = num(cfg, "process", "a1");
        p.kappa_average = num(cfg, "process", "kappa_average");
        p.correlated = whole(num(cfg, "process", "correlated"), "process.correlated", 0);
        p.log_price_drift = whole(num(cfg, "process", "log_price_drift"), "process.log_price_drift", 0);
        ak_sim_spec s;
        ak_sim_spec_init(&s);
        s.horizon = num(cfg, "simulation", "T"), s.dt = num(cfg, "simulation", "dt");
        s.n_paths = static_cast<size_t>(whole(num(cfg, "simulation", "paths"), "simulation.paths", 1));
        s.base_seed = cfg.at("seed").get<std::uint64_t>();
        s.scheme = pick<ak_scheme>(text(cfg, "simulation", "scheme"),
                                   {{"euler", AK_SCHEME_EULER},
                                    {"full_truncation", AK_SCHEME_FULL_TRUNCATION},
                                    {"exact", AK_SCHEME_EXACT}},
                                   "simulation.scheme");
        auto mode = pick<ak_report>(text(cfg, "report", "mode"), {{"moments", AK_REPORT_MOMENTS}, {"chi2", AK_REPORT_CHI2}},
                                    "report.mode");

        ak_simulation* sim = nullptr;
        check(ak_simulate(process, &p, &s, &sim));
        std::unique_ptr<ak_simulation, decltype(&ak_simulation_free)> owned(sim, &ak_simulation_free);
        run_output out;
        out.table.header = {"quantity", "value", "standard_error"};
        ak_table* m = nullptr;
        check(ak_simulation_moments(sim, &m));
        auto moments = adopt(m);
        for (std::size_t i = 0; i < ak_table_rows(m); ++i)
            out.table.rows.push_back({ak_table_note(m, i), fmt(ak_table_value(m, i, 0)), fmt(ak_table_value(m, i, 1))});
        for (std::size_t i = 0; i < ak_table_warning_count(m); ++i) out.warnings.push_back(ak_table_warning(m, i));

        ak_table* v = nullptr;
        int status = ak_mc_verify(sim, mode, num(cfg, "report", "alpha"), &v);
        if (status == AK_OK) {
            auto verdict = adopt(v);
            const char* names[] = {"verdict_pass", "verdict_statistic", "verdict_p_value", "verdict_cells"};
            for (std::size_t j = 0; j < 4; ++j) out.table.rows.push_back({names[j], fmt(ak_table_value(v, 0, j)), ""});
            out.notes.push_back(std::string("verdict: ") + ak_table_note(v, 0));
        } else if (status == AK_INVALID_ARGUMENT) {
            out.warnings.push_back(std::string("no verdict: ") + ak_last_error());
        } else {
            throw library_error(status, ak_last_error());
        }

        auto dump = text(cfg, "report", "samples_output");
        if (!dump.empty()) {
            ak_table* raw = nullptr;
            check(ak_simulation_samples(sim, &raw));
            auto samples = adopt(raw);
            std::ofstream f(dump);
            if (!f) throw config_error("cannot open " + dump);
            f << "path_id,x,y\n";
            for (std::size_t i = 0; i < ak_table_rows(raw); ++i)
                f << fmt(ak_table_value(raw, i, 0)) << "," << fmt(ak_table_value(raw, i, 1)) << ","
                  << fmt(ak_table_value(raw, i, 2)) << "\n";
        }
        return out;
    };
    return c;
}

command_def implied_vol_command() {
    command_def c{"implied-vol", "Black-Scholes implied volatility of a call or put price", {}, {}};
    c.options = {
        list_opt("instrument", "prices", {0.0796557}, "option prices", "price"),
        text_opt("instrument", "style", "call", "call | put"),
        num_opt("instrument", "strike", 1.0, "strike"),
        num_opt("instrument", "maturity", 1.0, "maturity", "T"),
        num_opt("instrument", "spot", 1.0, "spot"),
        num_opt("instrument", "r", 0.0, "interest rate"),
    };
    c.run = [](const json& cfg) {
        auto style = pick<ak_option_style>(text(cfg, "instrument", "style"), {{"call", AK_STYLE_CALL}, {"put", AK_STYLE_PUT}},
                                           "instrument.style");
        double K = num(cfg, "instrument", "strike"), T = num(cfg, "instrument", "maturity");
        double S = num(cfg, "instrument", "spot"), r = num(cfg, "instrument", "r");
        run_output out;
        out.table.header = {"price", "strike", "maturity", "implied_vol"};
        for (double price : list(cfg, "instrument", "prices")) {
            double vol = 0.0;
            check(ak_implied_vol(price, style, K, T, S, r, &vol));
            out.table.rows.push_back({fmt(price), fmt(K), fmt(T), fmt(vol)});
        }
        return out;
    };
    return c;
}

// ---- configuration resolution ------------------------------------------------

json defaults_for(const command_def& c) {
    json cfg;
    cfg["schema_version"] = schema_version;
    cfg["command"] = c.name;
    for (const auto& o : c.options) cfg[o.block][o.key] = o.fallback;
    cfg["seed"] = 1;
    cfg["output"] = "-";
    return cfg;
}

// Accepts a JSON document or a previous CSV output (its "# config:" line).
json load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open config " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::string content = ss.str();
    if (!content.empty() && content[0] == '#') {
        std::istringstream lines(content);
        for (std::string line; std::getline(lines, line);) {
            const std::string tag = "# config: ";
            if (line.rfind(tag, 0) == 0) content = line.substr(tag.size());
        }
    }
    try {
        return json::parse(content);
    } catch (const json::parse_error& e) {
        throw config_error(path + ": " + e.what());
    }
}

void merge_file(json& cfg, const json& file, const command_def& c) {
    if (!file.is_object()) throw config_error("config must be a JSON object");
    for (const auto& [key, value] : file.items()) {
        if (key == "schema_version") {
            if (value != schema_version) throw config_error("unsupported schema_version " + value.dump());
        } else if (key == "command") {
            if (value != c.name) throw config_error("config is for command " + value.dump());
        } else if (key == "seed") {
            if (!value.is_number_unsigned()) throw config_error("seed must be a non-negative integer");
            cfg["seed"] = value;
        } else if (key == "output") {
            if (!value.is_string()) throw config_error("output must be a string");
            cfg["output"] = value;
        } else if (cfg.contains(key) && cfg[key].is_object()) {
            if (!value.is_object()) throw config_error(key + " must be an object");
            for (const auto& [k, v] : value.items()) {
                auto it = std::find_if(c.options.begin(), c.options.end(),
                                       [&](const option_def& o) { return o.block == key && o.key == k; });
                if (it == c.options.end()) throw config_error("unknown key " + key + "." + k);
                cfg[key][k] = coerce(*it, v);
            }
        } else {
            throw config_error("unknown key " + key);
        }
    }
}

int exit_code_for(int status) { return status == AK_INVALID_ARGUMENT || status == AK_DOMAIN_ERROR ? 1 : 2; }

}  // namespace cli

int main(int argc, char** argv) {
    using namespace cli;
    std::vector<command_def> commands = {density_command(), price_command(), swap_command(), bond_command(),
                                         amm_command(),     hydro_command(), mc_command(),   implied_vol_command()};

    CLI::App app{"Affine transition densities, pricing and Kelvin-wave stability"};
    app.set_version_flag("--version", std::string(ak_version()));
    app.require_subcommand(1);

    struct parsed {
        std::string config, output, seed;
        std::map<std::string, std::string> raw;  // flag -> text
        std::map<std::string, CLI::Option*> given;
    };
    std::vector<parsed> state(commands.size());
    for (std::size_t i = 0; i < commands.size(); ++i) {
        auto& c = commands[i];
        auto& st = state[i];
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--config", st.config, "JSON config, or a previous output to re-run");
        st.given["output"] = sub->add_option("-o,--output", st.output, "output CSV, - for stdout")->default_str("-");
        st.given["seed"] = sub->add_option("--seed", st.seed, "random seed")->default_str("1")->type_name("INT");
        for (const auto& o : c.options) {
            std::string help = o.help + " [" + o.block + "." + o.key + "]";
            st.given[o.flag] = sub->add_option("--" + o.flag, st.raw[o.flag], help)
                                  ->default_str(show(o.fallback))
                                  ->type_name(type_name(o.kind));
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version exit 0; malformed command lines are config errors.
        return app.exit(e) == 0 ? 0 : 1;
    }

    for (std::size_t i = 0; i < commands.size(); ++i) {
        auto* sub = app.get_subcommand(commands[i].name);
        if (!sub->parsed()) continue;
        const auto& c = commands[i];
        auto& st = state[i];
        try {
            json cfg = defaults_for(c);
            if (!st.config.empty()) merge_file(cfg, load_config_file(st.config), c);
            for (const auto& o : c.options)
                if (st.given[o.flag]->count() > 0) cfg[o.block][o.key] = parse_value(o, st.raw[o.flag]);
            if (st.given["seed"]->count() > 0) {
                double s = parse_number(st.seed, "seed");
                if (s < 0 || s != std::floor(s)) throw config_error("seed must be a non-negative integer");
                cfg["seed"] = static_cast<std::uint64_t>(s);
            }
            if (st.given["output"]->count() > 0) cfg["output"] = st.output;

            auto result = c.run(cfg);
            std::string path = cfg["output"].get<std::string>();
            std::ostringstream buffer;
            json echo = cfg;
            echo.erase("output");  // where the echo lives, not what produced it
            write_csv(buffer, c.name, echo, result);
            if (path == "-") {
                std::cout << buffer.str();
            } else {
                std::ofstream f(path);
                if (!f) throw config_error("cannot open output " + path);
                f << buffer.str();
            }
            return 0;
        } catch (const config_error& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 1;
        } catch (const library_error& e) {
            std::cerr << (exit_code_for(e.status) == 1 ? "invalid input: " : "numerical failure: ") << e.what()
                      << "\n";
            return exit_code_for(e.status);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
    return 1;
}
