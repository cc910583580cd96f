#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ageing/montecarlo.hpp"
#include "ageing/sample_io.hpp"

// Long-form CSV emission for experiment reports, one row per configuration.
// A single fixed schema covers size, power and estimator rows; fields that
// do not apply to a row are left empty. Numbers use shortest round-trip
// formatting, so equal configurations always serialize byte-identically.

namespace ageing {

inline constexpr const char* report_csv_header =
    "table,sid,family,m,a,test,n,r,alpha,seed,"
    "sim_rate,sim_critpt,iid_sim_rate,iid_sim_critpt,mc_stderr,degenerate,"
    "mean_scaled_sigma,bias,emse,sigma_target";

namespace detail {

inline std::string csv_config_prefix(const std::string& table, const MonteCarloConfig& config) {
    const std::optional<int> sid = config.generator.s_id();
    std::string row = table;
    row += ',';
    if (sid) row += "S" + std::to_string(*sid);
    row += ',';
    row += family_name(config.generator.family);
    row += ',' + std::to_string(config.generator.m) + ',';
    if (config.generator.family != Family::null_exp) row += format_double(config.generator.a);
    row += ',';
    row += test_kind_name(config.kind);
    row += ',' + std::to_string(config.n) + ',' + std::to_string(config.replications) + ',' +
           format_double(config.alpha) + ',' + std::to_string(config.master_seed);
    return row;
}

} // namespace detail

inline std::string size_power_csv_row(const std::string& table, const MonteCarloConfig& config,
                                      const SizePowerReport& report) {
    std::string row = detail::csv_config_prefix(table, config);
    row += ',' + format_double(report.sim_rate);
    row += ',' + format_double(report.sim_critpt);
    row += ',' + format_double(report.iid_sim_rate);
    row += ',' + format_double(report.iid_sim_critpt);
    row += ',' + format_double(report.mc_stderr);
    row += ',' + std::to_string(report.degenerate_count);
    row += ",,,,"; // estimator fields
    return row;
}

inline std::string estimator_csv_row(const std::string& table, const MonteCarloConfig& config,
                                     const EstimatorReport& report) {
    std::string row = detail::csv_config_prefix(table, config);
    row += ",,,,,,"; // size/power fields
    row += ',' + format_double(report.mean_scaled_sigma);
    row += ',' + format_double(report.bias);
    row += ',' + format_double(report.emse);
    row += ',' + format_double(report.sigma_target);
    return row;
}

// --- reproduce grids ------------------------------------------------------

// The simulation study runs every table over window sizes 2, 3, 5, 10 and
// sample sizes 100, 200, 500; the power tables add the family's shape grid.
inline const std::vector<int>& study_window_sizes() {
    static const std::vector<int> v{2, 3, 5, 10};
    return v;
}

inline const std::vector<std::size_t>& study_sample_sizes() {
    static const std::vector<std::size_t> v{100, 200, 500};
    return v;
}

inline std::vector<double> study_shape_grid(Family family) {
    switch (family) {
        case Family::null_exp: return {};
        case Family::makeham_gompertz: return {0.5, 0.8, 1.0};
        case Family::linear_failure_rate: return {10.0, 5.0, 2.0};
        case Family::weibull: return {1.1, 1.2, 1.3};
    }
    return {};
}

inline const std::vector<std::string>& reproduce_table_ids() {
    static const std::vector<std::string> v{"4.1a", "4.1b", "4.1c", "4.2", "4.3", "4.4", "4.5"};
    return v;
}

// Emits the full grid for one table id as CSV rows (header included).
// Estimator tables: 4.1a = Deshpande, 4.1b = Hollander-Proschan,
// 4.1c = Ahmad. 4.2 = size for all three tests; 4.3/4.4/4.5 = power against
// the makeham-gompertz, linear-failure-rate and weibull alternatives.
inline void reproduce_table(const std::string& table, std::size_t replications,
                            std::uint64_t master_seed, std::ostream& out, unsigned threads = 0) {
    out << report_csv_header << '\n';
    MonteCarloConfig config;
    config.replications = replications;
    config.master_seed = master_seed;

    const auto run_size_row = [&](TestKind kind, int m, std::size_t n) {
        config.kind = kind;
        config.generator = GeneratorSpec{Family::null_exp, m, 0.0};
        config.n = n;
        out << size_power_csv_row(table, config, run_size_experiment(config, false, threads))
            << '\n';
    };
    const auto run_power_row = [&](TestKind kind, Family family, int m, double a, std::size_t n) {
        config.kind = kind;
        config.generator = GeneratorSpec{family, m, a};
        config.n = n;
        out << size_power_csv_row(table, config, run_power_experiment(config, false, threads))
            << '\n';
    };
    const auto run_estimator_rows = [&](TestKind kind) {
        config.kind = kind;
        for (int m : study_window_sizes()) {
            config.generator = GeneratorSpec{Family::null_exp, m, 0.0};
            const double target = reference_sigma(kind, m);
            for (std::size_t n : study_sample_sizes()) {
                config.n = n;
                out << estimator_csv_row(table, config,
                                         run_estimator_experiment(config, target, threads))
                    << '\n';
            }
        }
    };

    static constexpr TestKind all_tests[] = {TestKind::deshpande_ifra,
                                             TestKind::hollander_proschan_nbu,
                                             TestKind::ahmad_dmrl};
    if (table == "4.1a") {
        run_estimator_rows(TestKind::deshpande_ifra);
    } else if (table == "4.1b") {
        run_estimator_rows(TestKind::hollander_proschan_nbu);
    } else if (table == "4.1c") {
        run_estimator_rows(TestKind::ahmad_dmrl);
    } else if (table == "4.2") {
        for (int m : study_window_sizes()) {
            for (std::size_t n : study_sample_sizes()) {
                for (TestKind kind : all_tests) run_size_row(kind, m, n);
            }
        }
    } else if (table == "4.3" || table == "4.4" || table == "4.5") {
        const Family family = table == "4.3"   ? Family::makeham_gompertz
                              : table == "4.4" ? Family::linear_failure_rate
                                               : Family::weibull;
        for (int m : study_window_sizes()) {
            for (double a : study_shape_grid(family)) {
                for (std::size_t n : study_sample_sizes()) {
                    for (TestKind kind : all_tests) run_power_row(kind, family, m, a, n);
                }
            }
        }
    } else {
        throw std::domain_error("reproduce_table: unknown table id \"" + table +
                                "\" (expected one of 4.1a, 4.1b, 4.1c, 4.2, 4.3, 4.4, 4.5)");
    }
}

} // namespace ageing
