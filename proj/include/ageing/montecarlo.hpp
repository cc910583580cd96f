#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "ageing/generators.hpp"
#include "ageing/parallel.hpp"
#include "ageing/tests.hpp"

// Replication harness for the size/power/estimator-quality experiments.
// Replication i draws from stream (master_seed, i), every result lands in
// slot i, and all aggregation is an ordered fold over slots, so reports are
// bit-identical for any thread count.

namespace ageing {

struct MonteCarloConfig {
    TestKind kind = TestKind::deshpande_ifra;
    KernelParams params;
    GeneratorSpec generator;
    std::size_t n = 500;
    std::size_t replications = 10000;
    double alpha = 0.05;
    std::uint64_t master_seed = 0;

    void validate() const {
        params.validate();
        generator.validate();
        if (replications < 100) {
            throw std::domain_error("MonteCarloConfig: need at least 100 replications");
        }
        const std::size_t min_n = kind == TestKind::hollander_proschan_nbu ? 3 : 2;
        if (n < min_n) {
            throw std::domain_error("MonteCarloConfig: n too small for the test degree");
        }
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw std::domain_error("MonteCarloConfig: alpha must lie in (0,1)");
        }
    }
};

struct SizePowerReport {
    double sim_rate = 0.0;       // rejection fraction against the fixed normal cutoff
    double sim_critpt = 0.0;     // empirical 95th (5th for HP) percentile of the statistics
    double iid_sim_rate = 0.0;   // same pair under the i.i.d.-assumed standardization
    double iid_sim_critpt = 0.0;
    double mc_stderr = 0.0;      // sqrt(p(1-p)/r) for sim_rate
    std::size_t degenerate_count = 0; // excluded from percentiles, never counted as rejections
    std::vector<double> standardized;     // kept only when keep_draws is set
    std::vector<double> iid_standardized;
};

struct EstimatorReport {
    double mean_scaled_sigma = 0.0; // mean over replications of k*sqrt(pi/2)*B_n
    double bias = 0.0;              // |mean_scaled_sigma - sigma_target|
    double emse = 0.0;              // sample variance of the scaled estimates
    double sigma_target = 0.0;      // reference k*sigma for the (test, m) cell
};

// Lower empirical quantile: the ceil(p*N)-th order statistic. The small
// guard keeps p*N from crossing an integer boundary through the binary
// representation of p (0.05 * 10000 must index 500, not 501).
inline double empirical_percentile(std::vector<double> values, double p) {
    if (values.empty()) {
        throw std::invalid_argument("empirical_percentile: empty input");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("empirical_percentile: p must lie in (0,1)");
    }
    std::sort(values.begin(), values.end());
    const double pn = p * static_cast<double>(values.size());
    std::size_t idx = static_cast<std::size_t>(std::ceil(pn - 1e-9));
    if (idx < 1) idx = 1;
    if (idx > values.size()) idx = values.size();
    return values[idx - 1];
}

// Reference k*sigma values (2 sigma_D, 3 sigma_HP, 2 sigma_A) of the
// standardized statistics under the null minification sequences, per window
// size m. The test suite re-derives them independently by quadrature.
inline double reference_sigma(TestKind kind, int m) {
    struct Row { int m; double d, hp, a; };
    static constexpr Row table[] = {
        {2, 0.1778, 0.1438, 0.7368},
        {3, 0.2155, 0.1741, 0.8803},
        {5, 0.2767, 0.2233, 1.1209},
        {10, 0.3903, 0.3150, 1.5757},
    };
    for (const Row& row : table) {
        if (row.m == m) {
            switch (kind) {
                case TestKind::deshpande_ifra: return row.d;
                case TestKind::hollander_proschan_nbu: return row.hp;
                case TestKind::ahmad_dmrl: return row.a;
            }
        }
    }
    throw std::domain_error("reference_sigma: no reference value for this (test, m)");
}

namespace detail {

struct ReplicationResult {
    double standardized = 0.0;
    double iid_standardized = 0.0;
    bool reject = false;
    bool iid_reject = false;
    bool degenerate = false;
    double scaled_sigma = 0.0; // k * sigma_hat (sigma_hat already carries sqrt(pi/2))
};

inline std::vector<ReplicationResult> run_replications(const MonteCarloConfig& config,
                                                       unsigned threads) {
    config.validate();
    std::vector<ReplicationResult> slots(config.replications);
    parallel_for(config.replications, threads, [&](std::size_t i) {
        const std::vector<double> sample =
            gen_sequence(config.generator, config.n, SeedSpec{config.master_seed, i});
        const TestOutcome outcome = run_test(sample, config.kind, config.params, config.alpha);
        ReplicationResult& slot = slots[i];
        slot.standardized = outcome.standardized;
        slot.iid_standardized = outcome.iid_standardized;
        slot.reject = outcome.reject;
        slot.iid_reject = outcome.iid_reject;
        slot.degenerate = outcome.degenerate;
        slot.scaled_sigma = kernel_degree(config.kind) * outcome.sigma.sigma_hat;
    });
    return slots;
}

inline SizePowerReport summarize(const MonteCarloConfig& config,
                                 const std::vector<ReplicationResult>& slots, bool keep_draws) {
    SizePowerReport report;
    std::vector<double> kept, iid_kept;
    kept.reserve(slots.size());
    iid_kept.reserve(slots.size());
    std::size_t rejections = 0, iid_rejections = 0;
    for (const ReplicationResult& slot : slots) {
        if (slot.degenerate) {
            ++report.degenerate_count;
        } else {
            kept.push_back(slot.standardized);
        }
        iid_kept.push_back(slot.iid_standardized);
        rejections += slot.reject;
        iid_rejections += slot.iid_reject;
    }
    const double r = static_cast<double>(slots.size());
    report.sim_rate = static_cast<double>(rejections) / r;
    report.iid_sim_rate = static_cast<double>(iid_rejections) / r;
    report.mc_stderr = std::sqrt(report.sim_rate * (1.0 - report.sim_rate) / r);
    const double p = upper_tail(config.kind, false) ? 1.0 - config.alpha : config.alpha;
    report.sim_critpt = empirical_percentile(kept, p);
    report.iid_sim_critpt = empirical_percentile(iid_kept, p);
    if (keep_draws) {
        report.standardized = std::move(kept);
        report.iid_standardized = std::move(iid_kept);
    }
    return report;
}

} // namespace detail

inline SizePowerReport run_size_experiment(const MonteCarloConfig& config,
                                           bool keep_draws = false, unsigned threads = 0) {
    if (config.generator.family != Family::null_exp) {
        throw std::domain_error("run_size_experiment: size runs need a null-exp generator");
    }
    return detail::summarize(config, detail::run_replications(config, threads), keep_draws);
}

inline SizePowerReport run_power_experiment(const MonteCarloConfig& config,
                                            bool keep_draws = false, unsigned threads = 0) {
    if (config.generator.family == Family::null_exp) {
        throw std::domain_error("run_power_experiment: power runs need an alternative generator");
    }
    return detail::summarize(config, detail::run_replications(config, threads), keep_draws);
}

inline EstimatorReport run_estimator_experiment(const MonteCarloConfig& config,
                                                double sigma_target, unsigned threads = 0) {
    if (config.generator.family != Family::null_exp) {
        throw std::domain_error("run_estimator_experiment: estimator runs need a null-exp generator");
    }
    const std::vector<detail::ReplicationResult> slots = detail::run_replications(config, threads);
    KahanSum mean_acc;
    for (const auto& slot : slots) mean_acc.add(slot.scaled_sigma);
    EstimatorReport report;
    report.sigma_target = sigma_target;
    report.mean_scaled_sigma = mean_acc.value() / static_cast<double>(slots.size());
    report.bias = std::fabs(report.mean_scaled_sigma - sigma_target);
    KahanSum var_acc;
    for (const auto& slot : slots) {
        const double d = slot.scaled_sigma - report.mean_scaled_sigma;
        var_acc.add(d * d);
    }
    report.emse = var_acc.value() / static_cast<double>(slots.size() - 1);
    return report;
}

} // namespace ageing
