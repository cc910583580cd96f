// Command-line front end: run an exponentiality test on a data file,
// generate associated sequences, and run the size/power/estimator
// experiments. Exit codes: 0 clean, 1 usage or input error, 2 degenerate
// statistics (sigma_hat = 0, no decision possible).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ageing/montecarlo.hpp"
#include "ageing/reports.hpp"
#include "ageing/sample_io.hpp"
#include "ageing/tests.hpp"

namespace {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_degenerate = 2;

ageing::TestKind parse_test_kind(const std::string& name) {
    if (name == "deshpande" || name == "d") return ageing::TestKind::deshpande_ifra;
    if (name == "hp" || name == "hollander-proschan") return ageing::TestKind::hollander_proschan_nbu;
    if (name == "ahmad" || name == "a") return ageing::TestKind::ahmad_dmrl;
    throw CLI::ValidationError("--test", "expected deshpande, hp or ahmad");
}

ageing::Family parse_family(const std::string& name) {
    const auto family = ageing::family_from_name(name);
    if (!family) {
        throw CLI::ValidationError(
            "--family", "expected null-exp, makeham-gompertz, linear-failure-rate or weibull");
    }
    return *family;
}

// Writes to the given path, or stdout when the path is empty or "-".
struct OutputTarget {
    explicit OutputTarget(const std::string& path) {
        if (!path.empty() && path != "-") {
            file.emplace(path, std::ios::binary);
            if (!*file) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file ? *file : std::cout; }
    std::optional<std::ofstream> file;
};

json spec_to_json(const ageing::GeneratorSpec& spec) {
    json j{
        {"family", ageing::family_name(spec.family)},
        {"m", spec.m},
        {"base_rate", spec.base_rate()},
        {"rng", std::string(ageing::rng_id)},
    };
    if (spec.family != ageing::Family::null_exp) j["a"] = spec.a;
    if (spec.family == ageing::Family::linear_failure_rate) {
        j["sqrt_offsets"] = spec.sqrt_offsets();
        j["sqrt_constant"] = spec.sqrt_constant();
    }
    if (const auto sid = spec.s_id()) j["sid"] = "S" + std::to_string(*sid);
    return j;
}

json outcome_to_json(const ageing::TestOutcome& outcome, const ageing::KernelParams& params) {
    return json{
        {"test", ageing::test_kind_name(outcome.kind)},
        {"dual", outcome.dual},
        {"n", outcome.n},
        {"alpha", outcome.alpha},
        {"b", params.b},
        {"raw_statistic", outcome.raw_statistic},
        {"theta0", outcome.theta0},
        {"sigma_hat", outcome.sigma.sigma_hat},
        {"block_length", outcome.sigma.block_length},
        {"b_n_raw", outcome.sigma.b_n_raw},
        {"standardized", outcome.standardized},
        {"p_value", outcome.p_value},
        {"reject", outcome.reject},
        {"degenerate", outcome.degenerate},
        {"iid_standardized", outcome.iid_standardized},
        {"iid_p_value", outcome.iid_p_value},
        {"iid_reject", outcome.iid_reject},
    };
}

void print_outcome_text(const ageing::TestOutcome& outcome, std::ostream& out) {
    using ageing::format_double;
    out << "test:               " << ageing::test_kind_name(outcome.kind)
        << (outcome.dual ? " (dual direction)" : "") << '\n'
        << "n:                  " << outcome.n << '\n'
        << "raw statistic:      " << format_double(outcome.raw_statistic) << '\n'
        << "null mean:          " << format_double(outcome.theta0) << '\n'
        << "sigma_hat:          " << format_double(outcome.sigma.sigma_hat)
        << "  (block length " << outcome.sigma.block_length << ")\n"
        << "standardized:       " << format_double(outcome.standardized) << '\n'
        << "p value:            " << format_double(outcome.p_value) << '\n'
        << "alpha:              " << format_double(outcome.alpha) << '\n';
    if (outcome.degenerate) {
        out << "decision:           none (degenerate sigma_hat = 0)\n";
    } else {
        out << "decision:           " << (outcome.reject ? "reject" : "do not reject")
            << " exponentiality\n";
    }
    out << "iid standardized:   " << format_double(outcome.iid_standardized) << '\n'
        << "iid decision:       " << (outcome.iid_reject ? "reject" : "do not reject")
        << " (if the sample were i.i.d.)\n";
}

int cmd_test(const std::string& input, const std::string& test_name, double b, double alpha,
             bool dual, const std::string& format, const std::string& out_path) {
    const ageing::TestKind kind = parse_test_kind(test_name);
    const ageing::KernelParams params{b};
    std::vector<double> sample;
    try {
        sample = ageing::read_sample_file(input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << input << ": " << e.what() << '\n';
        return exit_usage;
    }
    const std::size_t min_n = kind == ageing::TestKind::hollander_proschan_nbu ? 3 : 2;
    if (sample.size() < min_n) {
        std::cerr << "error: need at least " << min_n << " observations for "
                  << ageing::test_kind_name(kind) << ", got " << sample.size() << '\n';
        return exit_usage;
    }

    const ageing::TestOutcome outcome = ageing::run_test(sample, kind, params, alpha, dual);
    OutputTarget target(out_path);
    if (format == "json") {
        target.stream() << outcome_to_json(outcome, params).dump(2) << '\n';
    } else if (format == "csv") {
        target.stream() << "test,dual,n,alpha,b,raw_statistic,theta0,sigma_hat,block_length,"
                           "standardized,p_value,reject,degenerate,iid_standardized,iid_reject\n"
                        << ageing::test_kind_name(outcome.kind) << ',' << outcome.dual << ','
                        << outcome.n << ',' << ageing::format_double(outcome.alpha) << ','
                        << ageing::format_double(params.b) << ','
                        << ageing::format_double(outcome.raw_statistic) << ','
                        << ageing::format_double(outcome.theta0) << ','
                        << ageing::format_double(outcome.sigma.sigma_hat) << ','
                        << outcome.sigma.block_length << ','
                        << ageing::format_double(outcome.standardized) << ','
                        << ageing::format_double(outcome.p_value) << ',' << outcome.reject << ','
                        << outcome.degenerate << ','
                        << ageing::format_double(outcome.iid_standardized) << ','
                        << outcome.iid_reject << '\n';
    } else {
        print_outcome_text(outcome, target.stream());
    }
    return outcome.degenerate ? exit_degenerate : exit_ok;
}

int cmd_generate(const ageing::GeneratorSpec& spec, std::size_t n, std::uint64_t seed,
                 std::uint64_t stream, const std::string& out_path) {
    const std::vector<double> sample = ageing::gen_sequence(spec, n, ageing::SeedSpec{seed, stream});
    if (out_path.empty() || out_path == "-") {
        for (double v : sample) std::cout << ageing::format_double(v) << '\n';
        return exit_ok;
    }
    ageing::write_sample_file(out_path, sample);
    json meta = spec_to_json(spec);
    meta["n"] = n;
    meta["seed"] = {{"master", seed}, {"stream", stream}};
    meta["format"] = "one observation per line, LF-terminated";
    std::ofstream sidecar(out_path + ".meta.json", std::ios::binary);
    if (!sidecar) throw std::runtime_error("cannot write sidecar: " + out_path + ".meta.json");
    sidecar << meta.dump(2) << '\n';
    std::cerr << "wrote " << n << " observations to " << out_path << " (spec in " << out_path
              << ".meta.json)\n";
    return exit_ok;
}

json size_power_report_json(const ageing::MonteCarloConfig& config,
                            const ageing::SizePowerReport& report, bool keep_draws) {
    json j{
        {"config",
         {{"test", ageing::test_kind_name(config.kind)},
          {"b", config.params.b},
          {"generator", spec_to_json(config.generator)},
          {"n", config.n},
          {"replications", config.replications},
          {"alpha", config.alpha},
          {"master_seed", config.master_seed}}},
        {"report",
         {{"sim_rate", report.sim_rate},
          {"sim_critpt", report.sim_critpt},
          {"iid_sim_rate", report.iid_sim_rate},
          {"iid_sim_critpt", report.iid_sim_critpt},
          {"mc_stderr", report.mc_stderr},
          {"degenerate_count", report.degenerate_count}}},
    };
    if (keep_draws) {
        j["report"]["standardized"] = report.standardized;
        j["report"]["iid_standardized"] = report.iid_standardized;
    }
    return j;
}

int cmd_size_power(bool is_size, const ageing::MonteCarloConfig& config, bool keep_draws,
                   unsigned threads, const std::string& format, const std::string& out_path) {
    const ageing::SizePowerReport report =
        is_size ? ageing::run_size_experiment(config, keep_draws, threads)
                : ageing::run_power_experiment(config, keep_draws, threads);
    OutputTarget target(out_path);
    const std::string label = is_size ? "size" : "power";
    if (format == "json") {
        target.stream() << size_power_report_json(config, report, keep_draws).dump(2) << '\n';
    } else {
        target.stream() << ageing::report_csv_header << '\n'
                        << ageing::size_power_csv_row(label, config, report) << '\n';
    }
    return exit_ok;
}

int cmd_estimators(const ageing::MonteCarloConfig& config, std::optional<double> target_override,
                   unsigned threads, const std::string& format, const std::string& out_path) {
    const double target = target_override
                              ? *target_override
                              : ageing::reference_sigma(config.kind, config.generator.m);
    const ageing::EstimatorReport report =
        ageing::run_estimator_experiment(config, target, threads);
    OutputTarget out(out_path);
    if (format == "json") {
        json j{
            {"config",
             {{"test", ageing::test_kind_name(config.kind)},
              {"generator", spec_to_json(config.generator)},
              {"n", config.n},
              {"replications", config.replications},
              {"master_seed", config.master_seed}}},
            {"report",
             {{"mean_scaled_sigma", report.mean_scaled_sigma},
              {"bias", report.bias},
              {"emse", report.emse},
              {"sigma_target", report.sigma_target}}},
        };
        out.stream() << j.dump(2) << '\n';
    } else {
        out.stream() << ageing::report_csv_header << '\n'
                     << ageing::estimator_csv_row("estimators", config, report) << '\n';
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tests of exponentiality against IFRA/NBU/DMRL ageing for stationary "
                 "associated lifetime data"};
    app.require_subcommand(1);

    // --- test ---------------------------------------------------------------
    auto* test_cmd = app.add_subcommand("test", "Run one test on a sample file");
    std::string input_path, test_name = "deshpande", format = "text", out_path;
    double b = 0.5, alpha = 0.05;
    bool dual = false;
    test_cmd->add_option("input", input_path, "Sample file, one observation per line")->required();
    test_cmd->add_option("--test", test_name, "deshpande | hp | ahmad")->capture_default_str();
    test_cmd->add_option("--b", b, "Deshpande scale fraction, 0 < b < 1")->capture_default_str();
    test_cmd->add_option("--alpha", alpha, "Significance level")->capture_default_str();
    test_cmd->add_flag("--dual", dual, "Test against the dual classes (DFRA/NWU/IMRL)");
    test_cmd->add_option("--format", format, "text | csv | json")->capture_default_str();
    test_cmd->add_option("--out", out_path, "Output path (default stdout)");

    // --- generate -------------------------------------------------------------
    auto* gen_cmd = app.add_subcommand("generate", "Generate an associated sequence");
    std::string gen_family = "null-exp", gen_out;
    int gen_m = 2;
    int gen_sid = 0;
    double gen_a = 0.0;
    std::size_t gen_n = 100;
    std::uint64_t gen_seed = 0, gen_stream = 0;
    gen_cmd->add_option("--family", gen_family,
                        "null-exp | makeham-gompertz | linear-failure-rate | weibull")
        ->capture_default_str();
    gen_cmd->add_option("--m", gen_m, "Window size (1 = i.i.d. baseline)")->capture_default_str();
    gen_cmd->add_option("--sid", gen_sid, "Shorthand: study sequence id 1..16 (overrides family/m)");
    gen_cmd->add_option("--a", gen_a, "Family shape parameter");
    gen_cmd->add_option("--n", gen_n, "Number of observations")->capture_default_str();
    gen_cmd->add_option("--seed", gen_seed, "Master seed")->capture_default_str();
    gen_cmd->add_option("--stream", gen_stream, "Stream id")->capture_default_str();
    gen_cmd->add_option("--out", gen_out, "Output file ('-' = stdout, no sidecar)");

    // --- size / power ---------------------------------------------------------
    auto* size_cmd = app.add_subcommand("size", "Simulated size under the null generator");
    auto* power_cmd = app.add_subcommand("power", "Simulated power under an alternative");
    std::string mc_test = "deshpande", mc_family = "makeham-gompertz", mc_format = "csv",
                mc_out;
    int mc_m = 2;
    double mc_a = 1.0, mc_b = 0.5, mc_alpha = 0.05;
    std::size_t mc_n = 500, mc_r = 10000;
    std::uint64_t mc_seed = 0;
    unsigned mc_threads = 0;
    bool keep_draws = false;
    for (CLI::App* cmd : {size_cmd, power_cmd}) {
        cmd->add_option("--test", mc_test, "deshpande | hp | ahmad")->capture_default_str();
        cmd->add_option("--m", mc_m, "Window size")->capture_default_str();
        cmd->add_option("--n", mc_n, "Sample size")->capture_default_str();
        cmd->add_option("--r", mc_r, "Replications")->capture_default_str();
        cmd->add_option("--alpha", mc_alpha, "Significance level")->capture_default_str();
        cmd->add_option("--b", mc_b, "Deshpande scale fraction")->capture_default_str();
        cmd->add_option("--seed", mc_seed, "Master seed")->capture_default_str();
        cmd->add_option("--threads", mc_threads, "Worker threads (0 = AGEING_THREADS or all cores)");
        cmd->add_option("--format", mc_format, "csv | json")->capture_default_str();
        cmd->add_option("--out", mc_out, "Output path (default stdout)");
        cmd->add_flag("--keep-draws", keep_draws, "Include per-replication statistics (json)");
    }
    power_cmd->add_option("--family", mc_family, "Alternative family")->capture_default_str();
    power_cmd->add_option("--a", mc_a, "Family shape parameter")->capture_default_str();

    // --- estimators -------------------------------------------------------------
    auto* est_cmd = app.add_subcommand("estimators", "Estimator quality under the null generator");
    std::optional<double> est_target;
    est_cmd->add_option("--test", mc_test, "deshpande | hp | ahmad")->capture_default_str();
    est_cmd->add_option("--m", mc_m, "Window size")->capture_default_str();
    est_cmd->add_option("--n", mc_n, "Sample size")->capture_default_str();
    est_cmd->add_option("--r", mc_r, "Replications")->capture_default_str();
    est_cmd->add_option("--b", mc_b, "Deshpande scale fraction")->capture_default_str();
    est_cmd->add_option("--seed", mc_seed, "Master seed")->capture_default_str();
    est_cmd->add_option("--threads", mc_threads, "Worker threads");
    est_cmd->add_option("--target", est_target, "Override the reference k*sigma target");
    est_cmd->add_option("--format", mc_format, "csv | json")->capture_default_str();
    est_cmd->add_option("--out", mc_out, "Output path (default stdout)");

    // --- reproduce -------------------------------------------------------------
    auto* rep_cmd = app.add_subcommand("reproduce", "Run a full simulation-study table");
    std::string rep_table;
    std::size_t rep_r = 10000;
    std::uint64_t rep_seed = 0;
    unsigned rep_threads = 0;
    std::string rep_out;
    rep_cmd->add_option("table", rep_table, "4.1a | 4.1b | 4.1c | 4.2 | 4.3 | 4.4 | 4.5")
        ->required();
    rep_cmd->add_option("--r", rep_r, "Replications per cell")->capture_default_str();
    rep_cmd->add_option("--seed", rep_seed, "Master seed")->capture_default_str();
    rep_cmd->add_option("--threads", rep_threads, "Worker threads");
    rep_cmd->add_option("--out", rep_out, "CSV output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (test_cmd->parsed()) {
            return cmd_test(input_path, test_name, b, alpha, dual, format, out_path);
        }
        if (gen_cmd->parsed()) {
            ageing::GeneratorSpec spec;
            if (gen_sid > 0) {
                spec = ageing::GeneratorSpec::from_s_id(gen_sid, gen_a);
            } else {
                spec = ageing::GeneratorSpec{parse_family(gen_family), gen_m, gen_a};
                spec.validate();
            }
            return cmd_generate(spec, gen_n, gen_seed, gen_stream, gen_out);
        }
        if (size_cmd->parsed() || power_cmd->parsed()) {
            ageing::MonteCarloConfig config;
            config.kind = parse_test_kind(mc_test);
            config.params.b = mc_b;
            config.generator =
                size_cmd->parsed()
                    ? ageing::GeneratorSpec{ageing::Family::null_exp, mc_m, 0.0}
                    : ageing::GeneratorSpec{parse_family(mc_family), mc_m, mc_a};
            config.n = mc_n;
            config.replications = mc_r;
            config.alpha = mc_alpha;
            config.master_seed = mc_seed;
            return cmd_size_power(size_cmd->parsed(), config, keep_draws, mc_threads, mc_format,
                                  mc_out);
        }
        if (est_cmd->parsed()) {
            ageing::MonteCarloConfig config;
            config.kind = parse_test_kind(mc_test);
            config.params.b = mc_b;
            config.generator = ageing::GeneratorSpec{ageing::Family::null_exp, mc_m, 0.0};
            config.n = mc_n;
            config.replications = mc_r;
            config.master_seed = mc_seed;
            return cmd_estimators(config, est_target, mc_threads, mc_format, mc_out);
        }
        if (rep_cmd->parsed()) {
            OutputTarget target(rep_out);
            ageing::reproduce_table(rep_table, rep_r, rep_seed, target.stream(), rep_threads);
            return exit_ok;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
