// Command-line front end: sweeps, statistics validation, and error-floor
// reports for the bistatic ISAC scenario under a randomized reflecting
// surface. Exit codes: 0 success, 1 failed validation checks, 2 bad
// configuration or usage, 3 I/O failure, 4 numerical failure.
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "disco/channel.hpp"
#include "disco/comm.hpp"
#include "disco/config.hpp"
#include "disco/errors.hpp"
#include "disco/harness.hpp"
#include "disco/report.hpp"
#include "disco/sensing.hpp"
#include "disco/waveform.hpp"

namespace {

using namespace disco;

struct CommonArgs {
    std::string config;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double kappa = 0.0;
    bool kappa_set = false;
};

ScenarioConfig resolve_config(const CommonArgs& a) {
    ScenarioConfig cfg = load_config(a.config);
    if (a.seed_set) cfg.seed = a.seed;
    if (a.kappa_set) cfg.kappa = a.kappa;
    cfg.validate();
    return cfg;
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string token =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (token.empty()) throw ConfigError("--values: empty entry in '" + text + "'");
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &pos);
        } catch (const std::exception&) {
            throw ConfigError("--values: '" + token + "' is not a number");
        }
        if (pos != token.size())
            throw ConfigError("--values: trailing characters in '" + token + "'");
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<double> make_range(double from, double to, double step) {
    if (step == 0.0) throw ConfigError("--step must be nonzero");
    if ((to - from) * step < 0.0)
        throw ConfigError("--step points away from --to (from " + std::to_string(from) +
                          ", to " + std::to_string(to) + ", step " + std::to_string(step) + ")");
    std::vector<double> out;
    const double span = (to - from) / step;
    const long long n = static_cast<long long>(span + 1e-9);
    for (long long i = 0; i <= n; ++i) out.push_back(from + static_cast<double>(i) * step);
    return out;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write '" + path + "'");
    return os;
}

struct SweepArgs {
    CommonArgs common;
    std::string out;
    std::string axis;
    std::string values_text;
    double from = 0.0, to = 0.0, step = 0.0;
    bool range_set = false;
    std::vector<std::string> metric_names;
    int trials = 0;
    bool trials_set = false;
    bool no_dris = false;
    bool keep_going = false;
    std::string format = "table";
};

int cmd_sweep(const SweepArgs& a, const std::string& command_line) {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig cfg = resolve_config(a.common);
    const std::optional<SweepSpec> file_spec = load_sweep_spec(a.common.config);

    SweepSpec spec = file_spec.value_or(SweepSpec{});
    if (!a.axis.empty())
        spec.axis = parse_axis(a.axis);
    else if (!file_spec)
        throw ConfigError("sweep: --axis is required (the config has no [sweep] section)");

    if (!a.values_text.empty())
        spec.values = parse_value_list(a.values_text);
    else if (a.range_set)
        spec.values = make_range(a.from, a.to, a.step);
    if (spec.values.empty())
        throw ConfigError("sweep: provide axis values via --values or --from/--to/--step");

    if (a.trials_set) spec.trials = a.trials;

    if (!a.metric_names.empty()) {
        spec.metrics.clear();
        for (const std::string& name : a.metric_names) spec.metrics.push_back(parse_metric(name));
    }
    if (spec.metrics.empty())
        throw ConfigError("sweep: at least one --metric is required");

    if (a.no_dris)
        spec.benchmarks = {Benchmark::without_dris};
    else if (spec.benchmarks.empty())
        spec.benchmarks = {Benchmark::comm_waveform, Benchmark::isac_waveform,
                           Benchmark::sensing_waveform, Benchmark::with_dris,
                           Benchmark::without_dris};

    const SweepResult result = run_sweep(cfg, spec);

    const std::string csv_path = a.out + ".csv";
    const std::string manifest_path = a.out + ".manifest";
    {
        std::ofstream csv = open_output(csv_path);
        write_sweep_csv(csv, result);
        csv.flush();
        if (!csv) throw IoError("write failed on '" + csv_path + "'");
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    {
        std::ofstream man = open_output(manifest_path);
        write_manifest(man, cfg, spec, result, command_line, wall);
        man.flush();
        if (!man) throw IoError("write failed on '" + manifest_path + "'");
    }

    if (a.format == "csv")
        write_sweep_csv(std::cout, result);
    else
        write_sweep_table(std::cout, result);
    std::cerr << "wrote " << csv_path << " (" << result.rows.size() << " rows) and "
              << manifest_path << "\n";

    for (const SweepError& err : result.errors)
        std::cerr << "sweep error at axis " << format_full(err.axis_value) << ": "
                  << err.message << "\n";
    if (!result.errors.empty() && !a.keep_going) return result.errors.front().exit_class;
    return 0;
}

struct ValidateArgs {
    CommonArgs common;
    std::string out;
    int samples = 10000;
    std::string format = "table";
};

int cmd_validate(const ValidateArgs& a) {
    const ScenarioConfig cfg = resolve_config(a.common);
    Rng rng = Rng::stream(cfg.seed, 30, 0, 0);
    const ValidationReport rep = validate_propositions(cfg, a.samples, rng);

    if (a.format == "csv")
        write_validation_csv(std::cout, rep);
    else
        write_validation_table(std::cout, rep);
    if (!a.out.empty()) {
        const std::string csv_path = a.out + ".csv";
        std::ofstream csv = open_output(csv_path);
        write_validation_csv(csv, rep);
        csv.flush();
        if (!csv) throw IoError("write failed on '" + csv_path + "'");
        std::cerr << "wrote " << csv_path << "\n";
    }
    return rep.all_pass() ? 0 : 1;
}

struct CrlbArgs {
    CommonArgs common;
    bool no_dris = false;
    std::string format = "table";
};

int cmd_crlb(const CrlbArgs& a) {
    const ScenarioConfig cfg = resolve_config(a.common);
    Rng ch_rng = Rng::stream(cfg.seed, 1, 0, 0);
    const ChannelSet ch = assemble_channels(cfg, ch_rng);
    Rng sym_rng = Rng::stream(cfg.seed, 2, 0, 0);
    const SymbolFrame s = generate_symbols(cfg.k_c, cfg.frame_len, sym_rng);

    auto evaluate = [&](bool with_surface) {
        const CommView view = make_comm_view(ch, cfg, with_surface);
        const Eigen::MatrixXcd h = view.h_pt.adjoint();
        const Waveform x0 = solve_sensing_waveform(h, s, cfg.p0);
        const Waveform wf = solve_isac_waveform(h, s, x0, cfg.p0, cfg.kappa).waveform;
        const SensingModel m = make_sensing_model(cfg, ch, with_surface);
        return sensing_report(m, ch.theta1, ch.theta2, wf);
    };

    std::vector<std::pair<const char*, SensingReport>> rows;
    if (!a.no_dris) rows.emplace_back("with_dris", evaluate(true));
    rows.emplace_back("without_dris", evaluate(false));

    if (a.format == "csv") {
        std::cout << "variant,fim_aod_aod,fim_aod_aoa,fim_aoa_aoa,crlb_aod_deg2,crlb_aoa_deg2\n";
        for (const auto& [name, rep] : rows)
            std::cout << name << "," << format_full(rep.fim(0, 0)) << ","
                      << format_full(rep.fim(0, 1)) << "," << format_full(rep.fim(1, 1)) << ","
                      << format_full(to_deg2(rep.crlb_theta1)) << ","
                      << format_full(to_deg2(rep.crlb_theta2)) << "\n";
    } else {
        std::cout << "target angles: departure " << format_full(rad_to_deg(ch.theta1))
                  << " deg, arrival " << format_full(rad_to_deg(ch.theta2)) << " deg\n";
        for (const auto& [name, rep] : rows) {
            std::cout << name << ":\n";
            std::cout << "  information  [" << format_full(rep.fim(0, 0)) << ", "
                      << format_full(rep.fim(0, 1)) << "; " << format_full(rep.fim(1, 0))
                      << ", " << format_full(rep.fim(1, 1)) << "]\n";
            std::cout << "  floor (deg^2)  departure " << format_full(to_deg2(rep.crlb_theta1))
                      << "  arrival " << format_full(to_deg2(rep.crlb_theta2)) << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bistatic ISAC link and sensing simulator under a randomized "
                 "reflecting surface"};
    app.set_version_flag("--version", disco::kToolVersion);
    app.require_subcommand(1);

    SweepArgs sw;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Monte Carlo sweep over transmit power, surface size, or surface distance");
    sweep->add_option("--config", sw.common.config, "scenario config file")->required();
    auto* sw_seed = sweep->add_option("--seed", sw.common.seed, "override the config seed");
    auto* sw_kappa =
        sweep->add_option("--kappa", sw.common.kappa, "override the trade-off weight");
    sweep->add_option("--out", sw.out, "output stem; writes <out>.csv and <out>.manifest")
        ->required();
    sweep->add_option("--axis", sw.axis,
                      "sweep axis: power_dbm|power, n_d|elements, dris_distance_m|distance");
    auto* values = sweep->add_option("--values", sw.values_text, "comma-separated axis values");
    auto* from = sweep->add_option("--from", sw.from, "range start");
    auto* to = sweep->add_option("--to", sw.to, "range end (inclusive)");
    auto* step = sweep->add_option("--step", sw.step, "range step");
    from->needs(to)->needs(step)->excludes(values);
    to->needs(from);
    step->needs(from);
    sweep->add_option("--metric", sw.metric_names,
                      "metric to record (repeatable): sum_rate, sinr_bound, mse_aod, "
                      "mse_aoa, crlb_aod, crlb_aoa")
        ->delimiter(',');
    auto* sw_trials = sweep->add_option("--trials", sw.trials, "trials per axis point");
    sweep->add_flag("--no-dris", sw.no_dris, "evaluate only the surface-free benchmark");
    sweep->add_flag("--keep-going", sw.keep_going, "exit 0 even if some points failed");
    sweep->add_option("--format", sw.format, "stdout rendering")
        ->check(CLI::IsMember({"csv", "table"}));

    ValidateArgs va;
    CLI::App* validate = app.add_subcommand(
        "validate", "check surface-induced channel statistics against closed-form moments");
    validate->add_option("--config", va.common.config, "scenario config file")->required();
    auto* va_seed = validate->add_option("--seed", va.common.seed, "override the config seed");
    validate->add_option("--trials", va.samples, "Monte Carlo samples (>= 1000)");
    validate->add_option("--out", va.out, "also write <out>.csv");
    validate->add_option("--format", va.format, "stdout rendering")
        ->check(CLI::IsMember({"csv", "table"}));

    CrlbArgs ca;
    CLI::App* crlb_cmd = app.add_subcommand(
        "crlb", "angle-estimation information and error floors for one scenario draw");
    crlb_cmd->add_option("--config", ca.common.config, "scenario config file")->required();
    auto* ca_seed = crlb_cmd->add_option("--seed", ca.common.seed, "override the config seed");
    auto* ca_kappa =
        crlb_cmd->add_option("--kappa", ca.common.kappa, "override the trade-off weight");
    crlb_cmd->add_flag("--no-dris", ca.no_dris, "report only the surface-free variant");
    crlb_cmd->add_option("--format", ca.format, "stdout rendering")
        ->check(CLI::IsMember({"csv", "table"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    sw.common.seed_set = sw_seed->count() > 0;
    sw.common.kappa_set = sw_kappa->count() > 0;
    sw.range_set = from->count() > 0;
    sw.trials_set = sw_trials->count() > 0;
    va.common.seed_set = va_seed->count() > 0;
    ca.common.seed_set = ca_seed->count() > 0;
    ca.common.kappa_set = ca_kappa->count() > 0;

    std::string command_line;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) command_line += ' ';
        command_line += argv[i];
    }

    try {
        if (sweep->parsed()) return cmd_sweep(sw, command_line);
        if (validate->parsed()) return cmd_validate(va);
        if (crlb_cmd->parsed()) return cmd_crlb(ca);
    } catch (const disco::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const disco::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const disco::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
