#include "disco/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "disco/config.hpp"

namespace disco {

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_deg2(double rad2) {
    const double s = 180.0 / std::numbers::pi;
    return rad2 * s * s;
}

namespace {

double output_units(Metric metric, double v) {
    return metric_is_squared_angle(metric) ? to_deg2(v) : v;
}

} // namespace

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    os << "axis,benchmark,metric,mean,stderr,trials\n";
    for (const SweepRow& row : result.rows) {
        os << format_full(row.axis_value) << "," << benchmark_name(row.benchmark) << ","
           << metric_name(row.metric) << ","
           << format_full(output_units(row.metric, row.mean)) << ","
           << format_full(output_units(row.metric, row.std_error)) << "," << row.trials
           << "\n";
    }
}

void write_sweep_table(std::ostream& os, const SweepResult& result) {
    os << std::left << std::setw(12) << "axis" << std::setw(18) << "benchmark"
       << std::setw(12) << "metric" << std::right << std::setw(15) << "mean"
       << std::setw(15) << "stderr" << std::setw(9) << "trials" << "\n";
    char buf[64];
    for (const SweepRow& row : result.rows) {
        std::snprintf(buf, sizeof buf, "%.6g", row.axis_value);
        os << std::left << std::setw(12) << buf << std::setw(18)
           << benchmark_name(row.benchmark) << std::setw(12) << metric_name(row.metric);
        std::snprintf(buf, sizeof buf, "%.6g", output_units(row.metric, row.mean));
        os << std::right << std::setw(15) << buf;
        std::snprintf(buf, sizeof buf, "%.6g", output_units(row.metric, row.std_error));
        os << std::setw(15) << buf << std::setw(9) << row.trials << "\n";
    }
    for (const SweepError& err : result.errors)
        os << "error at axis " << format_full(err.axis_value) << " (class "
           << err.exit_class << "): " << err.message << "\n";
}

void write_manifest(std::ostream& os, const ScenarioConfig& cfg, const SweepSpec& spec,
                    const SweepResult& result, const std::string& command_line,
                    double wall_seconds) {
    os << "# run manifest: loads as a config file; the [sweep] section replays the\n"
          "# request, so `sweep --config <this file> --out replay` reproduces the CSV.\n";
    write_config(os, cfg);
    os << "\n[sweep]\n";
    os << "axis = " << axis_name(spec.axis) << "\n";
    os << "values =";
    for (double v : spec.values) os << " " << format_full(v);
    os << "\n";
    os << "trials = " << spec.trials << "\n";
    os << "metrics =";
    for (Metric m : spec.metrics) os << " " << metric_name(m);
    os << "\n";
    os << "benchmarks =";
    for (Benchmark b : spec.benchmarks) os << " " << benchmark_name(b);
    os << "\n";
    os << "dt_redraws = " << spec.dt_redraws << "\n";
    os << "\n[run]\n";
    os << "version = " << kToolVersion << "\n";
    os << "command = " << command_line << "\n";
    os << "master_seed = " << cfg.seed << "\n";
    os << "wall_seconds = " << format_full(wall_seconds) << "\n";
    os << "points_evaluated = " << result.timings.size() << "\n";
    for (std::size_t i = 0; i < result.timings.size(); ++i)
        os << "point_ms_" << i << " = " << format_full(result.timings[i].axis_value) << " "
           << format_full(result.timings[i].millis) << "\n";
    os << "errors = " << result.errors.size() << "\n";
    for (std::size_t i = 0; i < result.errors.size(); ++i)
        os << "error_" << i << " = axis " << format_full(result.errors[i].axis_value)
           << " class " << result.errors[i].exit_class << ": " << result.errors[i].message
           << "\n";
}

namespace {

// The widely circulated two-phase alphabet: phases {2pi/5, 7pi/5}, unit
// amplitudes, equal probabilities. Its enumerated pairwise aging power is 2,
// while a published figure quotes 1; flag the mismatch so downstream numbers
// are not misread.
bool is_quoted_two_phase_profile(const ValidationReport& rep) {
    return std::abs(rep.nu_bar - 1.0) < 1e-12 && std::abs(rep.mu_bar - 1.0) > 1e-9;
}

} // namespace

void write_validation_table(std::ostream& os, const ValidationReport& rep) {
    os << "surface alphabet moments: nu_bar = " << format_full(rep.nu_bar)
       << " (single-draw power), mu_bar = " << format_full(rep.mu_bar)
       << " (pairwise aging power)\n";
    if (is_quoted_two_phase_profile(rep))
        os << "WARN: a published value of 1 circulates for the aging power of this\n"
              "      alphabet; enumerating the alphabet gives " << format_full(rep.mu_bar)
           << ", and the enumerated value is used throughout.\n";
    os << std::left << std::setw(30) << "check" << std::right << std::setw(16) << "observed"
       << std::setw(16) << "expected" << std::setw(14) << "tolerance" << "  status\n";
    char buf[64];
    int passed = 0;
    for (const PropositionCheck& c : rep.checks) {
        os << std::left << std::setw(30) << c.name;
        std::snprintf(buf, sizeof buf, "%.6g", c.observed);
        os << std::right << std::setw(16) << buf;
        std::snprintf(buf, sizeof buf, "%.6g", c.expected);
        os << std::setw(16) << buf;
        std::snprintf(buf, sizeof buf, "%.6g", c.tolerance);
        os << std::setw(14) << buf << "  " << (c.pass ? "PASS" : "FAIL") << "\n";
        if (c.pass) ++passed;
    }
    os << "overall: " << (rep.all_pass() ? "PASS" : "FAIL") << " (" << passed << "/"
       << rep.checks.size() << ")\n";
}

void write_validation_csv(std::ostream& os, const ValidationReport& rep) {
    os << "check,observed,expected,tolerance,status\n";
    for (const PropositionCheck& c : rep.checks)
        os << c.name << "," << format_full(c.observed) << "," << format_full(c.expected)
           << "," << format_full(c.tolerance) << "," << (c.pass ? "pass" : "fail") << "\n";
}

} // namespace disco
