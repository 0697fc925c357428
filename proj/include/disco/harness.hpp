#ifndef DISCO_HARNESS_HPP
#define DISCO_HARNESS_HPP

#include <string>
#include <vector>

#include "disco/rng.hpp"
#include "disco/scenario.hpp"

namespace disco {

enum class SweepAxis { power_dbm, n_d, dris_distance_m };

enum class Metric { sum_rate, sinr_bound, mse_aod, mse_aoa, crlb_aod, crlb_aoa };

/**
 * Benchmarks bundle a waveform choice with surface presence:
 *  - comm_waveform / isac_waveform / sensing_waveform: surface active, the
 *    trade-off weight forced to 1 / taken from the config / forced to 0.
 *  - with_dris: surface active at the config weight (alias of isac_waveform,
 *    kept so paired rows can be requested explicitly).
 *  - without_dris: surface absent, config weight; shares the same direct
 *    channel draw as the other benchmarks of the trial.
 */
enum class Benchmark { comm_waveform, isac_waveform, sensing_waveform, with_dris, without_dris };

const char* axis_name(SweepAxis axis);
const char* metric_name(Metric metric);
const char* benchmark_name(Benchmark benchmark);

/// Parse an axis name; the aliases "power", "elements", and "distance" are
/// accepted alongside the canonical names. Throws ConfigError when unknown.
SweepAxis parse_axis(const std::string& name);
Metric parse_metric(const std::string& name);
Benchmark parse_benchmark(const std::string& name);

/// Angle metrics are stored in rad^2 and converted to deg^2 at the output layer.
bool metric_is_squared_angle(Metric metric);

struct SweepSpec {
    SweepAxis axis = SweepAxis::power_dbm;
    std::vector<double> values; ///< strictly monotone
    int trials = 200;
    std::vector<Metric> metrics;
    std::vector<Benchmark> benchmarks;
    int dt_redraws = 8; ///< data-phase reflection redraws per SINR estimate
};

struct SweepRow {
    double axis_value = 0.0;
    Benchmark benchmark = Benchmark::isac_waveform;
    Metric metric = Metric::sum_rate;
    double mean = 0.0;
    double std_error = 0.0;
    int trials = 0;
};

struct SweepError {
    double axis_value = 0.0;
    int exit_class = 4; ///< 2 config, 3 I/O, 4 numerical — mirrors CLI exit codes
    std::string message;
};

struct PointTiming {
    double axis_value = 0.0;
    double millis = 0.0; ///< accumulated cell evaluation time at this point
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepError> errors;
    std::vector<PointTiming> timings;
};

/// Rebind one scenario field to an axis value: transmit power from dBm, a
/// square surface grid from an element count, or the surface moved along the
/// fixed BS->surface direction to a given distance. Throws ConfigError for
/// values the axis cannot represent (e.g. a non-square element count).
ScenarioConfig apply_axis(const ScenarioConfig& cfg, SweepAxis axis, double value);

/**
 * @brief Seeded Monte Carlo sweep over one axis.
 *
 * Each (point, trial) cell draws a scenario realization, solves the
 * benchmark waveforms against it, and evaluates the requested metrics.
 * Trials are paired across axis points and benchmarks by fixed RNG stream
 * assignment (the channel and symbol streams depend only on the trial
 * index), so cross-point trends and cross-benchmark gaps are common-random-
 * number comparisons. Cells run on a worker pool capped by the
 * DISCO_ISAC_THREADS environment variable; results merge in fixed order, so
 * output is byte-stable for a given (config, spec) regardless of thread
 * count. Per-cell failures become error records and the sweep continues.
 */
SweepResult run_sweep(const ScenarioConfig& cfg, const SweepSpec& spec);

/// Mean squared difference between two equal-length angle lists (rad^2).
double mse(const std::vector<double>& truths, const std::vector<double>& estimates);

struct PropositionCheck {
    std::string name;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0; ///< |observed - expected| allowed
    bool pass = false;
};

struct ValidationReport {
    std::vector<PropositionCheck> checks;
    double mu_bar = 0.0;
    double nu_bar = 0.0;
    bool all_pass() const;
};

/**
 * @brief Monte Carlo check of the aging-channel statistics.
 *
 * Freezes one geometry draw (pinning the large-scale gains the closed-form
 * variances refer to) and redraws the small-scale fading and both reflection
 * states every sample, so the empirical statistics estimate full ensemble
 * values. Tests: per-user aging-channel entry variance against
 * cas_gain_k N_D mu_bar (5%), cascaded sensing-path entry variance against
 * cas_gain N_D nu_bar (5%), entry means within 3 standard errors of zero,
 * and Gaussianity of one aging entry via excess kurtosis within 3 standard
 * errors. samples must be >= 1000.
 */
ValidationReport validate_propositions(const ScenarioConfig& cfg, int samples, Rng& rng);

} // namespace disco

#endif
