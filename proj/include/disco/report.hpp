#ifndef DISCO_REPORT_HPP
#define DISCO_REPORT_HPP

#include <iosfwd>
#include <string>

#include "disco/harness.hpp"
#include "disco/scenario.hpp"

namespace disco {

inline constexpr const char* kToolVersion = "0.1.0";

/// Full-precision decimal form of a double (17 significant digits).
std::string format_full(double v);

/// Output-layer unit change for squared-angle metrics: rad^2 -> deg^2.
double to_deg2(double rad2);

/**
 * @brief Sweep CSV: header `axis,benchmark,metric,mean,stderr,trials`,
 *        UTF-8, LF line endings, 17-significant-digit numbers, squared-angle
 *        metrics converted to deg^2. Row order is fixed by the sweep merge,
 *        so identical (config, spec) produce identical bytes.
 */
void write_sweep_csv(std::ostream& os, const SweepResult& result);

/// Aligned human-readable rendering of the same rows.
void write_sweep_table(std::ostream& os, const SweepResult& result);

/**
 * @brief Replayable run record, written alongside every sweep CSV.
 *
 * [system]/[geometry]/[dris] snapshot the fully resolved scenario in config
 * syntax (boundary-unit values are chosen to convert back to the internal
 * doubles bitwise), [sweep] records the request, and [run] records version,
 * command line, wall clock, per-point runtimes, and per-point errors. The
 * manifest itself loads as a config file, so
 * `sweep --config out.manifest --out replay` reproduces the CSV exactly.
 */
void write_manifest(std::ostream& os, const ScenarioConfig& cfg, const SweepSpec& spec,
                    const SweepResult& result, const std::string& command_line,
                    double wall_seconds);

/// Pass/fail table of the surface statistics checks, with the alphabet
/// moments up front and a warning when the enumerated aging power disagrees
/// with the commonly quoted figure for the two-phase alphabet.
void write_validation_table(std::ostream& os, const ValidationReport& rep);

/// The same checks as CSV: `check,observed,expected,tolerance,status`.
void write_validation_csv(std::ostream& os, const ValidationReport& rep);

} // namespace disco

#endif
