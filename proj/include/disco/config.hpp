#ifndef DISCO_CONFIG_HPP
#define DISCO_CONFIG_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "disco/harness.hpp"
#include "disco/scenario.hpp"

namespace disco {

/**
 * @brief Load a scenario description from an INI-style config file.
 *
 * Unset keys keep their built-in defaults. Human units in the file (dBm,
 * degrees, dB) are converted to the internal SI units (watts, radians,
 * linear ratios) at parse time. Recognized sections and keys:
 *
 *   [system]   bs_antennas rx_antennas dris_h dris_v users frame_symbols
 *              kappa power_dbm wavelength_m spacing_ratio rician_factor_db
 *              chi noise_comm_dbm noise_sens_dbm seed
 *   [geometry] bs_pos dris_pos rx_pos user_center   ("x y z" triples, m)
 *              user_radius_m target_range_m
 *              target_bearing_min_deg target_bearing_max_deg
 *   [dris]     bits phases_deg amplitudes probs     (space-separated lists)
 *
 * A [sweep] section (see load_sweep_spec) and a [run] section are permitted
 * and skipped here, so a run manifest loads directly as a config file.
 * Unknown sections or keys, malformed values, and violated scenario
 * constraints raise ConfigError with a file:line anchor where one exists.
 * An unreadable file raises IoError.
 */
ScenarioConfig load_config(const std::string& path);

/**
 * @brief Read the optional [sweep] section of a config or manifest file.
 *
 * Keys: axis, values, trials, metrics, benchmarks, dt_redraws (lists are
 * space-separated). Returns nothing when the section is absent. Command-line
 * sweep flags override these values wholesale.
 */
std::optional<SweepSpec> load_sweep_spec(const std::string& path);

/// Write the scenario back out in config syntax ([system]/[geometry]/[dris]).
void write_config(std::ostream& os, const ScenarioConfig& cfg);

// Boundary-unit conversions used by the config reader (file unit -> internal).
double dbm_to_watts(double dbm);
double db_to_linear(double db);
double deg_to_rad(double deg);

// Inverses for snapshot writing. Each returns a file-unit double chosen so
// the matching forward conversion reproduces `internal` bitwise whenever a
// preimage exists within a few ulps of the mathematical inverse; written
// snapshots therefore replay to identical internal state.
double watts_to_dbm(double watts);
double linear_to_db(double linear);
double rad_to_deg(double rad);

} // namespace disco

#endif
