#ifndef DISCO_SCENARIO_HPP
#define DISCO_SCENARIO_HPP

#include <Eigen/Core>
#include <cstdint>
#include <numbers>

#include "disco/dris.hpp"

namespace disco {

/**
 * @brief Deployment geometry, meters, z up.
 *
 * The base station and sensing receiver are uniform linear arrays along the
 * x-axis; angles of departure/arrival are measured from array broadside, so
 * sin(theta) is the direction cosine along x. The surface is a vertical
 * uniform planar array in the x-z plane facing +y; its element grid runs
 * horizontally (x) in the outer index and vertically (z) in the inner index.
 * Reference elements (index 0) sit exactly at the recorded positions.
 */
struct Geometry {
    Eigen::Vector3d bs_pos{0.0, 0.0, 3.0};
    Eigen::Vector3d dris_pos{-1.0, 0.0, 2.5};
    Eigen::Vector3d rx_pos{0.0, 60.0, 0.0};

    Eigen::Vector3d user_center{0.0, 180.0, 0.0};
    double user_radius = 20.0;

    /// Target placement rule: range from the origin, bearing measured from
    /// the x-axis drawn uniformly in [bearing_min, bearing_max], on either
    /// side of the x-axis with equal probability, in the z = 0 plane.
    double target_range = 20.0;
    double bearing_min = std::numbers::pi / 6.0;
    double bearing_max = std::numbers::pi / 3.0;
};

/**
 * @brief Full scenario description. All internal units are SI (watts, meters,
 *        radians); dBm/degree conversions happen at the CLI boundary.
 */
struct ScenarioConfig {
    int n_b = 8;        ///< transmit antennas at the base station
    int n_s = 8;        ///< antennas at the sensing receiver
    int n_d_h = 64;     ///< surface elements, horizontal
    int n_d_v = 64;     ///< surface elements, vertical
    int k_c = 4;        ///< single-antenna users
    int frame_len = 80; ///< symbols per frame (L); must be >= n_b

    double kappa = 0.2; ///< comm/sensing trade-off weight in [0, 1]
    double p0 = 0.012589254117941675; ///< transmit power budget, watts (11 dBm)

    double wavelength = 0.0857;    ///< meters
    double spacing_ratio = 0.5;    ///< element spacing / wavelength
    double rician_factor = 1.9952623149688795; ///< linear epsilon of the BS-surface link (3 dB)
    double chi = 0.9;              ///< target reflection coefficient magnitude

    double sigma2_c = 1.8000000000000016e-15; ///< comm noise variance, watts (-117.447 dBm)
    double sigma2_s = 1.8000000000000016e-15; ///< sensing noise variance, watts

    Geometry geometry;
    DrisProfile dris = DrisProfile::baseline_two_phase();
    std::uint64_t seed = 1;

    int n_d() const { return n_d_h * n_d_v; }

    /// Throws ConfigError on any violated constraint.
    void validate() const;
};

} // namespace disco

#endif
