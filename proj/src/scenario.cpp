#include "disco/scenario.hpp"

#include <cmath>
#include <string>

#include "disco/errors.hpp"

namespace disco {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

} // namespace

void ScenarioConfig::validate() const {
    require(n_b >= 1, "n_b must be >= 1");
    require(n_s >= 1, "n_s must be >= 1");
    require(n_d_h >= 0 && n_d_v >= 0, "surface element counts must be >= 0");
    require(k_c >= 1, "k_c must be >= 1");
    require(frame_len >= n_b,
            "frame_len (" + std::to_string(frame_len) + ") must be >= n_b (" +
                std::to_string(n_b) + "): the sensing covariance constraint needs L >= N_B");
    require(kappa >= 0.0 && kappa <= 1.0, "kappa must lie in [0, 1]");
    require(p0 > 0.0, "p0 must be positive");
    require(wavelength > 0.0, "wavelength must be positive");
    require(spacing_ratio > 0.0, "spacing_ratio must be positive");
    require(rician_factor >= 0.0, "rician_factor must be >= 0");
    require(chi >= 0.0 && chi <= 1.0, "chi must lie in [0, 1]");
    require(sigma2_c > 0.0, "sigma2_c must be positive");
    require(sigma2_s > 0.0, "sigma2_s must be positive");

    const Geometry& g = geometry;
    require(g.user_radius >= 0.0, "user_radius must be >= 0");
    require(g.target_range > 0.0, "target_range must be positive");
    require(g.bearing_min > 0.0 && g.bearing_max < std::numbers::pi / 2.0,
            "target bearing range must lie inside (0, pi/2)");
    require(g.bearing_min <= g.bearing_max, "bearing_min must be <= bearing_max");
    require((g.bs_pos - g.dris_pos).norm() > 0.0, "bs_pos and dris_pos must differ");

    // DrisProfile::make already validated the profile on construction, but a
    // config assembled field-by-field can bypass it; re-check cheaply.
    DrisProfile::make(dris.bits, dris.phases, dris.amplitudes, dris.probs);
}

} // namespace disco
