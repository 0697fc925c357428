#include "disco/channel.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "disco/errors.hpp"

namespace disco {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::Vector3d ula_element(const Eigen::Vector3d& pos, int n, double spacing) {
    return pos + Eigen::Vector3d(n * spacing, 0.0, 0.0);
}

Eigen::Vector3d surface_element(const Eigen::Vector3d& pos, int ih, int iv, double spacing) {
    return pos + Eigen::Vector3d(ih * spacing, 0.0, iv * spacing);
}

/// Broadside angle seen from a ULA along x: asin of the x direction cosine.
double broadside_angle(const Eigen::Vector3d& array_pos, const Eigen::Vector3d& point) {
    const Eigen::Vector3d d = point - array_pos;
    const double r = d.norm();
    if (r <= 0.0) throw ConfigError("array and scatterer positions coincide");
    return std::asin(std::clamp(d.x() / r, -1.0, 1.0));
}

} // namespace

double path_loss_db(double distance_m, LinkType type) {
    if (distance_m <= 0.0)
        throw ConfigError("path_loss_db: distance must be positive, got " +
                          std::to_string(distance_m));
    const double lg = std::log10(distance_m);
    return type == LinkType::los ? 35.6 + 22.0 * lg : 32.6 + 36.7 * lg;
}

double path_gain(double loss_db) { return std::pow(10.0, -loss_db / 10.0); }

Eigen::VectorXcd steering_ula(int n, double theta, double spacing_ratio) {
    Eigen::VectorXcd a(n);
    const double step = kTwoPi * spacing_ratio * std::sin(theta);
    for (int m = 0; m < n; ++m) a[m] = std::polar(1.0, step * m);
    return a;
}

Eigen::VectorXcd steering_ula_derivative(int n, double theta, double spacing_ratio) {
    const std::complex<double> factor{0.0, kTwoPi * spacing_ratio * std::cos(theta)};
    Eigen::VectorXcd d = steering_ula(n, theta, spacing_ratio);
    for (int m = 0; m < n; ++m) d[m] *= factor * static_cast<double>(m);
    return d;
}

Eigen::VectorXcd upa_response(int n_h, int n_v, double theta_h, double theta_v,
                              double spacing_ratio) {
    const Eigen::VectorXcd ah = steering_ula(n_h, theta_h, spacing_ratio);
    const Eigen::VectorXcd av = steering_ula(n_v, theta_v, spacing_ratio);
    Eigen::VectorXcd out(static_cast<Eigen::Index>(n_h) * n_v);
    for (int ih = 0; ih < n_h; ++ih)
        for (int iv = 0; iv < n_v; ++iv) out[static_cast<Eigen::Index>(ih) * n_v + iv] = ah[ih] * av[iv];
    return out;
}

Eigen::MatrixXcd near_field_los(const Eigen::Vector3d& ula_pos, int n_ula,
                                const Eigen::Vector3d& surf_pos, int n_h, int n_v,
                                double wavelength, double spacing_ratio) {
    if (wavelength <= 0.0) throw ConfigError("near_field_los: wavelength must be positive");
    const double spacing = spacing_ratio * wavelength;
    const double k = kTwoPi / wavelength;
    Eigen::MatrixXcd a(n_ula, static_cast<Eigen::Index>(n_h) * n_v);
    for (int n = 0; n < n_ula; ++n) {
        const Eigen::Vector3d pn = ula_element(ula_pos, n, spacing);
        const double d_ref = (pn - surf_pos).norm();
        if (d_ref <= 0.0) throw ConfigError("near_field_los: array overlaps the surface");
        for (int ih = 0; ih < n_h; ++ih) {
            for (int iv = 0; iv < n_v; ++iv) {
                const double d = (pn - surface_element(surf_pos, ih, iv, spacing)).norm();
                a(n, static_cast<Eigen::Index>(ih) * n_v + iv) = std::polar(1.0, -k * (d - d_ref));
            }
        }
    }
    return a;
}

Eigen::VectorXcd dris_sensing_path(const Eigen::MatrixXcd& g, const Eigen::VectorXcd& h_i_s,
                                   const ReflectionState& state) {
    if (g.cols() != h_i_s.size() || g.cols() != state.phi.size())
        throw ConfigError("dris_sensing_path: element-count mismatch");
    return g * state.phi.cwiseProduct(h_i_s);
}

ChannelSet assemble_channels(const ScenarioConfig& cfg, Rng& rng,
                             const Eigen::MatrixXcd* g_los_cache) {
    const Geometry& geo = cfg.geometry;
    const int n_d = cfg.n_d();
    ChannelSet cs;

    // Users: uniform over the disc, z = 0 plane.
    cs.user_pos.reserve(cfg.k_c);
    for (int k = 0; k < cfg.k_c; ++k) {
        const double r = geo.user_radius * std::sqrt(rng.uniform());
        const double ang = rng.uniform(0.0, kTwoPi);
        cs.user_pos.push_back(geo.user_center +
                              Eigen::Vector3d(r * std::cos(ang), r * std::sin(ang), 0.0));
    }

    // Target: range from the origin, bearing from the x-axis, random side.
    const double bearing = rng.uniform(geo.bearing_min, geo.bearing_max);
    const double side = rng.uniform() < 0.5 ? 1.0 : -1.0;
    cs.target_pos = Eigen::Vector3d(geo.target_range * std::cos(bearing),
                                    side * geo.target_range * std::sin(bearing), 0.0);
    cs.theta1 = broadside_angle(geo.bs_pos, cs.target_pos);
    cs.theta2 = broadside_angle(geo.rx_pos, cs.target_pos);

    // Large-scale gains.
    cs.ls.g = path_gain(path_loss_db((geo.bs_pos - geo.dris_pos).norm(), LinkType::los));
    cs.ls.i_c.resize(cfg.k_c);
    cs.ls.d_c.resize(cfg.k_c);
    for (int k = 0; k < cfg.k_c; ++k) {
        cs.ls.i_c[k] =
            path_gain(path_loss_db((cs.user_pos[k] - geo.dris_pos).norm(), LinkType::los));
        cs.ls.d_c[k] =
            path_gain(path_loss_db((cs.user_pos[k] - geo.bs_pos).norm(), LinkType::nlos));
    }
    cs.ls.d1_s = path_gain(path_loss_db((cs.target_pos - geo.bs_pos).norm(), LinkType::los));
    cs.ls.d2_s = path_gain(path_loss_db((geo.rx_pos - cs.target_pos).norm(), LinkType::los));
    cs.ls.i_s = path_gain(path_loss_db((cs.target_pos - geo.dris_pos).norm(), LinkType::los));

    // BS <-> surface: Rician with exact near-field LoS phases.
    const double eps = cfg.rician_factor;
    const double los_w = std::sqrt(eps / (1.0 + eps));
    const double nlos_w = std::sqrt(1.0 / (1.0 + eps));
    Eigen::MatrixXcd g_hat;
    if (g_los_cache != nullptr) {
        g_hat = los_w * (*g_los_cache);
    } else {
        g_hat = los_w * near_field_los(geo.bs_pos, cfg.n_b, geo.dris_pos, cfg.n_d_h, cfg.n_d_v,
                                       cfg.wavelength, cfg.spacing_ratio);
    }
    for (Eigen::Index c = 0; c < g_hat.cols(); ++c)
        for (Eigen::Index r = 0; r < g_hat.rows(); ++r) g_hat(r, c) += nlos_w * rng.cnormal();
    cs.g = std::sqrt(cs.ls.g) * g_hat;

    // Rayleigh comm links.
    cs.h_i_c.resize(n_d, cfg.k_c);
    for (int k = 0; k < cfg.k_c; ++k) {
        const double s = std::sqrt(cs.ls.i_c[k]);
        for (int r = 0; r < n_d; ++r) cs.h_i_c(r, k) = s * rng.cnormal();
    }
    cs.h_d_c.resize(cfg.n_b, cfg.k_c);
    for (int k = 0; k < cfg.k_c; ++k) {
        const double s = std::sqrt(cs.ls.d_c[k]);
        for (int n = 0; n < cfg.n_b; ++n) cs.h_d_c(n, k) = s * rng.cnormal();
    }

    // Deterministic sensing links.
    cs.h_d1_s = std::sqrt(cs.ls.d1_s) * steering_ula(cfg.n_b, cs.theta1, cfg.spacing_ratio);
    cs.h_d2_s = std::sqrt(cs.ls.d2_s) * steering_ula(cfg.n_s, cs.theta2, cfg.spacing_ratio);
    {
        const Eigen::Vector3d d = cs.target_pos - geo.dris_pos;
        const double r = d.norm();
        const double th = std::asin(std::clamp(d.x() / r, -1.0, 1.0));
        const double tv = std::asin(std::clamp(d.z() / r, -1.0, 1.0));
        cs.h_i_s = std::sqrt(cs.ls.i_s) *
                   upa_response(cfg.n_d_h, cfg.n_d_v, th, tv, cfg.spacing_ratio);
    }

    // Reflection states for the pilot and data phases.
    cs.phi_pt = draw_reflection_state(cfg.dris, n_d, rng).phi;
    cs.phi_dt = draw_reflection_state(cfg.dris, n_d, rng).phi;

    cs.h_pt = cs.h_d_c + cs.g * cs.phi_pt.asDiagonal() * cs.h_i_c;
    cs.h_dt = cs.h_d_c + cs.g * cs.phi_dt.asDiagonal() * cs.h_i_c;
    return cs;
}

} // namespace disco
