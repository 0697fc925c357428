#ifndef DISCO_CHANNEL_HPP
#define DISCO_CHANNEL_HPP

#include <Eigen/Core>
#include <vector>

#include "disco/dris.hpp"
#include "disco/rng.hpp"
#include "disco/scenario.hpp"

namespace disco {

enum class LinkType { los, nlos };

/**
 * @brief Distance-dependent loss in dB.
 *
 * los:  35.6 + 22.0  log10(d)
 * nlos: 32.6 + 36.7  log10(d)
 * d in meters, d > 0 required.
 */
double path_loss_db(double distance_m, LinkType type);

/// Linear power gain from a loss in dB: 10^(-db/10).
double path_gain(double loss_db);

/**
 * @brief ULA response, length n, entry m = exp(j 2 pi delta m sin(theta)).
 *
 * theta is measured from array broadside; delta is the element spacing in
 * wavelengths. Entry 0 is the reference element.
 */
Eigen::VectorXcd steering_ula(int n, double theta, double spacing_ratio);

/// d/dtheta of steering_ula: j 2 pi delta cos(theta) * (m .* a(theta)).
Eigen::VectorXcd steering_ula_derivative(int n, double theta, double spacing_ratio);

/**
 * @brief UPA response as the Kronecker product a_h(theta_h) (x) a_v(theta_v).
 *
 * Length n_h * n_v; the horizontal index varies slowest: element
 * r = ih * n_v + iv carries phase 2 pi delta (ih sin theta_h + iv sin theta_v).
 */
Eigen::VectorXcd upa_response(int n_h, int n_v, double theta_h, double theta_v,
                              double spacing_ratio);

/**
 * @brief Near-field LoS matrix between a ULA and a planar surface.
 *
 * Entry (n, r) = exp(-j 2 pi / lambda * (D_n^r - D_n)) with D_n^r the exact
 * distance from ULA element n to surface element r and D_n the distance from
 * ULA element n to the surface reference element. Unit modulus per entry;
 * element placement follows the Geometry conventions (ULA along x, surface
 * grid in x-z, horizontal-major ordering).
 */
Eigen::MatrixXcd near_field_los(const Eigen::Vector3d& ula_pos, int n_ula,
                                const Eigen::Vector3d& surf_pos, int n_h, int n_v,
                                double wavelength, double spacing_ratio);

/// Large-scale (linear power) gains of every link in the scenario.
struct LargeScale {
    double g = 1.0;      ///< BS <-> surface
    Eigen::VectorXd i_c; ///< surface -> user k (LoS)
    Eigen::VectorXd d_c; ///< BS -> user k (NLoS)
    double d1_s = 1.0;   ///< BS -> target (LoS)
    double d2_s = 1.0;   ///< target -> sensing receiver (LoS)
    double i_s = 1.0;    ///< surface -> target (LoS)

    double cas_s() const { return g * i_s; }
    Eigen::VectorXd cas_c() const { return g * i_c; }
};

/**
 * @brief One Monte Carlo realization of every channel in the scenario.
 *
 * Composite pilot-phase and data-phase comm channels are cached at assembly;
 * the aging difference h_aca() is their exact difference by construction.
 * Column k of the comm matrices is user k's channel; use sites apply the
 * conjugate transpose.
 */
struct ChannelSet {
    Eigen::MatrixXcd g;      ///< N_B x N_D, BS <-> surface, includes sqrt(L_G)
    Eigen::MatrixXcd h_d_c;  ///< N_B x K_c direct comm channels
    Eigen::MatrixXcd h_i_c;  ///< N_D x K_c surface->user channels
    Eigen::VectorXcd h_d1_s; ///< N_B, BS->target, includes sqrt(L_d1)
    Eigen::VectorXcd h_d2_s; ///< N_S, target->receiver, includes sqrt(L_d2)
    Eigen::VectorXcd h_i_s;  ///< N_D, surface->target, includes sqrt(L_I_s)

    LargeScale ls;

    Eigen::VectorXcd phi_pt; ///< reflection state during the pilot phase
    Eigen::VectorXcd phi_dt; ///< reflection state during the data phase

    double theta1 = 0.0; ///< departure angle, BS -> target (radians)
    double theta2 = 0.0; ///< arrival angle, target -> receiver (radians)

    Eigen::Vector3d target_pos{0, 0, 0};
    std::vector<Eigen::Vector3d> user_pos;

    Eigen::MatrixXcd h_pt; ///< N_B x K_c composite channel during pilots
    Eigen::MatrixXcd h_dt; ///< N_B x K_c composite channel during data

    Eigen::MatrixXcd h_aca() const { return h_dt - h_pt; }
};

/**
 * @brief Draw users, target, fading, and reflection states for one trial.
 *
 * Draw order is fixed (users, target, surface LoS/NLoS, comm fading, states)
 * so a given rng stream always produces the same realization. `g_los_cache`
 * may supply the precomputed near-field LoS matrix for the configured
 * geometry; pass nullptr to compute it here.
 */
ChannelSet assemble_channels(const ScenarioConfig& cfg, Rng& rng,
                             const Eigen::MatrixXcd* g_los_cache = nullptr);

/// Cascaded BS -> surface -> target path for one reflection state:
/// g * diag(state) * h_i_s (inputs already carry their large-scale factors).
Eigen::VectorXcd dris_sensing_path(const Eigen::MatrixXcd& g, const Eigen::VectorXcd& h_i_s,
                                   const ReflectionState& state);

} // namespace disco

#endif
