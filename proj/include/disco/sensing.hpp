#ifndef DISCO_SENSING_HPP
#define DISCO_SENSING_HPP

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "disco/channel.hpp"
#include "disco/rng.hpp"
#include "disco/scenario.hpp"
#include "disco/waveform.hpp"

namespace disco {

/**
 * @brief Statistical model of the bistatic echo used by the FIM, CRLB, and
 *        estimator: deterministic mean through the direct BS->target->receiver
 *        path, rank-one-plus-diagonal covariance from the randomized surface.
 *
 * n_d == 0 describes the no-surface variant (pure-noise covariance); the
 * with-surface expressions reduce to it exactly when n_d = 0, so both
 * variants share one code path.
 */
struct SensingModel {
    int n_b = 1;         ///< transmit ULA size
    int n_s = 1;         ///< receive ULA size
    double delta = 0.5;  ///< element spacing in wavelengths
    double chi = 1.0;    ///< target reflection coefficient
    double l_d1 = 1.0;   ///< BS->target path gain
    double l_d2 = 1.0;   ///< target->receiver path gain
    double l_cas = 1.0;  ///< BS->surface->target cascade gain
    int n_d = 0;         ///< surface element count entering the covariance
    double nu_bar = 0.0; ///< single-draw power moment of the surface alphabet
    double sigma2 = 1.0; ///< receiver noise power
};

SensingModel make_sensing_model(const ScenarioConfig& cfg, const ChannelSet& ch,
                                bool with_surface);

/// Fisher information and the resulting error floors for (theta1, theta2).
struct SensingReport {
    Eigen::Matrix2d fim = Eigen::Matrix2d::Zero();
    double crlb_theta1 = 0.0; ///< rad^2
    double crlb_theta2 = 0.0; ///< rad^2
    bool with_surface = false;
};

/// Angle estimate from one frame of observations.
struct EstimationResult {
    double theta1 = 0.0;
    double theta2 = 0.0;
    int iterations = 0;
    bool converged = false;
    double final_gradient_norm = 0.0;
};

/// Noise-free mean echo for symbol x_l:
/// chi sqrt(l_d1 l_d2) a_Ns(theta2) (a_Nb(theta1)^T x_l).
Eigen::VectorXcd mean_response(const SensingModel& m, double theta1, double theta2,
                               const Eigen::VectorXcd& x_l);

/// Rank-one weight of the surface term in the covariance:
/// c_l = chi^2 l_d2 l_cas n_d nu_bar ||x_l||^2.
double covariance_scale(const SensingModel& m, const Eigen::VectorXcd& x_l);

/// Per-symbol covariance c_l a(theta2) a(theta2)^H + sigma2 I.
Eigen::MatrixXcd covariance_rl(const SensingModel& m, double theta2,
                               const Eigen::VectorXcd& x_l);

/// Closed-form inverse of covariance_rl (rank-one downdate of (1/sigma2) I).
Eigen::MatrixXcd covariance_inverse(const SensingModel& m, double theta2,
                                    const Eigen::VectorXcd& x_l);

/**
 * @brief Simulate the frame of bistatic echoes.
 *
 * y_l = chi ((h_d1 + G diag(phi_l) h_i)^T x_l) h_d2 + n_l with a fresh
 * reflection state per symbol and i.i.d. CN(0, sigma2_s) noise entries.
 * with_surface=false drops the reflected path.
 */
std::vector<Eigen::VectorXcd> sensing_observation(const ChannelSet& ch,
                                                  const ScenarioConfig& cfg,
                                                  const Waveform& w, Rng& rng,
                                                  bool with_surface);

/**
 * @brief 2x2 Fisher information for theta = (theta1, theta2).
 *
 * Sum over symbols of 2 Re{ du^H R^-1 du } for both parameters plus the
 * covariance trace term, which only theta2 receives (the covariance does not
 * depend on theta1). Throws NumericalError when sigma2 <= 0.
 */
Eigen::Matrix2d fim(const SensingModel& m, double theta1, double theta2, const Waveform& w);

/// CRLBs from a 2x2 FIM: (F22/det, F11/det). Throws NumericalError when the
/// FIM is singular or indefinite (parameters unidentifiable).
std::pair<double, double> crlb(const Eigen::Matrix2d& f);

/// FIM + CRLB bundle for one scenario realization.
SensingReport sensing_report(const SensingModel& m, double theta1, double theta2,
                             const Waveform& w);

/// Log-likelihood of the frame at (theta1, theta2), constant terms dropped:
/// -sum_l [ ln det R_l + (y_l - u_l)^H R_l^-1 (y_l - u_l) ].
double log_likelihood(const SensingModel& m, double theta1, double theta2,
                      const std::vector<Eigen::VectorXcd>& obs, const Waveform& w);

/// Analytic gradient of log_likelihood. The theta2 component carries the
/// mean term plus the two covariance terms; theta1 has only the mean term.
std::pair<double, double> likelihood_gradient(const SensingModel& m, double theta1,
                                              double theta2,
                                              const std::vector<Eigen::VectorXcd>& obs,
                                              const Waveform& w);

/// Knobs of the grid-initialized gradient-ascent estimator.
struct MleOptions {
    double grid_min = -1.3962634015954636;  ///< -80 degrees
    double grid_max = 1.3962634015954636;   ///< +80 degrees
    double grid_step = 0.034906585039886591; ///< 2 degrees
    double sigma_thresh = 1e-10; ///< squared-step convergence threshold (rad^2)
    int max_iter = 500;
    double first_step = 0.008726646259971648; ///< initial step cap, 0.5 degrees
};

/**
 * @brief Maximum-likelihood angle estimation.
 *
 * Coarse 2-D grid search initializes backtracking gradient ascent (step
 * halved until the likelihood increases); angles are reflected back into
 * (-pi/2, pi/2) through the sin-ambiguity of the ULA. Convergence is
 * declared when the squared step falls below sigma_thresh; hitting max_iter
 * returns converged=false rather than throwing.
 */
EstimationResult mle_estimate(const SensingModel& m, const std::vector<Eigen::VectorXcd>& obs,
                              const Waveform& w, const MleOptions& opts = {});

} // namespace disco

#endif
