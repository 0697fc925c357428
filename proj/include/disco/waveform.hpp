#ifndef DISCO_WAVEFORM_HPP
#define DISCO_WAVEFORM_HPP

#include <Eigen/Core>

#include "disco/rng.hpp"

namespace disco {

/// K_c x L frame of unit-power QPSK symbols {(+-1 +- j)/sqrt(2)}.
struct SymbolFrame {
    Eigen::MatrixXcd s;
};

SymbolFrame generate_symbols(int k_c, int frame_len, Rng& rng);

/// Transmit frame X (N_B x L) with its power budget and trade-off weight.
struct Waveform {
    Eigen::MatrixXcd x;
    double p0 = 1.0;
    double kappa = 0.0;
};

/**
 * @brief Sensing-optimal waveform: orthogonal rows at full power.
 *
 * Minimizes ||H X - S||_F subject to (1/L) X X^H = (P0 / N_B) I, solved in
 * closed form from the SVD of H^H S. `h` is the K_c x N_B effective downlink
 * matrix (row k = user k channel, conjugated). Requires L >= N_B; throws
 * ConfigError otherwise (row orthogonality is infeasible when the frame is
 * shorter than the antenna count).
 */
Waveform solve_sensing_waveform(const Eigen::MatrixXcd& h, const SymbolFrame& s, double p0);

/// Result of the trade-off solve: waveform, multiplier, and root-find effort.
struct IsacSolution {
    Waveform waveform;
    double rho = 0.0;  ///< Lagrange multiplier of the power constraint
    int iterations = 0;
    bool hard_case = false; ///< power deficit filled along the minimal eigenspace
};

/**
 * @brief Trade-off waveform: min kappa ||H X - S||^2 + (1-kappa) ||X - X0||^2
 *        subject to tr(X X^H) = P0 L.
 *
 * Solved exactly: eigendecompose kappa H^H H + (1-kappa) I, then root-find
 * the secular equation for the power multiplier on (-lambda_min, inf) with a
 * safeguarded Newton iteration. When the projected right-hand side carries no
 * weight on the minimal eigenspace and the limit norm undershoots the budget,
 * the deficit is placed along a minimal eigenvector (hard case). Throws
 * NumericalError with bracket diagnostics if the root find exceeds 200
 * iterations; kappa == 0 returns X0 exactly.
 */
IsacSolution solve_isac_waveform(const Eigen::MatrixXcd& h, const SymbolFrame& s,
                                 const Waveform& x0, double p0, double kappa);

} // namespace disco

#endif
