#ifndef DISCO_DRIS_HPP
#define DISCO_DRIS_HPP

#include <Eigen/Core>
#include <vector>

#include "disco/rng.hpp"

namespace disco {

/**
 * @brief Discrete reflection alphabet of the illegitimate surface.
 *
 * 2^bits entries; phase, amplitude, and probability move in lockstep (entry i
 * pairs phase[i] with amplitude[i], drawn with probability probs[i]). The
 * constructor-time validator enforces:
 *  - all three arrays have exactly 2^bits entries,
 *  - probabilities are nonnegative and sum to 1 within 1e-12,
 *  - amplitudes are nonnegative,
 *  - the mean reflection coefficient E[mu * e^{j phi}] vanishes within 1e-9.
 *
 * The zero-mean constraint is what makes the time-varying reflections behave
 * as aging noise rather than a bias; profiles violating it are rejected.
 * bits == 0 is the degenerate single-entry profile (valid only when its
 * amplitude is 0).
 */
struct DrisProfile {
    int bits = 1;
    std::vector<double> phases;     ///< radians
    std::vector<double> amplitudes; ///< linear magnitudes, lockstep with phases
    std::vector<double> probs;

    /// Validates and returns the profile; throws ConfigError on violation.
    static DrisProfile make(int bits, std::vector<double> phases,
                            std::vector<double> amplitudes, std::vector<double> probs);

    /// The two-phase unit-amplitude equal-probability profile {2pi/5, 7pi/5}.
    static DrisProfile baseline_two_phase();

    std::size_t size() const { return phases.size(); }
};

/**
 * @brief One realization of the surface: per-element reflection coefficients
 *        mu_i e^{j phi_i}, redrawn independently for every pilot/data interval.
 */
struct ReflectionState {
    Eigen::VectorXcd phi; ///< length N_D
};

/// Pairwise and single-draw power moments of the reflection alphabet.
/// mu_bar  = E |phi(t) - phi(t')|^2 over independent draws (aging power),
/// nu_bar  = E |phi(t)|^2 (single-draw power).
struct DrisMoments {
    double mu_bar = 0.0;
    double nu_bar = 0.0;
};

/// Draw an i.i.d. reflection state for n_d elements. n_d == 0 gives an empty state.
ReflectionState draw_reflection_state(const DrisProfile& profile, int n_d, Rng& rng);

/// Closed-form moments from the discrete alphabet (pairwise enumeration).
DrisMoments dris_moments(const DrisProfile& profile);

} // namespace disco

#endif
