#include "disco/dris.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "disco/errors.hpp"

namespace disco {

DrisProfile DrisProfile::make(int bits, std::vector<double> phases,
                              std::vector<double> amplitudes, std::vector<double> probs) {
    if (bits < 0 || bits > 20)
        throw ConfigError("reflection profile: bits must be in [0, 20], got " +
                          std::to_string(bits));
    const std::size_t expected = std::size_t{1} << bits;
    if (phases.size() != expected || amplitudes.size() != expected || probs.size() != expected)
        throw ConfigError("reflection profile: phases/amplitudes/probs must each have 2^bits = " +
                          std::to_string(expected) + " entries");

    double psum = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw ConfigError("reflection profile: negative probability");
        psum += p;
    }
    if (std::abs(psum - 1.0) > 1e-12)
        throw ConfigError("reflection profile: probabilities sum to " + std::to_string(psum) +
                          ", expected 1 within 1e-12");
    for (double a : amplitudes)
        if (a < 0.0) throw ConfigError("reflection profile: negative amplitude");

    std::complex<double> mean{0.0, 0.0};
    for (std::size_t i = 0; i < expected; ++i)
        mean += probs[i] * amplitudes[i] * std::polar(1.0, phases[i]);
    if (std::abs(mean) > 1e-9)
        throw ConfigError("reflection profile: mean coefficient magnitude " +
                          std::to_string(std::abs(mean)) +
                          " violates the zero-mean constraint (tolerance 1e-9)");

    DrisProfile p;
    p.bits = bits;
    p.phases = std::move(phases);
    p.amplitudes = std::move(amplitudes);
    p.probs = std::move(probs);
    return p;
}

DrisProfile DrisProfile::baseline_two_phase() {
    const double pi = std::numbers::pi;
    return make(1, {2.0 * pi / 5.0, 7.0 * pi / 5.0}, {1.0, 1.0}, {0.5, 0.5});
}

ReflectionState draw_reflection_state(const DrisProfile& profile, int n_d, Rng& rng) {
    ReflectionState state;
    state.phi.resize(n_d);
    for (int r = 0; r < n_d; ++r) {
        const std::size_t i = rng.categorical(profile.probs);
        state.phi[r] = std::polar(profile.amplitudes[i], profile.phases[i]);
    }
    return state;
}

DrisMoments dris_moments(const DrisProfile& profile) {
    DrisMoments m;
    const std::size_t n = profile.size();
    for (std::size_t i = 0; i < n; ++i)
        m.nu_bar += profile.probs[i] * profile.amplitudes[i] * profile.amplitudes[i];
    for (std::size_t i1 = 0; i1 < n; ++i1) {
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            const double a1 = profile.amplitudes[i1];
            const double a2 = profile.amplitudes[i2];
            m.mu_bar += profile.probs[i1] * profile.probs[i2] *
                        (a1 * a1 + a2 * a2 -
                         2.0 * a1 * a2 * std::cos(profile.phases[i1] - profile.phases[i2]));
        }
    }
    return m;
}

} // namespace disco
