#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "doctest.h"

#include "disco/rng.hpp"

using disco::Rng;

TEST_CASE("splitmix core matches the published sequence") {
    // Reference outputs computed from the published SplitMix64 algorithm.
    Rng r(0);
    CHECK(r.next_u64() == 16294208416658607535ULL);
    CHECK(r.next_u64() == 7960286522194355700ULL);
    CHECK(r.next_u64() == 487617019471545679ULL);

    Rng rx(0x123456789abcdefULL);
    CHECK(rx.next_u64() == 1547611027431991965ULL);
}

TEST_CASE("stream derivation is deterministic and pinned") {
    Rng a = Rng::stream(42, 1, 2, 3);
    Rng b = Rng::stream(42, 1, 2, 3);
    const std::uint64_t first = a.next_u64();
    CHECK(first == b.next_u64());
    CHECK(first == 12580456470732458968ULL); // frozen: derivation must not drift
}

TEST_CASE("distinct stream indices decorrelate") {
    // Any index perturbation must change the head of the sequence.
    Rng base = Rng::stream(7, 1, 2, 3);
    const std::uint64_t head = base.next_u64();
    CHECK(head != Rng::stream(8, 1, 2, 3).next_u64());
    CHECK(head != Rng::stream(7, 2, 2, 3).next_u64());
    CHECK(head != Rng::stream(7, 1, 3, 3).next_u64());
    CHECK(head != Rng::stream(7, 1, 2, 4).next_u64());

    // Streams differing only in the trial index should look independent:
    // correlation of uniforms across 4096 draws stays at the 1/sqrt(n) scale.
    Rng s1 = Rng::stream(7, 1, 0, 0);
    Rng s2 = Rng::stream(7, 1, 0, 1);
    const int n = 4096;
    double sum12 = 0.0, sum1 = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u1 = s1.uniform() - 0.5;
        const double u2 = s2.uniform() - 0.5;
        sum12 += u1 * u2;
        sum1 += u1 * u1;
        sum2 += u2 * u2;
    }
    const double corr = sum12 / std::sqrt(sum1 * sum2);
    CHECK(std::abs(corr) < 0.08);
}

TEST_CASE("uniform stays in range and hits the pinned value") {
    Rng r(7);
    const double first = r.uniform();
    CHECK(first == doctest::Approx(0.38982974839127149).epsilon(1e-15));
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    Rng q(9);
    for (int i = 0; i < 100; ++i) {
        const double u = q.uniform(-2.0, 5.0);
        CHECK(u >= -2.0);
        CHECK(u < 5.0);
    }
}

TEST_CASE("normal variates have the right first moments") {
    Rng r = Rng::stream(11, 5);
    const int n = 50000;
    double mean = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        mean += x;
        m2 += x * x;
    }
    mean /= n;
    m2 /= n;
    CHECK(std::abs(mean) < 0.02);           // ~4.5 sigma at n=5e4
    CHECK(std::abs(m2 - 1.0) < 0.03);
}

TEST_CASE("complex normal is circularly symmetric with unit power") {
    Rng r = Rng::stream(11, 6);
    const int n = 50000;
    double pow_re = 0.0, pow_im = 0.0;
    std::complex<double> mean = 0.0;
    std::complex<double> pseudo = 0.0; // E[z^2] must vanish for circular symmetry
    for (int i = 0; i < n; ++i) {
        const std::complex<double> z = r.cnormal();
        mean += z;
        pseudo += z * z;
        pow_re += z.real() * z.real();
        pow_im += z.imag() * z.imag();
    }
    mean /= static_cast<double>(n);
    pseudo /= static_cast<double>(n);
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(pseudo) < 0.02);
    CHECK(pow_re / n == doctest::Approx(0.5).epsilon(0.03));
    CHECK(pow_im / n == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("categorical respects the distribution") {
    Rng r = Rng::stream(13, 1);
    const std::array<double, 3> probs{0.2, 0.5, 0.3};
    std::array<int, 3> counts{0, 0, 0};
    const int n = 30000;
    for (int i = 0; i < n; ++i) {
        const std::size_t idx = r.categorical(probs);
        REQUIRE(idx < probs.size());
        ++counts[idx];
    }
    for (std::size_t i = 0; i < probs.size(); ++i)
        CHECK(static_cast<double>(counts[i]) / n == doctest::Approx(probs[i]).epsilon(0.05));

    // Degenerate single-entry distribution always returns index 0.
    const std::array<double, 1> one{1.0};
    CHECK(r.categorical(one) == 0);
}
