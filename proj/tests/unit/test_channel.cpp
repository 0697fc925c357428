#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"

#include "disco/channel.hpp"
#include "disco/errors.hpp"
#include "disco/rng.hpp"
#include "disco/scenario.hpp"

using namespace disco;

namespace {

ScenarioConfig small_config() {
    ScenarioConfig cfg;
    cfg.n_b = 4;
    cfg.n_s = 4;
    cfg.n_d_h = 8;
    cfg.n_d_v = 8;
    cfg.k_c = 2;
    cfg.frame_len = 8;
    return cfg;
}

} // namespace

TEST_CASE("path loss matches the two link laws") {
    CHECK(path_loss_db(1.0, LinkType::los) == doctest::Approx(35.6).epsilon(1e-14));
    CHECK(path_loss_db(10.0, LinkType::los) == doctest::Approx(57.6).epsilon(1e-14));
    CHECK(path_loss_db(100.0, LinkType::nlos) == doctest::Approx(106.0).epsilon(1e-14));
    CHECK(path_loss_db(1.0, LinkType::nlos) == doctest::Approx(32.6).epsilon(1e-14));
    CHECK_THROWS_AS(path_loss_db(0.0, LinkType::los), ConfigError);
    CHECK_THROWS_AS(path_loss_db(-1.0, LinkType::nlos), ConfigError);

    CHECK(path_gain(10.0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(path_gain(0.0) == 1.0);
    CHECK(path_gain(30.0) == doctest::Approx(1e-3).epsilon(1e-15));
}

TEST_CASE("ULA steering hits the quarter-wave pattern") {
    // sin(theta) = 1/2 at half-wavelength spacing: phase step pi/2 per element.
    const double theta = std::asin(0.5);
    const Eigen::VectorXcd a = steering_ula(4, theta, 0.5);
    REQUIRE(a.size() == 4);
    const std::complex<double> j(0.0, 1.0);
    CHECK(std::abs(a[0] - std::complex<double>(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(a[1] - j) < 1e-14);
    CHECK(std::abs(a[2] - std::complex<double>(-1.0, 0.0)) < 1e-13);
    CHECK(std::abs(a[3] + j) < 1e-13);

    // Unit modulus everywhere, any angle.
    const Eigen::VectorXcd b = steering_ula(16, 0.7321, 0.5);
    for (int i = 0; i < b.size(); ++i) CHECK(std::abs(std::abs(b[i]) - 1.0) < 1e-14);
}

TEST_CASE("steering derivative agrees with finite differences") {
    const int n = 8;
    const double delta = 0.5;
    for (double theta : {0.3, -0.55, 1.1}) {
        const double h = 1e-6;
        const Eigen::VectorXcd fd =
            (steering_ula(n, theta + h, delta) - steering_ula(n, theta - h, delta)) /
            (2.0 * h);
        const Eigen::VectorXcd an = steering_ula_derivative(n, theta, delta);
        CHECK((an - fd).norm() / fd.norm() < 1e-8);
    }
}

TEST_CASE("UPA response is the Kronecker product of the two ULA factors") {
    const int n_h = 2, n_v = 3;
    const double th = 0.4, tv = -0.25, delta = 0.5;
    const Eigen::VectorXcd u = upa_response(n_h, n_v, th, tv, delta);
    REQUIRE(u.size() == n_h * n_v);

    const Eigen::VectorXcd ah = steering_ula(n_h, th, delta);
    const Eigen::VectorXcd av = steering_ula(n_v, tv, delta);
    for (int ih = 0; ih < n_h; ++ih)
        for (int iv = 0; iv < n_v; ++iv)
            CHECK(std::abs(u[ih * n_v + iv] - ah[ih] * av[iv]) < 1e-13);

    // Spot value: element (1, 2) carries phase 2 pi delta (sin th + 2 sin tv).
    const double phase = 2.0 * std::numbers::pi * delta * (std::sin(th) + 2.0 * std::sin(tv));
    CHECK(std::abs(u[1 * n_v + 2] - std::polar(1.0, phase)) < 1e-13);
}

TEST_CASE("near-field LoS matrix is a unit-modulus phase map anchored at the reference") {
    const Eigen::Vector3d ula_pos(0.0, 0.0, 3.0);
    const Eigen::Vector3d surf_pos(-1.0, 0.0, 2.5);
    const int n_ula = 4, n_h = 3, n_v = 2;
    const double lambda = 0.0857;
    const Eigen::MatrixXcd g = near_field_los(ula_pos, n_ula, surf_pos, n_h, n_v, lambda, 0.5);
    REQUIRE(g.rows() == n_ula);
    REQUIRE(g.cols() == n_h * n_v);

    for (int n = 0; n < g.rows(); ++n) {
        // Column 0 is the surface reference element: zero relative phase.
        CHECK(std::abs(g(n, 0) - std::complex<double>(1.0, 0.0)) < 1e-14);
        for (int r = 0; r < g.cols(); ++r) CHECK(std::abs(std::abs(g(n, r)) - 1.0) < 1e-14);
    }

    // Independent recomputation of one interior entry from raw geometry.
    const double spacing = 0.5 * lambda;
    const Eigen::Vector3d elem_ula = ula_pos + Eigen::Vector3d(2 * spacing, 0.0, 0.0);
    const int ih = 2, iv = 1;
    const Eigen::Vector3d elem_surf = surf_pos + Eigen::Vector3d(ih * spacing, 0.0, iv * spacing);
    const double d_far = (elem_surf - elem_ula).norm();
    const double d_ref = (surf_pos - elem_ula).norm();
    const double phase = -2.0 * std::numbers::pi / lambda * (d_far - d_ref);
    CHECK(std::abs(g(2, ih * n_v + iv) - std::polar(1.0, phase)) < 1e-12);

    CHECK_THROWS_AS(near_field_los(ula_pos, 2, surf_pos, 2, 2, -1.0, 0.5), ConfigError);
    CHECK_THROWS_AS(near_field_los(ula_pos, 2, ula_pos, 2, 2, lambda, 0.5), ConfigError);
}

TEST_CASE("assembled channels respect the deployment geometry") {
    const ScenarioConfig cfg = small_config();
    Rng rng = Rng::stream(cfg.seed, 1, 0, 0);
    const ChannelSet ch = assemble_channels(cfg, rng);
    const Geometry& geo = cfg.geometry;

    REQUIRE(ch.user_pos.size() == static_cast<std::size_t>(cfg.k_c));
    for (int k = 0; k < cfg.k_c; ++k) {
        const Eigen::Vector3d& u = ch.user_pos[k];
        CHECK(u.z() == 0.0);
        CHECK((u - geo.user_center).norm() <= geo.user_radius + 1e-12);
    }

    // Target: fixed range from the origin, bearing within the configured cone.
    CHECK(ch.target_pos.norm() == doctest::Approx(geo.target_range).epsilon(1e-12));
    CHECK(ch.target_pos.z() == 0.0);
    const double bearing = std::atan2(std::abs(ch.target_pos.y()), ch.target_pos.x());
    CHECK(bearing >= geo.bearing_min - 1e-12);
    CHECK(bearing <= geo.bearing_max + 1e-12);

    // Angles are broadside direction cosines of the two ULAs.
    const Eigen::Vector3d d1 = ch.target_pos - geo.bs_pos;
    CHECK(std::sin(ch.theta1) == doctest::Approx(d1.x() / d1.norm()).epsilon(1e-12));
    const Eigen::Vector3d d2 = ch.target_pos - geo.rx_pos;
    CHECK(std::sin(ch.theta2) == doctest::Approx(d2.x() / d2.norm()).epsilon(1e-12));

    // Large-scale gains reproduce the link laws on the drawn geometry.
    CHECK(ch.ls.g ==
          doctest::Approx(path_gain(path_loss_db((geo.bs_pos - geo.dris_pos).norm(),
                                                 LinkType::los)))
              .epsilon(1e-12));
    for (int k = 0; k < cfg.k_c; ++k) {
        CHECK(ch.ls.d_c[k] ==
              doctest::Approx(path_gain(path_loss_db((ch.user_pos[k] - geo.bs_pos).norm(),
                                                     LinkType::nlos)))
                  .epsilon(1e-12));
        CHECK(ch.ls.i_c[k] ==
              doctest::Approx(path_gain(path_loss_db((ch.user_pos[k] - geo.dris_pos).norm(),
                                                     LinkType::los)))
                  .epsilon(1e-12));
    }

    // Deterministic sensing links: scaled steering vectors at the drawn angles.
    const Eigen::VectorXcd a1 = std::sqrt(ch.ls.d1_s) *
                                steering_ula(cfg.n_b, ch.theta1, cfg.spacing_ratio);
    CHECK((ch.h_d1_s - a1).norm() < 1e-12 * a1.norm());
    const Eigen::VectorXcd a2 = std::sqrt(ch.ls.d2_s) *
                                steering_ula(cfg.n_s, ch.theta2, cfg.spacing_ratio);
    CHECK((ch.h_d2_s - a2).norm() < 1e-12 * a2.norm());

    // Dimensions.
    CHECK(ch.g.rows() == cfg.n_b);
    CHECK(ch.g.cols() == cfg.n_d());
    CHECK(ch.h_i_c.rows() == cfg.n_d());
    CHECK(ch.h_pt.rows() == cfg.n_b);
    CHECK(ch.h_pt.cols() == cfg.k_c);
}

TEST_CASE("aging channel is exactly the reflection-state difference term") {
    const ScenarioConfig cfg = small_config();
    Rng rng = Rng::stream(3, 1, 0, 5);
    const ChannelSet ch = assemble_channels(cfg, rng);

    const Eigen::MatrixXcd expected =
        ch.g * (ch.phi_dt - ch.phi_pt).asDiagonal() * ch.h_i_c;
    CHECK((ch.h_aca() - expected).norm() <= 1e-14 * expected.norm());

    // Composite channels decompose into direct + reflected parts.
    const Eigen::MatrixXcd pt = ch.h_d_c + ch.g * ch.phi_pt.asDiagonal() * ch.h_i_c;
    CHECK((ch.h_pt - pt).norm() == 0.0);
}

TEST_CASE("assembly is deterministic and the LoS cache changes nothing") {
    const ScenarioConfig cfg = small_config();

    Rng r1 = Rng::stream(9, 1, 0, 2);
    Rng r2 = Rng::stream(9, 1, 0, 2);
    const ChannelSet a = assemble_channels(cfg, r1);
    const ChannelSet b = assemble_channels(cfg, r2);
    CHECK((a.h_pt - b.h_pt).norm() == 0.0);
    CHECK((a.g - b.g).norm() == 0.0);
    CHECK(a.theta1 == b.theta1);
    CHECK(a.theta2 == b.theta2);

    const Eigen::MatrixXcd cache =
        near_field_los(cfg.geometry.bs_pos, cfg.n_b, cfg.geometry.dris_pos, cfg.n_d_h,
                       cfg.n_d_v, cfg.wavelength, cfg.spacing_ratio);
    Rng r3 = Rng::stream(9, 1, 0, 2);
    const ChannelSet c = assemble_channels(cfg, r3, &cache);
    CHECK((a.g - c.g).norm() == 0.0);
    CHECK((a.h_dt - c.h_dt).norm() == 0.0);
}

TEST_CASE("cascaded sensing path composes surface state with both hops") {
    const ScenarioConfig cfg = small_config();
    Rng rng = Rng::stream(21, 1, 0, 0);
    const ChannelSet ch = assemble_channels(cfg, rng);

    Rng draw = Rng::stream(21, 2, 0, 0);
    const ReflectionState st = draw_reflection_state(cfg.dris, cfg.n_d(), draw);
    const Eigen::VectorXcd path = dris_sensing_path(ch.g, ch.h_i_s, st);
    const Eigen::VectorXcd expected = ch.g * st.phi.asDiagonal() * ch.h_i_s;
    CHECK((path - expected).norm() <= 1e-14 * expected.norm());

    ReflectionState wrong;
    wrong.phi = Eigen::VectorXcd::Ones(3);
    CHECK_THROWS_AS(dris_sensing_path(ch.g, ch.h_i_s, wrong), ConfigError);
}
