#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"

#include "disco/config.hpp"
#include "disco/errors.hpp"
#include "disco/harness.hpp"
#include "disco/scenario.hpp"

using namespace disco;

namespace {

class TempFile {
public:
    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("disco_cfg_test_" + std::to_string(++counter) + ".cfg"))
                    .string();
        std::ofstream out(path_);
        out << contents;
    }
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

} // namespace

TEST_CASE("boundary unit conversions and their bitwise inverses") {
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(deg_to_rad(180.0) == doctest::Approx(std::numbers::pi).epsilon(1e-16));

    // Snapshot exactness contract: any value that entered through the forward
    // map (file load, defaults) must survive a write->reload cycle bitwise.
    // Arbitrary doubles need not: where the forward map is expansive in ulp
    // terms its image skips representable values, so only in-image watts are
    // guaranteed an exact dBm preimage.
    for (double x : {11.0, -117.44727494896694, 0.0, 30.0, -3.7, 15.0}) {
        const double w = dbm_to_watts(x);
        CHECK(dbm_to_watts(watts_to_dbm(w)) == w);
    }
    for (double xdb : {3.0, 0.0, -10.0, 7.25}) {
        const double lin = db_to_linear(xdb);
        CHECK(db_to_linear(linear_to_db(lin)) == lin);
    }
    for (double xdeg : {30.0, 72.0, 252.0, -40.0}) {
        const double rad = deg_to_rad(xdeg);
        CHECK(deg_to_rad(rad_to_deg(rad)) == rad);
    }
}

TEST_CASE("a full config file populates every field") {
    const TempFile f(R"([system]
bs_antennas = 4
rx_antennas = 6
dris_h = 8
dris_v = 4
users = 3
frame_symbols = 40
kappa = 0.35
power_dbm = 11
wavelength_m = 0.0857
spacing_ratio = 0.5
rician_factor_db = 3
chi = 0.8
noise_comm_dbm = -117.44727494896694
noise_sens_dbm = -110
seed = 99

[geometry]
bs_pos = 0 0 3
dris_pos = -1 0 2.5
rx_pos = 0 60 0
user_center = 0 180 0
user_radius_m = 20
target_range_m = 25
target_bearing_min_deg = 30
target_bearing_max_deg = 60

[dris]
bits = 1
phases_deg = 72 252
amplitudes = 1 1
probs = 0.5 0.5
)");

    const ScenarioConfig cfg = load_config(f.path());
    CHECK(cfg.n_b == 4);
    CHECK(cfg.n_s == 6);
    CHECK(cfg.n_d_h == 8);
    CHECK(cfg.n_d_v == 4);
    CHECK(cfg.n_d() == 32);
    CHECK(cfg.k_c == 3);
    CHECK(cfg.frame_len == 40);
    CHECK(cfg.kappa == 0.35);
    CHECK(cfg.p0 == doctest::Approx(0.012589254117941675).epsilon(1e-15));
    CHECK(cfg.wavelength == 0.0857);
    CHECK(cfg.rician_factor == doctest::Approx(1.9952623149688795).epsilon(1e-15));
    CHECK(cfg.chi == 0.8);
    CHECK(cfg.sigma2_c == 1.8000000000000016e-15);
    CHECK(cfg.sigma2_s == doctest::Approx(1e-14).epsilon(1e-14));
    CHECK(cfg.seed == 99);
    CHECK(cfg.geometry.rx_pos == Eigen::Vector3d(0, 60, 0));
    CHECK(cfg.geometry.user_radius == 20.0);
    CHECK(cfg.geometry.target_range == 25.0);
    CHECK(cfg.geometry.bearing_min == doctest::Approx(std::numbers::pi / 6).epsilon(1e-15));
    CHECK(cfg.geometry.bearing_max == doctest::Approx(std::numbers::pi / 3).epsilon(1e-15));
    CHECK(cfg.dris.bits == 1);
    CHECK(cfg.dris.phases[0] == doctest::Approx(deg_to_rad(72.0)).epsilon(1e-15));
    CHECK(cfg.dris.phases[1] == doctest::Approx(deg_to_rad(252.0)).epsilon(1e-15));
    CHECK(cfg.dris.probs[0] == 0.5);
}

TEST_CASE("an empty file keeps the built-in defaults") {
    const TempFile f("\n# nothing but a comment\n");
    const ScenarioConfig cfg = load_config(f.path());
    const ScenarioConfig def;
    CHECK(cfg.n_b == def.n_b);
    CHECK(cfg.n_d() == def.n_d());
    CHECK(cfg.p0 == def.p0);
    CHECK(cfg.kappa == def.kappa);
    CHECK(cfg.sigma2_c == def.sigma2_c);
    CHECK(cfg.geometry.dris_pos == def.geometry.dris_pos);
    CHECK(cfg.dris.phases == def.dris.phases);
}

TEST_CASE("parse failures carry file and line anchors") {
    const auto expect_error = [](const std::string& contents, const std::string& needle) {
        const TempFile f(contents);
        try {
            (void)load_config(f.path());
            FAIL("expected a config error for: ", contents);
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            INFO("message: ", what);
            CHECK(what.find(needle) != std::string::npos);
            CHECK(what.find(f.path()) != std::string::npos);
        }
    };

    expect_error("[orbit]\n", ":1:");
    expect_error("[system]\nwarp = 9\n", ":2:");
    expect_error("[system]\nkappa = fast\n", ":2:");
    expect_error("[system]\nkappa 0.5\n", ":2:");
    expect_error("[geometry]\nbs_pos = 1 2\n", ":2:");
    expect_error("key_before_any_section = 1\n", ":1:");
    // Profile consistency is checked once the section is complete.
    expect_error("[dris]\nbits = 1\nphases_deg = 0 180\namplitudes = 1 1\nprobs = 0.9 0.2\n",
                 "profile");
    // Scenario constraints run last, anchored to the file as a whole.
    expect_error("[system]\nusers = 0\n", "k_c must be >= 1");

    CHECK_THROWS_AS((void)load_config("/nonexistent/disco_nowhere.cfg"), IoError);
}

TEST_CASE("snapshots reload to bitwise-identical scenarios") {
    ScenarioConfig cfg;
    cfg.n_b = 8;
    cfg.k_c = 4;
    cfg.kappa = 0.2;
    cfg.p0 = 0.012589254117941675;
    cfg.rician_factor = 1.9952623149688795;
    cfg.sigma2_c = 1.8000000000000016e-15;
    cfg.sigma2_s = 1.8000000000000016e-15;
    cfg.geometry.bearing_min = std::numbers::pi / 6.0;
    cfg.geometry.bearing_max = std::numbers::pi / 3.0;
    cfg.geometry.dris_pos = Eigen::Vector3d(-1.0, 0.25, 2.5);
    cfg.seed = 31;

    std::ostringstream snapshot;
    write_config(snapshot, cfg);
    const TempFile f(snapshot.str());
    const ScenarioConfig back = load_config(f.path());

    CHECK(back.n_b == cfg.n_b);
    CHECK(back.n_s == cfg.n_s);
    CHECK(back.n_d_h == cfg.n_d_h);
    CHECK(back.n_d_v == cfg.n_d_v);
    CHECK(back.k_c == cfg.k_c);
    CHECK(back.frame_len == cfg.frame_len);
    CHECK(back.seed == cfg.seed);
    CHECK(back.kappa == cfg.kappa);
    CHECK(back.p0 == cfg.p0);
    CHECK(back.wavelength == cfg.wavelength);
    CHECK(back.spacing_ratio == cfg.spacing_ratio);
    CHECK(back.rician_factor == cfg.rician_factor);
    CHECK(back.chi == cfg.chi);
    CHECK(back.sigma2_c == cfg.sigma2_c);
    CHECK(back.sigma2_s == cfg.sigma2_s);
    CHECK(back.geometry.bs_pos == cfg.geometry.bs_pos);
    CHECK(back.geometry.dris_pos == cfg.geometry.dris_pos);
    CHECK(back.geometry.rx_pos == cfg.geometry.rx_pos);
    CHECK(back.geometry.user_center == cfg.geometry.user_center);
    CHECK(back.geometry.user_radius == cfg.geometry.user_radius);
    CHECK(back.geometry.target_range == cfg.geometry.target_range);
    CHECK(back.geometry.bearing_min == cfg.geometry.bearing_min);
    CHECK(back.geometry.bearing_max == cfg.geometry.bearing_max);
    CHECK(back.dris.bits == cfg.dris.bits);
    REQUIRE(back.dris.phases.size() == cfg.dris.phases.size());
    for (std::size_t i = 0; i < cfg.dris.phases.size(); ++i) {
        CHECK(back.dris.phases[i] == cfg.dris.phases[i]);
        CHECK(back.dris.amplitudes[i] == cfg.dris.amplitudes[i]);
        CHECK(back.dris.probs[i] == cfg.dris.probs[i]);
    }
}

TEST_CASE("sweep sections load as defaults and run records are ignored") {
    const TempFile f(R"([system]
users = 2
bs_antennas = 4
frame_symbols = 16
dris_h = 8
dris_v = 8

[sweep]
axis = elements
values = 256 1024
trials = 50
metrics = sum_rate crlb_aoa
benchmarks = with_dris without_dris
dt_redraws = 4

[run]
version = 0.1.0
errors = 0
)");

    // The scenario loader must tolerate both extra sections.
    const ScenarioConfig cfg = load_config(f.path());
    CHECK(cfg.k_c == 2);

    const std::optional<SweepSpec> spec = load_sweep_spec(f.path());
    REQUIRE(spec.has_value());
    CHECK(spec->axis == SweepAxis::n_d);
    REQUIRE(spec->values.size() == 2);
    CHECK(spec->values[0] == 256.0);
    CHECK(spec->values[1] == 1024.0);
    CHECK(spec->trials == 50);
    REQUIRE(spec->metrics.size() == 2);
    CHECK(spec->metrics[0] == Metric::sum_rate);
    CHECK(spec->metrics[1] == Metric::crlb_aoa);
    REQUIRE(spec->benchmarks.size() == 2);
    CHECK(spec->benchmarks[0] == Benchmark::with_dris);
    CHECK(spec->benchmarks[1] == Benchmark::without_dris);
    CHECK(spec->dt_redraws == 4);

    const TempFile plain("[system]\nusers = 2\n");
    CHECK_FALSE(load_sweep_spec(plain.path()).has_value());

    const TempFile bad("[sweep]\naxis = frequency\n");
    CHECK_THROWS_AS((void)load_sweep_spec(bad.path()), ConfigError);
}
