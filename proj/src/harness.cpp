#include "disco/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <thread>

#include "disco/channel.hpp"
#include "disco/comm.hpp"
#include "disco/errors.hpp"
#include "disco/sensing.hpp"
#include "disco/waveform.hpp"

namespace disco {

namespace {

// Stream tags: trial-scoped streams (channel, symbols) ignore the axis point
// so trials stay paired across points; evaluation streams are per-point but
// shared across benchmarks so benchmark gaps are paired too.
constexpr std::uint64_t kStreamChannel = 1;
constexpr std::uint64_t kStreamSymbols = 2;
constexpr std::uint64_t kStreamCommEval = 10;
constexpr std::uint64_t kStreamSensing = 20;

} // namespace

const char* axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::power_dbm: return "power_dbm";
        case SweepAxis::n_d: return "n_d";
        case SweepAxis::dris_distance_m: return "dris_distance_m";
    }
    return "?";
}

const char* metric_name(Metric metric) {
    switch (metric) {
        case Metric::sum_rate: return "sum_rate";
        case Metric::sinr_bound: return "sinr_bound";
        case Metric::mse_aod: return "mse_aod";
        case Metric::mse_aoa: return "mse_aoa";
        case Metric::crlb_aod: return "crlb_aod";
        case Metric::crlb_aoa: return "crlb_aoa";
    }
    return "?";
}

const char* benchmark_name(Benchmark benchmark) {
    switch (benchmark) {
        case Benchmark::comm_waveform: return "comm_waveform";
        case Benchmark::isac_waveform: return "isac_waveform";
        case Benchmark::sensing_waveform: return "sensing_waveform";
        case Benchmark::with_dris: return "with_dris";
        case Benchmark::without_dris: return "without_dris";
    }
    return "?";
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "power_dbm" || name == "power") return SweepAxis::power_dbm;
    if (name == "n_d" || name == "elements") return SweepAxis::n_d;
    if (name == "dris_distance_m" || name == "distance") return SweepAxis::dris_distance_m;
    throw ConfigError("unknown sweep axis '" + name +
                      "' (expected power_dbm, n_d, or dris_distance_m)");
}

Metric parse_metric(const std::string& name) {
    if (name == "sum_rate") return Metric::sum_rate;
    if (name == "sinr_bound") return Metric::sinr_bound;
    if (name == "mse_aod") return Metric::mse_aod;
    if (name == "mse_aoa") return Metric::mse_aoa;
    if (name == "crlb_aod") return Metric::crlb_aod;
    if (name == "crlb_aoa") return Metric::crlb_aoa;
    throw ConfigError("unknown metric '" + name +
                      "' (expected sum_rate, sinr_bound, mse_aod, mse_aoa, "
                      "crlb_aod, or crlb_aoa)");
}

Benchmark parse_benchmark(const std::string& name) {
    if (name == "comm_waveform") return Benchmark::comm_waveform;
    if (name == "isac_waveform") return Benchmark::isac_waveform;
    if (name == "sensing_waveform") return Benchmark::sensing_waveform;
    if (name == "with_dris") return Benchmark::with_dris;
    if (name == "without_dris") return Benchmark::without_dris;
    throw ConfigError("unknown benchmark '" + name +
                      "' (expected comm_waveform, isac_waveform, sensing_waveform, "
                      "with_dris, or without_dris)");
}

bool metric_is_squared_angle(Metric metric) {
    switch (metric) {
        case Metric::mse_aod:
        case Metric::mse_aoa:
        case Metric::crlb_aod:
        case Metric::crlb_aoa: return true;
        default: return false;
    }
}

ScenarioConfig apply_axis(const ScenarioConfig& cfg, SweepAxis axis, double value) {
    ScenarioConfig out = cfg;
    switch (axis) {
        case SweepAxis::power_dbm:
            out.p0 = std::pow(10.0, (value - 30.0) / 10.0);
            break;
        case SweepAxis::n_d: {
            const double side = std::sqrt(value);
            const long long s = std::llround(side);
            if (value < 1.0 || static_cast<double>(s) * static_cast<double>(s) != value)
                throw ConfigError("axis value " + std::to_string(value) +
                                  " is not a positive perfect square; the element sweep "
                                  "keeps the surface grid square");
            out.n_d_h = static_cast<int>(s);
            out.n_d_v = static_cast<int>(s);
            break;
        }
        case SweepAxis::dris_distance_m: {
            if (!(value > 0.0))
                throw ConfigError("axis value " + std::to_string(value) +
                                  ": BS-surface distance must be positive");
            const Eigen::Vector3d dir = cfg.geometry.dris_pos - cfg.geometry.bs_pos;
            const double norm = dir.norm();
            if (norm <= 0.0)
                throw ConfigError("BS and surface positions coincide; no sweep direction");
            out.geometry.dris_pos = cfg.geometry.bs_pos + (value / norm) * dir;
            break;
        }
    }
    out.validate();
    return out;
}

namespace {

struct BenchmarkPlan {
    double kappa = 0.0;
    bool with_surface = true;
};

BenchmarkPlan plan_for(Benchmark b, const ScenarioConfig& cfg) {
    switch (b) {
        case Benchmark::comm_waveform: return {1.0, true};
        case Benchmark::sensing_waveform: return {0.0, true};
        case Benchmark::isac_waveform: return {cfg.kappa, true};
        case Benchmark::with_dris: return {cfg.kappa, true};
        case Benchmark::without_dris: return {cfg.kappa, false};
    }
    return {cfg.kappa, true};
}

bool wants(const std::vector<Metric>& ms, Metric m) {
    for (Metric x : ms)
        if (x == m) return true;
    return false;
}

unsigned worker_count(std::size_t cells) {
    unsigned n = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("DISCO_ISAC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = static_cast<unsigned>(v);
    }
    if (n < 1) n = 1;
    if (cells < n) n = static_cast<unsigned>(cells);
    return n;
}

} // namespace

SweepResult run_sweep(const ScenarioConfig& cfg, const SweepSpec& spec) {
    if (spec.values.empty()) throw ConfigError("sweep: no axis values");
    if (spec.values.size() > 1) {
        const bool up = spec.values[1] > spec.values[0];
        for (std::size_t i = 1; i < spec.values.size(); ++i) {
            const bool step_up = spec.values[i] > spec.values[i - 1];
            if (spec.values[i] == spec.values[i - 1] || step_up != up)
                throw ConfigError("sweep: axis values must be strictly monotone");
        }
    }
    if (spec.trials < 1) throw ConfigError("sweep: trials must be >= 1");
    if (spec.dt_redraws < 1) throw ConfigError("sweep: dt_redraws must be >= 1");
    if (spec.metrics.empty()) throw ConfigError("sweep: no metrics requested");
    if (spec.benchmarks.empty()) throw ConfigError("sweep: no benchmarks requested");

    const std::size_t n_pts = spec.values.size();
    const std::size_t n_bench = spec.benchmarks.size();
    const std::size_t n_metrics = spec.metrics.size();
    const std::size_t trials = static_cast<std::size_t>(spec.trials);

    SweepResult result;

    // Resolve each point's config up front; points that cannot be
    // represented become error records and are skipped.
    std::vector<ScenarioConfig> point_cfg;
    std::vector<Eigen::MatrixXcd> point_glos;
    std::vector<bool> point_ok(n_pts, false);
    point_cfg.resize(n_pts);
    point_glos.resize(n_pts);
    for (std::size_t p = 0; p < n_pts; ++p) {
        try {
            point_cfg[p] = apply_axis(cfg, spec.axis, spec.values[p]);
            point_glos[p] = near_field_los(point_cfg[p].geometry.bs_pos, point_cfg[p].n_b,
                                           point_cfg[p].geometry.dris_pos, point_cfg[p].n_d_h,
                                           point_cfg[p].n_d_v, point_cfg[p].wavelength,
                                           point_cfg[p].spacing_ratio);
            point_ok[p] = true;
        } catch (const ConfigError& e) {
            result.errors.push_back({spec.values[p], 2, e.what()});
        }
    }

    const bool want_comm = wants(spec.metrics, Metric::sum_rate) ||
                           wants(spec.metrics, Metric::sinr_bound);
    const bool want_crlb = wants(spec.metrics, Metric::crlb_aod) ||
                           wants(spec.metrics, Metric::crlb_aoa);
    const bool want_mle = wants(spec.metrics, Metric::mse_aod) ||
                          wants(spec.metrics, Metric::mse_aoa);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> vals(n_pts * trials * n_bench * n_metrics, nan);
    auto slot = [&](std::size_t p, std::size_t t, std::size_t b, std::size_t m) {
        return ((p * trials + t) * n_bench + b) * n_metrics + m;
    };

    std::vector<std::size_t> cells; // (p, t) pairs worth evaluating
    for (std::size_t p = 0; p < n_pts; ++p)
        if (point_ok[p])
            for (std::size_t t = 0; t < trials; ++t) cells.push_back(p * trials + t);

    std::vector<double> point_ms(n_pts, 0.0);
    std::mutex merge_mutex;
    std::atomic<std::size_t> next{0};

    auto evaluate_cell = [&](std::size_t p, std::size_t t) {
        const ScenarioConfig& pc = point_cfg[p];
        const auto started = std::chrono::steady_clock::now();

        Rng ch_rng = Rng::stream(cfg.seed, kStreamChannel, 0, t);
        const ChannelSet ch = assemble_channels(pc, ch_rng, &point_glos[p]);
        Rng sym_rng = Rng::stream(cfg.seed, kStreamSymbols, 0, t);
        const SymbolFrame s = generate_symbols(pc.k_c, pc.frame_len, sym_rng);

        for (std::size_t b = 0; b < n_bench; ++b) {
            const BenchmarkPlan plan = plan_for(spec.benchmarks[b], pc);
            const CommView view = make_comm_view(ch, pc, plan.with_surface);
            const Eigen::MatrixXcd h_design = view.h_pt.adjoint();
            const Waveform x0 = solve_sensing_waveform(h_design, s, pc.p0);
            const Waveform wf =
                solve_isac_waveform(h_design, s, x0, pc.p0, plan.kappa).waveform;

            if (want_comm) {
                Rng comm_rng = Rng::stream(cfg.seed, kStreamCommEval, p, t);
                const CommReport rep =
                    empirical_sinr(ch, view, wf, s, spec.dt_redraws, comm_rng);
                for (std::size_t m = 0; m < n_metrics; ++m) {
                    if (spec.metrics[m] == Metric::sum_rate)
                        vals[slot(p, t, b, m)] = rep.sum_rate;
                    else if (spec.metrics[m] == Metric::sinr_bound)
                        vals[slot(p, t, b, m)] = rep.bound_sum_rate;
                }
            }
            if (want_crlb || want_mle) {
                const SensingModel model = make_sensing_model(pc, ch, plan.with_surface);
                if (want_crlb) {
                    const auto [c1, c2] = crlb(fim(model, ch.theta1, ch.theta2, wf));
                    for (std::size_t m = 0; m < n_metrics; ++m) {
                        if (spec.metrics[m] == Metric::crlb_aod)
                            vals[slot(p, t, b, m)] = c1;
                        else if (spec.metrics[m] == Metric::crlb_aoa)
                            vals[slot(p, t, b, m)] = c2;
                    }
                }
                if (want_mle) {
                    Rng sense_rng = Rng::stream(cfg.seed, kStreamSensing, p, t);
                    const auto obs =
                        sensing_observation(ch, pc, wf, sense_rng, plan.with_surface);
                    const EstimationResult est = mle_estimate(model, obs, wf);
                    for (std::size_t m = 0; m < n_metrics; ++m) {
                        if (spec.metrics[m] == Metric::mse_aod) {
                            const double e = est.theta1 - ch.theta1;
                            vals[slot(p, t, b, m)] = e * e;
                        } else if (spec.metrics[m] == Metric::mse_aoa) {
                            const double e = est.theta2 - ch.theta2;
                            vals[slot(p, t, b, m)] = e * e;
                        }
                    }
                }
            }
        }

        const std::chrono::duration<double, std::milli> took =
            std::chrono::steady_clock::now() - started;
        std::lock_guard<std::mutex> lock(merge_mutex);
        point_ms[p] += took.count();
    };

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const std::size_t p = cells[i] / trials;
            const std::size_t t = cells[i] % trials;
            try {
                evaluate_cell(p, t);
            } catch (const ConfigError& e) {
                std::lock_guard<std::mutex> lock(merge_mutex);
                result.errors.push_back({spec.values[p], 2, e.what()});
            } catch (const IoError& e) {
                std::lock_guard<std::mutex> lock(merge_mutex);
                result.errors.push_back({spec.values[p], 3, e.what()});
            } catch (const NumericalError& e) {
                std::lock_guard<std::mutex> lock(merge_mutex);
                result.errors.push_back({spec.values[p], 4, e.what()});
            }
        }
    };

    const unsigned n_workers = worker_count(cells.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Deterministic merge: fixed (point, benchmark, metric) order, errors
    // sorted by axis position.
    for (std::size_t p = 0; p < n_pts; ++p) {
        if (!point_ok[p]) continue;
        for (std::size_t b = 0; b < n_bench; ++b) {
            for (std::size_t m = 0; m < n_metrics; ++m) {
                double sum = 0.0;
                std::size_t n = 0;
                for (std::size_t t = 0; t < trials; ++t) {
                    const double v = vals[slot(p, t, b, m)];
                    if (std::isfinite(v)) {
                        sum += v;
                        ++n;
                    }
                }
                if (n == 0) continue;
                const double mean = sum / static_cast<double>(n);
                double ss = 0.0;
                for (std::size_t t = 0; t < trials; ++t) {
                    const double v = vals[slot(p, t, b, m)];
                    if (std::isfinite(v)) ss += (v - mean) * (v - mean);
                }
                const double se =
                    n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n))
                          : 0.0;
                result.rows.push_back({spec.values[p], spec.benchmarks[b], spec.metrics[m],
                                       mean, se, static_cast<int>(n)});
            }
        }
        result.timings.push_back({spec.values[p], point_ms[p]});
    }
    std::stable_sort(result.errors.begin(), result.errors.end(),
                     [](const SweepError& a, const SweepError& b) {
                         return a.axis_value < b.axis_value;
                     });
    return result;
}

double mse(const std::vector<double>& truths, const std::vector<double>& estimates) {
    if (truths.size() != estimates.size())
        throw ConfigError("mse: list lengths differ");
    if (truths.empty()) throw ConfigError("mse: empty lists");
    double acc = 0.0;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        const double d = truths[i] - estimates[i];
        acc += d * d;
    }
    return acc / static_cast<double>(truths.size());
}

bool ValidationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

ValidationReport validate_propositions(const ScenarioConfig& cfg, int samples, Rng& rng) {
    if (samples < 1000) throw ConfigError("validate_propositions: samples must be >= 1000");
    ValidationReport rep;
    const DrisMoments mom = dris_moments(cfg.dris);
    rep.mu_bar = mom.mu_bar;
    rep.nu_bar = mom.nu_bar;

    // One geometry draw pins the large-scale gains the closed-form variances
    // refer to; fading and reflection states are redrawn every sample so the
    // empirical variances estimate the full ensemble values rather than the
    // conditional values of a single fading realization (which concentrate
    // only as O(1/sqrt(N_D)) and would eat most of the tolerance).
    const ChannelSet ch = assemble_channels(cfg, rng);
    const Geometry& geo = cfg.geometry;
    const int n_b = cfg.n_b;
    const int k_c = cfg.k_c;
    const int n_d = cfg.n_d();
    const double m_d = static_cast<double>(samples);

    const double eps = cfg.rician_factor;
    const double nlos_w = std::sqrt(1.0 / (1.0 + eps));
    const Eigen::MatrixXcd g_los =
        std::sqrt(eps / (1.0 + eps)) *
        near_field_los(geo.bs_pos, cfg.n_b, geo.dris_pos, cfg.n_d_h, cfg.n_d_v,
                       cfg.wavelength, cfg.spacing_ratio);
    const double g_scale = std::sqrt(ch.ls.g);

    Eigen::VectorXcd sum_aca = Eigen::VectorXcd::Zero(n_b * k_c);
    Eigen::VectorXd sum2_aca = Eigen::VectorXd::Zero(n_b * k_c);
    Eigen::VectorXcd sum_sens = Eigen::VectorXcd::Zero(n_b);
    Eigen::VectorXd sum2_sens = Eigen::VectorXd::Zero(n_b);
    std::vector<double> probe_re, probe_im;
    probe_re.reserve(samples);
    probe_im.reserve(samples);

    // The BS-side NLoS fading is sampled through its induced law: conditional
    // on a surface-side vector v, the contribution of an i.i.d. CN(0,1) fading
    // row to each BS antenna is exactly CN(0, ||v||^2), independent across
    // antennas. Drawing those few entries directly is distributionally
    // identical to drawing the full fading matrix and multiplying, at a small
    // fraction of the cost.
    Eigen::MatrixXcd h_i(n_d, k_c);
    Eigen::VectorXcd aca_k(n_b), sens(n_b);
    for (int i = 0; i < samples; ++i) {
        for (int k = 0; k < k_c; ++k) {
            const double s = std::sqrt(ch.ls.i_c[k]);
            for (int r = 0; r < n_d; ++r) h_i(r, k) = s * rng.cnormal();
        }
        const ReflectionState pt = draw_reflection_state(cfg.dris, n_d, rng);
        const ReflectionState dt = draw_reflection_state(cfg.dris, n_d, rng);
        const Eigen::VectorXcd dphi = dt.phi - pt.phi;
        for (int k = 0; k < k_c; ++k) {
            const Eigen::VectorXcd v = dphi.cwiseProduct(h_i.col(k));
            aca_k.noalias() = g_los * v;
            const double sig = nlos_w * v.norm();
            for (int n = 0; n < n_b; ++n)
                aca_k[n] = g_scale * (aca_k[n] + sig * rng.cnormal());
            for (int n = 0; n < n_b; ++n) {
                const int idx = k * n_b + n;
                sum_aca[idx] += aca_k[n];
                sum2_aca[idx] += std::norm(aca_k[n]);
            }
            if (k == 0) {
                probe_re.push_back(aca_k[0].real());
                probe_im.push_back(aca_k[0].imag());
            }
        }
        const ReflectionState single = draw_reflection_state(cfg.dris, n_d, rng);
        const Eigen::VectorXcd vs = single.phi.cwiseProduct(ch.h_i_s);
        sens.noalias() = g_los * vs;
        const double sig_s = nlos_w * vs.norm();
        for (int n = 0; n < n_b; ++n)
            sens[n] = g_scale * (sens[n] + sig_s * rng.cnormal());
        sum_sens += sens;
        sum2_sens += sens.cwiseAbs2();
    }

    auto add_check = [&](std::string name, double observed, double expected, double tol) {
        rep.checks.push_back({std::move(name), observed, expected, tol,
                              std::abs(observed - expected) <= tol});
    };

    // Per-user aging variance, pooled over antennas.
    for (int k = 0; k < k_c; ++k) {
        double var = 0.0;
        for (int n = 0; n < n_b; ++n) {
            const int idx = k * n_b + n;
            var += (sum2_aca[idx] - std::norm(sum_aca[idx]) / m_d) / (m_d - 1.0);
        }
        var /= n_b;
        const double expected = ch.ls.cas_c()[k] * n_d * mom.mu_bar;
        add_check("aca_variance_user" + std::to_string(k), var, expected, 0.05 * expected);
    }
    {
        double var = 0.0;
        for (int n = 0; n < n_b; ++n)
            var += (sum2_sens[n] - std::norm(sum_sens[n]) / m_d) / (m_d - 1.0);
        var /= n_b;
        const double expected = ch.ls.cas_s() * n_d * mom.nu_bar;
        add_check("sensing_path_variance", var, expected, 0.05 * expected);
    }

    // Worst entry mean, in standard errors.
    {
        double worst = 0.0;
        for (int idx = 0; idx < n_b * k_c; ++idx) {
            const double var = (sum2_aca[idx] - std::norm(sum_aca[idx]) / m_d) / (m_d - 1.0);
            const double sig = std::abs(sum_aca[idx]) / m_d / std::sqrt(var / m_d);
            worst = std::max(worst, sig);
        }
        add_check("aca_mean_sigmas", worst, 0.0, 3.0);
        worst = 0.0;
        for (int n = 0; n < n_b; ++n) {
            const double var = (sum2_sens[n] - std::norm(sum_sens[n]) / m_d) / (m_d - 1.0);
            const double sig = std::abs(sum_sens[n]) / m_d / std::sqrt(var / m_d);
            worst = std::max(worst, sig);
        }
        add_check("sensing_path_mean_sigmas", worst, 0.0, 3.0);
    }

    // Gaussianity probe: excess kurtosis of one aging entry's components.
    auto excess_kurtosis = [&](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double m2 = 0.0, m4 = 0.0;
        for (double x : v) {
            const double d = x - mean;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        m2 /= static_cast<double>(v.size());
        m4 /= static_cast<double>(v.size());
        return m4 / (m2 * m2) - 3.0;
    };
    const double kurt_tol = 3.0 * std::sqrt(24.0 / m_d);
    add_check("aca_kurtosis_real", excess_kurtosis(probe_re), 0.0, kurt_tol);
    add_check("aca_kurtosis_imag", excess_kurtosis(probe_im), 0.0, kurt_tol);

    return rep;
}

} // namespace disco
