#include "disco/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "disco/errors.hpp"

namespace disco {

SensingModel make_sensing_model(const ScenarioConfig& cfg, const ChannelSet& ch,
                                bool with_surface) {
    SensingModel m;
    m.n_b = cfg.n_b;
    m.n_s = cfg.n_s;
    m.delta = cfg.spacing_ratio;
    m.chi = cfg.chi;
    m.l_d1 = ch.ls.d1_s;
    m.l_d2 = ch.ls.d2_s;
    m.l_cas = ch.ls.cas_s();
    m.n_d = with_surface ? cfg.n_d() : 0;
    m.nu_bar = dris_moments(cfg.dris).nu_bar;
    m.sigma2 = cfg.sigma2_s;
    return m;
}

Eigen::VectorXcd mean_response(const SensingModel& m, double theta1, double theta2,
                               const Eigen::VectorXcd& x_l) {
    const double k_u = m.chi * std::sqrt(m.l_d1 * m.l_d2);
    const Eigen::VectorXcd a_b = steering_ula(m.n_b, theta1, m.delta);
    const std::complex<double> g = a_b.cwiseProduct(x_l).sum(); // a^T x, no conjugation
    return (k_u * g) * steering_ula(m.n_s, theta2, m.delta);
}

double covariance_scale(const SensingModel& m, const Eigen::VectorXcd& x_l) {
    return m.chi * m.chi * m.l_d2 * m.l_cas * static_cast<double>(m.n_d) * m.nu_bar *
           x_l.squaredNorm();
}

Eigen::MatrixXcd covariance_rl(const SensingModel& m, double theta2,
                               const Eigen::VectorXcd& x_l) {
    const Eigen::VectorXcd a = steering_ula(m.n_s, theta2, m.delta);
    Eigen::MatrixXcd r = covariance_scale(m, x_l) * (a * a.adjoint());
    r.diagonal().array() += m.sigma2;
    return r;
}

Eigen::MatrixXcd covariance_inverse(const SensingModel& m, double theta2,
                                    const Eigen::VectorXcd& x_l) {
    if (m.sigma2 <= 0.0)
        throw NumericalError("covariance_inverse: noise power must be positive");
    const Eigen::VectorXcd a = steering_ula(m.n_s, theta2, m.delta);
    const double c = covariance_scale(m, x_l);
    const double denom = m.sigma2 + c * static_cast<double>(m.n_s);
    Eigen::MatrixXcd inv = (-c / (m.sigma2 * denom)) * (a * a.adjoint());
    inv.diagonal().array() += 1.0 / m.sigma2;
    return inv;
}

std::vector<Eigen::VectorXcd> sensing_observation(const ChannelSet& ch,
                                                  const ScenarioConfig& cfg,
                                                  const Waveform& w, Rng& rng,
                                                  bool with_surface) {
    const Eigen::Index len = w.x.cols();
    if (w.x.rows() != ch.h_d1_s.size())
        throw ConfigError("sensing_observation: waveform/channel antenna mismatch");
    const double noise_sd = std::sqrt(cfg.sigma2_s);
    const int n_d = with_surface ? cfg.n_d() : 0;

    std::vector<Eigen::VectorXcd> y(static_cast<std::size_t>(len));
    for (Eigen::Index l = 0; l < len; ++l) {
        std::complex<double> through = ch.h_d1_s.cwiseProduct(w.x.col(l)).sum();
        if (n_d > 0) {
            const Eigen::VectorXcd m_l =
                ch.h_i_s.cwiseProduct(ch.g.transpose() * w.x.col(l));
            const ReflectionState st = draw_reflection_state(cfg.dris, n_d, rng);
            through += st.phi.cwiseProduct(m_l).sum();
        }
        Eigen::VectorXcd& y_l = y[static_cast<std::size_t>(l)];
        y_l = (cfg.chi * through) * ch.h_d2_s;
        for (Eigen::Index n = 0; n < y_l.size(); ++n) y_l[n] += noise_sd * rng.cnormal();
    }
    return y;
}

Eigen::Matrix2d fim(const SensingModel& m, double theta1, double theta2, const Waveform& w) {
    if (m.sigma2 <= 0.0) throw NumericalError("fim: noise power must be positive");
    const double k_u = m.chi * std::sqrt(m.l_d1 * m.l_d2);
    const double n_s = static_cast<double>(m.n_s);
    const Eigen::VectorXcd a_b = steering_ula(m.n_b, theta1, m.delta);
    const Eigen::VectorXcd a_bp = steering_ula_derivative(m.n_b, theta1, m.delta);
    const Eigen::VectorXcd a_s = steering_ula(m.n_s, theta2, m.delta);
    const Eigen::VectorXcd a_sp = steering_ula_derivative(m.n_s, theta2, m.delta);
    const std::complex<double> s_ab_raw = a_s.dot(a_sp); // a^H a'
    const double a_sp_norm2 = a_sp.squaredNorm();

    Eigen::Matrix2d f = Eigen::Matrix2d::Zero();
    for (Eigen::Index l = 0; l < w.x.cols(); ++l) {
        const std::complex<double> g = a_b.cwiseProduct(w.x.col(l)).sum();
        const std::complex<double> gp = a_bp.cwiseProduct(w.x.col(l)).sum();
        const double c = covariance_scale(m, w.x.col(l));
        const double denom = m.sigma2 + c * n_s;

        // Quadratic forms against the closed-form inverse covariance.
        const double s_aa = n_s / denom;
        const std::complex<double> s_ab = s_ab_raw / denom;
        const double s_bb =
            (a_sp_norm2 - c * std::norm(s_ab_raw) / denom) / m.sigma2;

        const double k2 = k_u * k_u;
        f(0, 0) += 2.0 * k2 * std::norm(gp) * s_aa;
        f(0, 1) += 2.0 * k2 * std::real(std::conj(gp) * g * s_ab);
        f(1, 1) += 2.0 * k2 * std::norm(g) * s_bb;
        // Covariance derivative term; only theta2 moves the covariance.
        f(1, 1) += c * c * (2.0 * std::real(s_ab * s_ab) + 2.0 * s_aa * s_bb);
    }
    f(1, 0) = f(0, 1);
    return f;
}

std::pair<double, double> crlb(const Eigen::Matrix2d& f) {
    const double det = f(0, 0) * f(1, 1) - f(0, 1) * f(1, 0);
    if (!(det > 0.0) || !(f(0, 0) > 0.0) || !(f(1, 1) > 0.0))
        throw NumericalError("crlb: information matrix singular or indefinite; "
                             "angles unidentifiable at this operating point");
    return {f(1, 1) / det, f(0, 0) / det};
}

SensingReport sensing_report(const SensingModel& m, double theta1, double theta2,
                             const Waveform& w) {
    SensingReport rep;
    rep.fim = fim(m, theta1, theta2, w);
    std::tie(rep.crlb_theta1, rep.crlb_theta2) = crlb(rep.fim);
    rep.with_surface = m.n_d > 0;
    return rep;
}

double log_likelihood(const SensingModel& m, double theta1, double theta2,
                      const std::vector<Eigen::VectorXcd>& obs, const Waveform& w) {
    if (static_cast<Eigen::Index>(obs.size()) != w.x.cols())
        throw ConfigError("log_likelihood: observation count != frame length");
    const double k_u = m.chi * std::sqrt(m.l_d1 * m.l_d2);
    const double n_s = static_cast<double>(m.n_s);
    const Eigen::VectorXcd a_b = steering_ula(m.n_b, theta1, m.delta);
    const Eigen::VectorXcd a_s = steering_ula(m.n_s, theta2, m.delta);

    double ll = 0.0;
    for (Eigen::Index l = 0; l < w.x.cols(); ++l) {
        const Eigen::VectorXcd& y = obs[static_cast<std::size_t>(l)];
        const std::complex<double> u = k_u * a_b.cwiseProduct(w.x.col(l)).sum();
        const double c = covariance_scale(m, w.x.col(l));
        const double denom = m.sigma2 + c * n_s;
        const std::complex<double> a_h_y = a_s.dot(y);
        const double r2 = y.squaredNorm() - 2.0 * std::real(std::conj(u) * a_h_y) +
                          std::norm(u) * n_s;
        const std::complex<double> a_h_r = a_h_y - u * n_s;
        const double quad = (r2 - (c / denom) * std::norm(a_h_r)) / m.sigma2;
        ll -= (n_s - 1.0) * std::log(m.sigma2) + std::log(denom) + quad;
    }
    return ll;
}

std::pair<double, double> likelihood_gradient(const SensingModel& m, double theta1,
                                              double theta2,
                                              const std::vector<Eigen::VectorXcd>& obs,
                                              const Waveform& w) {
    if (static_cast<Eigen::Index>(obs.size()) != w.x.cols())
        throw ConfigError("likelihood_gradient: observation count != frame length");
    const double k_u = m.chi * std::sqrt(m.l_d1 * m.l_d2);
    const double n_s = static_cast<double>(m.n_s);
    const Eigen::VectorXcd a_b = steering_ula(m.n_b, theta1, m.delta);
    const Eigen::VectorXcd a_bp = steering_ula_derivative(m.n_b, theta1, m.delta);
    const Eigen::VectorXcd a_s = steering_ula(m.n_s, theta2, m.delta);
    const Eigen::VectorXcd a_sp = steering_ula_derivative(m.n_s, theta2, m.delta);
    const std::complex<double> apa = a_sp.dot(a_s); // a'^H a
    const std::complex<double> aap = std::conj(apa); // a^H a'

    double g1 = 0.0, g2 = 0.0;
    for (Eigen::Index l = 0; l < w.x.cols(); ++l) {
        const Eigen::VectorXcd& y = obs[static_cast<std::size_t>(l)];
        const std::complex<double> g = a_b.cwiseProduct(w.x.col(l)).sum();
        const std::complex<double> gp = a_bp.cwiseProduct(w.x.col(l)).sum();
        const std::complex<double> u = k_u * g;
        const double c = covariance_scale(m, w.x.col(l));
        const double denom = m.sigma2 + c * n_s;

        const std::complex<double> a_h_r = a_s.dot(y) - u * n_s;
        const std::complex<double> ap_h_r = a_sp.dot(y) - u * apa;
        // R^-1 r contracted with a and a'.
        const std::complex<double> a_rinv_r = a_h_r / denom;
        const std::complex<double> ap_rinv_r =
            (ap_h_r - (c / denom) * apa * a_h_r) / m.sigma2;

        g1 += 2.0 * std::real(std::conj(k_u * gp) * a_rinv_r);
        g2 += 2.0 * std::real(std::conj(k_u * g) * ap_rinv_r);
        if (c > 0.0) {
            g2 += 2.0 * c * std::real(std::conj(ap_rinv_r) * a_rinv_r);
            g2 -= 2.0 * c * std::real(aap) / denom;
        }
    }
    return {g1, g2};
}

namespace {

/// Reflect an angle back into (-pi/2, pi/2); a ULA cannot tell theta from
/// pi - theta, so the reflection lands on the equivalent broadside angle.
double wrap_broadside(double t) {
    constexpr double half_pi = 1.5707963267948966;
    while (t > half_pi) t = 2.0 * half_pi - t;
    while (t < -half_pi) t = -2.0 * half_pi - t;
    return t;
}

} // namespace

EstimationResult mle_estimate(const SensingModel& m, const std::vector<Eigen::VectorXcd>& obs,
                              const Waveform& w, const MleOptions& opts) {
    const Eigen::Index len = w.x.cols();
    if (static_cast<Eigen::Index>(obs.size()) != len)
        throw ConfigError("mle_estimate: observation count != frame length");
    if (opts.sigma_thresh <= 0.0 || opts.grid_step <= 0.0 || opts.max_iter < 1)
        throw ConfigError("mle_estimate: invalid options");

    const double k_u = m.chi * std::sqrt(m.l_d1 * m.l_d2);
    const double n_s = static_cast<double>(m.n_s);
    const int grid_n =
        static_cast<int>(std::floor((opts.grid_max - opts.grid_min) / opts.grid_step)) + 1;

    // Per-symbol quantities independent of the angles.
    Eigen::VectorXd c_l(len), b_l(len), lndet_l(len), q0_l(len);
    for (Eigen::Index l = 0; l < len; ++l) {
        const double c = covariance_scale(m, w.x.col(l));
        const double denom = m.sigma2 + c * n_s;
        c_l[l] = c;
        b_l[l] = c / (m.sigma2 * denom);
        lndet_l[l] = (n_s - 1.0) * std::log(m.sigma2) + std::log(denom);
        q0_l[l] = obs[static_cast<std::size_t>(l)].squaredNorm();
    }

    // Coarse grid: cache a^H y per theta2 row and a^T x per theta1 column.
    Eigen::MatrixXcd s2y(grid_n, len), gvals(grid_n, len);
    for (int j = 0; j < grid_n; ++j) {
        const double t2 = opts.grid_min + j * opts.grid_step;
        const Eigen::VectorXcd a = steering_ula(m.n_s, t2, m.delta);
        for (Eigen::Index l = 0; l < len; ++l)
            s2y(j, l) = a.dot(obs[static_cast<std::size_t>(l)]);
    }
    for (int i = 0; i < grid_n; ++i) {
        const double t1 = opts.grid_min + i * opts.grid_step;
        const Eigen::VectorXcd a = steering_ula(m.n_b, t1, m.delta);
        for (Eigen::Index l = 0; l < len; ++l)
            gvals(i, l) = a.cwiseProduct(w.x.col(l)).sum();
    }

    double best = -std::numeric_limits<double>::infinity();
    double t1_hat = 0.0, t2_hat = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            double ll = 0.0;
            for (Eigen::Index l = 0; l < len; ++l) {
                const std::complex<double> u = k_u * gvals(i, l);
                const double r2 = q0_l[l] - 2.0 * std::real(std::conj(u) * s2y(j, l)) +
                                  std::norm(u) * n_s;
                const std::complex<double> a_h_r = s2y(j, l) - u * n_s;
                ll -= lndet_l[l] + r2 / m.sigma2 - b_l[l] * std::norm(a_h_r);
            }
            if (ll > best) {
                best = ll;
                t1_hat = opts.grid_min + i * opts.grid_step;
                t2_hat = opts.grid_min + j * opts.grid_step;
            }
        }
    }

    // Backtracking gradient ascent from the grid maximizer.
    EstimationResult res;
    double t1 = t1_hat, t2 = t2_hat;
    double ll = best;
    auto [g1, g2] = likelihood_gradient(m, t1, t2, obs, w);
    double zeta = opts.first_step / std::max({std::abs(g1), std::abs(g2), 1e-300});

    int it = 0;
    bool converged = false;
    for (; it < opts.max_iter; ++it) {
        bool accepted = false;
        double step2 = 0.0;
        for (int h = 0; h < 60; ++h) {
            const double t1p = wrap_broadside(t1 + zeta * g1);
            const double t2p = wrap_broadside(t2 + zeta * g2);
            const double llp = log_likelihood(m, t1p, t2p, obs, w);
            if (llp >= ll) {
                step2 = (t1p - t1) * (t1p - t1) + (t2p - t2) * (t2p - t2);
                t1 = t1p;
                t2 = t2p;
                ll = llp;
                accepted = true;
                zeta *= 1.5;
                break;
            }
            zeta *= 0.5;
        }
        if (!accepted) {
            // No ascent direction at working precision: stationary.
            converged = true;
            ++it;
            break;
        }
        std::tie(g1, g2) = likelihood_gradient(m, t1, t2, obs, w);
        if (step2 <= opts.sigma_thresh) {
            converged = true;
            ++it;
            break;
        }
    }

    res.theta1 = t1;
    res.theta2 = t2;
    res.iterations = it;
    res.converged = converged;
    res.final_gradient_norm = std::hypot(g1, g2);
    return res;
}

} // namespace disco
