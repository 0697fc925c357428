#include "disco/comm.hpp"

#include <cmath>

#include "disco/errors.hpp"

namespace disco {

CommView make_comm_view(const ChannelSet& ch, const ScenarioConfig& cfg, bool with_surface) {
    const Eigen::Index k_c = ch.h_d_c.cols();
    CommView v;
    v.h_d.resize(ch.h_d_c.rows(), k_c);
    v.sigma2.resize(k_c);
    v.cas_gain.resize(k_c);
    for (Eigen::Index k = 0; k < k_c; ++k) {
        const double agc = 1.0 / std::sqrt(ch.ls.d_c[k]);
        v.h_d.col(k) = agc * ch.h_d_c.col(k);
        v.sigma2[k] = cfg.sigma2_c / ch.ls.d_c[k];
        v.cas_gain[k] = with_surface ? ch.ls.g * ch.ls.i_c[k] / ch.ls.d_c[k] : 0.0;
    }
    if (with_surface) {
        v.n_d = static_cast<int>(ch.h_i_c.rows());
        v.h_i.resize(ch.h_i_c.rows(), k_c);
        for (Eigen::Index k = 0; k < k_c; ++k)
            v.h_i.col(k) = ch.h_i_c.col(k) / std::sqrt(ch.ls.d_c[k]);
        v.h_pt = v.h_d + ch.g * ch.phi_pt.asDiagonal() * v.h_i;
        v.mu_bar = dris_moments(cfg.dris).mu_bar;
        v.dris = cfg.dris;
    } else {
        v.n_d = 0;
        v.h_i.resize(0, k_c);
        v.h_pt = v.h_d;
    }
    return v;
}

namespace {

/// Per-symbol cascade coefficients: column (l*K_c + k) holds
/// conj(h_i,k) .* (G^H x_l), so the surface contribution to h_k(t)^H x_l is
/// state.dot(column) for any reflection state.
Eigen::MatrixXcd cascade_coefficients(const ChannelSet& ch, const CommView& view,
                                      const Eigen::MatrixXcd& x) {
    const Eigen::Index k_c = view.h_d.cols();
    const Eigen::Index len = x.cols();
    Eigen::MatrixXcd casv(view.n_d, k_c * len);
    for (Eigen::Index l = 0; l < len; ++l) {
        const Eigen::VectorXcd v_l = ch.g.adjoint() * x.col(l);
        for (Eigen::Index k = 0; k < k_c; ++k)
            casv.col(l * k_c + k) = view.h_i.col(k).conjugate().cwiseProduct(v_l);
    }
    return casv;
}

} // namespace

Eigen::MatrixXcd received_symbols(const ChannelSet& ch, const CommView& view,
                                  const Waveform& w, Rng& rng) {
    const Eigen::Index k_c = view.h_d.cols();
    const Eigen::Index len = w.x.cols();
    if (w.x.rows() != view.h_d.rows())
        throw ConfigError("received_symbols: waveform/channel antenna mismatch");

    Eigen::MatrixXcd y = view.h_d.adjoint() * w.x;
    if (view.n_d > 0) {
        const Eigen::MatrixXcd casv = cascade_coefficients(ch, view, w.x);
        for (Eigen::Index l = 0; l < len; ++l) {
            const ReflectionState st = draw_reflection_state(view.dris, view.n_d, rng);
            for (Eigen::Index k = 0; k < k_c; ++k) y(k, l) += st.phi.dot(casv.col(l * k_c + k));
        }
    }
    for (Eigen::Index l = 0; l < len; ++l)
        for (Eigen::Index k = 0; k < k_c; ++k) y(k, l) += std::sqrt(view.sigma2[k]) * rng.cnormal();
    return y;
}

Eigen::VectorXd sinr_lower_bound(const CommView& view, const Waveform& w,
                                 const SymbolFrame& s) {
    const Eigen::Index k_c = view.h_d.cols();
    const double len = static_cast<double>(s.s.cols());
    const Eigen::MatrixXcd residual = view.h_pt.adjoint() * w.x - s.s;
    Eigen::VectorXd bound(k_c);
    for (Eigen::Index k = 0; k < k_c; ++k) {
        const double mu_term = residual.row(k).squaredNorm() / len;
        const double aging = w.p0 * view.cas_gain[k] * view.n_d * view.mu_bar;
        bound[k] = 1.0 / (mu_term + aging + view.sigma2[k]);
    }
    return bound;
}

CommReport empirical_sinr(const ChannelSet& ch, const CommView& view, const Waveform& w,
                          const SymbolFrame& s, int redraws, Rng& rng) {
    if (redraws < 1) throw ConfigError("empirical_sinr: redraws must be >= 1");
    const Eigen::Index k_c = view.h_d.cols();
    const Eigen::Index len = s.s.cols();
    if (w.x.cols() != len)
        throw ConfigError("empirical_sinr: waveform/symbol frame length mismatch");

    CommReport rep;
    rep.bound = sinr_lower_bound(view, w, s);
    rep.sinr.resize(k_c);
    rep.sinr_se = Eigen::VectorXd::Zero(k_c);

    const Eigen::MatrixXcd base = view.h_d.adjoint() * w.x; // direct-only receptions

    if (view.n_d == 0) {
        for (Eigen::Index k = 0; k < k_c; ++k) {
            const double dist = (base.row(k) - s.s.row(k)).squaredNorm() / static_cast<double>(len);
            rep.sinr[k] = 1.0 / (dist + view.sigma2[k]);
        }
        rep.redraws = 1;
    } else {
        const Eigen::MatrixXcd casv = cascade_coefficients(ch, view, w.x);
        Eigen::MatrixXd gamma_r(k_c, redraws);
        Eigen::VectorXd dist(k_c);
        for (int r = 0; r < redraws; ++r) {
            dist.setZero();
            for (Eigen::Index l = 0; l < len; ++l) {
                const ReflectionState st = draw_reflection_state(view.dris, view.n_d, rng);
                for (Eigen::Index k = 0; k < k_c; ++k) {
                    const std::complex<double> val =
                        base(k, l) + st.phi.dot(casv.col(l * k_c + k));
                    dist[k] += std::norm(val - s.s(k, l));
                }
            }
            for (Eigen::Index k = 0; k < k_c; ++k)
                gamma_r(k, r) = 1.0 / (dist[k] / static_cast<double>(len) + view.sigma2[k]);
        }
        for (Eigen::Index k = 0; k < k_c; ++k) {
            const double mean = gamma_r.row(k).mean();
            rep.sinr[k] = mean;
            if (redraws > 1) {
                const double var =
                    (gamma_r.row(k).array() - mean).square().sum() / (redraws - 1.0);
                rep.sinr_se[k] = std::sqrt(var / redraws);
            }
        }
        rep.redraws = redraws;
    }

    rep.sum_rate = sum_rate(rep.sinr);
    rep.bound_sum_rate = sum_rate(rep.bound);
    return rep;
}

double sum_rate(const Eigen::VectorXd& sinr) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < sinr.size(); ++k) acc += std::log2(1.0 + sinr[k]);
    return acc;
}

} // namespace disco
