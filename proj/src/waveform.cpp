#include "disco/waveform.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "disco/errors.hpp"

namespace disco {

SymbolFrame generate_symbols(int k_c, int frame_len, Rng& rng) {
    constexpr double a = 0.7071067811865475244;
    SymbolFrame f;
    f.s.resize(k_c, frame_len);
    for (int l = 0; l < frame_len; ++l) {
        for (int k = 0; k < k_c; ++k) {
            const std::uint64_t bits = rng.next_u64();
            f.s(k, l) = {bits & 1 ? a : -a, bits & 2 ? a : -a};
        }
    }
    return f;
}

Waveform solve_sensing_waveform(const Eigen::MatrixXcd& h, const SymbolFrame& s, double p0) {
    const Eigen::Index n_b = h.cols();
    const Eigen::Index len = s.s.cols();
    if (h.rows() != s.s.rows())
        throw ConfigError("solve_sensing_waveform: channel/symbol user-count mismatch");
    if (len < n_b)
        throw ConfigError("solve_sensing_waveform: frame length " + std::to_string(len) +
                          " < antenna count " + std::to_string(n_b) +
                          "; the row-orthogonality constraint is infeasible");
    if (p0 <= 0.0) throw ConfigError("solve_sensing_waveform: p0 must be positive");

    const Eigen::MatrixXcd m = h.adjoint() * s.s; // N_B x L
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);

    Waveform w;
    w.p0 = p0;
    w.kappa = 0.0;
    w.x = std::sqrt(p0 * static_cast<double>(len) / static_cast<double>(n_b)) *
          svd.matrixU() * svd.matrixV().adjoint();
    return w;
}

namespace {

/// Squared Frobenius norm of the shifted solve, sum_i w_i / (d_i + t)^2.
double secular_norm(const Eigen::VectorXd& w, const Eigen::VectorXd& d, double t) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double den = d[i] + t;
        acc += w[i] / (den * den);
    }
    return acc;
}

double secular_norm_derivative(const Eigen::VectorXd& w, const Eigen::VectorXd& d, double t) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double den = d[i] + t;
        acc += -2.0 * w[i] / (den * den * den);
    }
    return acc;
}

} // namespace

IsacSolution solve_isac_waveform(const Eigen::MatrixXcd& h, const SymbolFrame& s,
                                 const Waveform& x0, double p0, double kappa) {
    const Eigen::Index n_b = h.cols();
    const Eigen::Index len = s.s.cols();
    if (h.rows() != s.s.rows())
        throw ConfigError("solve_isac_waveform: channel/symbol user-count mismatch");
    if (x0.x.rows() != n_b || x0.x.cols() != len)
        throw ConfigError("solve_isac_waveform: reference waveform shape mismatch");
    if (kappa < 0.0 || kappa > 1.0)
        throw ConfigError("solve_isac_waveform: kappa must lie in [0, 1]");
    if (p0 <= 0.0) throw ConfigError("solve_isac_waveform: p0 must be positive");

    if (kappa == 0.0) {
        // Objective reduces to ||X - X0||^2 and X0 already meets the budget.
        IsacSolution out;
        out.waveform = x0;
        out.waveform.kappa = 0.0;
        return out;
    }

    const double budget = p0 * static_cast<double>(len);

    // Stationarity: (kappa H^H H + (1-kappa) I + rho I) X = kappa H^H S + (1-kappa) X0.
    const Eigen::MatrixXcd aha =
        kappa * (h.adjoint() * h) + (1.0 - kappa) * Eigen::MatrixXcd::Identity(n_b, n_b);
    const Eigen::MatrixXcd ahb = kappa * (h.adjoint() * s.s) + (1.0 - kappa) * x0.x;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(aha);
    if (eig.info() != Eigen::Success)
        throw NumericalError("solve_isac_waveform: eigendecomposition failed");
    const Eigen::VectorXd lambda = eig.eigenvalues(); // ascending
    const Eigen::MatrixXcd q = eig.eigenvectors();
    const Eigen::MatrixXcd c = q.adjoint() * ahb;

    Eigen::VectorXd w(n_b), d(n_b);
    for (Eigen::Index i = 0; i < n_b; ++i) {
        w[i] = c.row(i).squaredNorm();
        // Shift to t = rho + lambda_min; clamp tiny negatives from roundoff.
        d[i] = std::max(lambda[i] - lambda[0], 0.0);
    }

    const double w_total = w.sum();
    const double d_scale = std::max(1.0, d[n_b - 1]);
    const double min_space_tol = 1e-10 * d_scale;

    double w_min_mass = 0.0;
    double phi_rest_at_zero = 0.0;
    for (Eigen::Index i = 0; i < n_b; ++i) {
        if (d[i] <= min_space_tol) {
            w_min_mass += w[i];
        } else {
            phi_rest_at_zero += w[i] / (d[i] * d[i]);
        }
    }

    IsacSolution out;
    out.waveform.p0 = p0;
    out.waveform.kappa = kappa;

    double t = 0.0;
    if (w_min_mass <= 1e-24 * std::max(w_total, budget) && phi_rest_at_zero < budget) {
        // Hard case: the right-hand side has no component on the minimal
        // eigenspace and the limit solution undershoots the power budget.
        // Any minimal eigenvector absorbs the deficit without changing the
        // objective; put it in the first frame column.
        Eigen::MatrixXcd y(n_b, len);
        for (Eigen::Index i = 0; i < n_b; ++i)
            y.row(i) = d[i] <= min_space_tol ? Eigen::RowVectorXcd::Zero(len).eval()
                                             : (c.row(i) / d[i]).eval();
        y(0, 0) += std::sqrt(budget - phi_rest_at_zero);
        out.waveform.x = q * y;
        out.rho = -lambda[0];
        out.hard_case = true;
        return out;
    }

    // Bracket the root of phi(t) = budget on t > 0. phi is strictly
    // decreasing; it tends to +inf at the pole when the minimal eigenspace
    // carries mass, and to phi_rest_at_zero >= budget otherwise.
    constexpr int max_iter = 200;
    int iters = 0;
    double hi = d_scale;
    while (secular_norm(w, d, hi) > budget) {
        hi *= 4.0;
        if (++iters > max_iter)
            throw NumericalError("solve_isac_waveform: no upper bracket after 200 expansions"
                                 "; last t = " + std::to_string(hi));
    }
    double lo = hi;
    while (secular_norm(w, d, lo) < budget) {
        lo /= 4.0;
        if (++iters > max_iter || lo < 1e-300) {
            std::ostringstream msg;
            msg << "solve_isac_waveform: no sign change while bracketing the secular root;"
                << " t in [" << lo << ", " << hi << "], phi(lo) = " << secular_norm(w, d, lo)
                << ", budget = " << budget;
            throw NumericalError(msg.str());
        }
    }

    // Safeguarded Newton on f(t) = 1/sqrt(phi) - 1/sqrt(budget), which is
    // nearly linear in t (standard trust-region practice).
    t = 0.5 * (lo + hi);
    const double f_target = 1.0 / std::sqrt(budget);
    for (iters = 0; iters < max_iter; ++iters) {
        const double phi = secular_norm(w, d, t);
        if (std::abs(phi - budget) <= 1e-12 * budget) break;
        if (phi > budget)
            lo = t;
        else
            hi = t;
        const double dphi = secular_norm_derivative(w, d, t);
        const double f = 1.0 / std::sqrt(phi) - f_target;
        const double df = -0.5 * dphi / (phi * std::sqrt(phi));
        double t_next = t - f / df;
        if (!(t_next > lo && t_next < hi)) t_next = 0.5 * (lo + hi);
        if (t_next == t) break;
        t = t_next;
    }
    if (iters >= max_iter) {
        std::ostringstream msg;
        msg << "solve_isac_waveform: secular root find did not converge in 200 iterations;"
            << " bracket [" << lo << ", " << hi << "], phi(t) = " << secular_norm(w, d, t)
            << ", budget = " << budget;
        throw NumericalError(msg.str());
    }

    Eigen::MatrixXcd y(n_b, len);
    for (Eigen::Index i = 0; i < n_b; ++i) y.row(i) = c.row(i) / (d[i] + t);
    out.waveform.x = q * y;
    out.rho = t - lambda[0];
    out.iterations = iters;
    return out;
}

} // namespace disco
