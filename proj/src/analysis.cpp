#include "fbmsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fbmsim {

double holder_seminorm(const std::vector<double>& values, int dim, double horizon, double gamma) {
    if (gamma <= 0.0) throw std::invalid_argument("holder_seminorm: gamma must be positive");
    if (dim < 1 || values.size() % dim != 0 || values.size() / dim < 2)
        throw std::invalid_argument("holder_seminorm: need at least two grid nodes");
    int n = static_cast<int>(values.size()) / dim - 1;
    double dt = horizon / n;
    auto dist2 = [&](int s, int t) {
        double acc = 0.0;
        for (int a = 0; a < dim; ++a) {
            double diff = values[static_cast<std::size_t>(t) * dim + a] -
                          values[static_cast<std::size_t>(s) * dim + a];
            acc += diff * diff;
        }
        return acc;
    };
    double best = 0.0;
    if (n <= 4096) {
        for (int s = 0; s < n; ++s)
            for (int t = s + 1; t <= n; ++t)
                best = std::max(best, dist2(s, t) / std::pow((t - s) * dt, 2.0 * gamma));
    } else {
        // dyadic gaps only
        for (int gap = 1; gap <= n; gap *= 2) {
            double denom = std::pow(gap * dt, 2.0 * gamma);
            for (int s = 0; s + gap <= n; ++s) best = std::max(best, dist2(s, s + gap) / denom);
        }
    }
    return std::sqrt(best);
}

double sewing_constant(double mu) {
    if (mu <= 1.0) throw std::invalid_argument("sewing_constant: series diverges for mu <= 1");
    // zeta(mu) by partial sum plus Euler-Maclaurin tail.
    const int cutoff = 1000000;
    double zeta = 0.0;
    for (int l = cutoff; l >= 1; --l) zeta += std::pow(static_cast<double>(l), -mu);
    double big = static_cast<double>(cutoff);
    zeta += std::pow(big, 1.0 - mu) / (mu - 1.0) - 0.5 * std::pow(big, -mu) +
            mu / 12.0 * std::pow(big, -mu - 1.0);
    return std::pow(2.0, mu) * zeta;
}

double sewing_check(const SewingIncrement& r, double mu) {
    if (mu <= 1.0) throw std::invalid_argument("sewing_check: mu must exceed 1");
    int n = r.grid_n;
    if (n < 2 || r.r.size() != static_cast<std::size_t>(n + 1) * (n + 1))
        throw std::invalid_argument("sewing_check: malformed increment table");
    double dt = r.horizon / n;
    double r_norm = 0.0, dr_norm = 0.0;
    for (int s = 0; s < n; ++s)
        for (int t = s + 1; t <= n; ++t) {
            double span = std::pow((t - s) * dt, mu);
            r_norm = std::max(r_norm, std::abs(r.at(s, t)) / span);
            for (int u = s + 1; u < t; ++u) {
                double d = r.at(s, t) - r.at(s, u) - r.at(u, t);
                dr_norm = std::max(dr_norm, std::abs(d) / span);
            }
        }
    if (dr_norm == 0.0) {
        if (r_norm == 0.0) return 0.0;
        throw std::runtime_error("sewing_check: ||dR|| = 0 with ||R|| > 0 (lemma violation)");
    }
    return r_norm / (sewing_constant(mu) * dr_norm);
}

double sup_error(const Trajectory& a, const Trajectory& b) {
    if (a.grid_n != b.grid_n || a.dim != b.dim)
        throw std::invalid_argument("sup_error: trajectories on different grids");
    double best = 0.0;
    for (int k = 0; k <= a.grid_n; ++k) {
        double acc = 0.0;
        for (int c = 0; c < a.dim; ++c) {
            double diff = a.values[static_cast<std::size_t>(k) * a.dim + c] -
                          b.values[static_cast<std::size_t>(k) * b.dim + c];
            acc += diff * diff;
        }
        best = std::max(best, acc);
    }
    return std::sqrt(best);
}

RateReport rate_fit(const std::vector<int>& ns, const std::vector<double>& errors) {
    if (ns.size() != errors.size() || ns.size() < 4)
        throw std::invalid_argument("rate_fit: need >= 4 (n, error) points");
    std::size_t cnt = ns.size();
    std::vector<double> x(cnt), y(cnt);
    for (std::size_t i = 0; i < cnt; ++i) {
        if (errors[i] <= 0.0) throw std::invalid_argument("rate_fit: errors must be positive");
        x[i] = std::log(static_cast<double>(ns[i]));
        y[i] = std::log(errors[i]);
    }
    double xm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < cnt; ++i) {
        xm += x[i];
        ym += y[i];
    }
    xm /= cnt;
    ym /= cnt;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < cnt; ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
    }
    double slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < cnt; ++i) {
        double resid = y[i] - ym - slope * (x[i] - xm);
        ss_res += resid * resid;
    }
    RateReport report;
    report.ns = ns;
    report.mean_sup_errors = errors;
    report.fitted_slope = slope;
    report.slope_stderr = std::sqrt(ss_res / (static_cast<double>(cnt) - 2.0) / sxx);
    return report;
}

ErrorDecomposition error_decomposition(const Trajectory& y_ref, const Trajectory& y_scheme,
                                       const JacobianPair& jac_n, const JacobianPair& jac,
                                       const LevyAreaF& f, const CoefficientField& coeffs) {
    int n = y_ref.grid_n, d = y_ref.dim, m = coeffs.dim_m();
    if (y_scheme.grid_n != n || jac_n.grid_n != n || jac.grid_n != n || f.coarse_n != n)
        throw std::invalid_argument("error_decomposition: inputs on different grids");

    ErrorDecomposition dec;
    dec.grid_n = n;
    dec.dim = d;
    dec.scale = std::pow(static_cast<double>(n), 2.0 * f.hurst - 0.5);
    dec.epsilon.resize(static_cast<std::size_t>(n + 1) * d);
    dec.epsilon_hat.assign(static_cast<std::size_t>(n + 1) * d, 0.0);
    dec.epsilon_tilde.resize(dec.epsilon.size());

    Eigen::VectorXd hat = Eigen::VectorXd::Zero(d);
    for (int k = 0; k <= n; ++k) {
        Eigen::VectorXd eps = jac_n.psi_at(k) * (y_ref.node(k) - y_scheme.node(k));
        for (int a = 0; a < d; ++a) {
            dec.epsilon[static_cast<std::size_t>(k) * d + a] = eps(a);
            dec.epsilon_hat[static_cast<std::size_t>(k) * d + a] = hat(a);
            dec.epsilon_tilde[static_cast<std::size_t>(k) * d + a] = eps(a) - hat(a);
        }
        if (k == n) break;
        std::vector<Eigen::VectorXd> dvv = coeffs.eval_dVV(y_ref.node(k));
        Eigen::VectorXd local = Eigen::VectorXd::Zero(d);
        // δF^{ij} integrates component i first, so it pairs with ∂V_j V_i.
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                local += dvv[static_cast<std::size_t>(j) * m + i] * (f.f(k + 1, i, j) - f.f(k, i, j));
        hat += jac.psi_at(k) * local;
    }
    return dec;
}

double ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
    if (xs.empty() || ys.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    std::size_t i = 0, j = 0;
    double stat = 0.0;
    while (i < xs.size() || j < ys.size()) {
        double v;
        if (i == xs.size())
            v = ys[j];
        else if (j == ys.size())
            v = xs[i];
        else
            v = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] == v) ++i;
        while (j < ys.size() && ys[j] == v) ++j;
        double fx = static_cast<double>(i) / xs.size();
        double fy = static_cast<double>(j) / ys.size();
        stat = std::max(stat, std::abs(fx - fy));
    }
    return stat;
}

}  // namespace fbmsim
