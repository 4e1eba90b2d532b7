#include "fbmsim/fbm.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include "fbmsim/rng.hpp"

namespace fbmsim {

double fbm_covariance(double s, double t, double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw std::invalid_argument("fbm_covariance: hurst must be in (0,1)");
    if (s < 0.0 || t < 0.0) throw std::invalid_argument("fbm_covariance: times must be nonnegative");
    double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
}

double rect_increment(double u, double v, double s, double t, double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw std::invalid_argument("rect_increment: hurst must be in (0,1)");
    if (v < u || t < s) throw std::invalid_argument("rect_increment: intervals must be ordered");
    double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(std::abs(t - u), h2) + std::pow(std::abs(s - v), h2) -
                  std::pow(std::abs(t - v), h2) - std::pow(std::abs(s - u), h2));
}

namespace {

// fGn autocovariance at unit spacing.
double fgn_gamma(int k, double hurst) {
    double h2 = 2.0 * hurst;
    double a = std::abs(static_cast<double>(k));
    return 0.5 * (std::pow(a + 1.0, h2) + std::pow(std::abs(a - 1.0), h2) - 2.0 * std::pow(a, h2));
}

std::mutex fftw_mutex;  // FFTW planning is not thread-safe

fftw_plan plan_for_size(int m) {
    static std::map<int, fftw_plan> plans;
    std::lock_guard<std::mutex> lock(fftw_mutex);
    auto it = plans.find(m);
    if (it != plans.end()) return it->second;
    fftw_complex* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
    fftw_plan p = fftw_plan_dft_1d(m, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_free(buf);
    plans.emplace(m, p);
    return p;
}

struct EmbeddingKey {
    double hurst;
    int n;
    bool operator<(const EmbeddingKey& o) const {
        return hurst < o.hurst || (hurst == o.hurst && n < o.n);
    }
};

// Eigenvalues of the circulant embedding of gamma(0..n); empty if the
// embedding has eigenvalues below tolerance (caller falls back to dense).
const std::vector<double>& embedding_eigenvalues(double hurst, int n) {
    static std::map<EmbeddingKey, std::vector<double>> cache;
    static std::mutex cache_mutex;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find({hurst, n});
    if (it != cache.end()) return it->second;

    int m = 2 * n;
    std::vector<double> row(m);
    for (int k = 0; k <= n; ++k) row[k] = fgn_gamma(k, hurst);
    for (int k = 1; k < n; ++k) row[n + k] = row[n - k];

    fftw_complex* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
    for (int k = 0; k < m; ++k) {
        buf[k][0] = row[k];
        buf[k][1] = 0.0;
    }
    fftw_execute_dft(plan_for_size(m), buf, buf);
    std::vector<double> lam(m);
    double max_lam = 0.0;
    for (int k = 0; k < m; ++k) {
        lam[k] = buf[k][0];
        max_lam = std::max(max_lam, lam[k]);
    }
    fftw_free(buf);

    double tol = -1e-8 * max_lam;
    bool ok = true;
    for (double& l : lam) {
        if (l < 0.0) {
            if (l < tol) {
                ok = false;
                break;
            }
            l = 0.0;
        }
    }
    if (!ok) lam.clear();
    return cache.emplace(EmbeddingKey{hurst, n}, std::move(lam)).first->second;
}

// Dense Cholesky-style factor of the fGn covariance, cached.
const Eigen::MatrixXd& dense_factor(double hurst, int n) {
    static std::map<EmbeddingKey, Eigen::MatrixXd> cache;
    static std::mutex cache_mutex;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find({hurst, n});
    if (it != cache.end()) return it->second;

    Eigen::MatrixXd cov(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cov(i, j) = fgn_gamma(i - j, hurst);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) throw std::runtime_error("generate_fbm: dense factorization failed");
    Eigen::VectorXd d = es.eigenvalues();
    double max_ev = d.maxCoeff();
    for (int i = 0; i < n; ++i) {
        if (d(i) < -1e-10 * max_ev) throw std::runtime_error("generate_fbm: covariance not PSD");
        d(i) = std::sqrt(std::max(d(i), 0.0));
    }
    Eigen::MatrixXd factor = es.eigenvectors() * d.asDiagonal();
    return cache.emplace(EmbeddingKey{hurst, n}, std::move(factor)).first->second;
}

// One component of unit-spacing fGn, n increments.
void sample_fgn(double hurst, int n, std::uint64_t seed, double* out) {
    const std::vector<double>& lam = embedding_eigenvalues(hurst, n);
    NormalRng rng(seed);
    if (!lam.empty()) {
        int m = 2 * n;
        fftw_complex* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
        double inv_m = 1.0 / m;
        buf[0][0] = std::sqrt(lam[0] * inv_m) * rng();
        buf[0][1] = 0.0;
        for (int k = 1; k < n; ++k) {
            double scale = std::sqrt(0.5 * lam[k] * inv_m);
            double re = scale * rng();
            double im = scale * rng();
            buf[k][0] = re;
            buf[k][1] = im;
            buf[m - k][0] = re;
            buf[m - k][1] = -im;
        }
        buf[n][0] = std::sqrt(lam[n] * inv_m) * rng();
        buf[n][1] = 0.0;
        fftw_execute_dft(plan_for_size(m), buf, buf);
        for (int k = 0; k < n; ++k) out[k] = buf[k][0];
        fftw_free(buf);
        return;
    }
    if (n > 2048) throw std::runtime_error("generate_fbm: embedding failed and n too large for dense fallback");
    const Eigen::MatrixXd& factor = dense_factor(hurst, n);
    Eigen::VectorXd g(n);
    for (int k = 0; k < n; ++k) g(k) = rng();
    Eigen::VectorXd x = factor * g;
    for (int k = 0; k < n; ++k) out[k] = x(k);
}

}  // namespace

FbmPath generate_fbm(double hurst, int n_fine, double horizon, int components, std::uint64_t seed) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw std::invalid_argument("generate_fbm: hurst must be in (0,1)");
    if (n_fine < 2) throw std::invalid_argument("generate_fbm: n_fine must be >= 2");
    if (horizon <= 0.0) throw std::invalid_argument("generate_fbm: horizon must be positive");
    if (components < 1) throw std::invalid_argument("generate_fbm: need at least one component");

    FbmPath path;
    path.hurst = hurst;
    path.horizon = horizon;
    path.n_fine = n_fine;
    path.components = components;
    path.seed = seed;
    path.values.assign(static_cast<std::size_t>(components) * (n_fine + 1), 0.0);

    double step_scale = std::pow(horizon / n_fine, hurst);
    std::vector<double> fgn(n_fine);
    for (int j = 0; j < components; ++j) {
        sample_fgn(hurst, n_fine, derive_seed(seed, static_cast<std::uint64_t>(j)), fgn.data());
        double* b = path.values.data() + static_cast<std::size_t>(j) * (n_fine + 1);
        double acc = 0.0;
        for (int k = 0; k < n_fine; ++k) {
            acc += step_scale * fgn[k];
            b[k + 1] = acc;
        }
    }
    return path;
}

FbmPath restrict_path(const FbmPath& path, int factor) {
    if (factor < 1 || path.n_fine % factor != 0)
        throw std::invalid_argument("restrict_path: factor must divide n_fine");
    FbmPath out;
    out.hurst = path.hurst;
    out.horizon = path.horizon;
    out.n_fine = path.n_fine / factor;
    out.components = path.components;
    out.seed = path.seed;
    out.values.resize(static_cast<std::size_t>(out.components) * (out.n_fine + 1));
    for (int j = 0; j < out.components; ++j)
        for (int k = 0; k <= out.n_fine; ++k)
            out.values[static_cast<std::size_t>(j) * (out.n_fine + 1) + k] = path.value(j, k * factor);
    return out;
}

void write_path_csv(const FbmPath& path, std::ostream& os) {
    os << "t";
    for (int j = 1; j <= path.components; ++j) os << ",B" << j;
    os << "\n";
    os.precision(17);
    for (int k = 0; k <= path.n_fine; ++k) {
        os << path.time(k);
        for (int j = 0; j < path.components; ++j) os << "," << path.value(j, k);
        os << "\n";
    }
}

}  // namespace fbmsim
