#pragma once

#include <vector>

#include "fbmsim/coefficients.hpp"
#include "fbmsim/lift.hpp"
#include "fbmsim/schemes.hpp"

namespace fbmsim {

// Two-parameter grid increment with r[k, k+1] = 0 on adjacent nodes; r is a
// full (n+1)x(n+1) row-major table, only s < t is read.
struct SewingIncrement {
    int grid_n = 0;
    double horizon = 1.0;
    std::vector<double> r;

    double& at(int s, int t) { return r[static_cast<std::size_t>(s) * (grid_n + 1) + t]; }
    double at(int s, int t) const { return r[static_cast<std::size_t>(s) * (grid_n + 1) + t]; }
};

struct ErrorDecomposition {
    int grid_n = 0;
    int dim = 0;
    double scale = 0.0;  // n^{2H - 1/2}
    std::vector<double> epsilon;        // Ψⁿ_t (y_t - yⁿ_t), (n+1) × d
    std::vector<double> epsilon_hat;    // cumulative Ψ ∂V_j V_j'(y) δF
    std::vector<double> epsilon_tilde;  // epsilon - epsilon_hat
};

struct RateReport {
    std::vector<int> ns;
    std::vector<double> mean_sup_errors;
    double fitted_slope = 0.0;
    double slope_stderr = 0.0;
    int mc_reps = 0;
};

// max over grid pairs of |x_t - x_s| / (t-s)^gamma; values is (n+1) nodes of
// dim-vectors on the uniform grid. All pairs for n <= 4096, dyadic gaps beyond.
double holder_seminorm(const std::vector<double>& values, int dim, double horizon, double gamma);

// K_mu = 2^mu * zeta(mu), absolute error < 1e-10.
double sewing_constant(double mu);

// ||R||_mu / (K_mu ||dR||_mu); 0 when R vanishes identically.
double sewing_check(const SewingIncrement& r, double mu);

double sup_error(const Trajectory& a, const Trajectory& b);

// Least-squares slope of log(error) against log(n).
RateReport rate_fit(const std::vector<int>& ns, const std::vector<double>& errors);

// jac_n: Φⁿ/Ψⁿ along the scheme trajectory; jac: Φ/Ψ along the reference.
ErrorDecomposition error_decomposition(const Trajectory& y_ref, const Trajectory& y_scheme,
                                       const JacobianPair& jac_n, const JacobianPair& jac,
                                       const LevyAreaF& f, const CoefficientField& coeffs);

double ks_two_sample(std::vector<double> xs, std::vector<double> ys);

}  // namespace fbmsim
