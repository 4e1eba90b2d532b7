#pragma once

#include <utility>
#include <vector>

namespace fbmsim {

// Limit-covariance constants: qk[idx(k)] = Q(k) for k in [-k_max, k_max],
// idx(k) = k + k_max; q_sum = Σ Q(k), likewise P. tail_estimate bounds the
// omitted |k| > k_max mass (power-law extrapolation of the term decay).
struct QPTable {
    double hurst = 0.0;
    int k_max = 0;
    int quad_n = 0;
    std::vector<double> qk;
    std::vector<double> pk;
    double q_sum = 0.0;
    double p_sum = 0.0;
    double tail_estimate = 0.0;

    double q(int k) const { return qk[static_cast<std::size_t>(k + k_max)]; }
    double p(int k) const { return pk[static_cast<std::size_t>(k + k_max)]; }
};

// Density of the measure mu: -H(1-2H)|r - rp|^{2H-2}. Strictly negative for
// H < 1/2; singular on the diagonal.
double mu_density(double r, double rp, double hurst);

// (Q(k), P(k)) by corner-evaluated Riemann-Stieltjes sums over [0,1]x[k,k+1]
// with rectangular dR increments, refined through six dyadic levels with
// two-stage Richardson extrapolation; throws if successive extrapolants
// disagree beyond relative 1e-3.
std::pair<double, double> qp_term(int k, double hurst, int quad_n);

// Single-level corner sum without extrapolation (diagnostic; exposes the
// raw convergence behaviour that qp_term accelerates).
std::pair<double, double> qp_term_raw(int k, double hurst, int n);

QPTable qp_sum(double hurst, int k_max, int quad_n);

// E[W^{ij}_t W^{i2 j2}_s] = T^{4H-1} (Q δ_{i i2} δ_{j j2} + P δ_{i j2} δ_{j i2}) (t ∧ s).
double w_covariance(double t, double s, int i, int j, int i2, int j2, const QPTable& table,
                    double horizon);

}  // namespace fbmsim
