#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fbmsim/analysis.hpp"
#include "fbmsim/constants.hpp"

namespace fbmsim {

// Runs body(0..reps-1), fanned out with OpenMP when threads != 1. Each
// replicate must write only to its own slot so results are independent of
// the thread count. threads == 0 uses the OpenMP default.
void for_each_replicate(int reps, int threads, const std::function<void(int)>& body);

double mean_of(const std::vector<double>& xs);
double variance_of(const std::vector<double>& xs);
// Variance after clamping each tail to its frac-quantile (tail robustness
// for heavy-tailed error laws).
double winsorized_variance(std::vector<double> xs, double frac);
double median_of(std::vector<double> xs);

struct RateConfig {
    double hurst = 0.4;
    double horizon = 1.0;
    std::vector<int> ns = {64, 128, 256, 512, 1024, 2048, 4096};
    int reps = 1000;
    int ref_refinement = 32;
    std::string field = "rotating2d";
    std::vector<std::string> schemes = {"modified", "classical"};
    std::uint64_t seed = 1;
    int threads = 1;
};

struct RateResult {
    RateConfig config;
    // indexed [scheme][n]
    std::vector<std::vector<double>> mean_errors;
    std::vector<std::vector<double>> stderrs;
    std::vector<RateReport> reports;
    double ref_self_gap = 0.0;    // proxy shift when the fine grid halves
    double ref_gap_budget = 0.0;  // 10% of the smallest scheme error at n_max
};

// Strong-error sweep against the third-order truth proxy, one fine path per
// replicate shared across all n and schemes.
RateResult rate_harness(const RateConfig& config);

struct ResidualConfig {
    double hurst = 0.4;
    double horizon = 1.0;
    std::vector<int> ns = {128, 512, 2048};
    int reps = 200;
    int ref_refinement = 32;
    std::string field = "rotating2d";
    std::uint64_t seed = 1;
    int threads = 1;
};

struct ResidualResult {
    ResidualConfig config;
    std::vector<double> medians;  // median of n^{2H-1/2} sup|ε̃| per n
};

ResidualResult residual_harness(const ResidualConfig& config);

struct CltConfig {
    double hurst = 0.45;
    double horizon = 1.0;
    int n = 1024;
    int reps = 2000;
    int ref_refinement = 32;
    std::string field = "geometric1d";
    double winsor = 0.005;
    bool swap_qp = false;  // negative control: corrupt the W covariance
    int k_max = 64;
    int quad_n = 128;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct CltResult {
    CltConfig config;
    int dim = 0;
    std::vector<double> mean_err, var_err;  // renormalized-error pipeline
    std::vector<double> mean_u, var_u;      // limit-process pipeline
    std::vector<double> ks;                 // per coordinate
    double max_var_gap = 0.0;
    double max_ks = 0.0;
    std::vector<std::vector<double>> samples_err, samples_u;  // per coordinate
};

// Pipeline A: n^{2H-1/2}(y_T - y^n_T) over fresh driver paths.
// Pipeline B: U_T over fresh (B, W) pairs.
CltResult clt_harness(const CltConfig& config);

Eigen::VectorXd default_initial_condition(const CoefficientField& coeffs);

}  // namespace fbmsim
