#include "fbmsim/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fbmsim/rng.hpp"

namespace fbmsim {

void for_each_replicate(int reps, int threads, const std::function<void(int)>& body) {
    if (threads == 1) {
        for (int r = 0; r < reps; ++r) body(r);
        return;
    }
    if (threads > 1) omp_set_num_threads(threads);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < reps; ++r) body(r);
}

double mean_of(const std::vector<double>& xs) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

double variance_of(const std::vector<double>& xs) {
    double m = mean_of(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return acc / (static_cast<double>(xs.size()) - 1.0);
}

double winsorized_variance(std::vector<double> xs, double frac) {
    std::sort(xs.begin(), xs.end());
    std::size_t cut = static_cast<std::size_t>(frac * static_cast<double>(xs.size()));
    if (cut > 0 && 2 * cut < xs.size()) {
        double lo = xs[cut], hi = xs[xs.size() - 1 - cut];
        for (double& x : xs) x = std::clamp(x, lo, hi);
    }
    return variance_of(xs);
}

double median_of(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

Eigen::VectorXd default_initial_condition(const CoefficientField& coeffs) {
    if (coeffs.dim_d() == 1) {
        Eigen::VectorXd y0(1);
        y0 << 1.0;
        return y0;
    }
    return Eigen::VectorXd::Zero(coeffs.dim_d());
}

namespace {

Trajectory run_scheme(const std::string& scheme, const FbmPath& path_n,
                      const std::vector<double>& incs, double h, double hurst,
                      const CoefficientField& coeffs, const Eigen::VectorXd& y0) {
    if (scheme == "classical") return classical_euler(incs, h, coeffs, y0);
    if (scheme == "modified") return modified_euler(incs, h, hurst, coeffs, y0);
    if (scheme == "wong_zakai") return wong_zakai_milstein(incs, h, coeffs, y0);
    if (scheme == "third_order") return third_order(incs, h, coeffs, y0);
    if (scheme == "taylor") return taylor_milstein(lift_geometric(path_n, path_n.n_fine), coeffs, y0);
    throw std::invalid_argument("unknown scheme '" + scheme + "'");
}

}  // namespace

RateResult rate_harness(const RateConfig& config) {
    auto coeffs = make_field(config.field);
    Eigen::VectorXd y0 = default_initial_condition(*coeffs);
    int m = coeffs->dim_m();
    int n_max = *std::max_element(config.ns.begin(), config.ns.end());
    int n_fine = n_max * config.ref_refinement;
    std::size_t n_schemes = config.schemes.size(), n_grids = config.ns.size();

    // errors[(s*n_grids + g)*reps + r]
    std::vector<double> errors(n_schemes * n_grids * static_cast<std::size_t>(config.reps));
    for_each_replicate(config.reps, config.threads, [&](int r) {
        FbmPath fine = generate_fbm(config.hurst, n_fine, config.horizon, m,
                                    derive_seed(config.seed, static_cast<std::uint64_t>(r)));
        Trajectory ref_fine =
            third_order(path_increments(fine), config.horizon / n_fine, *coeffs, y0);
        for (std::size_t g = 0; g < n_grids; ++g) {
            int n = config.ns[g];
            int factor = n_fine / n;
            FbmPath path_n = restrict_path(fine, factor);
            std::vector<double> incs = path_increments(path_n);
            Trajectory ref_n = restrict_trajectory(ref_fine, factor);
            // taylor needs the lift from the full fine path, not the restriction
            double h = config.horizon / n;
            for (std::size_t s = 0; s < n_schemes; ++s) {
                Trajectory traj =
                    config.schemes[s] == "taylor"
                        ? taylor_milstein(lift_geometric(fine, n), *coeffs, y0)
                        : run_scheme(config.schemes[s], path_n, incs, h, config.hurst, *coeffs, y0);
                errors[(s * n_grids + g) * config.reps + r] = sup_error(traj, ref_n);
            }
        }
    });

    RateResult result;
    result.config = config;
    result.mean_errors.assign(n_schemes, std::vector<double>(n_grids));
    result.stderrs.assign(n_schemes, std::vector<double>(n_grids));
    for (std::size_t s = 0; s < n_schemes; ++s) {
        for (std::size_t g = 0; g < n_grids; ++g) {
            const double* cell = errors.data() + (s * n_grids + g) * config.reps;
            std::vector<double> xs(cell, cell + config.reps);
            result.mean_errors[s][g] = mean_of(xs);
            result.stderrs[s][g] = std::sqrt(variance_of(xs) / config.reps);
        }
        RateReport report = rate_fit(config.ns, result.mean_errors[s]);
        report.mc_reps = config.reps;
        result.reports.push_back(report);
    }

    // Truth-proxy self-consistency on one replicate: halving the refinement
    // must move the proxy by well under the scheme error at the finest n.
    {
        FbmPath fine = generate_fbm(config.hurst, n_fine, config.horizon, m, derive_seed(config.seed, 0));
        Trajectory ref_full = restrict_trajectory(
            third_order(path_increments(fine), config.horizon / n_fine, *coeffs, y0),
            config.ref_refinement);
        FbmPath half = restrict_path(fine, 2);
        Trajectory ref_half = restrict_trajectory(
            third_order(path_increments(half), 2.0 * config.horizon / n_fine, *coeffs, y0),
            config.ref_refinement / 2);
        result.ref_self_gap = sup_error(ref_full, ref_half);
        double min_err = result.mean_errors[0].back();
        for (const auto& row : result.mean_errors) min_err = std::min(min_err, row.back());
        result.ref_gap_budget = 0.1 * min_err;
    }
    return result;
}

ResidualResult residual_harness(const ResidualConfig& config) {
    auto coeffs = make_field(config.field);
    Eigen::VectorXd y0 = default_initial_condition(*coeffs);
    int m = coeffs->dim_m();
    std::size_t n_grids = config.ns.size();

    std::vector<double> stats(n_grids * static_cast<std::size_t>(config.reps));
    for_each_replicate(config.reps, config.threads, [&](int r) {
        for (std::size_t g = 0; g < n_grids; ++g) {
            int n = config.ns[g];
            int n_fine = n * config.ref_refinement;
            FbmPath fine =
                generate_fbm(config.hurst, n_fine, config.horizon, m,
                             derive_seed(config.seed, static_cast<std::uint64_t>(r)));
            Trajectory y_ref = reference_solution(fine, *coeffs, y0, n);
            FbmPath path_n = restrict_path(fine, config.ref_refinement);
            std::vector<double> incs = path_increments(path_n);
            double h = config.horizon / n;
            Trajectory y_n = modified_euler(incs, h, config.hurst, *coeffs, y0);
            JacobianPair jac_n = jacobian_pair(y_n, incs, h, config.hurst, *coeffs);
            JacobianPair jac = jacobian_pair(y_ref, incs, h, config.hurst, *coeffs);
            LevyAreaF f = levy_area_process(lift_geometric(fine, n));
            ErrorDecomposition dec = error_decomposition(y_ref, y_n, jac_n, jac, f, *coeffs);
            double sup_tilde = 0.0;
            for (int k = 0; k <= n; ++k) {
                double acc = 0.0;
                for (int a = 0; a < dec.dim; ++a) {
                    double v = dec.epsilon_tilde[static_cast<std::size_t>(k) * dec.dim + a];
                    acc += v * v;
                }
                sup_tilde = std::max(sup_tilde, acc);
            }
            stats[g * config.reps + r] = dec.scale * std::sqrt(sup_tilde);
        }
    });

    ResidualResult result;
    result.config = config;
    for (std::size_t g = 0; g < n_grids; ++g) {
        const double* cell = stats.data() + g * config.reps;
        result.medians.push_back(median_of(std::vector<double>(cell, cell + config.reps)));
    }
    return result;
}

CltResult clt_harness(const CltConfig& config) {
    auto coeffs = make_field(config.field);
    Eigen::VectorXd y0 = default_initial_condition(*coeffs);
    int m = coeffs->dim_m(), d = coeffs->dim_d();
    int n = config.n;
    int n_fine = n * config.ref_refinement;
    double h = config.horizon / n;
    double scale = std::pow(static_cast<double>(n), 2.0 * config.hurst - 0.5);

    QPTable table = qp_sum(config.hurst, config.k_max, config.quad_n);
    if (config.swap_qp) std::swap(table.q_sum, table.p_sum);

    CltResult result;
    result.config = config;
    result.dim = d;
    result.samples_err.assign(d, std::vector<double>(config.reps));
    result.samples_u.assign(d, std::vector<double>(config.reps));

    // For the 1-d geometric field the rough solution and its Jacobian are
    // exp(B_t) exactly, so the truth side needs no fine-grid proxy.
    bool exact_geometric = config.field == "geometric1d";

    for_each_replicate(config.reps, config.threads, [&](int r) {
        // Pipeline A: renormalized terminal scheme error on a fresh path.
        {
            std::uint64_t s = derive_seed(config.seed, 2 * static_cast<std::uint64_t>(r));
            FbmPath path = exact_geometric
                               ? generate_fbm(config.hurst, n, config.horizon, m, s)
                               : generate_fbm(config.hurst, n_fine, config.horizon, m, s);
            double y_true_t = 0.0;
            Trajectory y_ref;
            std::vector<double> incs;
            if (exact_geometric) {
                y_true_t = y0(0) * std::exp(path.value(0, n));
                incs = path_increments(path);
            } else {
                y_ref = reference_solution(path, *coeffs, y0, n);
                incs = path_increments(restrict_path(path, config.ref_refinement));
            }
            Trajectory y_n = modified_euler(incs, h, config.hurst, *coeffs, y0);
            for (int a = 0; a < d; ++a) {
                double truth = exact_geometric ? y_true_t
                                               : y_ref.values[static_cast<std::size_t>(n) * d + a];
                result.samples_err[a][r] =
                    scale * (truth - y_n.values[static_cast<std::size_t>(n) * d + a]);
            }
        }
        // Pipeline B: limit process U on an independent (B, W) pair.
        {
            std::uint64_t s = derive_seed(config.seed, 2 * static_cast<std::uint64_t>(r) + 1);
            Trajectory y_ref;
            JacobianPair jac;
            if (exact_geometric) {
                FbmPath path = generate_fbm(config.hurst, n, config.horizon, m, s);
                y_ref.grid_n = n;
                y_ref.dim = 1;
                y_ref.horizon = config.horizon;
                y_ref.tag = SchemeTag::reference;
                y_ref.values.resize(n + 1);
                jac.grid_n = n;
                jac.dim = 1;
                jac.phi.resize(n + 1);
                jac.psi.resize(n + 1);
                for (int k = 0; k <= n; ++k) {
                    double e = std::exp(path.value(0, k));
                    y_ref.values[k] = y0(0) * e;
                    jac.phi[k] = e;
                    jac.psi[k] = 1.0 / e;
                }
            } else {
                FbmPath fine = generate_fbm(config.hurst, n_fine, config.horizon, m, s);
                y_ref = reference_solution(fine, *coeffs, y0, n);
                std::vector<double> incs =
                    path_increments(restrict_path(fine, config.ref_refinement));
                jac = jacobian_pair(y_ref, incs, h, config.hurst, *coeffs);
            }
            std::vector<double> w =
                sample_w(table, config.horizon, n, m,
                         derive_seed(config.seed ^ 0x57a7e57a7eULL, static_cast<std::uint64_t>(r)),
                         config.swap_qp);
            LimitSample u = limit_process_u(y_ref, jac, w, *coeffs);
            for (int a = 0; a < d; ++a)
                result.samples_u[a][r] = u.u_values[static_cast<std::size_t>(n) * d + a];
        }
    });

    for (int a = 0; a < d; ++a) {
        result.mean_err.push_back(mean_of(result.samples_err[a]));
        result.mean_u.push_back(mean_of(result.samples_u[a]));
        result.var_err.push_back(winsorized_variance(result.samples_err[a], config.winsor));
        result.var_u.push_back(winsorized_variance(result.samples_u[a], config.winsor));
        double gap = std::abs(result.var_err[a] - result.var_u[a]) /
                     std::max(result.var_u[a], 1e-300);
        result.ks.push_back(ks_two_sample(result.samples_err[a], result.samples_u[a]));
        result.max_var_gap = std::max(result.max_var_gap, gap);
        result.max_ks = std::max(result.max_ks, result.ks[a]);
    }
    return result;
}

}  // namespace fbmsim
