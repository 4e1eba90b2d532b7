#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fbmsim/coefficients.hpp"
#include "fbmsim/constants.hpp"
#include "fbmsim/lift.hpp"

namespace fbmsim {

enum class SchemeTag { classical, modified, taylor, wong_zakai, third_order, reference };

// Scheme output on the grid t_k = k*T/n; values[k*d + a] = y^a_{t_k}.
struct Trajectory {
    int grid_n = 0;
    int dim = 0;
    double horizon = 0.0;
    SchemeTag tag = SchemeTag::classical;
    std::vector<double> values;

    Eigen::Map<const Eigen::VectorXd> node(int k) const {
        return {values.data() + static_cast<std::size_t>(k) * dim, dim};
    }
    double time(int k) const { return horizon * k / grid_n; }
};

// phi[k*d*d ...] row-major d×d at each node; psi is the per-node inverse.
struct JacobianPair {
    int grid_n = 0;
    int dim = 0;
    std::vector<double> phi;
    std::vector<double> psi;

    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> phi_at(
        int k) const {
        return {phi.data() + static_cast<std::size_t>(k) * dim * dim, dim, dim};
    }
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> psi_at(
        int k) const {
        return {psi.data() + static_cast<std::size_t>(k) * dim * dim, dim, dim};
    }
};

// A draw of the limiting error process U on the scheme grid.
struct LimitSample {
    int grid_n = 0;
    int dim = 0;
    std::uint64_t w_seed = 0;
    std::vector<double> u_values;  // (n+1) × d
};

// Per-step increments of a path on its own grid: out[k*m + i] = δB^i_k.
std::vector<double> path_increments(const FbmPath& path);

Trajectory classical_euler(const std::vector<double>& increments, double h,
                           const CoefficientField& coeffs, const Eigen::VectorXd& y0);

// Adds the deterministic correction (h^2H / 2) Σ_j ∂V_j V_j.
Trajectory modified_euler(const std::vector<double>& increments, double h, double hurst,
                          const CoefficientField& coeffs, const Eigen::VectorXd& y0);

// Milstein update with the true second-level increments 𝔹.
Trajectory taylor_milstein(const RoughLift& lift, const CoefficientField& coeffs,
                           const Eigen::VectorXd& y0);

// Milstein update with 𝔹 replaced by δB^i δB^j / 2.
Trajectory wong_zakai_milstein(const std::vector<double>& increments, double h,
                               const CoefficientField& coeffs, const Eigen::VectorXd& y0);

// Wong-Zakai update plus (1/6) Σ ∂(∂V_i V_j)V_k δB^i δB^j δB^k.
Trajectory third_order(const std::vector<double>& increments, double h,
                       const CoefficientField& coeffs, const Eigen::VectorXd& y0);

// Truth proxy: third-order scheme on the full fine grid, restricted to the
// coarse grid. Requires n_fine >= 32 * coarse_n.
Trajectory reference_solution(const FbmPath& fine_path, const CoefficientField& coeffs,
                              const Eigen::VectorXd& y0, int coarse_n);

Trajectory restrict_trajectory(const Trajectory& traj, int factor);

// Φ advanced by the exact one-step derivative of the modified-Euler map
// along y_ref; Ψ by the exact per-step inverse with a Newton consistency
// polish.
JacobianPair jacobian_pair(const Trajectory& y_ref, const std::vector<double>& increments,
                           double h, double hurst, const CoefficientField& coeffs);

// Gaussian increments of W over grid_nu steps of [0, horizon]; layout
// out[k*m*m + i*m + j] = ΔW^{ij}_k, with covariance
// T^{4H-1}(Q δ_{ii'}δ_{jj'} + P δ_{ij'}δ_{ji'}) per unit time across the m²
// components and independence across steps. A covariance that is not PSD
// throws unless project_psd is set (negative eigenvalues clipped to zero;
// used by negative controls with corrupted tables).
std::vector<double> sample_w(const QPTable& table, double horizon, int grid_nu, int dim_m,
                             std::uint64_t seed, bool project_psd = false);

// U_{t} = Φ_t Σ_{u_k < t} Ψ_{u_k} Σ_{jj'} ∂V_j V_{j'}(y_{u_k}) ΔW^{jj'}_k.
LimitSample limit_process_u(const Trajectory& y_ref, const JacobianPair& jac,
                            const std::vector<double>& w_increments,
                            const CoefficientField& coeffs);

// CSV: header t,y1..yd; 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

}  // namespace fbmsim
