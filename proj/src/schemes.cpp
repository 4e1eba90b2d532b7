#include "fbmsim/schemes.hpp"

#include <cmath>
#include <iostream>
#include <ostream>
#include <stdexcept>

#include "fbmsim/rng.hpp"

namespace fbmsim {

namespace {

Trajectory make_trajectory(int n, int d, double horizon, SchemeTag tag, const Eigen::VectorXd& y0) {
    Trajectory traj;
    traj.grid_n = n;
    traj.dim = d;
    traj.horizon = horizon;
    traj.tag = tag;
    traj.values.resize(static_cast<std::size_t>(n + 1) * d);
    for (int a = 0; a < d; ++a) traj.values[a] = y0(a);
    return traj;
}

int check_increments(const std::vector<double>& increments, const CoefficientField& coeffs,
                     const Eigen::VectorXd& y0) {
    int m = coeffs.dim_m();
    if (y0.size() != coeffs.dim_d()) throw std::invalid_argument("scheme: initial condition dimension mismatch");
    if (increments.empty() || increments.size() % m != 0)
        throw std::invalid_argument("scheme: increment array size not a multiple of m");
    return static_cast<int>(increments.size()) / m;
}

}  // namespace

std::vector<double> path_increments(const FbmPath& path) {
    int n = path.n_fine, m = path.components;
    std::vector<double> out(static_cast<std::size_t>(n) * m);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < m; ++i)
            out[static_cast<std::size_t>(k) * m + i] = path.value(i, k + 1) - path.value(i, k);
    return out;
}

Trajectory classical_euler(const std::vector<double>& increments, double h,
                           const CoefficientField& coeffs, const Eigen::VectorXd& y0) {
    int m = coeffs.dim_m(), d = coeffs.dim_d();
    int n = check_increments(increments, coeffs, y0);
    Trajectory traj = make_trajectory(n, d, h * n, SchemeTag::classical, y0);
    Eigen::VectorXd y = y0;
    for (int k = 0; k < n; ++k) {
        Eigen::Map<const Eigen::VectorXd> db(increments.data() + static_cast<std::size_t>(k) * m, m);
        y += coeffs.eval_b(y) * h + coeffs.eval_V(y) * db;
        for (int a = 0; a < d; ++a) traj.values[static_cast<std::size_t>(k + 1) * d + a] = y(a);
    }
    return traj;
}

Trajectory modified_euler(const std::vector<double>& increments, double h, double hurst,
                          const CoefficientField& coeffs, const Eigen::VectorXd& y0) {
    int m = coeffs.dim_m(), d = coeffs.dim_d();
    int n = check_increments(increments, coeffs, y0);
    double corr = 0.5 * std::pow(h, 2.0 * hurst);
    Trajectory traj = make_trajectory(n, d, h * n, SchemeTag::modified, y0);
    Eigen::VectorXd y = y0;
    for (int k = 0; k < n; ++k) {
        Eigen::Map<const Eigen::VectorXd> db(increments.data() + static_cast<std::size_t>(k) * m, m);
        Eigen::VectorXd step = coeffs.eval_b(y) * h + coeffs.eval_V(y) * db;
        std::vector<Eigen::VectorXd> dvv = coeffs.eval_dVV(y);
        for (int j = 0; j < m; ++j) step += corr * dvv[static_cast<std::size_t>(j) * m + j];
        y += step;
        for (int a = 0; a < d; ++a) traj.values[static_cast<std::size_t>(k + 1) * d + a] = y(a);
    }
    return traj;
}

Trajectory taylor_milstein(const RoughLift& lift, const CoefficientField& coeffs,
                           const Eigen::VectorXd& y0) {
    int m = coeffs.dim_m(), d = coeffs.dim_d();
    if (lift.components != m) throw std::invalid_argument("taylor_milstein: component mismatch");
    int n = lift.coarse_n;
    double h = lift.horizon / n;
    Trajectory traj = make_trajectory(n, d, lift.horizon, SchemeTag::taylor, y0);
    Eigen::VectorXd y = y0;
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd step = coeffs.eval_b(y) * h;
        Eigen::MatrixXd v = coeffs.eval_V(y);
        std::vector<Eigen::VectorXd> dvv = coeffs.eval_dVV(y);
        for (int i = 0; i < m; ++i) {
            step += v.col(i) * lift.db(k, i);
            // 𝔹^{ij} integrates component i first, so it pairs with ∂V_j V_i.
            for (int j = 0; j < m; ++j) step += dvv[static_cast<std::size_t>(j) * m + i] * lift.b2(k, i, j);
        }
        y += step;
        for (int a = 0; a < d; ++a) traj.values[static_cast<std::size_t>(k + 1) * d + a] = y(a);
    }
    return traj;
}

Trajectory wong_zakai_milstein(const std::vector<double>& increments, double h,
                               const CoefficientField& coeffs, const Eigen::VectorXd& y0) {
    int m = coeffs.dim_m(), d = coeffs.dim_d();
    int n = check_increments(increments, coeffs, y0);
    Trajectory traj = make_trajectory(n, d, h * n, SchemeTag::wong_zakai, y0);
    Eigen::VectorXd y = y0;
    for (int k = 0; k < n; ++k) {
        Eigen::Map<const Eigen::VectorXd> db(increments.data() + static_cast<std::size_t>(k) * m, m);
        Eigen::VectorXd step = coeffs.eval_b(y) * h + coeffs.eval_V(y) * db;
        std::vector<Eigen::VectorXd> dvv = coeffs.eval_dVV(y);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                step += dvv[static_cast<std::size_t>(i) * m + j] * (0.5 * db(i) * db(j));
        y += step;
        for (int a = 0; a < d; ++a) traj.values[static_cast<std::size_t>(k + 1) * d + a] = y(a);
    }
    return traj;
}

Trajectory third_order(const std::vector<double>& increments, double h,
                       const CoefficientField& coeffs, const Eigen::VectorXd& y0) {
    int m = coeffs.dim_m(), d = coeffs.dim_d();
    int n = check_increments(increments, coeffs, y0);
    Trajectory traj = make_trajectory(n, d, h * n, SchemeTag::third_order, y0);
    Eigen::VectorXd y = y0;
    for (int k = 0; k < n; ++k) {
        Eigen::Map<const Eigen::VectorXd> db(increments.data() + static_cast<std::size_t>(k) * m, m);
        Eigen::VectorXd step = coeffs.eval_b(y) * h + coeffs.eval_V(y) * db;
        std::vector<Eigen::VectorXd> dvv = coeffs.eval_dVV(y);
        std::vector<Eigen::VectorXd> ddd = coeffs.eval_dddVVV(y);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                step += dvv[static_cast<std::size_t>(i) * m + j] * (0.5 * db(i) * db(j));
                for (int l = 0; l < m; ++l)
                    step += ddd[(static_cast<std::size_t>(i) * m + j) * m + l] *
                            (db(i) * db(j) * db(l) / 6.0);
            }
        y += step;
        for (int a = 0; a < d; ++a) traj.values[static_cast<std::size_t>(k + 1) * d + a] = y(a);
    }
    return traj;
}

Trajectory reference_solution(const FbmPath& fine_path, const CoefficientField& coeffs,
                              const Eigen::VectorXd& y0, int coarse_n) {
    if (coarse_n < 1 || fine_path.n_fine % coarse_n != 0 || fine_path.n_fine / coarse_n < 32)
        throw std::invalid_argument("reference_solution: fine grid must be >= 32x coarse grid");
    double h = fine_path.horizon / fine_path.n_fine;
    Trajectory fine = third_order(path_increments(fine_path), h, coeffs, y0);
    Trajectory out = restrict_trajectory(fine, fine_path.n_fine / coarse_n);
    out.tag = SchemeTag::reference;
    return out;
}

Trajectory restrict_trajectory(const Trajectory& traj, int factor) {
    if (factor < 1 || traj.grid_n % factor != 0)
        throw std::invalid_argument("restrict_trajectory: factor must divide grid_n");
    Trajectory out;
    out.grid_n = traj.grid_n / factor;
    out.dim = traj.dim;
    out.horizon = traj.horizon;
    out.tag = traj.tag;
    out.values.resize(static_cast<std::size_t>(out.grid_n + 1) * out.dim);
    for (int k = 0; k <= out.grid_n; ++k)
        for (int a = 0; a < out.dim; ++a)
            out.values[static_cast<std::size_t>(k) * out.dim + a] =
                traj.values[static_cast<std::size_t>(k) * factor * out.dim + a];
    return out;
}

JacobianPair jacobian_pair(const Trajectory& y_ref, const std::vector<double>& increments,
                           double h, double hurst, const CoefficientField& coeffs) {
    int m = coeffs.dim_m(), d = coeffs.dim_d();
    int n = y_ref.grid_n;
    if (static_cast<int>(increments.size()) != n * m)
        throw std::invalid_argument("jacobian_pair: increment/grid mismatch");
    double corr = 0.5 * std::pow(h, 2.0 * hurst);

    JacobianPair jac;
    jac.grid_n = n;
    jac.dim = d;
    jac.phi.resize(static_cast<std::size_t>(n + 1) * d * d);
    jac.psi.resize(jac.phi.size());

    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    RowMat phi = RowMat::Identity(d, d), psi = RowMat::Identity(d, d);
    auto store = [&](int k) {
        std::copy(phi.data(), phi.data() + d * d, jac.phi.data() + static_cast<std::size_t>(k) * d * d);
        std::copy(psi.data(), psi.data() + d * d, jac.psi.data() + static_cast<std::size_t>(k) * d * d);
    };
    store(0);
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd y = y_ref.node(k);
        std::vector<Eigen::MatrixXd> dv = coeffs.eval_dV(y);
        Eigen::MatrixXd v = coeffs.eval_V(y);
        // One-step derivative of the modified-Euler map: the h^2H correction
        // differentiates to ∂²V_j·V_j + (∂V_j)²; dropping the Hessian part
        // leaves a leading-order residual that never cancels.
        RowMat step = coeffs.eval_db(y) * h;
        for (int j = 0; j < m; ++j) {
            step += dv[j] * increments[static_cast<std::size_t>(k) * m + j];
            step += corr * (dv[j] * dv[j]);
            std::vector<Eigen::MatrixXd> hess = coeffs.eval_d2V(y, j);
            for (int a = 0; a < d; ++a) step.row(a) += corr * (hess[a] * v.col(j)).transpose();
        }
        RowMat gain = RowMat::Identity(d, d) + step;
        phi = gain * phi;
        psi = psi * gain.partialPivLu().solve(RowMat::Identity(d, d));
        // Newton polish keeps Φ·Ψ = Id against drift over many steps.
        psi = psi * (2.0 * RowMat::Identity(d, d) - phi * psi);
        if (phi.norm() * psi.norm() > 1e10)
            throw std::runtime_error("jacobian_pair: near-singular Jacobian");
        store(k + 1);
    }
    return jac;
}

std::vector<double> sample_w(const QPTable& table, double horizon, int grid_nu, int dim_m,
                             std::uint64_t seed, bool project_psd) {
    if (grid_nu < 1 || dim_m < 1) throw std::invalid_argument("sample_w: bad grid");
    int mm = dim_m * dim_m;
    if (!project_psd && !(table.q_sum >= std::abs(table.p_sum)))
        std::cerr << "sample_w: warning: Q < |P|, covariance may be indefinite\n";
    // Per-unit-time covariance across the m² components (i,j) of W.
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(mm, mm);
    double scale = std::pow(horizon, 4.0 * table.hurst - 1.0);
    for (int i = 0; i < dim_m; ++i)
        for (int j = 0; j < dim_m; ++j)
            for (int i2 = 0; i2 < dim_m; ++i2)
                for (int j2 = 0; j2 < dim_m; ++j2) {
                    double c = 0.0;
                    if (i == i2 && j == j2) c += table.q_sum;
                    if (i == j2 && j == i2) c += table.p_sum;
                    cov(i * dim_m + j, i2 * dim_m + j2) = scale * c;
                }
    cov = 0.5 * (cov + cov.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    Eigen::VectorXd ev = es.eigenvalues();
    double max_ev = std::max(ev.maxCoeff(), 0.0);
    for (int i = 0; i < mm; ++i) {
        if (!project_psd && ev(i) < -1e-10 * std::max(max_ev, 1e-300))
            throw std::runtime_error("sample_w: covariance not positive semidefinite");
        ev(i) = std::sqrt(std::max(ev(i), 0.0));
    }
    Eigen::MatrixXd factor = es.eigenvectors() * ev.asDiagonal();

    double sqrt_dt = std::sqrt(horizon / grid_nu);
    NormalRng rng(seed);
    std::vector<double> out(static_cast<std::size_t>(grid_nu) * mm);
    Eigen::VectorXd g(mm);
    for (int k = 0; k < grid_nu; ++k) {
        for (int c = 0; c < mm; ++c) g(c) = rng();
        Eigen::VectorXd dw = sqrt_dt * (factor * g);
        for (int c = 0; c < mm; ++c) out[static_cast<std::size_t>(k) * mm + c] = dw(c);
    }
    return out;
}

LimitSample limit_process_u(const Trajectory& y_ref, const JacobianPair& jac,
                            const std::vector<double>& w_increments,
                            const CoefficientField& coeffs) {
    int m = coeffs.dim_m(), d = coeffs.dim_d();
    int n = y_ref.grid_n;
    int mm = m * m;
    if (jac.grid_n != n || static_cast<int>(w_increments.size()) != n * mm)
        throw std::invalid_argument("limit_process_u: grid mismatch");

    LimitSample sample;
    sample.grid_n = n;
    sample.dim = d;
    sample.u_values.assign(static_cast<std::size_t>(n + 1) * d, 0.0);

    Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);  // Σ Ψ ∂V_j V_j'(y) ΔW
    for (int k = 0; k < n; ++k) {
        std::vector<Eigen::VectorXd> dvv = coeffs.eval_dVV(y_ref.node(k));
        Eigen::VectorXd local = Eigen::VectorXd::Zero(d);
        // ΔW^{ij} carries the law of the recentred 𝔹^{ij}, pairing with ∂V_j V_i.
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                local += dvv[static_cast<std::size_t>(j) * m + i] *
                         w_increments[static_cast<std::size_t>(k) * mm + i * m + j];
        acc += jac.psi_at(k) * local;
        Eigen::VectorXd u = jac.phi_at(k + 1) * acc;
        for (int a = 0; a < d; ++a) sample.u_values[static_cast<std::size_t>(k + 1) * d + a] = u(a);
    }
    return sample;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    os << "t";
    for (int a = 1; a <= traj.dim; ++a) os << ",y" << a;
    os << "\n";
    os.precision(17);
    for (int k = 0; k <= traj.grid_n; ++k) {
        os << traj.time(k);
        for (int a = 0; a < traj.dim; ++a) os << "," << traj.values[static_cast<std::size_t>(k) * traj.dim + a];
        os << "\n";
    }
}

}  // namespace fbmsim
