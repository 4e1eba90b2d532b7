#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

namespace fbmsim {

// Drift b, diffusion columns V_j and the derivative combinations the schemes
// need. Conventions:
//   eval_V(y)(k, j)      = V^k_j
//   eval_dV(y)[j](k, l)  = ∂_l V^k_j
//   eval_d2V(y, j)[a](q, l) = ∂_q ∂_l V^a_j
// Evaluation must be reentrant.
class CoefficientField {
public:
    virtual ~CoefficientField() = default;

    virtual int dim_d() const = 0;
    virtual int dim_m() const = 0;

    virtual Eigen::VectorXd eval_b(const Eigen::VectorXd& y) const = 0;
    virtual Eigen::MatrixXd eval_db(const Eigen::VectorXd& y) const = 0;
    virtual Eigen::MatrixXd eval_V(const Eigen::VectorXd& y) const = 0;
    virtual std::vector<Eigen::MatrixXd> eval_dV(const Eigen::VectorXd& y) const = 0;
    // Default: central finite differences of eval_dV.
    virtual std::vector<Eigen::MatrixXd> eval_d2V(const Eigen::VectorXd& y, int j) const;

    // out[i*m + j] = ∂V_i V_j(y), i.e. (∂V_i V_j)^k = Σ_l ∂_l V^k_i V^l_j.
    std::vector<Eigen::VectorXd> eval_dVV(const Eigen::VectorXd& y) const;
    // out[(i*m + j)*m + k] = ∂(∂V_i V_j) V_k(y).
    std::vector<Eigen::VectorXd> eval_dddVVV(const Eigen::VectorXd& y) const;
};

// Built-ins: "geometric1d" (d=m=1, b=0, V(y)=y, exact solution y0·exp(B_t))
// and "rotating2d" (d=m=2, bounded sin/cos fields with noncommuting V_1, V_2).
std::unique_ptr<CoefficientField> make_field(const std::string& name);

}  // namespace fbmsim
