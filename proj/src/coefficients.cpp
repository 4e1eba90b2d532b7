#include "fbmsim/coefficients.hpp"

#include <cmath>
#include <stdexcept>

namespace fbmsim {

std::vector<Eigen::MatrixXd> CoefficientField::eval_d2V(const Eigen::VectorXd& y, int j) const {
    int d = dim_d();
    const double step = 1e-5;
    std::vector<Eigen::MatrixXd> hess(d, Eigen::MatrixXd::Zero(d, d));
    Eigen::VectorXd yp = y, ym = y;
    for (int q = 0; q < d; ++q) {
        yp(q) = y(q) + step;
        ym(q) = y(q) - step;
        Eigen::MatrixXd dvp = eval_dV(yp)[j];
        Eigen::MatrixXd dvm = eval_dV(ym)[j];
        for (int a = 0; a < d; ++a)
            for (int l = 0; l < d; ++l) hess[a](q, l) = (dvp(a, l) - dvm(a, l)) / (2.0 * step);
        yp(q) = y(q);
        ym(q) = y(q);
    }
    return hess;
}

std::vector<Eigen::VectorXd> CoefficientField::eval_dVV(const Eigen::VectorXd& y) const {
    int m = dim_m();
    Eigen::MatrixXd v = eval_V(y);
    std::vector<Eigen::MatrixXd> dv = eval_dV(y);
    std::vector<Eigen::VectorXd> out(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out[static_cast<std::size_t>(i) * m + j] = dv[i] * v.col(j);
    return out;
}

std::vector<Eigen::VectorXd> CoefficientField::eval_dddVVV(const Eigen::VectorXd& y) const {
    int d = dim_d(), m = dim_m();
    Eigen::MatrixXd v = eval_V(y);
    std::vector<Eigen::MatrixXd> dv = eval_dV(y);
    std::vector<Eigen::VectorXd> out(static_cast<std::size_t>(m) * m * m);
    for (int i = 0; i < m; ++i) {
        std::vector<Eigen::MatrixXd> hess = eval_d2V(y, i);
        for (int j = 0; j < m; ++j) {
            // grad(a, q) = ∂_q (∂V_i V_j)^a
            Eigen::MatrixXd grad(d, d);
            for (int a = 0; a < d; ++a)
                for (int q = 0; q < d; ++q) {
                    double s = 0.0;
                    for (int l = 0; l < d; ++l)
                        s += hess[a](q, l) * v(l, j) + dv[i](a, l) * dv[j](l, q);
                    grad(a, q) = s;
                }
            for (int k = 0; k < m; ++k)
                out[(static_cast<std::size_t>(i) * m + j) * m + k] = grad * v.col(k);
        }
    }
    return out;
}

namespace {

// d = m = 1, b = 0, V(y) = y; exact rough solution y0·exp(B_t).
class GeometricField1d final : public CoefficientField {
public:
    int dim_d() const override { return 1; }
    int dim_m() const override { return 1; }
    Eigen::VectorXd eval_b(const Eigen::VectorXd&) const override { return Eigen::VectorXd::Zero(1); }
    Eigen::MatrixXd eval_db(const Eigen::VectorXd&) const override { return Eigen::MatrixXd::Zero(1, 1); }
    Eigen::MatrixXd eval_V(const Eigen::VectorXd& y) const override {
        Eigen::MatrixXd v(1, 1);
        v(0, 0) = y(0);
        return v;
    }
    std::vector<Eigen::MatrixXd> eval_dV(const Eigen::VectorXd&) const override {
        return {Eigen::MatrixXd::Identity(1, 1)};
    }
    std::vector<Eigen::MatrixXd> eval_d2V(const Eigen::VectorXd&, int) const override {
        return {Eigen::MatrixXd::Zero(1, 1)};
    }
};

// Bounded noncommuting field: V_1 = (sin y_2, cos y_2), V_2 = (cos y_1, sin y_1),
// b = (sin(y_2)/2, cos(y_1)/2). All derivatives bounded.
class RotatingField2d final : public CoefficientField {
public:
    int dim_d() const override { return 2; }
    int dim_m() const override { return 2; }
    Eigen::VectorXd eval_b(const Eigen::VectorXd& y) const override {
        Eigen::VectorXd b(2);
        b << 0.5 * std::sin(y(1)), 0.5 * std::cos(y(0));
        return b;
    }
    Eigen::MatrixXd eval_db(const Eigen::VectorXd& y) const override {
        Eigen::MatrixXd db(2, 2);
        db << 0.0, 0.5 * std::cos(y(1)), -0.5 * std::sin(y(0)), 0.0;
        return db;
    }
    Eigen::MatrixXd eval_V(const Eigen::VectorXd& y) const override {
        Eigen::MatrixXd v(2, 2);
        v << std::sin(y(1)), std::cos(y(0)), std::cos(y(1)), std::sin(y(0));
        return v;
    }
    std::vector<Eigen::MatrixXd> eval_dV(const Eigen::VectorXd& y) const override {
        Eigen::MatrixXd dv1(2, 2), dv2(2, 2);
        dv1 << 0.0, std::cos(y(1)), 0.0, -std::sin(y(1));
        dv2 << -std::sin(y(0)), 0.0, std::cos(y(0)), 0.0;
        return {dv1, dv2};
    }
    std::vector<Eigen::MatrixXd> eval_d2V(const Eigen::VectorXd& y, int j) const override {
        std::vector<Eigen::MatrixXd> hess(2, Eigen::MatrixXd::Zero(2, 2));
        if (j == 0) {
            hess[0](1, 1) = -std::sin(y(1));
            hess[1](1, 1) = -std::cos(y(1));
        } else {
            hess[0](0, 0) = -std::cos(y(0));
            hess[1](0, 0) = -std::sin(y(0));
        }
        return hess;
    }
};

}  // namespace

std::unique_ptr<CoefficientField> make_field(const std::string& name) {
    if (name == "geometric1d") return std::make_unique<GeometricField1d>();
    if (name == "rotating2d") return std::make_unique<RotatingField2d>();
    throw std::invalid_argument("make_field: unknown field '" + name + "'");
}

}  // namespace fbmsim
