#include "fbmsim/lift.hpp"

#include <cmath>
#include <stdexcept>

namespace fbmsim {

RoughLift lift_geometric(const FbmPath& path, int coarse_n) {
    if (coarse_n < 1 || path.n_fine % coarse_n != 0)
        throw std::invalid_argument("lift_geometric: coarse_n must divide n_fine");
    int rho = path.n_fine / coarse_n;
    int m = path.components;

    RoughLift lift;
    lift.hurst = path.hurst;
    lift.horizon = path.horizon;
    lift.coarse_n = coarse_n;
    lift.refinement = rho;
    lift.components = m;
    lift.delta_b.assign(static_cast<std::size_t>(coarse_n) * m, 0.0);
    lift.bb.assign(static_cast<std::size_t>(coarse_n) * m * m, 0.0);

    std::vector<double> area(static_cast<std::size_t>(m) * m);  // antisymmetric part
    std::vector<double> pre(m), db(m);
    for (int k = 0; k < coarse_n; ++k) {
        std::fill(area.begin(), area.end(), 0.0);
        int base = k * rho;
        for (int s = 0; s < rho; ++s) {
            for (int i = 0; i < m; ++i) {
                pre[i] = path.value(i, base + s) - path.value(i, base);
                db[i] = path.value(i, base + s + 1) - path.value(i, base + s);
            }
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    area[static_cast<std::size_t>(i) * m + j] += 0.5 * (pre[i] * db[j] - pre[j] * db[i]);
        }
        // 𝔹 = ½ δB ⊗ δB + antisymmetric area: shuffle/diagonal identities
        // then hold bitwise.
        double* dbk = lift.delta_b.data() + static_cast<std::size_t>(k) * m;
        for (int i = 0; i < m; ++i) dbk[i] = path.value(i, base + rho) - path.value(i, base);
        double* bbk = lift.bb.data() + static_cast<std::size_t>(k) * m * m;
        for (int i = 0; i < m; ++i) {
            bbk[static_cast<std::size_t>(i) * m + i] = 0.5 * dbk[i] * dbk[i];
            for (int j = i + 1; j < m; ++j) {
                double sym = 0.5 * dbk[i] * dbk[j];
                double a = area[static_cast<std::size_t>(i) * m + j];
                bbk[static_cast<std::size_t>(i) * m + j] = sym + a;
                bbk[static_cast<std::size_t>(j) * m + i] = sym - a;
            }
        }
    }
    return lift;
}

LevyAreaF levy_area_process(const RoughLift& lift) {
    int m = lift.components;
    int n = lift.coarse_n;
    LevyAreaF f;
    f.hurst = lift.hurst;
    f.horizon = lift.horizon;
    f.coarse_n = n;
    f.components = m;
    f.values.assign(static_cast<std::size_t>(n + 1) * m * m, 0.0);

    double h = lift.horizon / n;
    double center = 0.5 * std::pow(h, 2.0 * lift.hurst);
    for (int k = 0; k < n; ++k) {
        const double* bbk = lift.bb.data() + static_cast<std::size_t>(k) * m * m;
        const double* prev = f.values.data() + static_cast<std::size_t>(k) * m * m;
        double* next = f.values.data() + static_cast<std::size_t>(k + 1) * m * m;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double inc = bbk[static_cast<std::size_t>(i) * m + j];
                if (i == j) inc -= center;
                next[static_cast<std::size_t>(i) * m + j] = prev[static_cast<std::size_t>(i) * m + j] + inc;
            }
    }
    return f;
}

}  // namespace fbmsim
