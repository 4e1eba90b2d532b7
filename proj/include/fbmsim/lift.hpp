#pragma once

#include <vector>

#include "fbmsim/fbm.hpp"

namespace fbmsim {

// Coarse-grid increments plus second-level increments of the geometric lift
// of the piecewise-linear fine path. Layouts:
//   delta_b[k*m + i]        = δB^i over coarse step k
//   bb[(k*m + i)*m + j]     = 𝔹^{ij} over coarse step k
struct RoughLift {
    double hurst = 0.0;
    double horizon = 0.0;
    int coarse_n = 0;
    int refinement = 0;
    int components = 0;
    std::vector<double> delta_b;
    std::vector<double> bb;

    double db(int k, int i) const { return delta_b[static_cast<std::size_t>(k) * components + i]; }
    double b2(int k, int i, int j) const {
        return bb[(static_cast<std::size_t>(k) * components + i) * components + j];
    }
};

// Centered Levy-area process: F_0 = 0 and
//   F_{t_{k+1}} = F_{t_k} + 𝔹_{t_k t_{k+1}} - (h^2H / 2)·Id.
// values[(k*m + i)*m + j] = F^{ij}_{t_k}, k = 0..coarse_n.
struct LevyAreaF {
    double hurst = 0.0;
    double horizon = 0.0;
    int coarse_n = 0;
    int components = 0;
    std::vector<double> values;

    double f(int k, int i, int j) const {
        return values[(static_cast<std::size_t>(k) * components + i) * components + j];
    }
};

// Exact double integrals of the piecewise-linear interpolation, accumulated
// segment by segment; shuffle and diagonal identities hold exactly.
RoughLift lift_geometric(const FbmPath& path, int coarse_n);

LevyAreaF levy_area_process(const RoughLift& lift);

}  // namespace fbmsim
