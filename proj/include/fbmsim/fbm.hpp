#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace fbmsim {

// Multi-component fBm sample on the uniform grid t_k = k*T/n, B_0 = 0.
// values is component-major: values[j*(n_fine+1) + k] = B^j_{t_k}.
struct FbmPath {
    double hurst = 0.0;
    double horizon = 0.0;
    int n_fine = 0;
    int components = 0;
    std::uint64_t seed = 0;
    std::vector<double> values;

    double value(int comp, int k) const { return values[static_cast<std::size_t>(comp) * (n_fine + 1) + k]; }
    double time(int k) const { return horizon * k / n_fine; }
};

// R(s,t) = (s^2H + t^2H - |t-s|^2H)/2.
double fbm_covariance(double s, double t, double hurst);

// E[(B_v - B_u)(B_t - B_s)] = (|t-u|^2H + |s-v|^2H - |t-v|^2H - |s-u|^2H)/2.
// Translation invariant; times may be negative.
double rect_increment(double u, double v, double s, double t, double hurst);

// Exact-in-law sample via circulant embedding of the increment sequence
// (FFT), with a dense covariance square-root fallback for small n when the
// embedding is not nonnegative definite. Deterministic given seed;
// components use independent derived streams.
FbmPath generate_fbm(double hurst, int n_fine, double horizon, int components, std::uint64_t seed);

// Keep every `factor`-th node; factor must divide n_fine.
FbmPath restrict_path(const FbmPath& path, int factor);

// CSV: header t,B1,...,Bm; 17 significant digits.
void write_path_csv(const FbmPath& path, std::ostream& os);

}  // namespace fbmsim
