#include "fbmsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace fbmsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
}

double NormalRng::operator()() {
    if (has_cache_) {
        has_cache_ = false;
        return cache_;
    }
    // Box-Muller on uniforms in (0,1].
    const double inv = 1.0 / 18446744073709551616.0;  // 2^-64
    double u1 = (static_cast<double>(gen_()) + 1.0) * inv;
    double u2 = static_cast<double>(gen_()) * inv;
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    cache_ = r * std::sin(a);
    has_cache_ = true;
    return r * std::cos(a);
}

}  // namespace fbmsim
