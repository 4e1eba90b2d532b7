#pragma once

#include <cstdint>
#include <random>

namespace fbmsim {

// Counter-based seed derivation: mixing a (master, stream) pair through
// splitmix64 gives order-independent per-component / per-replicate streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Standard-normal generator: mt19937_64 + Box-Muller with one cached draw.
class NormalRng {
public:
    explicit NormalRng(std::uint64_t seed) : gen_(seed) {}

    double operator()();

private:
    std::mt19937_64 gen_;
    double cache_ = 0.0;
    bool has_cache_ = false;
};

}  // namespace fbmsim
