#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fbmsim/harness.hpp"
#include "fbmsim/lift.hpp"
#include "fbmsim/rng.hpp"

using namespace fbmsim;

TEST_CASE("one-component lift is the squared increment") {
    FbmPath p = generate_fbm(0.4, 256, 1.0, 1, 3);
    RoughLift lift = lift_geometric(p, 32);
    for (int k = 0; k < 32; ++k) CHECK(lift.b2(k, 0, 0) == 0.5 * lift.db(k, 0) * lift.db(k, 0));
}

TEST_CASE("one-chord lift of a single segment") {
    FbmPath p = generate_fbm(0.4, 64, 1.0, 2, 4);
    RoughLift lift = lift_geometric(p, 64);  // refinement 1
    CHECK(lift.refinement == 1);
    for (int k = 0; k < 64; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(lift.b2(k, i, j) == doctest::Approx(0.5 * lift.db(k, i) * lift.db(k, j)));
}

TEST_CASE("shuffle and diagonal identities hold to roundoff") {
    FbmPath p = generate_fbm(0.4, 2048, 1.0, 3, 5);
    RoughLift lift = lift_geometric(p, 64);
    for (int k = 0; k < 64; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double prod = lift.db(k, i) * lift.db(k, j);
                CHECK(lift.b2(k, i, j) + lift.b2(k, j, i) == doctest::Approx(prod).epsilon(1e-13));
            }
}

TEST_CASE("Chen relation across adjacent steps") {
    FbmPath p = generate_fbm(0.4, 1024, 1.0, 2, 6);
    RoughLift fine = lift_geometric(p, 128);
    RoughLift coarse = lift_geometric(p, 64);
    for (int k = 0; k < 64; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double recombined = fine.b2(2 * k, i, j) + fine.b2(2 * k + 1, i, j) +
                                    fine.db(2 * k, i) * fine.db(2 * k + 1, j);
                CHECK(coarse.b2(k, i, j) ==
                      doctest::Approx(recombined).epsilon(1e-12));
            }
}

TEST_CASE("MC mean of the diagonal lift matches h^2H/2") {
    const int reps = 10000;
    std::vector<double> diag(reps);
    for (int r = 0; r < reps; ++r) {
        FbmPath p = generate_fbm(0.4, 64, 0.5, 1, derive_seed(77, r));
        RoughLift lift = lift_geometric(p, 1);
        diag[r] = lift.b2(0, 0, 0);
    }
    double theory = 0.5 * std::pow(0.5, 0.8);
    double se = std::sqrt(variance_of(diag) / reps);
    CHECK(std::abs(mean_of(diag) - theory) < 3.0 * se);
}

TEST_CASE("levy area process telescopes with centered diagonal") {
    FbmPath p = generate_fbm(0.4, 512, 2.0, 2, 8);
    RoughLift lift = lift_geometric(p, 64);
    LevyAreaF f = levy_area_process(lift);
    double center = 0.5 * std::pow(2.0 / 64.0, 0.8);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(f.f(0, i, j) == 0.0);
    for (int k = 0; k < 64; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double inc = f.f(k + 1, i, j) - f.f(k, i, j);
                double expected = lift.b2(k, i, j) - (i == j ? center : 0.0);
                CHECK(inc == doctest::Approx(expected).epsilon(1e-10));
            }
}

TEST_CASE("degenerate path gives the forced diagonal drift") {
    RoughLift lift;
    lift.hurst = 0.4;
    lift.horizon = 1.0;
    lift.coarse_n = 8;
    lift.refinement = 1;
    lift.components = 2;
    lift.delta_b.assign(16, 0.0);
    lift.bb.assign(32, 0.0);
    LevyAreaF f = levy_area_process(lift);
    double center = 0.5 * std::pow(1.0 / 8.0, 0.8);
    for (int k = 0; k <= 8; ++k) {
        CHECK(f.f(k, 0, 0) == doctest::Approx(-k * center));
        CHECK(f.f(k, 1, 1) == doctest::Approx(-k * center));
        CHECK(f.f(k, 0, 1) == 0.0);
        CHECK(f.f(k, 1, 0) == 0.0);
    }
}

TEST_CASE("divisibility violations are rejected") {
    FbmPath p = generate_fbm(0.4, 100, 1.0, 1, 9);
    CHECK_THROWS(lift_geometric(p, 3));
}
