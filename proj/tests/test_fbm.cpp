#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fbmsim/fbm.hpp"
#include "fbmsim/harness.hpp"
#include "fbmsim/rng.hpp"

using namespace fbmsim;

TEST_CASE("fbm_covariance closed form") {
    CHECK(fbm_covariance(1.0, 1.0, 0.17) == doctest::Approx(1.0));
    CHECK(fbm_covariance(1.0, 1.0, 0.49) == doctest::Approx(1.0));
    CHECK(fbm_covariance(0.3, 0.8, 0.5) == doctest::Approx(0.3));
    CHECK(fbm_covariance(2.0, 0.7, 0.5) == doctest::Approx(0.7));
    CHECK(fbm_covariance(1.0, 2.0, 0.4) == doctest::Approx(0.5 * std::pow(2.0, 0.8)));
    CHECK(fbm_covariance(1.0, 2.0, 0.4) == doctest::Approx(0.87055).epsilon(1e-4));
    // increments of length t-s = s make the s^2H terms cancel
    CHECK(fbm_covariance(0.5, 1.0, 0.4) == doctest::Approx(0.5));
    CHECK_THROWS(fbm_covariance(1.0, 2.0, 1.5));
    CHECK_THROWS(fbm_covariance(-1.0, 2.0, 0.4));
}

TEST_CASE("rect_increment closed form") {
    CHECK(rect_increment(0.2, 0.9, 0.2, 0.9, 0.4) == doctest::Approx(std::pow(0.7, 0.8)));
    CHECK(rect_increment(0.0, 1.0, 1.0, 2.0, 0.4) ==
          doctest::Approx(0.5 * (std::pow(2.0, 0.8) - 2.0)));
    CHECK(rect_increment(0.0, 1.0, 1.0, 2.0, 0.4) == doctest::Approx(-0.12945).epsilon(1e-4));
    // disjoint increments are negatively correlated for H < 1/2
    CHECK(rect_increment(0.0, 1.0, 2.0, 3.0, 0.4) < 0.0);
    CHECK(rect_increment(0.0, 1.0, 5.0, 6.0, 0.3) < 0.0);
    // translation invariance, including negative times
    CHECK(rect_increment(-2.0, -1.0, 1.0, 2.0, 0.4) ==
          doctest::Approx(rect_increment(0.0, 1.0, 3.0, 4.0, 0.4)));
    CHECK_THROWS(rect_increment(1.0, 0.0, 0.0, 1.0, 0.4));
}

TEST_CASE("generate_fbm determinism and structure") {
    FbmPath a = generate_fbm(0.4, 128, 1.0, 2, 42);
    FbmPath b = generate_fbm(0.4, 128, 1.0, 2, 42);
    CHECK(a.values == b.values);
    FbmPath c = generate_fbm(0.4, 128, 1.0, 2, 43);
    CHECK(a.values != c.values);
    CHECK(a.value(0, 0) == 0.0);
    CHECK(a.value(1, 0) == 0.0);
    CHECK(a.time(64) == doctest::Approx(0.5));
    CHECK_THROWS(generate_fbm(1.2, 128, 1.0, 1, 1));
    CHECK_THROWS(generate_fbm(0.4, 1, 1.0, 1, 1));
}

TEST_CASE("generate_fbm matches the covariance in law") {
    const int reps = 10000, n = 64;
    std::vector<double> var_t(reps), cov_st(reps), cross(reps);
    for (int r = 0; r < reps; ++r) {
        FbmPath p = generate_fbm(0.4, n, 1.0, 2, derive_seed(99, r));
        var_t[r] = p.value(0, n) * p.value(0, n);
        cov_st[r] = p.value(0, n / 2) * p.value(0, n);
        cross[r] = p.value(0, n) * p.value(1, n);  // independent components
    }
    double se_var = std::sqrt(variance_of(var_t) / reps);
    CHECK(std::abs(mean_of(var_t) - 1.0) < 3.0 * se_var);
    double se_cov = std::sqrt(variance_of(cov_st) / reps);
    CHECK(std::abs(mean_of(cov_st) - fbm_covariance(0.5, 1.0, 0.4)) < 3.0 * se_cov);
    double se_x = std::sqrt(variance_of(cross) / reps);
    CHECK(std::abs(mean_of(cross)) < 3.0 * se_x);
}

TEST_CASE("MC rectangular increment covariance on disjoint intervals") {
    const int reps = 10000, n = 8;
    std::vector<double> prod(reps);
    for (int r = 0; r < reps; ++r) {
        FbmPath p = generate_fbm(0.4, n, 1.0, 1, derive_seed(7, r));
        prod[r] = (p.value(0, 2) - p.value(0, 1)) * (p.value(0, 6) - p.value(0, 4));
    }
    double theory = rect_increment(1.0 / n, 2.0 / n, 4.0 / n, 6.0 / n, 0.4);
    double se = std::sqrt(variance_of(prod) / reps);
    CHECK(std::abs(mean_of(prod) - theory) < 3.0 * se);
}

TEST_CASE("restrict_path index contracts") {
    FbmPath p = generate_fbm(0.4, 1024, 1.0, 1, 5);
    FbmPath r1 = restrict_path(p, 1);
    CHECK(r1.values == p.values);
    FbmPath r4 = restrict_path(p, 4);
    CHECK(r4.n_fine == 256);
    for (int k = 0; k <= 256; k += 17) CHECK(r4.value(0, k) == p.value(0, 4 * k));
    FbmPath r22 = restrict_path(restrict_path(p, 2), 2);
    CHECK(r22.values == r4.values);
    CHECK_THROWS(restrict_path(p, 3));
}

TEST_CASE("path CSV round-trips at 17 significant digits") {
    FbmPath p = generate_fbm(0.42, 8, 1.0, 2, 11);
    std::ostringstream os;
    write_path_csv(p, os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,B1,B2");
    for (int k = 0; k <= 8; ++k) {
        std::string line;
        std::getline(is, line);
        double t, b1, b2;
        CHECK(std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &b1, &b2) == 3);
        CHECK(t == p.time(k));
        CHECK(b1 == p.value(0, k));
        CHECK(b2 == p.value(1, k));
    }
}
