#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fbmsim/constants.hpp"

using namespace fbmsim;

TEST_CASE("mu_density closed form") {
    // -H(1-2H)|r-rp|^{2H-2} at H=0.4, |r-rp|=1 gives -0.4*0.2 = -0.08
    CHECK(mu_density(0.0, 1.0, 0.4) == doctest::Approx(-0.08));
    CHECK(mu_density(1.0, 0.0, 0.4) == doctest::Approx(-0.08));
    CHECK(mu_density(0.0, 2.0, 0.4) == doctest::Approx(-0.08 * std::pow(2.0, -1.2)));
    CHECK(mu_density(0.3, 0.7, 0.45) < 0.0);
    // the prefactor H(1-2H) vanishes as H -> 1/2
    CHECK(std::abs(mu_density(0.0, 1.0, 0.4999)) < 1e-3);
    CHECK_THROWS(mu_density(1.0, 1.0, 0.4));
    CHECK_THROWS(mu_density(0.0, 1.0, 0.6));
}

TEST_CASE("qp_term at H = 0.4 matches frozen quadrature values") {
    auto [q0, p0] = qp_term(0, 0.4, 128);
    CHECK(q0 == doctest::Approx(0.63670).epsilon(2e-3));
    CHECK(p0 == doctest::Approx(-0.1368).epsilon(5e-3));
    auto [q1, p1] = qp_term(1, 0.4, 128);
    CHECK(q1 == doctest::Approx(0.0031633).epsilon(2e-3));
    CHECK(p1 == doctest::Approx(0.0052170).epsilon(2e-3));
    auto [q2, p2] = qp_term(2, 0.4, 64);
    CHECK(q2 == doctest::Approx(0.0003355).epsilon(5e-3));
    CHECK(p2 == doctest::Approx(0.0003486).epsilon(5e-3));
}

TEST_CASE("qp_term at H = 0.45 matches frozen quadrature values") {
    auto [q0, p0] = qp_term(0, 0.45, 128);
    CHECK(q0 == doctest::Approx(0.557121).epsilon(2e-3));
    CHECK(p0 == doctest::Approx(-0.05713).epsilon(5e-3));
    auto [q1, p1] = qp_term(1, 0.45, 128);
    CHECK(q1 == doctest::Approx(0.0008896).epsilon(2e-3));
    CHECK(p1 == doctest::Approx(0.0013530).epsilon(2e-3));
}

TEST_CASE("qp_term is symmetric in k") {
    auto pos = qp_term(2, 0.4, 32);
    auto neg = qp_term(-2, 0.4, 32);
    CHECK(pos.first == doctest::Approx(neg.first).epsilon(1e-10));
    CHECK(pos.second == doctest::Approx(neg.second).epsilon(1e-10));
}

TEST_CASE("raw corner sums converge monotonically toward the extrapolant") {
    double target = qp_term(0, 0.4, 128).first;
    double prev_gap = 1e300;
    for (int n : {64, 128, 256, 512}) {
        double gap = std::abs(qp_term_raw(0, 0.4, n).first - target);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 2e-3);
}

TEST_CASE("qp_term input validation") {
    CHECK_THROWS(qp_term(0, 0.4, 4));
    CHECK_THROWS(qp_term(0, 0.2, 128));
    CHECK_THROWS(qp_term(0, 0.55, 128));
}

TEST_CASE("qp_sum table structure and signs at H = 0.4") {
    QPTable table = qp_sum(0.4, 16, 64);
    CHECK(table.k_max == 16);
    CHECK(table.qk.size() == 33);
    CHECK(table.q(0) == doctest::Approx(0.63670).epsilon(2e-3));
    CHECK(table.p(0) < 0.0);
    CHECK(table.q(3) == table.q(-3));
    CHECK(table.q_sum == doctest::Approx(0.644).epsilon(1e-2));
    CHECK(table.p_sum == doctest::Approx(-0.125).epsilon(3e-2));
    CHECK(table.q_sum > table.p_sum);
    // positive semidefiniteness of the W covariance needs Q >= |P|
    CHECK(table.q_sum > std::abs(table.p_sum));
    CHECK(table.tail_estimate > 0.0);
}

TEST_CASE("doubling k_max moves the sums by less than the tail estimate") {
    QPTable small = qp_sum(0.4, 8, 64);
    QPTable big = qp_sum(0.4, 16, 64);
    CHECK(std::abs(big.q_sum - small.q_sum) < small.tail_estimate);
    CHECK(std::abs(big.p_sum - small.p_sum) < small.tail_estimate);
    CHECK(big.tail_estimate < small.tail_estimate);
}

TEST_CASE("qp_sum at H = 0.45") {
    QPTable table = qp_sum(0.45, 16, 64);
    CHECK(table.q_sum + table.p_sum == doctest::Approx(0.505).epsilon(2e-2));
}

TEST_CASE("w_covariance delta structure") {
    QPTable table = qp_sum(0.4, 8, 64);
    double scale = std::pow(2.0, 4.0 * 0.4 - 1.0);
    CHECK(w_covariance(1.0, 1.5, 1, 2, 1, 2, table, 2.0) ==
          doctest::Approx(scale * table.q_sum * 1.0));
    CHECK(w_covariance(1.5, 1.0, 1, 2, 2, 1, table, 2.0) ==
          doctest::Approx(scale * table.p_sum * 1.0));
    CHECK(w_covariance(1.0, 1.0, 1, 1, 1, 1, table, 2.0) ==
          doctest::Approx(scale * (table.q_sum + table.p_sum)));
    CHECK(w_covariance(1.0, 1.0, 1, 2, 1, 1, table, 2.0) == 0.0);
    CHECK(w_covariance(1.0, 1.0, 1, 2, 2, 2, table, 2.0) == 0.0);
    CHECK_THROWS(w_covariance(1.0, 1.0, 0, 1, 1, 1, table, 2.0));
}
