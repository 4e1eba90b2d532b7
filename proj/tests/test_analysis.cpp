#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fbmsim/analysis.hpp"
#include "fbmsim/harness.hpp"
#include "fbmsim/rng.hpp"

using namespace fbmsim;

TEST_CASE("holder seminorm on deterministic grids") {
    std::vector<double> linear(65);
    for (int k = 0; k <= 64; ++k) linear[k] = k / 64.0;
    CHECK(holder_seminorm(linear, 1, 1.0, 1.0) == doctest::Approx(1.0));
    // gamma = 1/2: sup |t-s|^{1/2} over [0,1] is 1
    CHECK(holder_seminorm(linear, 1, 1.0, 0.5) == doctest::Approx(1.0));
    std::vector<double> flat(65, 3.7);
    CHECK(holder_seminorm(flat, 1, 1.0, 1.0) == 0.0);
    CHECK_THROWS(holder_seminorm(linear, 1, 1.0, 0.0));
    CHECK_THROWS(holder_seminorm({1.0}, 1, 1.0, 0.5));
}

TEST_CASE("holder seminorm blows up above the path regularity") {
    // fBm with H = 0.4 has finite gamma-variation for gamma < H only; the
    // grid seminorm at gamma = 0.48 should grow visibly with refinement.
    double prev = 0.0;
    for (int n : {256, 1024, 4096}) {
        FbmPath p = generate_fbm(0.4, n, 1.0, 1, 17);
        double semi = holder_seminorm(p.values, 1, 1.0, 0.48);
        CHECK(semi > prev);
        prev = semi;
    }
}

TEST_CASE("sewing constant values") {
    CHECK(sewing_constant(2.0) == doctest::Approx(4.0 * M_PI * M_PI / 6.0).epsilon(1e-9));
    CHECK(sewing_constant(2.0) == doctest::Approx(6.5797363).epsilon(1e-7));
    CHECK(sewing_constant(1.5) == doctest::Approx(7.3889133).epsilon(1e-6));
    // zeta(mu) -> 1, so K_mu / 2^mu -> 1
    CHECK(sewing_constant(20.0) / std::pow(2.0, 20.0) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK_THROWS(sewing_constant(1.0));
}

TEST_CASE("sewing check on the zero increment") {
    SewingIncrement r;
    r.grid_n = 8;
    r.horizon = 1.0;
    r.r.assign(81, 0.0);
    CHECK(sewing_check(r, 1.5) == 0.0);
}

TEST_CASE("sewing check rejects additive nonzero increments") {
    SewingIncrement r;
    r.grid_n = 8;
    r.horizon = 1.0;
    r.r.assign(81, 0.0);
    for (int s = 0; s < 8; ++s)
        for (int t = s + 1; t <= 8; ++t) r.at(s, t) = (t - s) / 8.0;  // dR = 0 but R != 0
    CHECK_THROWS(sewing_check(r, 1.5));
}

TEST_CASE("sewing bound holds for Riemann-sum germs") {
    // R_st = sum_{k in [s,t)} (f_k - f_s)(g_{k+1} - g_k) vanishes on adjacent
    // pairs and the sewing lemma bounds ||R|| by K_mu ||dR||.
    NormalRng rng(derive_seed(23, 0));
    const int n = 32;
    for (int c = 0; c < 20; ++c) {
        std::vector<double> f(n + 1), g(n + 1);
        double a1 = rng(), a2 = rng(), b1 = rng(), b2 = rng();
        for (int k = 0; k <= n; ++k) {
            double t = static_cast<double>(k) / n;
            f[k] = a1 * std::sin(3.0 * t) + a2 * t;
            g[k] = b1 * std::cos(5.0 * t) + b2 * t;
        }
        SewingIncrement r;
        r.grid_n = n;
        r.horizon = 1.0;
        r.r.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
        for (int s = 0; s < n; ++s) {
            double acc = 0.0;
            for (int t = s + 1; t <= n; ++t) {
                acc += (f[t - 1] - f[s]) * (g[t] - g[t - 1]);
                r.at(s, t) = acc;
            }
        }
        for (double mu : {1.2, 1.5, 2.0}) {
            double ratio = sewing_check(r, mu);
            CHECK(ratio <= 1.0);
            CHECK(ratio > 0.0);
        }
    }
}

TEST_CASE("sup_error basics") {
    auto field = make_field("rotating2d");
    Eigen::VectorXd y0 = default_initial_condition(*field);
    FbmPath path = generate_fbm(0.4, 64, 1.0, 2, 29);
    Trajectory a = classical_euler(path_increments(path), 1.0 / 64, *field, y0);
    CHECK(sup_error(a, a) == 0.0);
    Trajectory b = a;
    for (double& v : b.values) v += 0.25;
    CHECK(sup_error(a, b) == doctest::Approx(0.25 * std::sqrt(2.0)));
    Trajectory c = restrict_trajectory(a, 2);
    CHECK_THROWS(sup_error(a, c));
}

TEST_CASE("rate_fit recovers synthetic power laws") {
    std::vector<int> ns = {64, 128, 256, 512, 1024};
    std::vector<double> errors(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) errors[i] = 3.2 * std::pow(ns[i], -0.3);
    RateReport rep = rate_fit(ns, errors);
    CHECK(rep.fitted_slope == doctest::Approx(-0.3).epsilon(1e-10));
    CHECK(rep.slope_stderr < 1e-10);

    std::vector<double> flat(ns.size(), 0.7);
    CHECK(rate_fit(ns, flat).fitted_slope == doctest::Approx(0.0));

    // scale invariance of the slope
    std::vector<double> scaled = errors;
    for (double& e : scaled) e *= 10.0;
    CHECK(rate_fit(ns, scaled).fitted_slope == doctest::Approx(rep.fitted_slope));

    CHECK_THROWS(rate_fit({64, 128, 256}, {1.0, 0.5, 0.25}));
    std::vector<double> bad = errors;
    bad[2] = 0.0;
    CHECK_THROWS(rate_fit(ns, bad));
}

TEST_CASE("error decomposition identities on a real run") {
    auto field = make_field("rotating2d");
    Eigen::VectorXd y0 = default_initial_condition(*field);
    const int n = 64, rho = 32;
    FbmPath fine = generate_fbm(0.4, n * rho, 1.0, 2, 37);
    Trajectory ref = reference_solution(fine, *field, y0, n);
    FbmPath coarse = restrict_path(fine, rho);
    auto inc = path_increments(coarse);
    double h = 1.0 / n;
    Trajectory scheme = modified_euler(inc, h, 0.4, *field, y0);
    JacobianPair jac_n = jacobian_pair(scheme, inc, h, 0.4, *field);
    JacobianPair jac = jacobian_pair(ref, inc, h, 0.4, *field);
    LevyAreaF f = levy_area_process(lift_geometric(fine, n));

    ErrorDecomposition dec = error_decomposition(ref, scheme, jac_n, jac, f, *field);
    CHECK(dec.grid_n == n);
    CHECK(dec.scale == doctest::Approx(std::pow(64.0, 0.3)));
    for (std::size_t i = 0; i < dec.epsilon.size(); ++i)
        CHECK(dec.epsilon[i] ==
              doctest::Approx(dec.epsilon_hat[i] + dec.epsilon_tilde[i]).epsilon(1e-14));
    // epsilon and epsilon_hat start at zero
    for (int a = 0; a < 2; ++a) {
        CHECK(dec.epsilon[a] == 0.0);
        CHECK(dec.epsilon_hat[a] == 0.0);
    }
    // the corrected residual should be smaller than the raw error at T
    double eps_T = std::hypot(dec.epsilon[2 * n], dec.epsilon[2 * n + 1]);
    double tilde_T = std::hypot(dec.epsilon_tilde[2 * n], dec.epsilon_tilde[2 * n + 1]);
    CHECK(tilde_T < eps_T);
}

TEST_CASE("error decomposition of a scheme against itself") {
    auto field = make_field("geometric1d");
    Eigen::VectorXd y0(1);
    y0 << 1.0;
    const int n = 32;
    FbmPath fine = generate_fbm(0.4, n * 32, 1.0, 1, 43);
    FbmPath coarse = restrict_path(fine, 32);
    auto inc = path_increments(coarse);
    Trajectory scheme = modified_euler(inc, 1.0 / n, 0.4, *field, y0);
    JacobianPair jac = jacobian_pair(scheme, inc, 1.0 / n, 0.4, *field);
    LevyAreaF f = levy_area_process(lift_geometric(fine, n));
    ErrorDecomposition dec = error_decomposition(scheme, scheme, jac, jac, f, *field);
    for (std::size_t i = 0; i < dec.epsilon.size(); ++i) {
        CHECK(dec.epsilon[i] == 0.0);
        CHECK(dec.epsilon_tilde[i] == -dec.epsilon_hat[i]);
    }
}

TEST_CASE("ks statistic on degenerate samples") {
    std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    CHECK(ks_two_sample(xs, xs) == 0.0);
    std::vector<double> ys = {10.0, 11.0, 12.0};
    CHECK(ks_two_sample(xs, ys) == 1.0);
    CHECK(ks_two_sample(xs, ys) == ks_two_sample(ys, xs));
    CHECK_THROWS(ks_two_sample({}, ys));
}

TEST_CASE("ks statistic is invariant under monotone maps") {
    NormalRng rng(derive_seed(47, 0));
    std::vector<double> xs(500), ys(500);
    for (int i = 0; i < 500; ++i) {
        xs[i] = rng();
        ys[i] = 0.5 + rng();
    }
    double raw = ks_two_sample(xs, ys);
    for (double& v : xs) v = std::exp(v);
    for (double& v : ys) v = std::exp(v);
    CHECK(ks_two_sample(xs, ys) == doctest::Approx(raw));
}

TEST_CASE("ks statistic calibration on equal-law samples") {
    // alpha ~ 0.001 critical value for two samples of 2000:
    // 1.949 * sqrt(2/2000) = 0.0616. Expect nearly all trials below it.
    int below = 0;
    for (int trial = 0; trial < 100; ++trial) {
        NormalRng rng(derive_seed(53, trial));
        std::vector<double> xs(2000), ys(2000);
        for (int i = 0; i < 2000; ++i) {
            xs[i] = rng();
            ys[i] = rng();
        }
        if (ks_two_sample(xs, ys) < 0.0616) ++below;
    }
    CHECK(below >= 97);
}
