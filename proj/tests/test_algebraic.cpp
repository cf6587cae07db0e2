// Pointwise expansion remainder T(x,y): exact small cases, invariances,
// numerical stability of the cancellation-safe branch, and the constant
// estimators against independently derived optima.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hardylab/algebraic.hpp"
#include "oracles.hpp"

using namespace hardylab;
using Catch::Approx;

TEST_CASE("T at the degenerate pairs", "[eval-T]") {
    CHECK(eval_T({{3.0, 4.0}, {0.0, 0.0}}, 3.0) == Approx(125.0).epsilon(1e-14));
    CHECK(eval_T({{0.0, 0.0}, {1.0, 2.0}}, 2.5) == 0.0);
    CHECK(eval_T({{1.0, 0.0}, {1.0, 0.0}}, 4.0) == Approx(11.0).epsilon(1e-14));
    // p = 2 collapses to |x|^2 identically
    Rng rng(7);
    for (int k = 0; k < 200; ++k) {
        const double a = rng.uniform(-3.0, 3.0), b = rng.uniform(-3.0, 3.0);
        const double c = rng.uniform(-3.0, 3.0), d = rng.uniform(-3.0, 3.0);
        CHECK(eval_T({{a, b}, {c, d}}, 2.0) == Approx(a * a + b * b).margin(1e-13));
    }
}

TEST_CASE("T input validation", "[eval-T]") {
    CHECK_THROWS(eval_T({{1.0}, {1.0, 2.0}}, 3.0));
    CHECK_THROWS(eval_T({{}, {}}, 3.0));
    CHECK_THROWS(eval_T({{1.0}, {1.0}}, 1.5));
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS(eval_T({{inf}, {1.0}}, 3.0));
}

TEST_CASE("T homogeneity and rotation invariance", "[eval-T]") {
    Rng rng(11);
    for (int k = 0; k < 500; ++k) {
        const double rx = rng.log_uniform(1e-2, 1e2), ax = rng.uniform(0.0, 2.0 * pi);
        const double ry = rng.log_uniform(1e-2, 1e2), ay = rng.uniform(0.0, 2.0 * pi);
        const VecPair v{{rx * std::cos(ax), rx * std::sin(ax)},
                        {ry * std::cos(ay), ry * std::sin(ay)}};
        const double p = rng.uniform(2.0, 5.0);
        const double t = eval_T(v, p);
        CHECK(t >= 0.0);

        const double lam = rng.log_uniform(1e-2, 1e2);
        VecPair scaled{{lam * v.x[0], lam * v.x[1]}, {lam * v.y[0], lam * v.y[1]}};
        CHECK(eval_T(scaled, p) == Approx(std::pow(lam, p) * t).epsilon(1e-12));

        const double q = rng.uniform(0.0, 2.0 * pi), cq = std::cos(q), sq = std::sin(q);
        VecPair rot{{cq * v.x[0] - sq * v.x[1], sq * v.x[0] + cq * v.x[1]},
                    {cq * v.y[0] - sq * v.y[1], sq * v.y[0] + cq * v.y[1]}};
        CHECK(eval_T(rot, p) == Approx(t).epsilon(1e-12));
    }
}

TEST_CASE("reduced objective matches the vector form", "[reduced]") {
    const auto g4 = reduce_by_symmetry(4.0);
    for (double th : {0.0, 0.4, 1.3, pi}) CHECK(g4(0.0, th) == 1.0);
    CHECK(g4(1.0, 0.0) == Approx(11.0).epsilon(1e-14));
    // even in theta
    CHECK(reduced_T(0.7, 1.1, 3.5) == Approx(reduced_T(0.7, -1.1, 3.5)).epsilon(1e-15));

    Rng rng(3);
    for (int k = 0; k < 200; ++k) {
        const double s = rng.log_uniform(1e-3, 1e3), th = rng.uniform(0.0, pi);
        const double p = rng.uniform(2.0, 5.0);
        const VecPair v{{1.0, 0.0}, {s * std::cos(th), s * std::sin(th)}};
        CHECK(reduced_T(s, th, p) == Approx(eval_T(v, p)).epsilon(1e-12));
    }

    // p = 2 is identically 1 even at extreme s (exercises the stable branch)
    const auto g2 = reduce_by_symmetry(2.0);
    for (double s : {0.5, 2.0, 1e3, 1e6})
        for (double th : {0.0, 1.0, pi}) CHECK(g2(s, th) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stable branch agrees with the p = 4 closed form", "[reduced]") {
    // independent reduction at p = 4: T = 2 s^2 + (2 s cos theta + 1)^2,
    // which the naive difference of p-th powers cannot reach at large s
    Rng rng(5);
    for (int k = 0; k < 400; ++k) {
        const double s = rng.log_uniform(1e-2, 1e6);
        const double th = rng.uniform(0.0, pi);
        const double expect = 2.0 * s * s + std::pow(2.0 * s * std::cos(th) + 1.0, 2.0);
        CHECK(reduced_T(s, th, 4.0) == Approx(expect).epsilon(1e-13));
    }
    // continuity across the branch switch at s = 2
    for (double th : {0.0, 0.9, 2.2, pi}) {
        const double a = reduced_T(2.0 - 1e-9, th, 3.3);
        const double b = reduced_T(2.0 + 1e-9, th, 3.3);
        CHECK(a == Approx(b).epsilon(1e-7));
    }
}

TEST_CASE("optimal constant estimates", "[estimate-c]") {
    const auto e2 = estimate_optimal_c(2.0);
    CHECK(e2.value == Approx(1.0).margin(1e-12));
    CHECK(e2.bound_direction == BoundDirection::upper_bound_on_inf);

    // p = 4: the infimum is exactly 1/3 at s = 1/3, theta = pi
    const auto e4 = estimate_optimal_c(4.0);
    CHECK(e4.value == Approx(oracle::optimal_c_p4).epsilon(1e-6));
    CHECK(e4.value >= 1.0 / 3.0 - 1e-6);
    CHECK(e4.value >= expansion_constant(4.0) - 1e-6);  // 1/7
    CHECK(e4.witness_s == Approx(1.0 / 3.0).margin(1e-3));
    CHECK(e4.witness_theta == Approx(pi).margin(1e-3));

    // p = 3: the infimum is exactly 2 - sqrt(2) at s = 1 - 1/sqrt(2), theta = pi
    const auto e3 = estimate_optimal_c(3.0);
    CHECK(e3.value == Approx(oracle::optimal_c_p3).epsilon(1e-6));
    CHECK(e3.value >= expansion_constant(3.0) - 1e-6);  // 1/3
    CHECK(e3.witness_s == Approx(1.0 - 1.0 / std::sqrt(2.0)).margin(1e-3));

    for (double p : {2.5, 3.5, 5.0}) {
        const auto est = estimate_optimal_c(p);
        CHECK(est.value >= expansion_constant(p) - 1e-6);
        CHECK(est.value <= 1.0 + 1e-6);  // witness y = 0 gives exactly 1
        // the witness re-evaluates to the reported value
        CHECK(reduced_T(est.witness_s, est.witness_theta, p) ==
              Approx(est.value).margin(est.refinement_tol));
        CHECK(eval_T(est.witness, p) == Approx(est.value).epsilon(1e-12));
    }
}

TEST_CASE("randomized lower-bound verification", "[verify]") {
    CHECK_FALSE(verify_lower_bound(4.0, 1.0 / 7.0, 1000000).has_value());
    CHECK_FALSE(verify_lower_bound(4.0, 1.0 / 3.0, 1000000).has_value());
    CHECK_FALSE(verify_lower_bound(3.0, oracle::optimal_c_p3 * 0.999, 200000).has_value());

    const auto bad = verify_lower_bound(4.0, 1.01, 1000000);
    REQUIRE(bad.has_value());
    const double rx2 = bad->x[0] * bad->x[0] + bad->x[1] * bad->x[1];
    CHECK(eval_T(*bad, 4.0) < 1.01 * std::pow(rx2, 2.0));

    // seeds are honored: same seed, same witness
    const auto again = verify_lower_bound(4.0, 1.01, 1000000);
    REQUIRE(again.has_value());
    CHECK(again->x == bad->x);
    CHECK(again->y == bad->y);
    CHECK_THROWS(verify_lower_bound(1.5, 0.5, 10));
    CHECK_THROWS(verify_lower_bound(3.0, -0.1, 10));
}

TEST_CASE("equivalence supremum estimate", "[equivalence]") {
    // ratio at s = 1, theta = 0 is 11/4 for p = 4
    CHECK(equivalence_ratio(1.0, 0.0, 4.0) == Approx(2.75).epsilon(1e-13));

    const auto e2 = estimate_equivalence_sup(2.0);
    CHECK(e2.value == Approx(1.0).margin(1e-12));
    CHECK(e2.bound_direction == BoundDirection::lower_bound_on_sup);

    const auto e4 = estimate_equivalence_sup(4.0);
    CHECK(e4.value >= 2.75);
    // the ratio climbs to p(p-1)/2 = 6 as s grows; the box cap keeps us below
    CHECK(e4.value > 5.9);
    CHECK(e4.value < 6.0);
    CHECK(equivalence_ratio(e4.witness_s, e4.witness_theta, 4.0) ==
          Approx(e4.value).margin(e4.refinement_tol));
}
