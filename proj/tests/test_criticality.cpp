// Optimizing-sequence families: exact piecewise values, closed-form deficits
// against quadrature, decay rates, and the sharpness of the quotient limit.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <vector>

#include "hardylab/criticality.hpp"
#include "oracles.hpp"

using namespace hardylab;
using Catch::Approx;
using Kind = CutoffSequenceSpec::Kind;

namespace {
const Params p22{2.0, 2};
const Params p23{2.0, 3};
}  // namespace

TEST_CASE("plateau profile values", "[cutoff]") {
    const CutoffSequenceSpec spec{Kind::plateau_log, 0.1};
    const auto u = cutoff_profile(spec, p22);
    CHECK(u(1.0) == 1.0);
    CHECK(u(100.0) == 0.0);
    // midpoint of the ramp in log-radius: log(1/(eps^2 r))/log(1/eps) at
    // r = eps^{-3/2} is exactly 1/2
    CHECK(u(std::pow(0.1, -1.5)) == Approx(0.5).epsilon(1e-12));
    CHECK(u.deriv(1.0) == 0.0);
    CHECK(u.deriv(31.6) == Approx(-1.0 / (std::log(10.0) * 31.6)).epsilon(1e-12));
}

TEST_CASE("hardy-log profile values", "[cutoff]") {
    const double eps = 0.1;
    const CutoffSequenceSpec spec{Kind::hardy_log, eps};
    const auto u = cutoff_profile(spec, p23);  // gamma = 1/2
    CHECK(u(eps * eps) == 0.0);
    CHECK(u(200.0) == 0.0);
    // on the plateau u = r^{-1/2}
    CHECK(u(1.0) == Approx(1.0).epsilon(1e-12));
    CHECK(u(4.0) == Approx(0.5).epsilon(1e-12));
    // up-ramp midpoint (log scale): theta = 1/2 at r = eps^{3/2}
    const double rm = std::pow(eps, 1.5);
    CHECK(u(rm) == Approx(0.5 * std::pow(rm, -0.5)).epsilon(1e-12));
    // derivative on the plateau is the pure power rule
    CHECK(u.deriv(4.0) == Approx(-0.5 * std::pow(4.0, -1.5)).epsilon(1e-12));
    // derivative on the up-ramp: product rule with theta' = 1/(L r)
    const double L = std::log(1.0 / eps);
    const double expect =
        std::pow(rm, -0.5) / (L * rm) - 0.5 * std::pow(rm, -1.5) * (std::log(rm / (eps * eps)) / L);
    CHECK(u.deriv(rm) == Approx(expect).epsilon(1e-12));
}

TEST_CASE("cutoff spec validation", "[cutoff]") {
    CHECK_THROWS(cutoff_profile({Kind::plateau_log, 0.0}, p22));
    CHECK_THROWS(cutoff_profile({Kind::plateau_log, 1.0}, p22));
    CHECK_THROWS(cutoff_profile({Kind::hardy_log, 0.1}, Params{3.0, 3}));  // needs p < d
}

TEST_CASE("sampling rejects grids that miss the active zone", "[cutoff]") {
    const CutoffSequenceSpec spec{Kind::plateau_log, 0.1};
    auto narrow = std::make_shared<RadialGrid>(make_log_radial_grid(1.0, 50.0, 64, 2));
    CHECK_THROWS(build_cutoff(spec, p22, narrow));
    auto wide = std::make_shared<RadialGrid>(make_log_radial_grid(1.0, 100.0, 64, 2));
    const auto f = build_cutoff(spec, p22, wide);
    CHECK(f.values.front() == 1.0);
    CHECK(f.values.back() == 0.0);

    const CutoffSequenceSpec hspec{Kind::hardy_log, 0.1};
    auto missing_inner = std::make_shared<RadialGrid>(make_log_radial_grid(0.05, 100.0, 64, 3));
    CHECK_THROWS(build_cutoff(hspec, p23, missing_inner));
}

TEST_CASE("plateau deficit closed form", "[deficit-free]") {
    // p = d = 2, eps = e^{-10}: area/L = 2 pi / 10
    const double eps = std::exp(-10.0);
    CHECK(deficit_free(eps, p22) == Approx(2.0 * oracle::pi / 10.0).epsilon(1e-12));

    // p = 3, d = 2, eps = 1e-2: area * eps^{p-d}(1 - eps^{p-d})/((p-d) L^p)
    const Params p32{3.0, 2};
    const double L = std::log(100.0);
    const double expect = 2.0 * oracle::pi * 1e-2 * (1.0 - 1e-2) / (1.0 * L * L * L);
    CHECK(deficit_free(1e-2, p32) == Approx(expect).epsilon(1e-12));

    // matches the independent oracle at several (p, d)
    for (auto [p, d] : std::vector<std::pair<double, int>>{{2.0, 2}, {3.0, 3}, {3.5, 2}, {4.0, 3}})
        CHECK(deficit_free(1e-3, Params{p, d}) ==
              Approx(oracle::plateau_log_energy(1e-3, p, d)).epsilon(1e-12));

    CHECK_THROWS(deficit_free(0.1, p23));  // needs p >= d
}

TEST_CASE("plateau deficit quadrature cross-check", "[deficit-free]") {
    for (auto [p, d, eps] :
         std::vector<std::tuple<double, int, double>>{{2.0, 2, 1e-2}, {3.0, 2, 1e-2},
                                                      {3.0, 3, 1e-3}, {2.5, 2, 1e-4}}) {
        const double closed = deficit_free(eps, Params{p, d});
        const double quad = deficit_free_quadrature(eps, Params{p, d});
        CHECK(quad == Approx(closed).epsilon(1e-8));
    }
}

TEST_CASE("plateau deficit decreases along eps", "[deficit-free]") {
    double prev = deficit_free(1e-1, p22);
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const double cur = deficit_free(eps, p22);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("hardy-log deficit matches the analytic reduction", "[deficit-hardy]") {
    for (auto [p, d, eps] :
         std::vector<std::tuple<double, int, double>>{{2.0, 3, 1e-3}, {1.5, 3, 1e-2},
                                                      {2.5, 4, 1e-3}, {2.0, 3, 1e-5}}) {
        const Params prm{p, d};
        const auto [energy, hardy] = cutoff_energies(eps, prm);
        CHECK(energy == Approx(oracle::hardy_log_energy(eps, p, d)).epsilon(1e-7));
        CHECK(hardy == Approx(oracle::hardy_log_hardy_term(eps, p, d)).epsilon(1e-9));
        CHECK(deficit_hardy(eps, prm) == Approx(oracle::hardy_log_deficit(eps, p, d)).epsilon(1e-5));
        CHECK(deficit_hardy(eps, prm) > 0.0);
    }
}

TEST_CASE("hardy-log deficit decays like one over log", "[deficit-hardy]") {
    // deficit * log(1/eps) stays within a factor 2 band across four decades
    std::vector<double> normalized;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6})
        normalized.push_back(deficit_hardy(eps, p23) * std::log(1.0 / eps));
    const auto [lo, hi] = std::minmax_element(normalized.begin(), normalized.end());
    CHECK(*hi <= 2.0 * *lo);

    // deficit itself decreases
    CHECK(deficit_hardy(1e-3, p23) < deficit_hardy(1e-2, p23));
    CHECK(deficit_hardy(1e-5, p23) < deficit_hardy(1e-3, p23));
}

TEST_CASE("cutoff quotient converges down to the sharp constant", "[deficit-hardy]") {
    const double mu = hardy_constant(2.0, 3);
    double prev = cutoff_quotient(1e-2, p23);
    CHECK(prev > mu);
    for (double eps : {1e-3, 1e-4, 1e-5}) {
        const double q = cutoff_quotient(eps, p23);
        CHECK(q > mu);
        CHECK(q < prev);
        prev = q;
    }
    // eps = 1e-5: deviation is 3/log(1/eps)^2 relative, about 2.3%
    CHECK(prev == Approx(mu).epsilon(2.5e-2));
    // matches the analytic value of the quotient along the family
    CHECK(cutoff_quotient(1e-3, p23) ==
          Approx(oracle::hardy_log_quotient(1e-3, 2.0, 3)).epsilon(1e-6));
}

TEST_CASE("decay study tabulates both families", "[decay-study]") {
    // plateau, p = d = 2: normalized column is exactly area = 2 pi
    std::vector<double> epsilons{std::exp(-5.0), std::exp(-10.0), std::exp(-20.0)};
    const auto curve = decay_study(Kind::plateau_log, p22, epsilons);
    REQUIRE(curve.rows.size() == 3);
    for (const auto& row : curve.rows) {
        CHECK(row.normalized == Approx(2.0 * oracle::pi).epsilon(1e-8));
        CHECK(row.deficit >= 0.0);
    }
    CHECK(curve.rows[0].epsilon == epsilons[0]);

    // hardy-log, p = 2, d = 3: normalized column bounded (factor-2 band)
    std::vector<double> he{1e-2, 1e-4, 1e-6};
    const auto hcurve = decay_study(Kind::hardy_log, p23, he);
    REQUIRE(hcurve.rows.size() == 3);
    double lo = hcurve.rows[0].normalized, hi = lo;
    for (const auto& row : hcurve.rows) {
        lo = std::min(lo, row.normalized);
        hi = std::max(hi, row.normalized);
    }
    CHECK(hi <= 2.0 * lo);

    CHECK(decay_study(Kind::plateau_log, p22, std::vector<double>{}).rows.empty());
    CHECK_THROWS(decay_study(Kind::plateau_log, p22, std::vector<double>{1e-2, 1e-2}));
    CHECK_THROWS(decay_study(Kind::plateau_log, p22, std::vector<double>{1e-3, 1e-2}));
}
