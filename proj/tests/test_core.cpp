#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "hardylab/field.hpp"
#include "hardylab/functionals.hpp"
#include "hardylab/grid.hpp"
#include "hardylab/params.hpp"
#include "hardylab/profile.hpp"
#include "oracles.hpp"

using namespace hardylab;
using Catch::Approx;

namespace {

std::shared_ptr<RadialGrid> make_grid(double a, double b, std::size_t n, int d) {
    return std::make_shared<RadialGrid>(make_log_radial_grid(a, b, n, d));
}

// (1 - (r-2)^2)_+ on [1,3]: the polynomial bump used in several suites.
RadialProfile poly_bump_13() {
    RadialProfile u;
    u.support_lo = 1.0;
    u.support_hi = 3.0;
    u.breakpoints = {1.0, 3.0};
    u.value = [](double r) {
        const double s = r - 2.0;
        return (std::abs(s) >= 1.0) ? 0.0 : 1.0 - s * s;
    };
    u.deriv = [](double r) {
        const double s = r - 2.0;
        return (std::abs(s) >= 1.0) ? 0.0 : -2.0 * s;
    };
    return u;
}

}  // namespace

// ===== grids and quadrature =====

TEST_CASE("log radial grid basics", "[grid]") {
    const auto g = make_log_radial_grid(1.0, std::exp(1.0), 2);
    REQUIRE(g.size() == 2);
    CHECK(g.nodes[0] == Approx(1.0));
    CHECK(g.nodes[1] == Approx(std::exp(1.0)));
    CHECK(g.t_spacing() == Approx(1.0));

    CHECK_THROWS_AS(make_log_radial_grid(0.0, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_log_radial_grid(2.0, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_log_radial_grid(1.0, 2.0, 1), std::invalid_argument);
}

TEST_CASE("annulus volumes reproduced", "[grid]") {
    // d = 2, [1,2]: area 3 pi; d = 3, [1,2]: (4 pi/3) * 7
    const auto g2 = make_log_radial_grid(1.0, 2.0, 2048, 2);
    std::vector<double> one(g2.size(), 1.0);
    CHECK(radial_integral(one, g2) == Approx(3.0 * pi).epsilon(1e-7));

    const auto g3 = make_log_radial_grid(1.0, 2.0, 2048, 3);
    std::vector<double> one3(g3.size(), 1.0);
    CHECK(radial_integral(one3, g3) == Approx(oracle::annulus_volume(3, 1.0, 2.0)).epsilon(1e-7));
}

TEST_CASE("far-field tail integral", "[grid]") {
    // f = r^{-3} over [1, 1e4], d = 2: 2 pi (1 - 1e-4), within 1e-4 of 2 pi.
    const auto g = make_log_radial_grid(1.0, 1e4, 4096, 2);
    const double val = radial_integral([](double r) { return std::pow(r, -3.0); }, g);
    CHECK(val == Approx(2.0 * pi).epsilon(1e-4));
    CHECK(val == Approx(2.0 * pi * (1.0 - 1e-4)).epsilon(1e-6));

    // d = 3 cross-check: f = r^{-4} over [1, 1e4] -> 4 pi (1 - 1e-4)
    const auto g3 = make_log_radial_grid(1.0, 1e4, 4096, 3);
    const double v3 = radial_integral([](double r) { return std::pow(r, -4.0); }, g3);
    CHECK(v3 == Approx(4.0 * pi * (1.0 - 1e-4)).epsilon(1e-6));
}

TEST_CASE("quadrature refines at second order", "[grid]") {
    const double exact = 2.0 * pi * (1.0 - 0.1);  // r^{-3}, d = 2, [1, 10]
    std::vector<double> ns{32, 64, 128, 256, 512};
    std::vector<double> errs;
    for (double n : ns) {
        const auto g = make_log_radial_grid(1.0, 10.0, static_cast<std::size_t>(n), 2);
        const double val = radial_integral([](double r) { return std::pow(r, -3.0); }, g);
        errs.push_back(std::abs(val - exact));
    }
    // least-squares slope of log err vs log n
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double x = std::log(ns[i]), y = std::log(errs[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double m = ns.size();
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(slope == Approx(-2.0).margin(0.2));
}

TEST_CASE("non-finite samples are rejected", "[grid]") {
    const auto g = make_log_radial_grid(1.0, 2.0, 64, 2);
    std::vector<double> bad(g.size(), 1.0);
    bad[10] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(radial_integral(bad, g), std::domain_error);
}

TEST_CASE("polar grid and integral", "[grid]") {
    CHECK_THROWS_AS(make_polar_grid(1.0, 2.0, 64, 5), std::invalid_argument);
    CHECK_THROWS_AS(make_polar_grid(1.0, 2.0, 64, 2), std::invalid_argument);

    const auto g = make_polar_grid(1.0, 2.0, 1024, 16);
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < g.n_r(); ++i)
        for (std::size_t j = 0; j < g.n_theta; ++j) {
            const double r = g.radial.nodes[i], th = g.theta(j);
            f[g.index(i, j)] = r * r * std::cos(th) * std::cos(th);
        }
    // int int r^2 cos^2 r dr dtheta over [1,2] x [0,2pi) = pi * 15/4
    CHECK(polar_integral(f, g) == Approx(pi * 15.0 / 4.0).epsilon(1e-6));
}

// ===== weights =====

TEST_CASE("weight kinds evaluate as specified", "[weights]") {
    CHECK(inverse_power_weight(2.0).eval(3.0) == Approx(1.0 / 9.0));
    CHECK(log_damped_weight(2).eval(1.0) == Approx(1.0));  // log 1 = 0
    CHECK(log_damped_weight(3).eval(std::exp(1.0)) ==
          Approx(1.0 / (1.0 + std::pow(std::exp(1.0), 3.0))));
    CHECK(poly_damped_weight(2.5).eval(2.0) == Approx(1.0 / (1.0 + std::pow(2.0, 2.5))));
    CHECK_THROWS_AS(exterior_log_weight(2.0, 1.0).eval(0.5), std::domain_error);
    CHECK(exterior_log_weight(2.0, 1.0).eval(std::exp(1.0)) ==
          Approx(1.0 / std::pow(std::exp(1.0), 2.0)));
}

TEST_CASE("sampled weight must be nonnegative and sized", "[weights]") {
    const auto g = make_grid(1.0, 2.0, 64, 2);
    WeightSpec w;
    w.kind = WeightSpec::Kind::sampled;
    w.samples.assign(g->size(), 1.0);
    w.samples[3] = -0.5;
    RadialField u;
    u.grid = g;
    u.values.assign(g->size(), 1.0);
    CHECK_THROWS_AS(hardy_term(u, w, 2.0), std::domain_error);
}

// ===== energies and weighted terms =====

TEST_CASE("p-energy of the polynomial bump", "[energy]") {
    // Symbolic oracle: int |u'|^2 dx = 2 pi int_1^3 4 (r-2)^2 r dr = 2 pi * 16/3.
    const double expected = 2.0 * pi * 16.0 / 3.0;
    const auto bump = poly_bump_13();

    const double closed = energy_p(bump, 2.0, 2, 1.0, 3.0, 16384);
    CHECK(closed == Approx(expected).epsilon(1e-6));

    const auto g = make_grid(1.0, 3.0, 4096, 2);
    auto u = sample_on(bump, g);
    u.compactly_supported = true;
    CHECK(energy_p(u, 2.0) == Approx(expected).epsilon(1e-5));
}

TEST_CASE("compact support enforcement", "[energy]") {
    const auto g = make_grid(1.0, 3.0, 128, 2);
    RadialField u;
    u.grid = g;
    u.values.assign(g->size(), 1.0);  // does not vanish at the ends
    u.compactly_supported = true;
    CHECK_THROWS_AS(energy_p(u, 2.0), std::invalid_argument);
}

TEST_CASE("energy is p-homogeneous", "[energy]") {
    const auto bump = poly_bump_13();
    const auto g = make_grid(1.0, 3.0, 512, 3);
    auto u = sample_on(bump, g);
    const double e1 = energy_p(u, 2.5);
    for (auto& v : u.values) v *= 3.0;
    const double e3 = energy_p(u, 2.5);
    CHECK(e3 == Approx(std::pow(3.0, 2.5) * e1).epsilon(1e-12));
}

TEST_CASE("weighted term on the unit annulus", "[hardy-term]") {
    // u = 1 on [1,2], weight 1/|x|^2, d = 2: 2 pi log 2, exact for this rule
    // (the integrand is constant in t = log r).
    const auto g = make_grid(1.0, 2.0, 256, 2);
    RadialField u;
    u.grid = g;
    u.values.assign(g->size(), 1.0);
    CHECK(hardy_term(u, inverse_power_weight(2.0), 2.0) ==
          Approx(2.0 * pi * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("exterior weight rejects support touching the ball", "[hardy-term]") {
    const auto g = make_grid(0.5, 4.0, 256, 2);
    RadialField u;
    u.grid = g;
    u.values.assign(g->size(), 1.0);
    CHECK_THROWS_AS(hardy_term(u, exterior_log_weight(2.0, 1.0), 2.0), std::domain_error);
}

TEST_CASE("quotient guards", "[hardy-term]") {
    CHECK_THROWS_AS(quotient(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(quotient(1.0, -2.0), std::domain_error);
    CHECK(quotient(3.0, 2.0) == Approx(1.5));
}

// ===== magnetic gradient =====

TEST_CASE("magnetic gradient of a constant", "[magnetic-gradient]") {
    const double beta = 0.7, c = 2.0;
    const auto g = std::make_shared<PolarGrid>(make_polar_grid(1.0, 2.0, 64, 8));
    PolarField u;
    u.grid = g;
    u.values.assign(g->size(), cplx(c, 0.0));
    const auto gsq = magnetic_gradient_sq(u, beta);
    for (std::size_t i = 0; i < g->n_r(); ++i) {
        const double r = g->radial.nodes[i];
        for (std::size_t j = 0; j < g->n_theta; ++j)
            REQUIRE(gsq[g->index(i, j)] ==
                    Approx(beta * beta * c * c / (r * r)).epsilon(1e-13));
    }
}

TEST_CASE("magnetic gradient of a single mode", "[magnetic-gradient]") {
    // u = f(r) e^{i theta}, f = r e^{-r}, beta = 1: |grad_A u|^2 = |f'|^2.
    RadialProfile f;
    f.value = [](double r) { return r * std::exp(-r); };
    f.deriv = [](double r) { return (1.0 - r) * std::exp(-r); };

    const auto g = std::make_shared<PolarGrid>(make_polar_grid(0.25, 4.0, 1024, 64));
    const auto u = sample_on(mode_fn(f, 1), g);
    const auto gsq = magnetic_gradient_sq(u, 1.0);

    double max_err = 0.0, scale = 0.0;
    for (std::size_t i = 1; i + 1 < g->n_r(); ++i) {
        const double r = g->radial.nodes[i];
        const double expect = std::pow(f.deriv(r), 2.0);
        scale = std::max(scale, expect);
        for (std::size_t j = 0; j < g->n_theta; ++j)
            max_err = std::max(max_err, std::abs(gsq[g->index(i, j)] - expect));
    }
    CHECK(max_err <= 1e-4 * scale);

    // closed-form route is exact
    const auto fn = mode_fn(f, 1);
    const double v = magnetic_gradient_sq_at(fn, ab_potential(1.0), 1.5, 0.9);
    CHECK(v == Approx(std::pow(f.deriv(1.5), 2.0)).epsilon(1e-13));
}

TEST_CASE("flux zero reduces to the free gradient", "[magnetic-gradient]") {
    const auto bump = smooth_log_bump(1.0, 1.0);
    const auto g = std::make_shared<PolarGrid>(make_polar_grid(0.25, 4.0, 2048, 8));
    const auto u = sample_on(mode_fn(bump, 0), g);
    const auto gsq = magnetic_gradient_sq(u, 0.0);
    double max_err = 0.0, scale = 0.0;
    for (std::size_t i = 1; i + 1 < g->n_r(); ++i) {
        const double expect = std::pow(bump.deriv(g->radial.nodes[i]), 2.0);
        scale = std::max(scale, expect);
        max_err = std::max(max_err, std::abs(gsq[g->index(i, 0)] - expect));
    }
    // stencil truncation peaks near the bump's support edge; a wiring error would be O(scale)
    CHECK(max_err <= 2e-4 * scale);
}

TEST_CASE("conjugation flips the flux sign", "[magnetic-gradient]") {
    const auto bump = smooth_log_bump(1.0, 0.8);
    const auto fn = sum_fn({mode_fn(bump, 1), mode_fn(scale_profile(0.3, bump), -2)});
    const auto g = std::make_shared<PolarGrid>(make_polar_grid(0.3, 3.5, 512, 32));
    const double beta = 0.6, p = 2.5;
    const double e_conj = energy_p(conjugate_fn(fn), p, ab_potential(beta), *g);
    const double e_neg = energy_p(fn, p, ab_potential(-beta), *g);
    CHECK(e_conj == Approx(e_neg).epsilon(1e-13));

    // sampled route agrees with itself under the same symmetry
    const auto u = sample_on(fn, g);
    PolarField ubar = u;
    for (auto& v : ubar.values) v = std::conj(v);
    CHECK(energy_p(ubar, p, beta) == Approx(energy_p(u, p, -beta)).epsilon(1e-13));
}

// ===== diamagnetic and gauge checks =====

TEST_CASE("diamagnetic margin is nonnegative", "[diamagnetic]") {
    const auto bump = smooth_log_bump(1.0, 1.0);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 8; ++j)
            pts.emplace_back(0.45 + 0.05 * i, 2.0 * pi * j / 8.0);

    // single mode: margin = sqrt(f'^2 + (1-beta)^2 f^2/r^2) - |f'| >= 0
    const auto rep1 = check_diamagnetic(mode_fn(bump, 1), ab_potential(0.5), pts);
    CHECK(rep1.worst_margin >= 0.0);

    // mixed modes, complex coefficients
    auto mixed = sum_fn({mode_fn(bump, 0), mode_fn(scale_profile(0.4, bump), 2)});
    const auto rep2 = check_diamagnetic(mixed, ab_potential(0.3), pts);
    CHECK(rep2.worst_margin >= -1e-8);

    // real-valued u, any flux: |grad_A u|^2 = |grad u|^2 + beta^2 u^2/r^2
    const auto rep3 = check_diamagnetic(mode_fn(bump, 0), ab_potential(1.7), pts);
    CHECK(rep3.worst_margin >= 0.0);
}

TEST_CASE("gauge covariance of the magnetic energy", "[gauge]") {
    // constant-field potential, phi = x1 x2 = (r^2/2) sin 2theta, p = 3
    const auto psi = mode_fn(smooth_log_bump(1.5, 1.0), 1);
    GaugeFn phi;
    phi.value = [](double r, double th) { return 0.5 * r * r * std::sin(2.0 * th); };
    phi.grad_r = [](double r, double th) { return r * std::sin(2.0 * th); };
    phi.grad_theta_over_r = [](double r, double th) { return r * std::cos(2.0 * th); };

    const auto g = make_polar_grid(0.5, 5.0, 2048, 64);
    const auto rep = check_gauge(psi, phi, constant_field_potential(1.0), 3.0, g);
    CHECK(rep.discrepancy <= 1e-6);
    CHECK(rep.h_A > 0.0);
}

TEST_CASE("polar free energy matches the radial route", "[energy]") {
    const auto bump = smooth_log_bump(1.2, 0.9);
    const double p = 2.0;
    const auto pg = make_polar_grid(0.4, 4.0, 4096, 8);
    const double e_polar = energy_p(mode_fn(bump, 0), p, ab_potential(0.0), pg);
    const double e_radial = energy_p(bump, p, 2, 0.4, 4.0, 8192);
    CHECK(e_polar == Approx(e_radial).epsilon(1e-8));
}
