#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "hardylab/field.hpp"
#include "hardylab/functionals.hpp"
#include "hardylab/grid.hpp"
#include "hardylab/params.hpp"
#include "hardylab/profile.hpp"

namespace hardylab {

// Radial comparison machinery: the p-Laplacian of twice-differentiable radial
// profiles in closed form and by finite differences, residual checks of
// -lap_p(v) >= V v^{p-1}, the weighted remainder term of the improved
// inequality, and the exterior-domain and inversion checks built on them.

// ===== twice-differentiable radial profiles =====

struct SmoothProfile {
    std::function<double(double)> value, d1, d2;
    double singular_lo = 0.0;  // defined only for r > singular_lo
};

inline SmoothProfile constant_smooth(double c) {
    SmoothProfile v;
    v.value = [c](double) { return c; };
    v.d1 = [](double) { return 0.0; };
    v.d2 = [](double) { return 0.0; };
    return v;
}

inline SmoothProfile power_smooth(double a) {
    SmoothProfile v;
    v.value = [a](double r) { return std::pow(r, a); };
    v.d1 = [a](double r) { return a * std::pow(r, a - 1.0); };
    v.d2 = [a](double r) { return a * (a - 1.0) * std::pow(r, a - 2.0); };
    return v;
}

// (log(r/R))^alpha on r > R.
inline SmoothProfile log_power_smooth(double alpha, double R) {
    require(R > 0.0, "log_power_smooth: needs R > 0");
    SmoothProfile v;
    v.singular_lo = R;
    v.value = [=](double r) { return std::pow(std::log(r / R), alpha); };
    v.d1 = [=](double r) {
        const double s = std::log(r / R);
        return alpha * std::pow(s, alpha - 1.0) / r;
    };
    v.d2 = [=](double r) {
        const double s = std::log(r / R);
        return alpha * std::pow(s, alpha - 2.0) * ((alpha - 1.0) - s) / (r * r);
    };
    return v;
}

inline SmoothProfile product_smooth(const SmoothProfile& u, const SmoothProfile& w) {
    SmoothProfile v;
    v.singular_lo = std::max(u.singular_lo, w.singular_lo);
    auto uv = u.value, u1 = u.d1, u2 = u.d2;
    auto wv = w.value, w1 = w.d1, w2 = w.d2;
    v.value = [=](double r) { return uv(r) * wv(r); };
    v.d1 = [=](double r) { return u1(r) * wv(r) + uv(r) * w1(r); };
    v.d2 = [=](double r) { return u2(r) * wv(r) + 2.0 * u1(r) * w1(r) + uv(r) * w2(r); };
    return v;
}

// ===== radial p-Laplacian =====
//
// lap_p v = r^{1-d} (r^{d-1} |v'|^{p-2} v')' = |v'|^{p-2} ((p-1) v'' + (d-1) v'/r).
// For v = r^a this collapses to |a|^{p-2} a ((a-1)(p-1) + d-1) r^{(a-1)(p-1)-1}.

inline double radial_p_laplacian_at(const SmoothProfile& v, double p, int d, double r) {
    require(p > 1.0, "radial_p_laplacian: needs p > 1");
    require(d >= 1, "radial_p_laplacian: needs d >= 1");
    if (!(r > 0.0) || r <= v.singular_lo)
        throw std::domain_error("radial_p_laplacian: evaluation at a singular radius");
    const double v1 = v.d1(r), v2 = v.d2(r);
    if (v1 == 0.0 && v2 == 0.0) return 0.0;  // locally constant
    return std::pow(std::abs(v1), p - 2.0) * ((p - 1.0) * v2 + (d - 1) * v1 / r);
}

inline std::vector<double> radial_p_laplacian(const SmoothProfile& v, double p,
                                              const RadialGrid& g) {
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        out[i] = radial_p_laplacian_at(v, p, g.d, g.nodes[i]);
    return out;
}

// Finite-difference p-Laplacian on the geometric grid, conservative flux form
// in t = log r:
//   lap_p v = e^{-d t} d/dt ( e^{(d-p) t} |v_t|^{p-2} v_t ),
// with midpoint fluxes, second order in the log spacing. End nodes have no
// flux difference and are NaN; consume interior values only.
inline std::vector<double> radial_p_laplacian_fd(std::span<const double> v, double p,
                                                 const RadialGrid& g) {
    require(p > 1.0, "radial_p_laplacian_fd: needs p > 1");
    require(v.size() == g.size(), "radial_p_laplacian_fd: sample count mismatch");
    require(g.size() >= 3, "radial_p_laplacian_fd: needs at least 3 nodes");
    const double h = g.t_spacing();
    const std::size_t n = g.size();
    std::vector<double> flux(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double tm = 0.5 * (std::log(g.nodes[i]) + std::log(g.nodes[i + 1]));
        const double dv = (v[i + 1] - v[i]) / h;
        flux[i] = dv == 0.0
                      ? 0.0
                      : std::exp((g.d - p) * tm) * std::pow(std::abs(dv), p - 2.0) * dv;
    }
    std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 1; i + 1 < n; ++i)
        out[i] = (flux[i] - flux[i - 1]) / h * std::pow(g.nodes[i], -g.d);
    return out;
}

inline std::vector<double> radial_p_laplacian_fd(const SmoothProfile& v, double p,
                                                 const RadialGrid& g) {
    std::vector<double> samples(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) samples[i] = v.value(g.nodes[i]);
    return radial_p_laplacian_fd(samples, p, g);
}

// ===== supersolution residual =====
//
// min over nodes of (-lap_p v - V v^{p-1}) / (|lap_p v| + V v^{p-1}): the
// normalization makes "zero within tolerance" meaningful across the many
// orders of magnitude both sides sweep along a geometric grid. >= -tol
// certifies the supersolution property on the grid; an exact pair stays at
// rounding level.

namespace detail {
inline double min_normalized_residual(std::span<const double> lap, const SmoothProfile& v,
                                      const WeightSpec& V, double p, const RadialGrid& g,
                                      std::size_t i_begin, std::size_t i_end) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = i_begin; i < i_end; ++i) {
        const double vv = v.value(g.nodes[i]);
        if (!(vv > 0.0))
            throw std::domain_error("supersolution_residual: needs v > 0 on the grid");
        const double pot = V.at_node(g, i) * std::pow(vv, p - 1.0);
        const double res = -lap[i] - pot;
        const double scale = std::abs(lap[i]) + std::abs(pot);
        worst = std::min(worst, scale > 0.0 ? res / scale : 0.0);
    }
    return worst;
}
}  // namespace detail

inline double supersolution_residual(const SmoothProfile& v, const WeightSpec& V, double p,
                                     const RadialGrid& g) {
    const auto lap = radial_p_laplacian(v, p, g);
    return detail::min_normalized_residual(lap, v, V, p, g, 0, g.size());
}

// Independent verification route: same residual with the finite-difference
// p-Laplacian (interior nodes), for profiles whose closed form is in doubt.
inline double supersolution_residual_fd(const SmoothProfile& v, const WeightSpec& V, double p,
                                        const RadialGrid& g) {
    const auto lap = radial_p_laplacian_fd(v, p, g);
    return detail::min_normalized_residual(lap, v, V, p, g, 1, g.size() - 1);
}

// ===== weighted remainder =====
//
// int |grad(u r^{gamma})|^p r^{p-d} dx with gamma = (d-p)/p, reduced radially
// to area * int |(u r^gamma)'|^p r^{p-1} dr. This is the remainder the
// improved inequality bounds from above by (E - mu H)/c.

inline double weighted_remainder(const RadialProfile& u, double p, int d,
                                 std::size_t n_per_piece = 4096) {
    require(p >= 2.0 && p < static_cast<double>(d), "weighted_remainder: needs 2 <= p < d");
    require(u.support_lo > 0.0 && std::isfinite(u.support_hi),
            "weighted_remainder: needs compact support away from 0");
    const double gamma = (static_cast<double>(d) - p) / p;
    const auto w = product_profile(u, power_profile(gamma));
    const auto pts = quadrature_breakpoints(w, u.support_lo, u.support_hi);
    auto integrand = [&](double r) {
        return std::pow(std::abs(w.deriv(r)), p) * std::pow(r, p - 1.0);
    };
    return unit_sphere_area(d) * integrate_profile_piecewise(integrand, pts, n_per_piece);
}

// Sampled route: P1 segment form matching the discrete energy convention,
// sum_i area * (r_{i+1}^p - r_i^p)/p * |slope of u r^gamma|^p.
inline double weighted_remainder(const RadialField& u, double p) {
    const RadialGrid& g = *u.grid;
    require(p >= 2.0 && p < static_cast<double>(g.d), "weighted_remainder: needs 2 <= p < d");
    require(u.values.size() == g.size(), "weighted_remainder: field/grid size mismatch");
    check_compact_support(u);
    const double gamma = (static_cast<double>(g.d) - p) / p;
    const double area = unit_sphere_area(g.d);
    std::vector<double> terms(g.size() - 1);
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const cplx wa = u.values[i] * std::pow(g.nodes[i], gamma);
        const cplx wb = u.values[i + 1] * std::pow(g.nodes[i + 1], gamma);
        const double slope = std::abs(wb - wa) / (g.nodes[i + 1] - g.nodes[i]);
        const double seg = (std::pow(g.nodes[i + 1], p) - std::pow(g.nodes[i], p)) / p;
        terms[i] = area * seg * std::pow(slope, p);
    }
    return pairwise_sum(terms);
}

// ===== improved-inequality margin =====
//
// E - mu H - c * remainder; >= -tol for c = 1/(2^{p-1}-1) on every admissible
// test function, and identically 0 at p = 2 with c = 1.
inline double remainder_inequality_check(const RadialProfile& u, double p, int d, double c,
                                         std::size_t n_per_piece = 4096) {
    require(p >= 2.0 && p < static_cast<double>(d),
            "remainder_inequality_check: needs 2 <= p < d");
    require(u.support_lo > 0.0 && std::isfinite(u.support_hi),
            "remainder_inequality_check: needs compact support away from 0");
    const double lo = u.support_lo, hi = u.support_hi;
    const double energy = energy_p(u, p, d, lo, hi, n_per_piece);
    const double hardy = hardy_term(u, inverse_power_weight(p), p, d, lo, hi, n_per_piece);
    const double rem = weighted_remainder(u, p, d, n_per_piece);
    return energy - hardy_constant(p, d) * hardy - c * rem;
}

// ===== exterior-domain inequality =====

struct ExteriorHardyReport {
    double ratio = 0.0;
    double bound = 0.0;
    double margin = 0.0;  // ratio - bound
};

// For p != d: E / int |u|^p/r^p >= |(d-p)/p|^p on functions supported in
// r > R. For p = d the weight gains the log: E / int |u|^d/(r log(r/R))^d
// >= ((d-1)/d)^d. A ratio below the bound beyond tol is a contract violation.
inline ExteriorHardyReport exterior_hardy_check(const RadialProfile& u, double p, int d, double R,
                                                double tol = 1e-8,
                                                std::size_t n_per_piece = 4096) {
    require(p > 1.0 && d >= 2, "exterior_hardy_check: needs p > 1, d >= 2");
    require(R > 0.0, "exterior_hardy_check: needs R > 0");
    require(u.support_lo > R, "exterior_hardy_check: support must lie in |x| > R");
    require(std::isfinite(u.support_hi), "exterior_hardy_check: needs compact support");
    const double lo = u.support_lo, hi = u.support_hi;
    const double energy = energy_p(u, p, d, lo, hi, n_per_piece);
    ExteriorHardyReport rep;
    if (p == static_cast<double>(d)) {
        rep.bound = exterior_log_constant(d);
        rep.ratio = quotient(
            energy, hardy_term(u, exterior_log_weight(p, R), p, d, lo, hi, n_per_piece));
    } else {
        rep.bound = exterior_hardy_constant(p, d);
        rep.ratio = quotient(
            energy, hardy_term(u, inverse_power_weight(p), p, d, lo, hi, n_per_piece));
    }
    rep.margin = rep.ratio - rep.bound;
    if (rep.margin < -tol)
        throw std::domain_error("exterior_hardy_check: ratio below the bound");
    return rep;
}

// Sharpness probe for the p = d case. In tau = log(r/R) the exterior problem
// becomes int |W'|^d dtau vs int |W|^d tau^{-d} dtau on the half line, whose
// optimizing family is W = tau^{(d-1)/d} theta_eps(tau); the quotient falls
// to ((d-1)/d)^d as eps -> 0, independently of R. Working in tau dodges the
// astronomically large radii r = R e^{1/eps^2} the family needs.
inline double exterior_log_quotient(double eps, int d,
                                    std::size_t n_per_piece = std::size_t{1} << 14) {
    require(d >= 2, "exterior_log_quotient: needs d >= 2");
    require(eps >= 1e-9 && eps < 1.0, "exterior_log_quotient: needs 1e-9 <= eps < 1");
    const double alpha = (static_cast<double>(d) - 1.0) / static_cast<double>(d);
    const auto w = product_profile(power_profile(alpha), hardy_log_cutoff(eps));
    const auto pts = quadrature_breakpoints(w, eps * eps, 1.0 / (eps * eps));
    const double pd = static_cast<double>(d);
    const double num = integrate_profile_piecewise(
        [&](double t) { return std::pow(std::abs(w.deriv(t)), pd); }, pts, n_per_piece);
    const double den = integrate_profile_piecewise(
        [&](double t) { return std::pow(std::abs(w.value(t)), pd) * std::pow(t, -pd); }, pts,
        n_per_piece);
    return quotient(num, den);
}

// ===== inversion check (p = d) =====

// v(rho) = u(R^2/rho): maps profiles inside the ball to profiles outside,
// composing the closed forms exactly (no resampling).
inline RadialProfile kelvin_transform(const RadialProfile& u, double R) {
    require(R > 0.0, "kelvin_transform: needs R > 0");
    require(u.support_lo > 0.0 && std::isfinite(u.support_hi) && u.support_hi <= R,
            "kelvin_transform: support must lie in 0 < r <= R");
    const double R2 = R * R;
    RadialProfile v;
    v.support_lo = R2 / u.support_hi;
    v.support_hi = R2 / u.support_lo;
    v.breakpoints.reserve(u.breakpoints.size());
    for (auto it = u.breakpoints.rbegin(); it != u.breakpoints.rend(); ++it)
        if (*it > 0.0) v.breakpoints.push_back(R2 / *it);
    auto uv = u.value, ud = u.deriv;
    v.value = [=](double rho) { return uv(R2 / rho); };
    v.deriv = [=](double rho) { return -ud(R2 / rho) * R2 / (rho * rho); };
    return v;
}

struct KelvinReport {
    double energy_mismatch = 0.0;  // relative, both tiny -> 0
    double hardy_mismatch = 0.0;
};

// The inversion leaves both the d-energy and the log-weighted term invariant:
//   int_{r<R} |u'|^d r^{d-1} dr = int_{rho>R} |v'|^d rho^{d-1} drho,
//   int_{r<R} |u|^d/(r log(R/r))^d r^{d-1} dr = same with the exterior log weight.
// Two independent quadratures of each; mismatches sit at quadrature level.
// The exterior rule runs at a staggered resolution: the inversion reflects
// log-radius, so equal geometric rules would mirror each other node-for-node
// and cancel their discretization errors instead of exposing them.
inline KelvinReport kelvin_check(const RadialProfile& u, int d, double R,
                                 std::size_t n_per_piece = std::size_t{1} << 13) {
    require(d >= 2, "kelvin_check: needs d >= 2");
    require(u.support_lo > 0.0 && u.support_hi < R,
            "kelvin_check: support must lie strictly inside the ball");
    const double p = static_cast<double>(d);
    const auto v = kelvin_transform(u, R);
    const double area = unit_sphere_area(d);
    const std::size_t n_out = (3 * n_per_piece) / 2 + 1;

    const double e_in = energy_p(u, p, d, u.support_lo, u.support_hi, n_per_piece);
    const double e_out = energy_p(v, p, d, v.support_lo, v.support_hi, n_out);

    const auto pts = quadrature_breakpoints(u, u.support_lo, u.support_hi);
    const double h_in =
        area * integrate_profile_piecewise(
                   [&](double r) {
                       return std::pow(std::abs(u.value(r)) / (r * std::log(R / r)), p) *
                              std::pow(r, d - 1);
                   },
                   pts, n_per_piece);
    const double h_out =
        hardy_term(v, exterior_log_weight(p, R), p, d, v.support_lo, v.support_hi, n_out);

    return {rel_diff(e_in, e_out), rel_diff(h_in, h_out)};
}

}  // namespace hardylab
