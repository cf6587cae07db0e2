#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "hardylab/common.hpp"
#include "hardylab/params.hpp"

namespace hardylab {

// ===== radial grids =====
//
// Every weight in this laboratory (1/|x|^p, log corrections, cutoff ramps)
// varies on multiplicative scales, so radial nodes are geometric:
// r_i = r_min * exp(i h), h = log(r_max/r_min)/(n-1). The quadrature weights
// implement the trapezoid rule in t = log r including the Jacobian r dt, i.e.
// sum_i weights[i] f(r_i) ~ int f(r) dr, second order in h.

struct RadialGrid {
    std::vector<double> nodes;    // ascending, strictly positive
    std::vector<double> weights;  // for int f dr (Jacobian included)
    int d = 2;                    // ambient dimension carried for integrals

    std::size_t size() const { return nodes.size(); }
    double r_min() const { return nodes.front(); }
    double r_max() const { return nodes.back(); }
    double t_spacing() const {
        return std::log(nodes.back() / nodes.front()) / static_cast<double>(nodes.size() - 1);
    }
    bool covers(double a, double b) const { return r_min() <= a && b <= r_max(); }
};

inline RadialGrid make_log_radial_grid(double r_min, double r_max, std::size_t n, int d = 2) {
    require(std::isfinite(r_min) && std::isfinite(r_max), "log grid: endpoints must be finite");
    require(r_min > 0.0 && r_min < r_max, "log grid: needs 0 < r_min < r_max");
    require(n >= 2, "log grid: needs at least 2 nodes");
    require(d >= 1, "log grid: needs d >= 1");

    RadialGrid g;
    g.d = d;
    g.nodes.resize(n);
    g.weights.resize(n);
    const double h = std::log(r_max / r_min) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        g.nodes[i] = r_min * std::exp(h * static_cast<double>(i));
    g.nodes.front() = r_min;  // pin endpoints against exp rounding
    g.nodes.back() = r_max;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = (i == 0 || i == n - 1) ? 0.5 * h : h;
        g.weights[i] = c * g.nodes[i];
    }
    return g;
}

// int_{R^d} f(|x|) dx = |S^{d-1}| int f(r) r^{d-1} dr on the grid's rule.
inline double radial_integral(std::span<const double> f, const RadialGrid& g) {
    require(f.size() == g.size(), "radial_integral: sample count mismatch");
    if (!all_finite(f)) throw std::domain_error("radial_integral: non-finite sample");
    std::vector<double> terms(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        terms[i] = g.weights[i] * f[i] * std::pow(g.nodes[i], g.d - 1);
    return unit_sphere_area(g.d) * pairwise_sum(terms);
}

inline double radial_integral(const std::function<double(double)>& f, const RadialGrid& g) {
    std::vector<double> samples(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) samples[i] = f(g.nodes[i]);
    return radial_integral(samples, g);
}

// ===== 1-D log-trapezoid quadrature of closed-form integrands =====
//
// int_a^b g(r) dr with nodes geometric in [a, b]. The piecewise variant places
// nodes exactly at the supplied breakpoints so kinks of piecewise-analytic
// integrands (cutoff ramps) never sit inside a panel.

inline double integrate_log_trapezoid(const std::function<double(double)>& g, double a, double b,
                                      std::size_t n) {
    require(a > 0.0 && a < b, "integrate_log_trapezoid: needs 0 < a < b");
    require(n >= 2, "integrate_log_trapezoid: needs n >= 2");
    const double h = std::log(b / a) / static_cast<double>(n - 1);
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i == n - 1) ? b : a * std::exp(h * static_cast<double>(i));
        const double c = (i == 0 || i == n - 1) ? 0.5 * h : h;
        const double v = g(r);
        if (!std::isfinite(v)) throw std::domain_error("integrate_log_trapezoid: non-finite integrand");
        terms[i] = c * r * v;
    }
    return pairwise_sum(terms);
}

inline double integrate_piecewise(const std::function<double(double)>& g,
                                  std::span<const double> breakpoints, std::size_t n_per_piece) {
    require(breakpoints.size() >= 2, "integrate_piecewise: needs at least one piece");
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
        require(breakpoints[k] < breakpoints[k + 1], "integrate_piecewise: breakpoints must ascend");
        total += integrate_log_trapezoid(g, breakpoints[k], breakpoints[k + 1], n_per_piece);
    }
    return total;
}

// ===== polar grids (d = 2) =====

struct PolarGrid {
    RadialGrid radial;  // with d = 2
    std::size_t n_theta = 0;

    std::size_t n_r() const { return radial.size(); }
    std::size_t size() const { return radial.size() * n_theta; }
    double dtheta() const { return 2.0 * pi / static_cast<double>(n_theta); }
    double theta(std::size_t j) const { return dtheta() * static_cast<double>(j); }
    std::size_t index(std::size_t i, std::size_t j) const { return i * n_theta + j; }
};

inline PolarGrid make_polar_grid(double r_min, double r_max, std::size_t n_r, std::size_t n_theta) {
    require(n_theta >= 4 && n_theta % 2 == 0, "polar grid: angle count must be even and >= 4");
    PolarGrid g;
    g.radial = make_log_radial_grid(r_min, r_max, n_r, 2);
    g.n_theta = n_theta;
    return g;
}

// int_{R^2} f dx = int int f r dr dtheta; theta uses the periodic trapezoid
// rule (spectrally accurate for smooth angular dependence).
inline double polar_integral(std::span<const double> f, const PolarGrid& g) {
    require(f.size() == g.size(), "polar_integral: sample count mismatch");
    if (!all_finite(f)) throw std::domain_error("polar_integral: non-finite sample");
    const double dth = g.dtheta();
    std::vector<double> terms(g.size());
    for (std::size_t i = 0; i < g.n_r(); ++i) {
        const double wr = g.radial.weights[i] * g.radial.nodes[i] * dth;
        for (std::size_t j = 0; j < g.n_theta; ++j)
            terms[g.index(i, j)] = wr * f[g.index(i, j)];
    }
    return pairwise_sum(terms);
}

}  // namespace hardylab
