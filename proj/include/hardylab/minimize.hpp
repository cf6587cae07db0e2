#pragma once

// Rayleigh-quotient minimization over sampled radial fields: preconditioned
// normalized descent with a backtracking line search. The discrete numerator
// is exactly the P1 segment energy of energy_p(RadialField), so quotients
// reported here and energies reported there are the same functional.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hardylab/field.hpp"
#include "hardylab/functionals.hpp"
#include "hardylab/grid.hpp"
#include "hardylab/params.hpp"

namespace hardylab {

// Outcome of a quotient minimization. `minimizer` holds node values for the
// descent route and family parameters for closed-form searches (each search
// documents its layout); `trace` is the accepted quotient value after every
// improving step and is non-increasing by construction.
struct QuotientResult {
    double value = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> minimizer;
    std::vector<double> trace;
    bool converged = false;
    std::size_t iterations = 0;
    double final_step = 0.0;
};

// What to minimize. The numerator is the P1 gradient energy, optionally with
// a single-mode angular penalty c^2 u^2/r^2 (p = 2 only, where the energy
// splits into stiffness + penalty); setting num_weight instead makes the
// numerator a weighted norm like the denominator (then the quotient of equal
// weights is identically 1).
struct QuotientSpec {
    double p = 2.0;
    double angular_c = 0.0;
    WeightSpec den_weight = inverse_power_weight(2.0);
    bool num_is_weighted_norm = false;
    WeightSpec num_weight = inverse_power_weight(2.0);
};

struct MinimizeOptions {
    double rel_tol = 1e-8;       // relative quotient change considered "no progress"
    std::size_t stall_iters = 10;  // stop after this many consecutive no-progress iters
    std::size_t max_iters = 2000;
    std::size_t max_backtracks = 40;
};

namespace detail {

// Node-rule weighted p-norm sum_i area w_i rho_i |u_i|^p r_i^{d-1}; matches
// hardy_term(RadialField) exactly.
inline double weighted_norm_p(const std::vector<double>& u, const WeightSpec& w,
                              double p, const RadialGrid& g, double area) {
    std::vector<double> terms(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        terms[i] = g.weights[i] * w.at_node(g, i) * std::pow(std::abs(u[i]), p) *
                   std::pow(g.nodes[i], g.d - 1);
    return area * pairwise_sum(terms);
}

inline void weighted_norm_p_grad(const std::vector<double>& u, const WeightSpec& w,
                                 double p, const RadialGrid& g, double area,
                                 std::vector<double>& out) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = std::abs(u[i]);
        out[i] = a == 0.0 ? 0.0
                          : p * area * g.weights[i] * w.at_node(g, i) *
                                std::pow(a, p - 2.0) * u[i] * std::pow(g.nodes[i], g.d - 1);
    }
}

// P1 segment energy sum_seg W_seg |slope|^p plus (p = 2 only) the angular
// penalty in node form. Segment weights W_seg match energy_p(RadialField).
struct DiscreteEnergy {
    const RadialGrid* g = nullptr;
    double p = 2.0;
    double c2 = 0.0;  // angular_c^2
    double area = 0.0;
    std::vector<double> seg_w;   // area (r_{i+1}^d - r_i^d)/d
    std::vector<double> node_w;  // area w_i r_i^{d-1} / r_i^2 (penalty rule)

    void init(const RadialGrid& grid, double p_, double c) {
        g = &grid;
        p = p_;
        c2 = c * c;
        area = unit_sphere_area(grid.d);
        seg_w.resize(grid.size() - 1);
        for (std::size_t i = 0; i + 1 < grid.size(); ++i)
            seg_w[i] = area *
                       (std::pow(grid.nodes[i + 1], grid.d) - std::pow(grid.nodes[i], grid.d)) /
                       static_cast<double>(grid.d);
        node_w.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            node_w[i] = area * g->weights[i] * std::pow(grid.nodes[i], grid.d - 1) /
                        (grid.nodes[i] * grid.nodes[i]);
    }

    double eval(const std::vector<double>& u) const {
        std::vector<double> terms(seg_w.size());
        for (std::size_t i = 0; i + 1 < u.size(); ++i) {
            const double dr = g->nodes[i + 1] - g->nodes[i];
            const double slope = std::abs(u[i + 1] - u[i]) / dr;
            terms[i] = seg_w[i] * std::pow(slope, p);
        }
        double e = pairwise_sum(terms);
        if (c2 > 0.0) {
            std::vector<double> pen(u.size());
            for (std::size_t i = 0; i < u.size(); ++i) pen[i] = node_w[i] * u[i] * u[i];
            e += c2 * pairwise_sum(pen);
        }
        return e;
    }

    void grad(const std::vector<double>& u, std::vector<double>& out) const {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i + 1 < u.size(); ++i) {
            const double dr = g->nodes[i + 1] - g->nodes[i];
            const double s = (u[i + 1] - u[i]) / dr;
            if (s == 0.0) continue;
            const double f = seg_w[i] * p * std::pow(std::abs(s), p - 2.0) * s / dr;
            out[i] -= f;
            out[i + 1] += f;
        }
        if (c2 > 0.0)
            for (std::size_t i = 0; i < u.size(); ++i) out[i] += 2.0 * c2 * node_w[i] * u[i];
    }

    // Tridiagonal model Hessian over the interior nodes 1..n-2 (end nodes are
    // pinned): the |slope|^{p-2}-weighted stiffness plus the penalty diagonal.
    // Slopes are floored relative to the steepest segment so flat regions keep
    // a definite, locally scaled curvature for p > 2 (at p = 2 the floor is
    // inert: |s|^0 = 1).
    void hessian(const std::vector<double>& u, std::vector<double>& diag,
                 std::vector<double>& off) const {
        const std::size_t n = u.size();
        std::vector<double> k(n - 1);
        double s_max = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i)
            s_max = std::max(s_max, std::abs(u[i + 1] - u[i]) / (g->nodes[i + 1] - g->nodes[i]));
        const double s_floor = std::max(1e-8 * s_max, 1e-300);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double dr = g->nodes[i + 1] - g->nodes[i];
            const double s = std::max(std::abs(u[i + 1] - u[i]) / dr, s_floor);
            k[i] = seg_w[i] * p * (p - 1.0) * std::pow(s, p - 2.0) / (dr * dr);
        }
        diag.assign(n - 2, 0.0);
        off.assign(n - 3, 0.0);
        for (std::size_t j = 0; j < n - 2; ++j) {
            diag[j] = k[j] + k[j + 1];
            if (c2 > 0.0) diag[j] += 2.0 * c2 * node_w[j + 1];
            if (j + 1 < n - 2) off[j] = -k[j + 1];
        }
    }
};

// In-place Thomas solve of the symmetric tridiagonal system; diag/off are
// consumed as scratch.
inline void solve_tridiagonal(std::vector<double> diag, std::vector<double> off,
                              std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = off[i - 1] / diag[i - 1];
        diag[i] -= m * off[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - off[i] * rhs[i + 1]) / diag[i];
}

}  // namespace detail

// Normalized descent on num/den over real node values with pinned end nodes
// (test functions are compactly supported inside the grid). Each iteration
// renormalizes den(u) = 1, preconditions the quotient gradient num' - Q den'
// with the tridiagonal numerator Hessian, and backtracks from a full step
// until the quotient decreases; the trace records accepted values only, so it
// is non-increasing. p < 2 is rejected: the descent model needs p >= 2, and
// for p < 2 the toolkit only evaluates quotients.
inline QuotientResult minimize_quotient(const RadialField& init, const QuotientSpec& spec,
                                        const MinimizeOptions& opts = {}) {
    require(spec.p >= 2.0, "minimize_quotient: descent needs p >= 2");
    if (spec.angular_c != 0.0)
        require(spec.p == 2.0, "minimize_quotient: angular penalty implemented for p = 2 only");
    const RadialGrid& g = *init.grid;
    require(init.values.size() == g.size(), "minimize_quotient: field/grid size mismatch");
    require(g.size() >= 4, "minimize_quotient: needs at least 4 nodes");

    const double area = unit_sphere_area(g.d);
    std::vector<double> u(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) u[i] = init.values[i].real();
    u.front() = 0.0;
    u.back() = 0.0;

    detail::DiscreteEnergy num;
    num.init(g, spec.p, spec.angular_c);
    auto eval_num = [&](const std::vector<double>& v) {
        return spec.num_is_weighted_norm
                   ? detail::weighted_norm_p(v, spec.num_weight, spec.p, g, area)
                   : num.eval(v);
    };
    auto eval_den = [&](const std::vector<double>& v) {
        return detail::weighted_norm_p(v, spec.den_weight, spec.p, g, area);
    };

    {
        const double den0 = eval_den(u);
        if (!(den0 > 0.0))
            throw std::domain_error("minimize_quotient: initial denominator must be positive");
        const double scale = std::pow(den0, -1.0 / spec.p);
        for (auto& x : u) x *= scale;
    }

    QuotientResult res;
    double q = eval_num(u);  // den(u) = 1 after normalization
    res.trace.push_back(q);

    std::vector<double> gn(u.size()), gd(u.size()), dir(u.size());
    std::vector<double> hd, ho;
    std::vector<double> cand(u.size());
    std::size_t stalled = 0;
    double step = 1.0;

    for (res.iterations = 0; res.iterations < opts.max_iters; ++res.iterations) {
        if (spec.num_is_weighted_norm)
            detail::weighted_norm_p_grad(u, spec.num_weight, spec.p, g, area, gn);
        else
            num.grad(u, gn);
        detail::weighted_norm_p_grad(u, spec.den_weight, spec.p, g, area, gd);
        for (std::size_t i = 0; i < u.size(); ++i) dir[i] = gn[i] - q * gd[i];

        num.hessian(u, hd, ho);
        std::vector<double> rhs(dir.begin() + 1, dir.end() - 1);
        detail::solve_tridiagonal(hd, ho, rhs);
        dir.front() = 0.0;
        dir.back() = 0.0;
        std::copy(rhs.begin(), rhs.end(), dir.begin() + 1);

        double dn = 0.0, un = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            dn = std::max(dn, std::abs(dir[i]));
            un = std::max(un, std::abs(u[i]));
        }
        if (dn <= 1e-14 * std::max(un, 1.0)) {  // stationary: nothing to descend
            res.converged = true;
            ++res.iterations;
            break;
        }

        double alpha = 1.0;
        bool accepted = false;
        for (std::size_t bt = 0; bt < opts.max_backtracks; ++bt, alpha *= 0.5) {
            for (std::size_t i = 0; i < u.size(); ++i) cand[i] = u[i] - alpha * dir[i];
            const double den = eval_den(cand);
            if (!(den > 0.0)) continue;
            const double scale = std::pow(den, -1.0 / spec.p);
            for (auto& x : cand) x *= scale;
            const double qc = eval_num(cand);
            if (qc < q) {
                u.swap(cand);
                q = qc;
                res.trace.push_back(q);
                step = alpha;
                accepted = true;
                break;
            }
        }

        const double prev = res.trace.size() >= 2 ? res.trace[res.trace.size() - 2] : q;
        const bool progress = accepted && (prev - q) > opts.rel_tol * std::abs(prev);
        stalled = progress ? 0 : stalled + 1;
        if (stalled >= opts.stall_iters) {
            res.converged = true;
            ++res.iterations;
            break;
        }
    }

    res.value = q;
    res.minimizer = std::move(u);
    res.final_step = step;
    return res;
}

}  // namespace hardylab
