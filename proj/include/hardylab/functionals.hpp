#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "hardylab/field.hpp"
#include "hardylab/grid.hpp"
#include "hardylab/params.hpp"
#include "hardylab/profile.hpp"

namespace hardylab {

// ===== finite differences on sampled fields =====

// Second-order radial derivative on the geometric grid: non-uniform 3-point
// central stencil inside, one-sided 3-point at the ends.
inline std::vector<cplx> radial_derivative(const PolarField& u) {
    const PolarGrid& g = *u.grid;
    const std::vector<double>& r = g.radial.nodes;
    std::vector<cplx> du(u.values.size());
    const std::size_t nr = g.n_r();
    require(nr >= 3, "radial_derivative: needs at least 3 radial nodes");
    for (std::size_t j = 0; j < g.n_theta; ++j) {
        for (std::size_t i = 0; i < nr; ++i) {
            std::size_t a, b, c;
            if (i == 0) { a = 0; b = 1; c = 2; }
            else if (i == nr - 1) { a = nr - 3; b = nr - 2; c = nr - 1; }
            else { a = i - 1; b = i; c = i + 1; }
            const double x = r[i];
            // derivative of the Lagrange basis through nodes {a, b, c} at x
            const double wa = (x - r[b] + x - r[c]) / ((r[a] - r[b]) * (r[a] - r[c]));
            const double wb = (x - r[a] + x - r[c]) / ((r[b] - r[a]) * (r[b] - r[c]));
            const double wc = (x - r[a] + x - r[b]) / ((r[c] - r[a]) * (r[c] - r[b]));
            du[g.index(i, j)] = wa * u.at(a, j) + wb * u.at(b, j) + wc * u.at(c, j);
        }
    }
    return du;
}

// Periodic central difference in theta (uniform spacing).
inline std::vector<cplx> angular_derivative(const PolarField& u) {
    const PolarGrid& g = *u.grid;
    std::vector<cplx> du(u.values.size());
    const double inv2h = 1.0 / (2.0 * g.dtheta());
    for (std::size_t i = 0; i < g.n_r(); ++i) {
        for (std::size_t j = 0; j < g.n_theta; ++j) {
            const std::size_t jp = (j + 1) % g.n_theta;
            const std::size_t jm = (j + g.n_theta - 1) % g.n_theta;
            du[g.index(i, j)] = (u.at(i, jp) - u.at(i, jm)) * inv2h;
        }
    }
    return du;
}

// ===== magnetic gradient =====
//
// |grad_A u|^2 = |d_r u + i A_r u|^2 + |(1/r) d_theta u + i A_theta u|^2.
// The AB potential has A_r = 0, A_theta = -beta/r, so the angular part is
// |(1/r)(d_theta u - i beta u)|^2.

inline std::vector<double> magnetic_gradient_sq(const PolarField& u, const VectorPotential& A) {
    const PolarGrid& g = *u.grid;
    require(g.n_theta >= 4, "magnetic_gradient_sq: needs at least 4 angular nodes");
    const auto ur = radial_derivative(u);
    const auto ut = angular_derivative(u);
    std::vector<double> out(u.values.size());
    for (std::size_t i = 0; i < g.n_r(); ++i) {
        const double r = g.radial.nodes[i];
        for (std::size_t j = 0; j < g.n_theta; ++j) {
            const double th = g.theta(j);
            const std::size_t k = g.index(i, j);
            const cplx rad = ur[k] + cplx(0.0, A.A_r(r, th)) * u.values[k];
            const cplx ang = ut[k] / r + cplx(0.0, A.A_theta(r, th)) * u.values[k];
            out[k] = std::norm(rad) + std::norm(ang);
        }
    }
    return out;
}

inline std::vector<double> magnetic_gradient_sq(const PolarField& u, double beta) {
    return magnetic_gradient_sq(u, ab_potential(beta));
}

// Closed-form pointwise value for an analytic u.
inline double magnetic_gradient_sq_at(const PolarFn& u, const VectorPotential& A, double r,
                                      double th) {
    const cplx v = u.value(r, th);
    const cplx rad = u.d_r(r, th) + cplx(0.0, A.A_r(r, th)) * v;
    const cplx ang = u.d_theta(r, th) / r + cplx(0.0, A.A_theta(r, th)) * v;
    return std::norm(rad) + std::norm(ang);
}

// ===== p-energies =====

// Radial sampled field, free gradient: P1 segment energy
// sum_i |S^{d-1}| (r_{i+1}^d - r_i^d)/d * |slope_i|^p.
// Second order for smooth u and exactly the discrete energy the quotient
// minimizer descends, so the two modules agree on what "energy" means.
inline double energy_p(const RadialField& u, double p) {
    require(p > 1.0, "energy_p: needs p > 1");
    if (u.compactly_supported) check_compact_support(u);
    const RadialGrid& g = *u.grid;
    require(u.values.size() == g.size(), "energy_p: field/grid size mismatch");
    const double area = unit_sphere_area(g.d);
    std::vector<double> terms(g.size() - 1);
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double dr = g.nodes[i + 1] - g.nodes[i];
        const double slope = std::abs(u.values[i + 1] - u.values[i]) / dr;
        const double w = area * (std::pow(g.nodes[i + 1], g.d) - std::pow(g.nodes[i], g.d)) /
                         static_cast<double>(g.d);
        terms[i] = w * std::pow(slope, p);
    }
    return pairwise_sum(terms);
}

// Closed-form radial profile: piecewise log-trapezoid of |u'|^p r^{d-1}.
inline double energy_p(const RadialProfile& u, double p, int d, double lo, double hi,
                       std::size_t n_per_piece = 4096) {
    require(p > 1.0, "energy_p: needs p > 1");
    const double area = unit_sphere_area(d);
    const auto pts = quadrature_breakpoints(u, lo, hi);
    auto integrand = [&](double r) {
        return std::pow(std::abs(u.deriv(r)), p) * std::pow(r, d - 1);
    };
    return area * integrate_profile_piecewise(integrand, pts, n_per_piece);
}

// Polar sampled field with a vector potential (pass ab_potential(0.0) or
// beta = 0 for the free energy).
inline double energy_p(const PolarField& u, double p, const VectorPotential& A) {
    require(p > 1.0, "energy_p: needs p > 1");
    const auto gsq = magnetic_gradient_sq(u, A);
    std::vector<double> integrand(gsq.size());
    for (std::size_t k = 0; k < gsq.size(); ++k) integrand[k] = std::pow(gsq[k], 0.5 * p);
    return polar_integral(integrand, *u.grid);
}

inline double energy_p(const PolarField& u, double p, double beta = 0.0) {
    return energy_p(u, p, ab_potential(beta));
}

// Closed-form polar function on a grid's quadrature rule.
inline double energy_p(const PolarFn& u, double p, const VectorPotential& A, const PolarGrid& g) {
    require(p > 1.0, "energy_p: needs p > 1");
    std::vector<double> integrand(g.size());
    for (std::size_t i = 0; i < g.n_r(); ++i)
        for (std::size_t j = 0; j < g.n_theta; ++j)
            integrand[g.index(i, j)] =
                std::pow(magnetic_gradient_sq_at(u, A, g.radial.nodes[i], g.theta(j)), 0.5 * p);
    return polar_integral(integrand, g);
}

// ===== weighted |u|^p terms =====

inline double hardy_term(const RadialField& u, const WeightSpec& w, double p) {
    const RadialGrid& g = *u.grid;
    require(u.values.size() == g.size(), "hardy_term: field/grid size mismatch");
    const double area = unit_sphere_area(g.d);
    std::vector<double> terms(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.nodes[i];
        const double av = std::abs(u.values[i]);
        if (w.kind == WeightSpec::Kind::exterior_log && r <= w.R) {
            if (av != 0.0)
                throw std::domain_error("hardy_term: exterior weight needs support in |x| > R");
            continue;
        }
        terms[i] = g.weights[i] * w.at_node(g, i) * std::pow(av, p) * std::pow(r, g.d - 1);
    }
    const double val = area * pairwise_sum(terms);
    if (!std::isfinite(val)) throw std::domain_error("hardy_term: non-finite value");
    return val;
}

inline double hardy_term(const RadialProfile& u, const WeightSpec& w, double p, int d, double lo,
                         double hi, std::size_t n_per_piece = 4096) {
    const double area = unit_sphere_area(d);
    const auto pts = quadrature_breakpoints(u, lo, hi);
    auto integrand = [&](double r) {
        return w.eval(r) * std::pow(std::abs(u.value(r)), p) * std::pow(r, d - 1);
    };
    return area * integrate_profile_piecewise(integrand, pts, n_per_piece);
}

inline double hardy_term(const PolarField& u, const WeightSpec& w, double p) {
    const PolarGrid& g = *u.grid;
    std::vector<double> integrand(g.size());
    for (std::size_t i = 0; i < g.n_r(); ++i) {
        const double wi = w.at_node(g.radial, i);
        for (std::size_t j = 0; j < g.n_theta; ++j)
            integrand[g.index(i, j)] = wi * std::pow(std::abs(u.at(i, j)), p);
    }
    return polar_integral(integrand, g);
}

inline double hardy_term(const PolarFn& u, const WeightSpec& w, double p, const PolarGrid& g) {
    std::vector<double> integrand(g.size());
    for (std::size_t i = 0; i < g.n_r(); ++i) {
        const double wi = w.at_node(g.radial, i);
        for (std::size_t j = 0; j < g.n_theta; ++j)
            integrand[g.index(i, j)] =
                wi * std::pow(std::abs(u.value(g.radial.nodes[i], g.theta(j))), p);
    }
    return polar_integral(integrand, g);
}

inline double quotient(double num, double den) {
    if (!std::isfinite(num) || !std::isfinite(den))
        throw std::domain_error("quotient: non-finite operand");
    if (den <= 0.0) throw std::domain_error("quotient: denominator must be positive");
    return num / den;
}

// ===== diamagnetic and gauge checks =====

struct DiamagneticReport {
    double worst_margin = 0.0;  // min over points of |grad_A u| - |grad |u||
    double worst_r = 0.0;
    double worst_theta = 0.0;
};

// |grad|u|| = |Re(conj(u) grad u)| / |u| wherever u != 0; at zeros of u the
// magnetic term vanishes and the margin is exactly 0.
inline DiamagneticReport check_diamagnetic(const PolarFn& u, const VectorPotential& A,
                                           std::span<const std::pair<double, double>> points) {
    require(!points.empty(), "check_diamagnetic: no sample points");
    DiamagneticReport rep;
    bool first = true;
    for (const auto& [r, th] : points) {
        const cplx v = u.value(r, th);
        const cplx vr = u.d_r(r, th);
        const cplx vt_over_r = u.d_theta(r, th) / r;
        const double mag = std::sqrt(magnetic_gradient_sq_at(u, A, r, th));
        double grad_abs;
        const double av = std::abs(v);
        if (av < 1e-300) {
            grad_abs = std::sqrt(std::norm(vr) + std::norm(vt_over_r));
        } else {
            const double gr = std::real(std::conj(v) * vr) / av;
            const double gt = std::real(std::conj(v) * vt_over_r) / av;
            grad_abs = std::hypot(gr, gt);
        }
        const double margin = mag - grad_abs;
        if (first || margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_r = r;
            rep.worst_theta = th;
            first = false;
        }
    }
    return rep;
}

struct GaugeReport {
    double h_A = 0.0;        // energy of psi with potential A
    double h_gauged = 0.0;   // energy of psi e^{i phi} with A - grad(phi)
    double discrepancy = 0.0;
};

// Gauge covariance: h_{A,p}[psi] = h_{A - grad phi, p}[psi e^{i phi}].
inline GaugeReport check_gauge(const PolarFn& psi, const GaugeFn& phi, const VectorPotential& A,
                               double p, const PolarGrid& g) {
    GaugeReport rep;
    rep.h_A = energy_p(psi, p, A, g);

    VectorPotential At;
    At.A_r = [&phi, &A](double r, double th) { return A.A_r(r, th) - phi.grad_r(r, th); };
    At.A_theta = [&phi, &A](double r, double th) {
        return A.A_theta(r, th) - phi.grad_theta_over_r(r, th);
    };

    PolarFn chi;
    chi.value = [&](double r, double th) {
        return psi.value(r, th) * std::polar(1.0, phi.value(r, th));
    };
    chi.d_r = [&](double r, double th) {
        const cplx ph = std::polar(1.0, phi.value(r, th));
        return (psi.d_r(r, th) + cplx(0.0, phi.grad_r(r, th)) * psi.value(r, th)) * ph;
    };
    chi.d_theta = [&](double r, double th) {
        const cplx ph = std::polar(1.0, phi.value(r, th));
        return (psi.d_theta(r, th) +
                cplx(0.0, r * phi.grad_theta_over_r(r, th)) * psi.value(r, th)) *
               ph;
    };

    rep.h_gauged = energy_p(chi, p, At, g);
    rep.discrepancy = rel_diff(rep.h_A, rep.h_gauged);
    return rep;
}

}  // namespace hardylab
