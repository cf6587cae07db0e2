#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "hardylab/field.hpp"
#include "hardylab/functionals.hpp"
#include "hardylab/grid.hpp"
#include "hardylab/params.hpp"
#include "hardylab/profile.hpp"

namespace hardylab {

// Optimizing-sequence families for the two criticality regimes:
//   plateau-log  — 1 on [0, 1/eps], log ramp to 0 on [1/eps, 1/eps^2]; its free
//                  p-energy vanishes as eps -> 0 when p >= d.
//   hardy-log    — r^{-(d-p)/p} theta_eps with theta_eps ramping up on
//                  [eps^2, eps], flat on [eps, 1/eps], down on [1/eps, 1/eps^2];
//                  its Hardy deficit vanishes like 1/log(1/eps) when 1 < p < d.
struct CutoffSequenceSpec {
    enum class Kind { plateau_log, hardy_log };
    Kind kind = Kind::plateau_log;
    double epsilon = 0.1;
};

inline void validate(const CutoffSequenceSpec& spec, const Params& prm) {
    require(spec.epsilon > 0.0 && spec.epsilon < 1.0, "cutoff: needs 0 < epsilon < 1");
    require(prm.p > 1.0, "cutoff: needs p > 1");
    if (spec.kind == CutoffSequenceSpec::Kind::hardy_log)
        require(prm.p < prm.d, "cutoff: hardy-log family needs p < d");
}

// Exact piecewise profile with its exact piecewise derivative. No finite
// differences anywhere: the kinks at the breakpoints would pollute
// convergence-order measurements downstream.
inline RadialProfile cutoff_profile(const CutoffSequenceSpec& spec, const Params& prm) {
    validate(spec, prm);
    if (spec.kind == CutoffSequenceSpec::Kind::plateau_log)
        return plateau_log_cutoff(spec.epsilon);
    const double gamma = (prm.d - prm.p) / prm.p;
    return product_profile(power_profile(-gamma), hardy_log_cutoff(spec.epsilon));
}

// Sampled version. The grid must cover the region where the profile varies:
// the full support [eps^2, 1/eps^2] for hardy-log, the transition zone
// [1/eps, 1/eps^2] for plateau-log (which is constant 1 all the way to 0).
inline RadialField build_cutoff(const CutoffSequenceSpec& spec, const Params& prm,
                                std::shared_ptr<const RadialGrid> grid) {
    validate(spec, prm);
    require(grid != nullptr, "build_cutoff: null grid");
    const double eps = spec.epsilon;
    if (spec.kind == CutoffSequenceSpec::Kind::plateau_log)
        require(grid->covers(1.0 / eps, 1.0 / (eps * eps)),
                "build_cutoff: grid does not cover the transition zone");
    else
        require(grid->covers(eps * eps, 1.0 / (eps * eps)),
                "build_cutoff: grid does not cover the support");
    return sample_on(cutoff_profile(spec, prm), std::move(grid));
}

// ===== plateau-log deficit (p >= d): closed form =====
//
// |grad u_eps| = 1/(L r) on [1/eps, 1/eps^2] with L = log(1/eps), so the free
// p-energy reduces to area * L^{-p} * int r^{d-1-p} dr over the ramp:
//   p == d : area * L^{1-p}
//   p >  d : area * eps^{p-d} (1 - eps^{p-d}) / ((p-d) L^p)
inline double deficit_free(double eps, const Params& prm) {
    require(eps > 0.0 && eps < 1.0, "deficit_free: needs 0 < eps < 1");
    require(prm.p > 1.0 && prm.p >= static_cast<double>(prm.d), "deficit_free: needs p >= d");
    const double L = std::log(1.0 / eps);
    const double area = unit_sphere_area(prm.d);
    const double q = prm.p - static_cast<double>(prm.d);
    if (q == 0.0) return area * std::pow(L, 1.0 - prm.p);
    const double epq = std::pow(eps, q);
    return area * epq * (1.0 - epq) / (q * std::pow(L, prm.p));
}

// Same quantity by piecewise quadrature of the exact ramp derivative;
// cross-checks the closed form.
inline double deficit_free_quadrature(double eps, const Params& prm,
                                      std::size_t n_per_piece = std::size_t{1} << 14) {
    require(eps >= 1e-9, "deficit_free_quadrature: eps below quadrature floor 1e-9");
    require(prm.p > 1.0 && prm.p >= static_cast<double>(prm.d),
            "deficit_free_quadrature: needs p >= d");
    const auto u = plateau_log_cutoff(eps);
    return energy_p(u, prm.p, prm.d, 1.0 / eps, 1.0 / (eps * eps), n_per_piece);
}

// ===== hardy-log deficit (1 < p < d): high-resolution quadrature =====

// E[u_eps] = int |grad u_eps|^p, H[u_eps] = int |u_eps|^p / r^p, over the exact
// piecewise integrand. Both scale like log(1/eps); their difference E - mu H
// stays O(1/log(1/eps)).
struct CutoffEnergies {
    double energy = 0.0;
    double hardy = 0.0;
};

inline CutoffEnergies cutoff_energies(double eps, const Params& prm,
                                      std::size_t n_per_piece = std::size_t{1} << 14) {
    require(eps >= 1e-9 && eps < 1.0, "cutoff_energies: needs 1e-9 <= eps < 1");
    hardy_constant(prm.p, prm.d);  // validates 1 < p < d
    const CutoffSequenceSpec spec{CutoffSequenceSpec::Kind::hardy_log, eps};
    const auto u = cutoff_profile(spec, prm);
    const double lo = eps * eps, hi = 1.0 / (eps * eps);
    CutoffEnergies out;
    out.energy = energy_p(u, prm.p, prm.d, lo, hi, n_per_piece);
    out.hardy = hardy_term(u, inverse_power_weight(prm.p), prm.p, prm.d, lo, hi, n_per_piece);
    return out;
}

inline double deficit_hardy(double eps, const Params& prm,
                            std::size_t n_per_piece = std::size_t{1} << 14) {
    const auto [energy, hardy] = cutoff_energies(eps, prm, n_per_piece);
    const double mu = hardy_constant(prm.p, prm.d);
    const double deficit = energy - mu * hardy;
    // the sharp inequality makes this non-negative; beyond-tolerance violations
    // mean the quadrature or the integrand is wrong, so fail loudly
    if (deficit < -1e-8 * energy)
        throw std::domain_error("deficit_hardy: negative deficit beyond quadrature tolerance");
    return deficit;
}

// E/H for the hardy-log family: exceeds mu and converges down to it.
inline double cutoff_quotient(double eps, const Params& prm,
                              std::size_t n_per_piece = std::size_t{1} << 14) {
    const auto [energy, hardy] = cutoff_energies(eps, prm, n_per_piece);
    return quotient(energy, hardy);
}

// ===== decay-rate study =====

struct DeficitCurve {
    struct Row {
        double epsilon = 0.0;
        double deficit = 0.0;
        double normalized = 0.0;  // deficit * log(1/epsilon)
    };
    std::vector<Row> rows;
};

inline DeficitCurve decay_study(CutoffSequenceSpec::Kind kind, const Params& prm,
                                std::span<const double> epsilons,
                                std::size_t n_per_piece = std::size_t{1} << 14) {
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        require(epsilons[i] > 0.0 && epsilons[i] < 1.0, "decay_study: epsilons must lie in (0,1)");
        if (i > 0)
            require(epsilons[i] < epsilons[i - 1], "decay_study: epsilons must strictly decrease");
    }
    DeficitCurve curve;
    curve.rows.reserve(epsilons.size());
    for (double eps : epsilons) {
        const double def = (kind == CutoffSequenceSpec::Kind::plateau_log)
                               ? deficit_free(eps, prm)
                               : deficit_hardy(eps, prm, n_per_piece);
        curve.rows.push_back({eps, def, def * std::log(1.0 / eps)});
    }
    return curve;
}

}  // namespace hardylab
