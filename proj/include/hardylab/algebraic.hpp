#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "hardylab/common.hpp"
#include "hardylab/params.hpp"

namespace hardylab {

// The pointwise expansion remainder
//   T(x, y) = |x+y|^p - |y|^p - p |y|^{p-2} y.x,   p >= 2,
// with |y|^{p-2} y extended by 0 at y = 0. T is >= c(p)|x|^p with
// c(p) = 1/(2^{p-1}-1); the true optimal constant is an open problem, so
// everything here reports *estimates* with an explicit bound direction.

struct VecPair {
    std::vector<double> x;
    std::vector<double> y;
};

enum class BoundDirection { upper_bound_on_inf, lower_bound_on_sup, sampled_check };

struct ConstantEstimate {
    double value = 0.0;
    double witness_s = 0.0;      // |y|/|x| at the witness
    double witness_theta = 0.0;  // angle between x and y
    VecPair witness;             // 2-D realization, x = (1, 0)
    std::size_t samples = 0;     // objective evaluations spent
    double refinement_tol = 0.0;
    BoundDirection bound_direction = BoundDirection::sampled_check;
};

inline constexpr std::uint64_t default_search_seed = 0x5eed2024u;

// T from the rotation invariants |x|^2, |y|^2, x.y.
//
// When |y| >= 2|x| the three terms of T nearly cancel (they are all
// O(|y|^p) while T itself is O(|x|^2 |y|^{p-2})), so that branch evaluates
//   T = |y|^p h(w) + (p/2) |y|^{p-2} |x|^2,  w = (2 x.y + |x|^2)/|y|^2,
//   h(w) = (1+w)^{p/2} - 1 - (p/2) w  >=  0,
// an exact rearrangement whose two terms are non-negative. h comes from
// expm1/log1p in long double; its absolute error is ~|w| eps, dwarfed by the
// second term whenever |y| >= 2|x|. The direct formula is fine otherwise.
inline double T_from_invariants(double xx, double yy, double xy, double p) {
    if (xx == 0.0) return 0.0;
    if (yy == 0.0) return std::pow(xx, 0.5 * p);
    if (yy >= 4.0 * xx) {
        const long double q = 0.5L * static_cast<long double>(p);
        const long double w =
            (2.0L * static_cast<long double>(xy) + static_cast<long double>(xx)) /
            static_cast<long double>(yy);
        const long double h = std::expm1(q * std::log1p(w)) - q * w;
        const long double yq = std::pow(static_cast<long double>(yy), q);
        const long double cross =
            q * std::pow(static_cast<long double>(yy), q - 1.0L) * static_cast<long double>(xx);
        return static_cast<double>(yq * h + cross);
    }
    const double zz = xx + 2.0 * xy + yy;  // |x+y|^2
    return std::pow(zz, 0.5 * p) - std::pow(yy, 0.5 * p) - p * std::pow(yy, 0.5 * p - 1.0) * xy;
}

inline double eval_T(const VecPair& v, double p) {
    require(p >= 2.0, "eval_T: needs p >= 2");
    require(!v.x.empty() && v.x.size() == v.y.size(), "eval_T: pair dimensions must match");
    double xx = 0.0, yy = 0.0, xy = 0.0;
    for (std::size_t i = 0; i < v.x.size(); ++i) {
        xx += v.x[i] * v.x[i];
        yy += v.y[i] * v.y[i];
        xy += v.x[i] * v.y[i];
    }
    if (!std::isfinite(xx) || !std::isfinite(yy) || !std::isfinite(xy))
        throw std::domain_error("eval_T: non-finite entries");
    return T_from_invariants(xx, yy, xy, p);
}

// Homogeneity and rotation invariance collapse T/|x|^p to two parameters:
//   g(s, theta) = T((1,0), (s cos theta, s sin theta)),
// valid in every dimension >= 2 since T depends only on |x|, |y|, x.y; the
// infimum of T/|x|^p equals the infimum of g over s >= 0, theta in [0, pi].
inline double reduced_T(double s, double theta, double p) {
    return T_from_invariants(1.0, s * s, s * std::cos(theta), p);
}

struct ReducedObjective {
    double p = 2.0;
    double operator()(double s, double theta) const { return reduced_T(s, theta, p); }
};

inline ReducedObjective reduce_by_symmetry(double p) {
    require(p >= 2.0, "reduce_by_symmetry: needs p >= 2");
    return ReducedObjective{p};
}

// T(x,y) / (|x|^2 (|x|+|y|)^{p-2}) in reduced coordinates. This is our chosen
// comparison quantity for the two-sided equivalence; bounded iff the
// normalization is the right one.
inline double equivalence_ratio(double s, double theta, double p) {
    return reduced_T(s, theta, p) / std::pow(1.0 + s, p - 2.0);
}

namespace detail {

// {0} followed by a geometric ladder from s_lo to s_max.
inline std::vector<double> reduced_s_grid(double s_lo, double s_max, std::size_t n) {
    std::vector<double> s(n);
    s[0] = 0.0;
    const double step = std::log(s_max / s_lo) / static_cast<double>(n - 2);
    for (std::size_t i = 1; i < n; ++i)
        s[i] = s_lo * std::exp(static_cast<double>(i - 1) * step);
    s[n - 1] = s_max;
    return s;
}

struct LocalOpt {
    double s = 0.0;
    double theta = 0.0;
    double value = 0.0;
    std::size_t evals = 0;
};

// Coordinate descent with shrinking steps: per sweep try +-step in each
// coordinate, accept strict improvements, halve both steps on a sweep with no
// move. Monotone by construction.
inline LocalOpt pattern_search(const std::function<double(double, double)>& f, bool maximize,
                               double s0, double theta0, double ds0, double dtheta0, double s_hi,
                               std::size_t sweeps) {
    const double sign = maximize ? -1.0 : 1.0;
    LocalOpt cur{s0, theta0, 0.0, 0};
    double fcur = sign * f(s0, theta0);
    ++cur.evals;
    double ds = ds0, dth = dtheta0;
    for (std::size_t k = 0; k < sweeps; ++k) {
        bool improved = false;
        for (double cand : {cur.s + ds, cur.s - ds}) {
            const double sc = std::clamp(cand, 0.0, s_hi);
            if (sc == cur.s) continue;
            const double fv = sign * f(sc, cur.theta);
            ++cur.evals;
            if (fv < fcur) {
                cur.s = sc;
                fcur = fv;
                improved = true;
                break;
            }
        }
        for (double cand : {cur.theta + dth, cur.theta - dth}) {
            const double tc = std::clamp(cand, 0.0, pi);
            if (tc == cur.theta) continue;
            const double fv = sign * f(cur.s, tc);
            ++cur.evals;
            if (fv < fcur) {
                cur.theta = tc;
                fcur = fv;
                improved = true;
                break;
            }
        }
        if (!improved) {
            ds *= 0.5;
            dth *= 0.5;
            if (ds <= 1e-15 * (1.0 + cur.s) && dth <= 1e-15) break;
        }
    }
    cur.value = sign * fcur;
    return cur;
}

struct GridScan {
    std::vector<double> s, theta;
    std::vector<std::tuple<double, std::size_t, std::size_t>> top;  // (value, i, j), best first
    std::size_t best_i = 0, best_j = 0;
    std::size_t evals = 0;
};

// Row-major scan; ties go to the first hit (smaller s, then smaller theta).
inline GridScan scan_reduced_grid(const std::function<double(double, double)>& f, bool maximize,
                                  double s_max, std::size_t ns, std::size_t nt,
                                  std::size_t keep) {
    const double sign = maximize ? -1.0 : 1.0;
    GridScan scan;
    scan.s = reduced_s_grid(1e-3, s_max, ns);
    scan.theta.resize(nt);
    for (std::size_t j = 0; j < nt; ++j)
        scan.theta[j] = pi * static_cast<double>(j) / static_cast<double>(nt - 1);
    std::vector<std::tuple<double, std::size_t, std::size_t>> all;
    all.reserve(ns * nt);
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j)
            all.emplace_back(sign * f(scan.s[i], scan.theta[j]), i, j);
    scan.evals = all.size();
    const std::size_t k = std::min(keep, all.size());
    // stable ranking: by value, then row-major position
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
    all.resize(k);
    for (auto& [v, i, j] : all) v *= sign;
    scan.top = std::move(all);
    scan.best_i = std::get<1>(scan.top.front());
    scan.best_j = std::get<2>(scan.top.front());
    return scan;
}

inline ConstantEstimate refine_from_scan(const std::function<double(double, double)>& f,
                                         bool maximize, const GridScan& scan, double s_max,
                                         double tol, std::size_t sweeps) {
    const double dtheta0 = scan.theta[1] - scan.theta[0];
    LocalOpt best;
    bool first = true;
    std::size_t evals = scan.evals;
    for (const auto& [v0, i, j] : scan.top) {
        const double s0 = scan.s[i];
        const double ds0 = std::max(0.03 * s0, 5e-4);  // about one geometric cell
        const auto loc = pattern_search(f, maximize, s0, scan.theta[j], ds0, dtheta0, s_max, sweeps);
        evals += loc.evals;
        const bool better = maximize ? loc.value > best.value : loc.value < best.value;
        if (first || better) {
            best = loc;
            first = false;
        }
    }
    ConstantEstimate est;
    est.value = best.value;
    est.witness_s = best.s;
    est.witness_theta = best.theta;
    est.witness = VecPair{{1.0, 0.0}, {best.s * std::cos(best.theta), best.s * std::sin(best.theta)}};
    est.samples = evals;
    est.refinement_tol = tol;
    return est;
}

}  // namespace detail

// Coarse 512 x 512 scan of g over [0, s_max] x [0, pi], then coordinate
// descent from the best seeds. Returns an upper bound on the infimum together
// with its witness. For p > 2, g grows like s^{p-2} at large s, so a minimum
// sitting on the s = s_max edge means the box is wrong — that is an error,
// checked at run time. (At p = 2, g is identically 1 and the check is vacuous.)
inline ConstantEstimate estimate_optimal_c(double p, double tol = 1e-6, double s_max = 1e3,
                                           std::size_t grid_n = 512, std::size_t sweeps = 40,
                                           std::size_t n_seeds = 20) {
    require(p >= 2.0, "estimate_optimal_c: needs p >= 2");
    require(tol > 0.0, "estimate_optimal_c: needs tol > 0");
    require(s_max > 1.0 && grid_n >= 8, "estimate_optimal_c: degenerate search box");
    auto f = [p](double s, double th) { return reduced_T(s, th, p); };
    const auto scan = detail::scan_reduced_grid(f, false, s_max, grid_n, grid_n, n_seeds);
    if (p > 2.0 && scan.best_i == grid_n - 1)
        throw std::domain_error("estimate_optimal_c: minimum on the s = s_max edge; enlarge s_max");
    auto est = detail::refine_from_scan(f, false, scan, s_max, tol, sweeps);
    est.bound_direction = BoundDirection::upper_bound_on_inf;
    return est;
}

// Randomized check of T(x,y) >= c |x|^p: log-uniform magnitudes in
// [1e-6, 1e6], uniform angles, fixed default seed. Returns the first
// violating pair (slack 1e-12 absolute), or nothing.
inline std::optional<VecPair> verify_lower_bound(double p, double c, std::size_t n_samples,
                                                 std::uint64_t seed = default_search_seed) {
    require(p >= 2.0, "verify_lower_bound: needs p >= 2");
    require(c > 0.0, "verify_lower_bound: needs c > 0");
    Rng rng(seed);
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double rx = rng.log_uniform(1e-6, 1e6);
        const double ax = rng.uniform(0.0, 2.0 * pi);
        const double ry = rng.log_uniform(1e-6, 1e6);
        const double ay = rng.uniform(0.0, 2.0 * pi);
        const double t = T_from_invariants(rx * rx, ry * ry, rx * ry * std::cos(ax - ay), p);
        if (t < c * std::pow(rx, p) - 1e-12)
            return VecPair{{rx * std::cos(ax), rx * std::sin(ax)},
                           {ry * std::cos(ay), ry * std::sin(ay)}};
    }
    return std::nullopt;
}

// Lower bound on sup T/(|x|^2 (|x|+|y|)^{p-2}) by the same scan, maximizing.
// The ratio tends to p(p-1)/2 as s -> infinity, so the maximizer may sit on
// the s = s_max edge with the growth already stalled; genuine growth at the
// edge (wrong normalization) is an error.
inline ConstantEstimate estimate_equivalence_sup(double p, double tol = 1e-6, double s_max = 1e3,
                                                 std::size_t grid_n = 512, std::size_t sweeps = 40,
                                                 std::size_t n_seeds = 20) {
    require(p >= 2.0, "estimate_equivalence_sup: needs p >= 2");
    require(tol > 0.0, "estimate_equivalence_sup: needs tol > 0");
    require(s_max > 1.0 && grid_n >= 8, "estimate_equivalence_sup: degenerate search box");
    auto f = [p](double s, double th) { return equivalence_ratio(s, th, p); };
    const auto scan = detail::scan_reduced_grid(f, true, s_max, grid_n, grid_n, n_seeds);
    if (scan.best_i == grid_n - 1) {
        const double th = scan.theta[scan.best_j];
        const double edge = f(s_max, th), half = f(0.5 * s_max, th);
        if (edge > 1.10 * half)
            throw std::domain_error(
                "estimate_equivalence_sup: ratio still growing at s = s_max; wrong normalization?");
    }
    auto est = detail::refine_from_scan(f, true, scan, s_max, tol, sweeps);
    est.bound_direction = BoundDirection::lower_bound_on_sup;
    return est;
}

}  // namespace hardylab
