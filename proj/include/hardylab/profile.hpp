#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hardylab/common.hpp"
#include "hardylab/grid.hpp"

namespace hardylab {

// Closed-form radial profile: value and exact derivative, the support
// interval, and the interior breakpoints where the formula switches piece
// (quadrature panels must end there; derivatives may jump across them).
struct RadialProfile {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    double support_lo = 0.0;
    double support_hi = std::numeric_limits<double>::infinity();
    std::vector<double> breakpoints;  // ascending, includes finite support ends

    double operator()(double r) const { return value(r); }
};

// --- cutoff sequences ---
//
// plateau_log(eps): 1 on [0, 1/eps], log ramp down to 0 across [1/eps, 1/eps^2].
// Drives the free p-energy to 0 for p >= d.
inline RadialProfile plateau_log_cutoff(double eps) {
    require(eps > 0.0 && eps < 1.0, "plateau_log_cutoff: needs 0 < eps < 1");
    const double L = std::log(1.0 / eps);
    const double a = 1.0 / eps, b = 1.0 / (eps * eps);
    RadialProfile u;
    u.support_lo = 0.0;
    u.support_hi = b;
    u.breakpoints = {a, b};
    u.value = [=](double r) {
        if (r <= a) return 1.0;
        if (r >= b) return 0.0;
        return std::log(1.0 / (eps * eps * r)) / L;
    };
    u.deriv = [=](double r) {
        if (r <= a || r >= b) return 0.0;
        return -1.0 / (L * r);
    };
    return u;
}

// hardy_log(eps): 0 outside [eps^2, 1/eps^2], log ramps on [eps^2, eps] and
// [1/eps, 1/eps^2], plateau 1 on [eps, 1/eps]. Multiplied by r^{-(d-p)/p}
// it exhausts the sharp Hardy constant for 1 < p < d.
inline RadialProfile hardy_log_cutoff(double eps) {
    require(eps > 0.0 && eps < 1.0, "hardy_log_cutoff: needs 0 < eps < 1");
    const double L = std::log(1.0 / eps);
    const double e2 = eps * eps, a = eps, b = 1.0 / eps, c = 1.0 / (eps * eps);
    RadialProfile u;
    u.support_lo = e2;
    u.support_hi = c;
    u.breakpoints = {e2, a, b, c};
    u.value = [=](double r) {
        if (r <= e2 || r >= c) return 0.0;
        if (r < a) return std::log(r / e2) / L;
        if (r <= b) return 1.0;
        return std::log(1.0 / (e2 * r)) / L;
    };
    u.deriv = [=](double r) {
        if (r <= e2 || r >= c) return 0.0;
        if (r < a) return 1.0 / (L * r);
        if (r <= b) return 0.0;
        return -1.0 / (L * r);
    };
    return u;
}

// --- elementary profiles ---

inline RadialProfile power_profile(double a) {
    RadialProfile u;
    u.value = [a](double r) { return std::pow(r, a); };
    u.deriv = [a](double r) { return a * std::pow(r, a - 1.0); };
    return u;
}

// (log(r/R))^alpha on r > R (exterior supersolution family).
inline RadialProfile log_power_profile(double alpha, double R) {
    require(R > 0.0, "log_power_profile: needs R > 0");
    RadialProfile u;
    u.support_lo = R;
    u.breakpoints = {R};
    u.value = [=](double r) {
        if (r <= R) return 0.0;
        return std::pow(std::log(r / R), alpha);
    };
    u.deriv = [=](double r) {
        if (r <= R) return 0.0;
        const double s = std::log(r / R);
        return alpha * std::pow(s, alpha - 1.0) / r;
    };
    return u;
}

// C-infinity bump in log-radius: exp(-1/(1-s^2)), s = log(r/center)/width.
// Compact support [center e^{-width}, center e^{width}]; all derivatives
// vanish at the support ends, so trapezoid quadrature of it is spectrally
// accurate.
inline RadialProfile smooth_log_bump(double center, double width) {
    require(center > 0.0 && width > 0.0, "smooth_log_bump: needs center, width > 0");
    const double lo = center * std::exp(-width), hi = center * std::exp(width);
    RadialProfile u;
    u.support_lo = lo;
    u.support_hi = hi;
    u.breakpoints = {lo, hi};
    u.value = [=](double r) {
        const double s = std::log(r / center) / width;
        if (std::abs(s) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - s * s));
    };
    u.deriv = [=](double r) {
        const double s = std::log(r / center) / width;
        if (std::abs(s) >= 1.0) return 0.0;
        const double q = 1.0 - s * s;
        const double v = std::exp(-1.0 / q);
        return v * (-2.0 * s / (q * q)) / (width * r);
    };
    return u;
}

// r^a (1 - r/R)_+^k e^{-sigma r}: the smooth power/exponential cutoff family.
inline RadialProfile power_exp_cutoff(double a, double k, double sigma, double R) {
    require(R > 0.0 && k >= 0.0 && sigma >= 0.0, "power_exp_cutoff: bad parameters");
    RadialProfile u;
    u.support_lo = 0.0;
    u.support_hi = R;
    u.breakpoints = {R};
    u.value = [=](double r) {
        if (r >= R) return 0.0;
        return std::pow(r, a) * std::pow(1.0 - r / R, k) * std::exp(-sigma * r);
    };
    u.deriv = [=](double r) {
        if (r >= R) return 0.0;
        const double cut = 1.0 - r / R;
        const double v = std::pow(r, a) * std::pow(cut, k) * std::exp(-sigma * r);
        double logd = a / r - sigma;
        if (k > 0.0) logd -= k / (R * cut);
        return v * logd;
    };
    return u;
}

// --- combinators ---

inline RadialProfile scale_profile(double c, RadialProfile u) {
    RadialProfile w = u;
    auto uv = u.value, ud = u.deriv;
    w.value = [=](double r) { return c * uv(r); };
    w.deriv = [=](double r) { return c * ud(r); };
    return w;
}

// u(lambda r): support and breakpoints shrink by 1/lambda.
inline RadialProfile dilate_profile(const RadialProfile& u, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("dilate_profile: needs lambda > 0");
    RadialProfile w;
    auto uv = u.value, ud = u.deriv;
    w.value = [=](double r) { return uv(lambda * r); };
    w.deriv = [=](double r) { return lambda * ud(lambda * r); };
    w.support_lo = u.support_lo / lambda;
    w.support_hi = u.support_hi / lambda;
    w.breakpoints.reserve(u.breakpoints.size());
    for (double b : u.breakpoints) w.breakpoints.push_back(b / lambda);
    return w;
}

inline RadialProfile product_profile(const RadialProfile& u, const RadialProfile& v) {
    RadialProfile w;
    w.support_lo = std::max(u.support_lo, v.support_lo);
    w.support_hi = std::min(u.support_hi, v.support_hi);
    w.breakpoints = u.breakpoints;
    for (double b : v.breakpoints) w.breakpoints.push_back(b);
    std::sort(w.breakpoints.begin(), w.breakpoints.end());
    w.breakpoints.erase(std::unique(w.breakpoints.begin(), w.breakpoints.end()),
                        w.breakpoints.end());
    auto uv = u.value, ud = u.deriv, vv = v.value, vd = v.deriv;
    w.value = [=](double r) { return uv(r) * vv(r); };
    w.deriv = [=](double r) { return ud(r) * vv(r) + uv(r) * vd(r); };
    return w;
}

inline RadialProfile sum_profile(std::vector<RadialProfile> parts) {
    require(!parts.empty(), "sum_profile: empty sum");
    RadialProfile w;
    w.support_lo = std::numeric_limits<double>::infinity();
    w.support_hi = 0.0;
    for (const auto& u : parts) {
        w.support_lo = std::min(w.support_lo, u.support_lo);
        w.support_hi = std::max(w.support_hi, u.support_hi);
        for (double b : u.breakpoints) w.breakpoints.push_back(b);
    }
    std::sort(w.breakpoints.begin(), w.breakpoints.end());
    w.breakpoints.erase(std::unique(w.breakpoints.begin(), w.breakpoints.end()),
                        w.breakpoints.end());
    auto parts_ptr = std::make_shared<std::vector<RadialProfile>>(std::move(parts));
    w.value = [parts_ptr](double r) {
        double s = 0.0;
        for (const auto& u : *parts_ptr) s += u.value(r);
        return s;
    };
    w.deriv = [parts_ptr](double r) {
        double s = 0.0;
        for (const auto& u : *parts_ptr) s += u.deriv(r);
        return s;
    };
    return w;
}

// Quadrature breakpoints of a profile clipped to [lo, hi] with the interval
// ends included; used to integrate piecewise-analytic integrands built from
// the profile. Integrands are evaluated a hair inside each piece (relative
// nudge 1e-12) so one-sided derivative values at kinks are the ones used.
inline std::vector<double> quadrature_breakpoints(const RadialProfile& u, double lo, double hi) {
    require(lo > 0.0 && lo < hi, "quadrature_breakpoints: needs 0 < lo < hi");
    std::vector<double> pts{lo};
    for (double b : u.breakpoints)
        if (b > lo && b < hi) pts.push_back(b);
    pts.push_back(hi);
    return pts;
}

inline double integrate_profile_piecewise(const std::function<double(double)>& integrand,
                                          std::span<const double> breakpoints,
                                          std::size_t n_per_piece) {
    require(breakpoints.size() >= 2, "integrate_profile_piecewise: needs at least one piece");
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
        const double a = breakpoints[k] * (1.0 + 1e-12);
        const double b = breakpoints[k + 1] * (1.0 - 1e-12);
        require(a < b, "integrate_profile_piecewise: degenerate piece");
        total += integrate_log_trapezoid(integrand, a, b, n_per_piece);
    }
    return total;
}

}  // namespace hardylab
