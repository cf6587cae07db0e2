#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "hardylab/common.hpp"

namespace hardylab {

// Problem parameters shared across the modules. p is the Lebesgue/gradient
// exponent, d the space dimension; beta is an Aharonov-Bohm flux when a
// magnetic task needs one, R a ball/exterior radius.
struct Params {
    double p = 2.0;
    int d = 2;
    std::optional<double> beta{};
    std::optional<double> R{};

    void require_p_in(double lo, double hi) const {
        if (!(p > lo && p < hi))
            throw std::invalid_argument("Params: p outside required open range");
    }
};

inline void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Sharp constant ((d-p)/p)^p of the Hardy inequality, 1 < p < d.
inline double hardy_constant(double p, int d) {
    require(p > 1.0 && p < static_cast<double>(d), "hardy_constant: needs 1 < p < d");
    return std::pow((d - p) / p, p);
}

// |(d-p)/p|^p, the exterior-domain constant for p != d.
inline double exterior_hardy_constant(double p, int d) {
    require(p > 1.0 && p != static_cast<double>(d), "exterior_hardy_constant: needs p != d");
    return std::pow(std::abs((d - p) / p), p);
}

// ((d-1)/d)^d, the constant of the log-weighted exterior inequality at p = d.
inline double exterior_log_constant(int d) {
    require(d >= 2, "exterior_log_constant: needs d >= 2");
    return std::pow((d - 1.0) / d, static_cast<double>(d));
}

// 1/(2^{p-1} - 1): the proven pointwise constant of the p >= 2 expansion bound.
inline double expansion_constant(double p) {
    require(p >= 2.0, "expansion_constant: needs p >= 2");
    return 1.0 / (std::pow(2.0, p - 1.0) - 1.0);
}

// Distance from beta to the nearest integer (AB flux is periodic mod 1).
inline double dist_to_integers(double beta) {
    const double f = beta - std::floor(beta);
    return std::min(f, 1.0 - f);
}

}  // namespace hardylab
