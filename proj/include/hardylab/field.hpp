#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "hardylab/grid.hpp"
#include "hardylab/profile.hpp"

namespace hardylab {

using cplx = std::complex<double>;

// ===== weights =====
//
// The weight kinds that appear in the inequalities under study. eval() is the
// pointwise density; every kind is nonnegative wherever it is defined.
struct WeightSpec {
    enum class Kind {
        inverse_power,  // 1/|x|^p
        log_damped,     // 1/(1 + |x|^d |log|x||^d)      (p = d regime)
        poly_damped,    // 1/(1 + |x|^p)                 (p > d regime)
        exterior_log,   // 1/(|x|^p log^p(|x|/R)) on |x| > R
        sampled,        // arbitrary nonnegative samples on a grid
    };

    Kind kind = Kind::inverse_power;
    double p = 2.0;
    int d = 2;
    double R = 1.0;                // exterior_log only
    std::vector<double> samples;   // sampled only, one per radial node

    double eval(double r) const {
        switch (kind) {
            case Kind::inverse_power:
                return std::pow(r, -p);
            case Kind::log_damped:
                return 1.0 / (1.0 + std::pow(r * std::abs(std::log(r)), static_cast<double>(d)));
            case Kind::poly_damped:
                return 1.0 / (1.0 + std::pow(r, p));
            case Kind::exterior_log: {
                if (r <= R) throw std::domain_error("exterior_log weight: needs r > R");
                return 1.0 / std::pow(r * std::log(r / R), p);
            }
            case Kind::sampled:
                throw std::logic_error("sampled weight has no closed form; index the samples");
        }
        throw std::logic_error("WeightSpec: unknown kind");
    }

    double at_node(const RadialGrid& g, std::size_t i) const {
        if (kind == Kind::sampled) {
            require(samples.size() == g.size(), "sampled weight: size mismatch with grid");
            if (samples[i] < 0.0) throw std::domain_error("sampled weight: negative value");
            return samples[i];
        }
        return eval(g.nodes[i]);
    }
};

inline WeightSpec inverse_power_weight(double p) {
    WeightSpec w;
    w.kind = WeightSpec::Kind::inverse_power;
    w.p = p;
    return w;
}

inline WeightSpec log_damped_weight(int d) {
    WeightSpec w;
    w.kind = WeightSpec::Kind::log_damped;
    w.d = d;
    return w;
}

inline WeightSpec poly_damped_weight(double p) {
    WeightSpec w;
    w.kind = WeightSpec::Kind::poly_damped;
    w.p = p;
    return w;
}

inline WeightSpec exterior_log_weight(double p, double R) {
    WeightSpec w;
    w.kind = WeightSpec::Kind::exterior_log;
    w.p = p;
    w.R = R;
    return w;
}

// ===== sampled fields =====

struct RadialField {
    std::shared_ptr<const RadialGrid> grid;
    std::vector<cplx> values;
    bool compactly_supported = false;

    std::size_t size() const { return values.size(); }
};

struct PolarField {
    std::shared_ptr<const PolarGrid> grid;
    std::vector<cplx> values;  // r-major: values[i * n_theta + j]
    bool compactly_supported = false;

    cplx at(std::size_t i, std::size_t j) const { return values[grid->index(i, j)]; }
    cplx& at(std::size_t i, std::size_t j) { return values[grid->index(i, j)]; }
};

inline void check_compact_support(const RadialField& u) {
    require(u.values.size() == u.grid->size(), "field/grid size mismatch");
    const double scale = [&] {
        double m = 0.0;
        for (const auto& v : u.values) m = std::max(m, std::abs(v));
        return m;
    }();
    if (std::abs(u.values.front()) > 1e-12 * scale || std::abs(u.values.back()) > 1e-12 * scale)
        throw std::invalid_argument("field marked compactly supported must vanish at the end nodes");
}

inline RadialField sample_on(const RadialProfile& u, std::shared_ptr<const RadialGrid> grid) {
    require(grid != nullptr, "sample_on: null grid");
    if (std::isfinite(u.support_hi) && u.support_lo > 0.0)
        require(grid->covers(u.support_lo, u.support_hi),
                "sample_on: grid does not cover the profile support");
    RadialField f;
    f.grid = std::move(grid);
    f.values.resize(f.grid->size());
    for (std::size_t i = 0; i < f.grid->size(); ++i) f.values[i] = u.value(f.grid->nodes[i]);
    f.compactly_supported = u.support_lo > f.grid->r_min() && u.support_hi < f.grid->r_max();
    return f;
}

// ===== closed-form polar functions =====
//
// Complex function of (r, theta) with exact partial derivatives; the analytic
// route for checks whose tolerances sit below finite-difference error.
struct PolarFn {
    std::function<cplx(double, double)> value;
    std::function<cplx(double, double)> d_r;
    std::function<cplx(double, double)> d_theta;
};

// f(r) e^{i n theta} for a closed-form radial factor.
inline PolarFn mode_fn(const RadialProfile& f, int n) {
    auto fv = f.value, fd = f.deriv;
    PolarFn u;
    u.value = [=](double r, double th) { return fv(r) * std::polar(1.0, n * th); };
    u.d_r = [=](double r, double th) { return fd(r) * std::polar(1.0, n * th); };
    u.d_theta = [=](double r, double th) {
        return cplx(0.0, static_cast<double>(n)) * fv(r) * std::polar(1.0, n * th);
    };
    return u;
}

inline PolarFn conjugate_fn(const PolarFn& u) {
    auto v = u.value, vr = u.d_r, vt = u.d_theta;
    PolarFn w;
    w.value = [=](double r, double th) { return std::conj(v(r, th)); };
    w.d_r = [=](double r, double th) { return std::conj(vr(r, th)); };
    w.d_theta = [=](double r, double th) { return std::conj(vt(r, th)); };
    return w;
}

inline PolarFn sum_fn(std::vector<PolarFn> parts) {
    require(!parts.empty(), "sum_fn: empty sum");
    auto ptr = std::make_shared<std::vector<PolarFn>>(std::move(parts));
    PolarFn w;
    w.value = [ptr](double r, double th) {
        cplx s{};
        for (const auto& u : *ptr) s += u.value(r, th);
        return s;
    };
    w.d_r = [ptr](double r, double th) {
        cplx s{};
        for (const auto& u : *ptr) s += u.d_r(r, th);
        return s;
    };
    w.d_theta = [ptr](double r, double th) {
        cplx s{};
        for (const auto& u : *ptr) s += u.d_theta(r, th);
        return s;
    };
    return w;
}

inline PolarField sample_on(const PolarFn& u, std::shared_ptr<const PolarGrid> grid) {
    require(grid != nullptr, "sample_on: null grid");
    PolarField f;
    f.grid = std::move(grid);
    f.values.resize(f.grid->size());
    for (std::size_t i = 0; i < f.grid->n_r(); ++i)
        for (std::size_t j = 0; j < f.grid->n_theta; ++j)
            f.values[f.grid->index(i, j)] = u.value(f.grid->radial.nodes[i], f.grid->theta(j));
    return f;
}

// Closed-form vector potential in polar components (A_r, A_theta).
struct VectorPotential {
    std::function<double(double, double)> A_r;
    std::function<double(double, double)> A_theta;
};

// Aharonov-Bohm flux beta: A = beta (x2, -x1)/|x|^2 = -(beta/r) e_theta.
inline VectorPotential ab_potential(double beta) {
    VectorPotential A;
    A.A_r = [](double, double) { return 0.0; };
    A.A_theta = [beta](double r, double) { return -beta / r; };
    return A;
}

// Constant magnetic field b: A = b (-x2, x1)/2 = (b r / 2) e_theta.
inline VectorPotential constant_field_potential(double b) {
    VectorPotential A;
    A.A_r = [](double, double) { return 0.0; };
    A.A_theta = [b](double r, double) { return 0.5 * b * r; };
    return A;
}

// Real gauge function with exact polar gradient (d_r phi, (1/r) d_theta phi).
struct GaugeFn {
    std::function<double(double, double)> value;
    std::function<double(double, double)> grad_r;
    std::function<double(double, double)> grad_theta_over_r;
};

}  // namespace hardylab
