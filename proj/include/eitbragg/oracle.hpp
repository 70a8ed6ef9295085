#pragma once

// Direct numerical integration of the coupled-mode equations, used to check
// the closed-form boundary-value solution. The z-dependent phase factors are
// kept explicitly; R and T computed here do not touch the closed form (only
// the reported s and delta_beta diagnostics are borrowed from cmt.hpp).
//
// Integration runs backwards from z = L with the terminal state
// (E+, E-) = (1, 0). Linearity turns this single pass into the exact
// two-point solution after rescaling by E+(0).

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "eitbragg/cmt.hpp"
#include "eitbragg/constants.hpp"

namespace eitbragg {

struct OdeSettings {
    int n_steps = 32768;  // fixed-step classical RK4
};

struct OracleResult {
    BvpSolution solution;
    bool saturated = false;  // |E+(0)| beyond double range: T reported as 0
};

struct TrajectoryPoint {
    double z = 0.0;
    complex forward;
    complex backward;
};

namespace detail {

using ModeState = std::array<complex, 2>;

inline constexpr double renorm_threshold = 1e150;

inline void check_settings(const OdeSettings& settings, double length) {
    if (settings.n_steps < 1000)
        throw std::invalid_argument("OdeSettings.n_steps must be >= 1000");
    if (!(length > 0.0))
        throw std::invalid_argument("integrate_bvp: length must be > 0");
}

inline ModeState rhs(const CmtCoefficients& c, double z, const ModeState& e) {
    const complex carrier = std::polar(1.0, 2.0 * c.mismatch * z);  // exp(+2 i mismatch z)
    return {I * c.self_coupling * e[0] + I * c.cross_fwd * e[1] * std::conj(carrier),
            -I * c.self_coupling * e[1] - I * c.cross_bwd * e[0] * carrier};
}

inline ModeState rk4_step(const CmtCoefficients& c, double z, double h, const ModeState& e) {
    auto axpy = [](const ModeState& x, complex a, const ModeState& y) {
        return ModeState{x[0] + a * y[0], x[1] + a * y[1]};
    };
    const ModeState k1 = rhs(c, z, e);
    const ModeState k2 = rhs(c, z + 0.5 * h, axpy(e, 0.5 * h, k1));
    const ModeState k3 = rhs(c, z + 0.5 * h, axpy(e, 0.5 * h, k2));
    const ModeState k4 = rhs(c, z + h, axpy(e, h, k3));
    return {e[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            e[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

// Keeps the state inside double range; returns the log of the factor removed.
inline double renormalize(ModeState& e) {
    const double mag = std::max(std::abs(e[0]), std::abs(e[1]));
    if (mag < renorm_threshold)
        return 0.0;
    e[0] /= mag;
    e[1] /= mag;
    return std::log(mag);
}

}  // namespace detail

inline OracleResult integrate_bvp(const CmtCoefficients& c, double length, const OdeSettings& settings = {}) {
    detail::check_settings(settings, length);
    const double h = -length / settings.n_steps;
    detail::ModeState e{complex{1.0}, complex{0.0}};
    double log_scale = 0.0;
    for (int i = 0; i < settings.n_steps; ++i) {
        const double z = length + i * h;
        e = detail::rk4_step(c, z, h, e);
        log_scale += detail::renormalize(e);
    }

    OracleResult out;
    auto& sol = out.solution;
    sol.delta_beta = delta_beta(c);
    sol.s_param = coupling_root(c);
    sol.k_minus_ks = I * sol.s_param;
    sol.r = std::norm(e[1] / e[0]);
    // T = |E+(L)/E+(0)|^2 with E+(L) = 1 before rescaling.
    const double log_t = -2.0 * (std::log(std::abs(e[0])) + log_scale);
    sol.t = std::exp(log_t);
    out.saturated = log_scale > 0.0 && sol.t == 0.0;
    sol.a = std::max(0.0, 1.0 - sol.r - sol.t);
    return out;
}

/// Stored trajectory on every `stride`-th step, normalized to E+(0) = 1.
/// Only meaningful when the state never needed renormalization.
inline std::vector<TrajectoryPoint> integrate_trajectory(const CmtCoefficients& c, double length,
                                                         const OdeSettings& settings = {}, int stride = 64) {
    detail::check_settings(settings, length);
    if (stride < 1)
        throw std::invalid_argument("integrate_trajectory: stride must be >= 1");
    const double h = -length / settings.n_steps;
    detail::ModeState e{complex{1.0}, complex{0.0}};
    std::vector<TrajectoryPoint> points{{length, e[0], e[1]}};
    for (int i = 0; i < settings.n_steps; ++i) {
        e = detail::rk4_step(c, length + i * h, h, e);
        if (detail::renormalize(e) != 0.0)
            throw std::runtime_error("integrate_trajectory: amplitudes exceed double range");
        if ((i + 1) % stride == 0 || i + 1 == settings.n_steps)
            points.push_back({length + (i + 1) * h, e[0], e[1]});
    }
    const complex norm = points.back().forward;
    for (auto& p : points) {
        p.forward /= norm;
        p.backward /= norm;
    }
    // Ascending in z.
    std::reverse(points.begin(), points.end());
    points.front().z = 0.0;
    return points;
}

}  // namespace eitbragg
