#pragma once

// Two-mode coupled-mode theory for a probe in a periodic medium:
//
//   dE+/dz =  i self E+ + i cross_fwd E- exp(-2 i mismatch z)
//   dE-/dz = -i self E- - i cross_bwd E+ exp(+2 i mismatch z)
//
// with E+(0) = E_in and E-(L) = 0. The closed-form solution is written in
// terms of cosh(sL) and sinh(sL)/(sL), which is even in s, so no branch of
// the square root is preferred and the s -> 0 degeneracy has no 0/0.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eitbragg/constants.hpp"
#include "eitbragg/lattice.hpp"
#include "eitbragg/medium.hpp"

namespace eitbragg {

struct CmtCoefficients {
    complex self_coupling;  // alpha or alpha'
    complex cross_fwd;      // couples E- into E+
    complex cross_bwd;      // couples E+ into E-
    double mismatch = 0.0;  // omega/c - k_s
};

struct BvpSolution {
    double r = 0.0;
    double t = 0.0;
    double a = 0.0;
    complex s_param;
    complex delta_beta;
    complex k_minus_ks;  // Bloch wave vector relative to k_s, K - k_s = i s

    double re_k_minus_ks() const { return k_minus_ks.real(); }
    double im_k() const { return k_minus_ks.imag(); }
    complex bloch_k(double k_s) const { return k_s + k_minus_ks; }
};

struct FieldSample {
    complex forward;
    complex backward;
};

/// Cold atoms in a lattice: self = alpha, cross = alpha * kappa_{+-1},
/// mismatch = (Delta - delta_s)/c.
inline CmtCoefficients build_cold(const EitMedium& m, const LatticeGeometry& geom, const Detunings& d) {
    const complex a = alpha_cold(m, d);
    return {a, a * kappa(geom, 1), a * kappa(geom, -1), (d.delta - delta_s(geom)) / speed_of_light};
}

/// Thermal gas with standing-wave ac Stark modulation; `mean` are the mean
/// detunings Delta', Delta_R' and `mismatch` is (Delta' - delta_s)/c.
inline CmtCoefficients build_thermal(const EitMedium& m, const StarkModulation& st, const Detunings& mean,
                                     double mismatch) {
    const auto [alpha_prime, eta] = alpha_eta_thermal(m, st, mean);
    return {alpha_prime, eta, eta, mismatch};
}

inline complex delta_beta(const CmtCoefficients& c) { return c.self_coupling + c.mismatch; }

/// Principal root s = sqrt(cross_fwd cross_bwd - delta_beta^2), Re s >= 0.
inline complex coupling_root(const CmtCoefficients& c) {
    const complex db = delta_beta(c);
    return std::sqrt(c.cross_fwd * c.cross_bwd - db * db);
}

namespace detail {

inline constexpr double overflow_guard = 300.0;
inline constexpr double series_cutoff = 1e-4;
inline constexpr double energy_tolerance = 1e-9;

// cosh(x) = exp(log_scale) * cosh_part and sinh(x)/x = exp(log_scale) * shc_part.
struct ScaledHyperbolic {
    complex cosh_part;
    complex shc_part;
    double log_scale = 0.0;
};

inline ScaledHyperbolic scaled_hyperbolic(complex x) {
    if (std::abs(x.real()) <= overflow_guard) {
        complex shc;
        if (std::abs(x) < series_cutoff) {
            const complex x2 = x * x;
            shc = 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
        } else {
            shc = std::sinh(x) / x;
        }
        return {std::cosh(x), shc, 0.0};
    }
    // Both functions are even; factor exp(|Re x|) out analytically.
    const complex y = x.real() > 0.0 ? x : -x;
    const complex decay = std::exp(-2.0 * y);
    const complex phase = std::polar(1.0, y.imag());
    return {0.5 * phase * (1.0 + decay), 0.5 * phase * (1.0 - decay) / y, y.real()};
}

/// Boundary-value solution for an explicitly supplied root s (either branch).
inline BvpSolution evaluate_bvp(const CmtCoefficients& c, double length, complex s) {
    const complex db = delta_beta(c);
    const auto h = scaled_hyperbolic(s * length);
    const complex den = h.cosh_part - I * db * length * h.shc_part;
    const double den2 = std::norm(den);

    BvpSolution out;
    out.s_param = s;
    out.delta_beta = db;
    out.k_minus_ks = I * s;
    out.r = std::norm(c.cross_bwd * length * h.shc_part) / den2;
    out.t = std::exp(-2.0 * h.log_scale) / den2;

    const double a = 1.0 - out.r - out.t;
    if (!(a >= -energy_tolerance))
        throw std::logic_error("solve_bvp: R + T exceeds 1 by more than 1e-9 (R=" + std::to_string(out.r) +
                               ", T=" + std::to_string(out.t) + "); coefficients are not passive");
    out.a = std::clamp(a, 0.0, 1.0);
    return out;
}

}  // namespace detail

/// Reflection, transmission and absorption of a slab of length L, plus the
/// complex Bloch wave vector of the infinite structure.
inline BvpSolution solve_bvp(const CmtCoefficients& c, double length) {
    if (!(length > 0.0))
        throw std::invalid_argument("solve_bvp: length must be > 0");
    return detail::evaluate_bvp(c, length, coupling_root(c));
}

/// Mode amplitudes E+(z), E-(z) for unit input, including the
/// exp(-+ i mismatch z) carrier factors.
inline std::vector<FieldSample> field_profile(const CmtCoefficients& c, double length,
                                              std::span<const double> z_grid) {
    if (!(length > 0.0))
        throw std::invalid_argument("field_profile: length must be > 0");
    const complex s = coupling_root(c);
    const complex db = delta_beta(c);
    const auto h_full = detail::scaled_hyperbolic(s * length);
    const complex den = h_full.cosh_part - I * db * length * h_full.shc_part;

    std::vector<FieldSample> out;
    out.reserve(z_grid.size());
    for (double z : z_grid) {
        if (!(z >= 0.0 && z <= length))
            throw std::invalid_argument("field_profile: z = " + std::to_string(z) + " outside [0, L]");
        if (z == 0.0) {
            out.push_back({1.0, I * c.cross_bwd * length * h_full.shc_part / den});
            continue;
        }
        const double rest = length - z;
        const auto h = detail::scaled_hyperbolic(s * rest);
        const double scale = std::exp(h.log_scale - h_full.log_scale);
        const complex fwd = (h.cosh_part - I * db * rest * h.shc_part) / den;
        const complex bwd = I * c.cross_bwd * rest * h.shc_part / den;
        out.push_back({std::polar(scale, -c.mismatch * z) * fwd, std::polar(scale, c.mismatch * z) * bwd});
    }
    return out;
}

}  // namespace eitbragg
