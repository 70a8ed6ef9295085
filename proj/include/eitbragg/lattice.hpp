#pragma once

// 1D optical-lattice geometry and the Fourier content of the on-site atomic
// density. Lengths in m, frequencies in rad/s.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eitbragg/constants.hpp"
#include "eitbragg/medium.hpp"

namespace eitbragg {

struct LatticeGeometry {
    double lambda_lat = 0.0;  // period Lambda = pi / k_s
    double delta_r = 0.0;     // Gaussian localization width
    int n_periods = 0;
    double omega_eg = 0.0;    // atomic transition frequency
    std::optional<double> atomic_mass;  // kg

    double k_s() const { return pi / lambda_lat; }
    double reciprocal() const { return 2.0 * pi / lambda_lat; }  // g = 2 k_s
    double length() const { return n_periods * lambda_lat; }
};

inline constexpr int max_harmonic = 16;

inline void validate(const LatticeGeometry& geom) {
    if (!(geom.lambda_lat > 0.0) || !std::isfinite(geom.lambda_lat))
        throw std::invalid_argument("lattice.lambda_lat must be finite and > 0");
    if (!(geom.delta_r > 0.0) || !std::isfinite(geom.delta_r))
        throw std::invalid_argument("lattice.delta_r must be finite and > 0");
    if (geom.delta_r >= 0.5 * geom.lambda_lat)
        throw std::invalid_argument("lattice.delta_r must be < lambda_lat/2 (neighbouring sites overlap)");
    if (geom.n_periods <= 0)
        throw std::invalid_argument("lattice.n_periods must be > 0");
    if (!(geom.omega_eg > 0.0) || !std::isfinite(geom.omega_eg))
        throw std::invalid_argument("lattice.omega_eg must be finite and > 0");
    if (geom.atomic_mass && !(*geom.atomic_mass > 0.0))
        throw std::invalid_argument("lattice.atomic_mass must be > 0");
}

namespace detail {
inline void check_harmonic(int l) {
    if (std::abs(l) > max_harmonic)
        throw std::invalid_argument("kappa: |l| must be <= 16, got " + std::to_string(l));
}
}  // namespace detail

/// Fourier coefficient kappa_l of the normalized on-site density
/// |w(z)|^2 = exp(-z^2/dr^2) / (sqrt(pi) dr), extended to the infinite line:
/// kappa_l = exp(-(l g dr)^2 / 4).
inline double kappa(const LatticeGeometry& geom, int l) {
    detail::check_harmonic(l);
    const double x = l * geom.reciprocal() * geom.delta_r;
    return std::exp(-0.25 * x * x);
}

/// Same coefficient integrated numerically over one period [-Lambda/2, Lambda/2].
/// The imaginary part vanishes by parity, so only the cosine transform is taken.
inline double kappa_quadrature(const LatticeGeometry& geom, int l) {
    detail::check_harmonic(l);
    const double dr = geom.delta_r;
    const double g = geom.reciprocal();
    const double norm = 1.0 / (std::sqrt(pi) * dr);
    auto density = [&](double z) {
        const double u = z / dr;
        return norm * std::exp(-u * u) * std::cos(l * g * z);
    };
    // Even integrand: integrate [0, Lambda/2], split where the Gaussian has decayed.
    const double half = 0.5 * geom.lambda_lat;
    const double core = std::min(half, 8.0 * dr);
    using boost::math::quadrature::gauss_kronrod;
    constexpr double tol = 1e-13;
    constexpr unsigned depth = 10;
    double sum = gauss_kronrod<double, 61>::integrate(density, 0.0, core, depth, tol);
    if (core < half) sum += gauss_kronrod<double, 61>::integrate(density, core, half, depth, tol);
    return 2.0 * sum;
}

/// Offset of the lattice Bragg frequency from the atomic line, k_s c - omega_eg.
inline double delta_s(const LatticeGeometry& geom) {
    return geom.k_s() * speed_of_light - geom.omega_eg;
}

struct LocalizationReport {
    bool ok = false;
    double ratio = 0.0;  // delta_r^2 / (hbar / (M gamma_e))
};

/// Tight-localization condition delta_r^2 >> hbar/(M gamma_e); ok when the ratio is >= 10.
inline LocalizationReport localization_validity(const LatticeGeometry& geom, const EitMedium& m) {
    if (!geom.atomic_mass)
        throw std::invalid_argument("localization_validity: lattice.atomic_mass is required");
    const double ratio = geom.delta_r * geom.delta_r * *geom.atomic_mass * m.gamma_e / hbar;
    return {ratio >= 10.0, ratio};
}

inline std::vector<std::string> warnings(const LatticeGeometry& geom) {
    std::vector<std::string> out;
    if (geom.delta_r > 0.25 * geom.lambda_lat)
        out.emplace_back("delta_r > lambda_lat/4: Wannier functions of neighbouring sites start to overlap");
    const double k1 = kappa(geom, 1);
    if (std::abs(kappa_quadrature(geom, 1) - k1) > 1e-6)
        out.emplace_back("kappa_1 closed form and one-period quadrature differ by > 1e-6: "
                         "delta_r too large for the Gaussian model");
    return out;
}

}  // namespace eitbragg
