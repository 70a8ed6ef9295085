#pragma once

// Polarizability models of a three-level Lambda medium probed on g<->e and
// driven on s<->e. All rates and detunings are angular frequencies (rad/s),
// polarizabilities are amplitude coefficients in 1/m.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "eitbragg/constants.hpp"

namespace eitbragg {

struct EitMedium {
    double gamma_e = 0.0;  // excited-state half-decay rate
    double gamma_s = 0.0;  // Raman coherence half-decay rate
    double omega_d = 0.0;  // drive Rabi frequency |Omega_d|
    double a0 = 0.0;       // resonant amplitude absorption coefficient sigma0*rho0
};

struct Detunings {
    double delta = 0.0;    // one-photon
    double delta_r = 0.0;  // two-photon (Raman)
};

struct StarkModulation {
    double s_g = 0.0;
    double s_s = 0.0;

    double s_gs() const { return s_g - s_s; }
};

struct ThermalCoefficients {
    complex alpha_prime;  // averaged self-coupling
    complex eta;          // first spatial harmonic, couples the two modes
};

/// Throws std::invalid_argument if a hard invariant of the medium is broken.
inline void validate(const EitMedium& m) {
    if (!(m.gamma_e > 0.0) || !std::isfinite(m.gamma_e))
        throw std::invalid_argument("medium.gamma_e must be finite and > 0");
    if (!(m.a0 > 0.0) || !std::isfinite(m.a0))
        throw std::invalid_argument("medium.a0 must be finite and > 0");
    if (!(m.gamma_s >= 0.0) || !std::isfinite(m.gamma_s))
        throw std::invalid_argument("medium.gamma_s must be finite and >= 0");
    if (!(m.omega_d >= 0.0) || !std::isfinite(m.omega_d))
        throw std::invalid_argument("medium.omega_d must be finite and >= 0");
}

/// Soft regime checks; an empty list means the medium sits in the modelled regime.
inline std::vector<std::string> warnings(const EitMedium& m) {
    std::vector<std::string> out;
    if (m.gamma_s >= m.gamma_e)
        out.emplace_back("gamma_s >= gamma_e: outside the gamma_s << gamma_e EIT regime");
    return out;
}

/// Validity conditions of the averaged thermal model,
/// |Omega_d|^2 >> gamma_e*gamma_s and |Omega_d|^2 >> (S_{g,s}/4)^2, checked at a factor 10.
inline std::vector<std::string> thermal_warnings(const EitMedium& m, const StarkModulation& st) {
    std::vector<std::string> out = warnings(m);
    const double od2 = m.omega_d * m.omega_d;
    if (od2 < 10.0 * m.gamma_e * m.gamma_s)
        out.emplace_back("|Omega_d|^2 < 10 gamma_e gamma_s: thermal coupled-mode reduction is marginal");
    const double sg = 0.25 * st.s_g, ss = 0.25 * st.s_s;
    if (od2 < 10.0 * sg * sg || od2 < 10.0 * ss * ss)
        out.emplace_back("|Omega_d|^2 < 10 (S/4)^2: ac Stark modulation exceeds the EIT regime");
    return out;
}

/// Cold-atom EIT polarizability
///   alpha = i a0 gamma_e / (gamma_e - i Delta + |Omega_d|^2 / (gamma_s - i Delta_R)).
///
/// Evaluated in the cleared-denominator form so that the transparency point
/// gamma_s = Delta_R = 0 returns exactly zero instead of inf/inf. With
/// Omega_d = 0 the two-level Lorentzian is used directly. The fully singular
/// input needs gamma_e = 0 and cannot be reached for a valid medium.
inline complex alpha_cold(const EitMedium& m, const Detunings& d) {
    const complex two_level_den{m.gamma_e, -d.delta};
    if (m.omega_d == 0.0)
        return I * m.a0 * m.gamma_e / two_level_den;
    const complex raman{m.gamma_s, -d.delta_r};
    return I * m.a0 * m.gamma_e * raman / (two_level_den * raman + m.omega_d * m.omega_d);
}

/// Far-detuned limit -a0 gamma_e / Delta, meaningful only for |Delta| >> gamma_e, Omega_d.
inline double alpha_two_level_limit(const EitMedium& m, double delta) {
    if (delta == 0.0)
        throw std::invalid_argument("alpha_two_level_limit: delta must be nonzero");
    return -m.a0 * m.gamma_e / delta;
}

/// Spatially averaged self-coupling alpha' and first-harmonic coupling eta of a
/// thermal gas whose lower levels are ac Stark modulated by a standing wave.
/// `mean` holds the mean detunings Delta', Delta_R'.
inline ThermalCoefficients alpha_eta_thermal(const EitMedium& m, const StarkModulation& st,
                                             const Detunings& mean) {
    const double od2 = m.omega_d * m.omega_d;
    const double dp = mean.delta;
    const double drp = mean.delta_r;
    const double sgs = st.s_gs();
    const double ge = m.gamma_e;

    const double mix = od2 - dp * drp;
    const double denom = mix * mix + ge * ge * drp * drp;
    if (denom == 0.0)
        throw std::invalid_argument(
            "alpha_eta_thermal: vanishing denominator (Omega_d = Delta_R' = 0), not an EIT regime");

    const double pre = m.a0 * ge / denom;
    const complex alpha_prime =
        pre * complex{drp * mix, od2 * m.gamma_s + ge * (drp * drp + sgs * sgs / 8.0)};
    const complex eta =
        pre * 0.25 * complex{od2 * sgs - drp * (2.0 * dp * sgs + drp * st.s_g), 2.0 * ge * drp * sgs};
    return {alpha_prime, eta};
}

/// Slow-light group velocity |Omega_d|^2 / (a0 gamma_e) at the EIT point.
inline double group_velocity(const EitMedium& m) {
    if (m.omega_d == 0.0)
        throw std::invalid_argument("group_velocity: omega_d must be > 0");
    return m.omega_d * m.omega_d / (m.a0 * m.gamma_e);
}

/// Half-width of the EIT transmission window of a medium of length L.
inline double transparency_window(const EitMedium& m, double length) {
    if (!(length > 0.0))
        throw std::invalid_argument("transparency_window: length must be > 0");
    return m.omega_d * m.omega_d / (m.gamma_e * std::sqrt(2.0 * m.a0 * length));
}

}  // namespace eitbragg
