#pragma once

// Band-gap geometry: closed-form edges for the in-window EIT gap, the
// far-detuned two-level gaps and the thermal Stark-modulated gap, plus a
// detector that extracts high-reflectivity bands from a computed spectrum.
// Edges are detunings (rad/s) from the relevant resonance, Im K in 1/m.

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eitbragg/constants.hpp"
#include "eitbragg/lattice.hpp"
#include "eitbragg/medium.hpp"

namespace eitbragg {

/// One row of a detuning sweep.
struct SpectrumRecord {
    double delta = 0.0;  // rad/s
    double r = 0.0;
    double t = 0.0;
    double a = 0.0;
    double re_k_minus_ks = 0.0;  // 1/m
    double im_k = 0.0;           // 1/m
};

enum class GapKind { eit_window, thermal, two_level_lower, two_level_upper, numeric };

inline std::string_view to_string(GapKind kind) {
    switch (kind) {
        case GapKind::eit_window: return "eit-window";
        case GapKind::thermal: return "thermal";
        case GapKind::two_level_lower: return "two-level-lower";
        case GapKind::two_level_upper: return "two-level-upper";
        case GapKind::numeric: return "numeric";
    }
    return "unknown";
}

struct GapReport {
    double lower_edge = 0.0;
    double upper_edge = 0.0;
    double center = 0.0;
    double width = 0.0;
    double max_im_k = 0.0;
    GapKind kind = GapKind::numeric;
    std::optional<double> threshold;  // numeric detections only
    std::vector<std::string> notes;
};

namespace detail {
inline GapReport make_gap(double lo, double hi, double max_im_k, GapKind kind) {
    GapReport g;
    g.lower_edge = lo;
    g.upper_edge = hi;
    g.center = 0.5 * (lo + hi);
    g.width = hi - lo;
    g.max_im_k = max_im_k;
    g.kind = kind;
    return g;
}
}  // namespace detail

struct DetuningBound {
    double bound = 0.0;  // rad/s, upper limit on |delta_s|
    double delta_s = 0.0;
    bool satisfied = false;
};

/// Largest |delta_s| that keeps the in-window gap inside the EIT transparency
/// window: c (1 - kappa_1^2) sqrt(a0 / 2L).
inline DetuningBound lattice_detuning_bound(const EitMedium& m, const LatticeGeometry& geom) {
    const double k1 = kappa(geom, 1);
    DetuningBound out;
    out.bound = speed_of_light * (1.0 - k1 * k1) * std::sqrt(m.a0 / (2.0 * geom.length()));
    out.delta_s = delta_s(geom);
    out.satisfied = std::abs(out.delta_s) <= out.bound;
    return out;
}

/// Gap inside the EIT window from the linearized polarizability alpha ~ Delta/v_g:
/// edges delta_s v_g / ((1 +- kappa_1) c).
inline GapReport eit_gap(const EitMedium& m, const LatticeGeometry& geom) {
    const double ds = delta_s(geom);
    if (ds == 0.0)
        throw std::invalid_argument("eit_gap: delta_s = 0 gives no gap inside the EIT window");
    const double k1 = kappa(geom, 1);
    if (k1 >= 1.0)
        throw std::invalid_argument("eit_gap: kappa_1 >= 1 (perfect localization) is singular");
    const double vg = group_velocity(m);
    const double scale = ds * vg / speed_of_light;
    const double e1 = scale / (1.0 + k1);
    const double e2 = scale / (1.0 - k1);

    GapReport g = detail::make_gap(std::min(e1, e2), std::max(e1, e2),
                                   std::abs(ds) / speed_of_light * k1 / std::sqrt(1.0 - k1 * k1),
                                   GapKind::eit_window);
    // Closed forms, kept as written rather than re-derived from the edges.
    g.width = std::abs(scale) * 2.0 * k1 / (1.0 - k1 * k1);
    g.center = scale / (1.0 - k1 * k1);
    if (!lattice_detuning_bound(m, geom).satisfied)
        g.notes.emplace_back("|delta_s| exceeds the transparency-window bound; absorption will limit reflection");
    return g;
}

struct TwoLevelGaps {
    GapReport lower;
    GapReport upper;
    std::optional<GapReport> lower_asymptotic;  // present when (delta_s/2)^2 >= 100 a0 gamma_e c
    std::optional<GapReport> upper_asymptotic;
};

namespace detail {

// Im K of the far-detuned dispersion relation (alpha ~ -a0 gamma_e / Delta).
inline double two_level_im_k(double x, double k1, double ds, double delta) {
    const double q = x * k1 / delta;
    const double db = x / delta + (ds - delta) / speed_of_light;
    return std::sqrt(std::max(0.0, q * q - db * db));
}

inline double max_two_level_im_k(double x, double k1, double ds, double lo, double hi) {
    auto neg = [&](double d) { return -two_level_im_k(x, k1, ds, d); };
    std::uintmax_t iters = 200;
    const auto [arg, val] = boost::math::tools::brent_find_minima(neg, lo, hi, std::numeric_limits<double>::digits / 2, iters);
    return -val;
}

}  // namespace detail

/// Lower and upper gaps of off-resonant two-level atoms,
/// delta_s/2 -+ D_{+-} with D_{+-} = sqrt((delta_s/2)^2 + a0 gamma_e c (1 +- kappa_1)).
inline TwoLevelGaps two_level_gaps(const EitMedium& m, const LatticeGeometry& geom) {
    const double ds = delta_s(geom);
    const double k1 = kappa(geom, 1);
    const double x = m.a0 * m.gamma_e;
    const double xc = x * speed_of_light;
    const double half = 0.5 * ds;
    const double d_plus = std::sqrt(half * half + xc * (1.0 + k1));
    const double d_minus = std::sqrt(half * half + xc * (1.0 - k1));

    auto gap = [&](double lo, double hi, GapKind kind) {
        const double peak = hi > lo ? detail::max_two_level_im_k(x, k1, ds, lo, hi) : 0.0;
        return detail::make_gap(lo, hi, peak, kind);
    };

    TwoLevelGaps out{gap(half - d_plus, half - d_minus, GapKind::two_level_lower),
                     gap(half + d_minus, half + d_plus, GapKind::two_level_upper), std::nullopt, std::nullopt};

    if (half * half >= 100.0 * xc) {
        // D_{+-} ~ |delta_s|/2 + a0 gamma_e c (1 +- kappa_1) / |delta_s|
        const double abs_half = std::abs(half);
        const double wp = xc * (1.0 + k1) / std::abs(ds);
        const double wm = xc * (1.0 - k1) / std::abs(ds);
        out.lower_asymptotic = gap(half - abs_half - wp, half - abs_half - wm, GapKind::two_level_lower);
        out.upper_asymptotic = gap(half + abs_half + wm, half + abs_half + wp, GapKind::two_level_upper);
    }
    return out;
}

/// Gap of a thermal gas with Stark-modulated Raman resonance (delta_s = 0):
/// |Delta'| < |S_gs|/4 with peak Im K = |S_gs| / (4 v_g).
inline GapReport thermal_gap(const EitMedium& m, const StarkModulation& st, double length) {
    const double sgs = st.s_gs();
    if (sgs == 0.0)
        throw std::invalid_argument("thermal_gap: S_gs = S_g - S_s must be nonzero for a band gap");
    const double edge = 0.25 * std::abs(sgs);
    GapReport g = detail::make_gap(-edge, edge, edge / group_velocity(m), GapKind::thermal);
    g.notes.emplace_back("closed form assumes delta_s = 0");
    if (0.5 * std::abs(sgs) > transparency_window(m, length))
        g.notes.emplace_back("|S_gs|/2 exceeds the EIT window; absorption will limit reflection");
    return g;
}

/// Peak Im K reachable by the thermal gap while |S_gs|/2 stays within the
/// transparency window: sqrt(a0 / 8L).
inline double thermal_im_k_ceiling(const EitMedium& m, double length) {
    return std::sqrt(m.a0 / (8.0 * length));
}

/// Maximal runs of consecutive records with R >= threshold. Edges are linearly
/// interpolated at the threshold crossing, or sit on the first/last record when
/// the run touches the end of the sweep.
inline std::vector<GapReport> detect_gaps_numeric(std::span<const SpectrumRecord> spectrum,
                                                  double threshold = 0.5) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("detect_gaps_numeric: threshold must lie in (0, 1)");
    for (std::size_t i = 1; i < spectrum.size(); ++i)
        if (!(spectrum[i].delta > spectrum[i - 1].delta))
            throw std::invalid_argument("detect_gaps_numeric: spectrum must be sorted by increasing delta");

    auto crossing = [&](std::size_t below, std::size_t above) {
        const auto& p = spectrum[below];
        const auto& q = spectrum[above];
        const double f = (threshold - p.r) / (q.r - p.r);
        return p.delta + f * (q.delta - p.delta);
    };

    std::vector<GapReport> gaps;
    std::size_t i = 0;
    const std::size_t n = spectrum.size();
    while (i < n) {
        if (spectrum[i].r < threshold) {
            ++i;
            continue;
        }
        const std::size_t first = i;
        double peak = -std::numeric_limits<double>::infinity();
        while (i < n && spectrum[i].r >= threshold) {
            peak = std::max(peak, spectrum[i].im_k);
            ++i;
        }
        const std::size_t last = i - 1;
        const double lo = first == 0 ? spectrum[first].delta : crossing(first - 1, first);
        const double hi = last + 1 == n ? spectrum[last].delta : crossing(last + 1, last);
        GapReport g = detail::make_gap(lo, hi, peak, GapKind::numeric);
        g.threshold = threshold;
        gaps.push_back(std::move(g));
    }
    return gaps;
}

}  // namespace eitbragg
