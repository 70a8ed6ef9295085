#pragma once

// Sweep pipelines behind the CLI subcommands. Every grid point is an
// independent pure evaluation, so sweeps fan out over threads and are
// gathered back in detuning order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "eitbragg/analysis.hpp"
#include "eitbragg/cmt.hpp"
#include "eitbragg/config.hpp"
#include "eitbragg/lattice.hpp"
#include "eitbragg/medium.hpp"
#include "eitbragg/oracle.hpp"

namespace eitbragg {

template <class F>
void parallel_for(std::size_t n, F&& body) {
    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
    if (n < 64 || workers == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline const Sweep& require_sweep(const Scenario& sc) {
    if (!sc.sweep) throw ConfigError("sweep", "missing required section");
    return *sc.sweep;
}

/// Coupled-mode coefficients at one-photon detuning `delta` (Delta' for the thermal model).
inline CmtCoefficients coefficients_at(const Scenario& sc, double delta) {
    const double raman = sc.sweep ? sc.sweep->raman(delta) : delta;
    switch (sc.model) {
        case Model::cold_lattice:
            return build_cold(sc.medium, sc.geometry(), {delta, raman});
        case Model::two_level: {
            EitMedium bare = sc.medium;
            bare.omega_d = 0.0;
            return build_cold(bare, sc.geometry(), {delta, raman});
        }
        case Model::thermal_stark:
            return build_thermal(sc.medium, *sc.stark, {delta, raman}, (delta - sc.delta_s()) / speed_of_light);
    }
    throw std::logic_error("coefficients_at: unknown model");
}

inline SpectrumRecord to_record(double delta, const BvpSolution& sol) {
    return {delta, sol.r, sol.t, sol.a, sol.re_k_minus_ks(), sol.im_k()};
}

/// R, T, A and the Bloch wave vector on every point of the sweep grid.
inline std::vector<SpectrumRecord> run_spectrum(const Scenario& sc) {
    const auto grid = require_sweep(sc).grid();
    const double length = sc.length();
    std::vector<SpectrumRecord> out(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        out[i] = to_record(grid[i], solve_bvp(coefficients_at(sc, grid[i]), length));
    });
    return out;
}

struct SusceptibilityRecord {
    double delta = 0.0;
    complex alpha;  // 1/m
};

/// Polarizability of the uniform medium (no lattice), Delta in [-8, 8] gamma_e when no sweep is given.
inline std::vector<SusceptibilityRecord> run_susceptibility(const Scenario& sc) {
    Sweep sweep;
    if (sc.sweep) {
        sweep = *sc.sweep;
    } else {
        sweep.delta_min = -8.0 * sc.medium.gamma_e;
        sweep.delta_max = 8.0 * sc.medium.gamma_e;
        sweep.n_points = 1601;
    }
    EitMedium m = sc.medium;
    if (sc.model == Model::two_level) m.omega_d = 0.0;
    std::vector<SusceptibilityRecord> out;
    for (double d : sweep.grid()) out.push_back({d, alpha_cold(m, {d, sweep.raman(d)})});
    return out;
}

struct ValidationReport {
    double max_dr = 0.0;
    double max_dt = 0.0;
    double max_dr_at = 0.0;
    double max_dt_at = 0.0;
    int n_points = 0;
    int n_steps = 0;
    int saturated = 0;
    double tolerance = 1e-6;

    bool passed() const { return max_dr <= tolerance && max_dt <= tolerance; }
};

/// Closed form against the RK4 oracle over the whole sweep.
inline ValidationReport run_validate(const Scenario& sc, const std::optional<OdeSettings>& override_settings = {}) {
    const auto grid = require_sweep(sc).grid();
    const OdeSettings settings = override_settings ? *override_settings : sc.oracle.value_or(OdeSettings{});
    const double length = sc.length();
    std::vector<double> dr(grid.size()), dt(grid.size());
    std::vector<char> sat(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const auto c = coefficients_at(sc, grid[i]);
        const auto analytic = solve_bvp(c, length);
        const auto numeric = integrate_bvp(c, length, settings);
        dr[i] = std::abs(analytic.r - numeric.solution.r);
        dt[i] = std::abs(analytic.t - numeric.solution.t);
        sat[i] = numeric.saturated;
    });
    ValidationReport rep;
    rep.n_points = static_cast<int>(grid.size());
    rep.n_steps = settings.n_steps;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (dr[i] > rep.max_dr) rep.max_dr = dr[i], rep.max_dr_at = grid[i];
        if (dt[i] > rep.max_dt) rep.max_dt = dt[i], rep.max_dt_at = grid[i];
        rep.saturated += sat[i];
    }
    return rep;
}

struct BandgapReport {
    std::vector<GapReport> closed_form;
    std::vector<GapReport> numeric;
    std::optional<DetuningBound> detuning_bound;
    std::vector<std::string> warnings;
};

inline std::vector<std::string> scenario_warnings(const Scenario& sc) {
    std::vector<std::string> out;
    auto add = [&](const std::vector<std::string>& w) { out.insert(out.end(), w.begin(), w.end()); };
    if (sc.model == Model::thermal_stark) {
        add(thermal_warnings(sc.medium, *sc.stark));
    } else {
        add(warnings(sc.medium));
        add(warnings(sc.geometry()));
        if (sc.atomic_mass && !localization_validity(sc.geometry(), sc.medium).ok)
            out.emplace_back("delta_r^2 < 10 hbar/(M gamma_e): tight-localization condition violated");
    }
    return out;
}

/// Closed-form gaps for the model, plus numeric R >= threshold detections when a sweep is configured.
inline BandgapReport run_bandgap(const Scenario& sc, double threshold = 0.5) {
    BandgapReport rep;
    rep.warnings = scenario_warnings(sc);
    switch (sc.model) {
        case Model::cold_lattice: {
            const auto geom = sc.geometry();
            if (sc.delta_s() != 0.0 && sc.medium.omega_d > 0.0)
                rep.closed_form.push_back(eit_gap(sc.medium, geom));
            else
                rep.warnings.emplace_back("no in-window EIT gap: needs delta_s != 0 and omega_d > 0");
            auto tl = two_level_gaps(sc.medium, geom);
            rep.closed_form.push_back(tl.lower);
            rep.closed_form.push_back(tl.upper);
            rep.detuning_bound = lattice_detuning_bound(sc.medium, geom);
            break;
        }
        case Model::two_level: {
            auto tl = two_level_gaps(sc.medium, sc.geometry());
            rep.closed_form.push_back(tl.lower);
            rep.closed_form.push_back(tl.upper);
            break;
        }
        case Model::thermal_stark:
            rep.closed_form.push_back(thermal_gap(sc.medium, *sc.stark, sc.length()));
            break;
    }
    if (sc.sweep) rep.numeric = detect_gaps_numeric(run_spectrum(sc), threshold);
    return rep;
}

}  // namespace eitbragg
