#pragma once

// Run configuration: a JSON document with nested sections. Dimensional
// fields are either plain numbers (SI) or strings "<value> <unit>", with
//   ge      multiples of gamma_e        (rates, detunings)
//   rad_s   rad/s
//   m, um, nm                           (lengths)
//   lat     multiples of lambda_lat     (delta_r, length)
//   per_m, m2, per_m3, kg
// The raw document (RunConfig) keeps the units so it round-trips; resolve()
// converts everything to the SI Scenario the solvers consume.

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "eitbragg/constants.hpp"
#include "eitbragg/lattice.hpp"
#include "eitbragg/medium.hpp"
#include "eitbragg/oracle.hpp"

namespace eitbragg {

/// Invalid configuration; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& path, const std::string& what) : std::runtime_error(path + ": " + what) {}
};

enum class Unit { si, rad_s, ge, m, um, nm, lat, per_m, m2, per_m3, kg };

struct Quantity {
    double value = 0.0;
    Unit unit = Unit::si;

    bool operator==(const Quantity&) const = default;
};

enum class Model { cold_lattice, thermal_stark, two_level };

struct MediumSection {
    Quantity gamma_e;
    Quantity gamma_s;
    Quantity omega_d;
    std::optional<Quantity> a0;
    std::optional<Quantity> sigma0;
    std::optional<Quantity> rho0;

    bool operator==(const MediumSection&) const = default;
};

struct LatticeSection {
    std::optional<Quantity> lambda_lat;
    std::optional<Quantity> length;
    std::optional<int> n_periods;
    std::optional<Quantity> delta_r;
    std::optional<Quantity> omega_eg;
    std::optional<Quantity> delta_s;
    std::optional<Quantity> atomic_mass;

    bool operator==(const LatticeSection&) const = default;
};

struct StarkSection {
    Quantity s_g;
    Quantity s_s;

    bool operator==(const StarkSection&) const = default;
};

struct SweepSection {
    Quantity delta_min;
    Quantity delta_max;
    int n_points = 0;
    bool resonant_drive = true;
    std::optional<Quantity> raman_offset;  // Delta - Delta_R when the drive is not resonant

    bool operator==(const SweepSection&) const = default;
};

struct OutputSpec {
    std::string format;  // csv | json | svg
    std::string path;    // file stem, relative to --out-dir

    bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
    Model model = Model::cold_lattice;
    MediumSection medium;
    LatticeSection lattice;
    std::optional<StarkSection> stark;
    std::optional<SweepSection> sweep;
    std::optional<int> oracle_steps;
    std::vector<OutputSpec> outputs;

    bool operator==(const RunConfig&) const = default;
};

// ---------------------------------------------------------------------------
// Text <-> value helpers

inline std::string_view to_string(Unit u) {
    switch (u) {
        case Unit::si: return "";
        case Unit::rad_s: return "rad_s";
        case Unit::ge: return "ge";
        case Unit::m: return "m";
        case Unit::um: return "um";
        case Unit::nm: return "nm";
        case Unit::lat: return "lat";
        case Unit::per_m: return "per_m";
        case Unit::m2: return "m2";
        case Unit::per_m3: return "per_m3";
        case Unit::kg: return "kg";
    }
    return "";
}

inline std::string_view to_string(Model m) {
    switch (m) {
        case Model::cold_lattice: return "cold-lattice";
        case Model::thermal_stark: return "thermal-stark";
        case Model::two_level: return "two-level";
    }
    return "";
}

inline Model parse_model(std::string_view s, const std::string& path) {
    for (Model m : {Model::cold_lattice, Model::thermal_stark, Model::two_level})
        if (to_string(m) == s) return m;
    throw ConfigError(path, "unknown model '" + std::string(s) + "' (cold-lattice, thermal-stark, two-level)");
}

/// Shortest decimal text that parses back to the same double.
inline std::string format_shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline Quantity parse_quantity(const nlohmann::json& j, const std::string& path) {
    if (j.is_number())
        return {j.get<double>(), Unit::si};
    if (!j.is_string())
        throw ConfigError(path, "expected a number or a \"<value> <unit>\" string");
    const std::string text = j.get<std::string>();
    std::istringstream in(text);
    std::string number, unit, extra;
    in >> number >> unit >> extra;
    if (number.empty() || !extra.empty())
        throw ConfigError(path, "cannot parse quantity '" + text + "'");
    Quantity q;
    const auto res = std::from_chars(number.data(), number.data() + number.size(), q.value);
    if (res.ec != std::errc{} || res.ptr != number.data() + number.size())
        throw ConfigError(path, "cannot parse number in '" + text + "'");
    if (unit.empty()) {
        q.unit = Unit::si;
        return q;
    }
    for (Unit u : {Unit::rad_s, Unit::ge, Unit::m, Unit::um, Unit::nm, Unit::lat, Unit::per_m, Unit::m2,
                   Unit::per_m3, Unit::kg})
        if (to_string(u) == unit) {
            q.unit = u;
            return q;
        }
    throw ConfigError(path, "unknown unit '" + unit + "'");
}

inline nlohmann::json quantity_to_json(const Quantity& q) {
    if (q.unit == Unit::si) return q.value;
    return format_shortest(q.value) + " " + std::string(to_string(q.unit));
}

namespace detail {

inline std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

inline const nlohmann::json& require(const nlohmann::json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key))
        throw ConfigError(join(path, key), "missing required field");
    return obj.at(key);
}

inline std::optional<Quantity> optional_quantity(const nlohmann::json& obj, const std::string& key,
                                                 const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    return parse_quantity(obj.at(key), join(path, key));
}

inline int parse_int(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number_integer())
        throw ConfigError(path, "expected an integer");
    return j.get<int>();
}

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<std::string_view> known,
                           const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (auto k : known) ok = ok || k == key;
        if (!ok) throw ConfigError(join(path, key), "unknown field");
    }
}

inline void require_object(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
}

}  // namespace detail

/// Parses the raw document; units are recorded but not yet applied.
inline RunConfig parse_config(const nlohmann::json& doc) {
    using detail::join;
    detail::require_object(doc, "<root>");
    detail::reject_unknown(doc, {"model", "medium", "lattice", "stark", "sweep", "oracle", "outputs"}, "");
    RunConfig cfg;
    const auto& model = detail::require(doc, "model", "");
    if (!model.is_string()) throw ConfigError("model", "expected a string");
    cfg.model = parse_model(model.get<std::string>(), "model");

    {
        const std::string p = "medium";
        const auto& j = detail::require(doc, p, "");
        detail::require_object(j, p);
        detail::reject_unknown(j, {"gamma_e", "gamma_s", "omega_d", "a0", "sigma0", "rho0"}, p);
        cfg.medium.gamma_e = parse_quantity(detail::require(j, "gamma_e", p), join(p, "gamma_e"));
        cfg.medium.gamma_s = parse_quantity(detail::require(j, "gamma_s", p), join(p, "gamma_s"));
        cfg.medium.omega_d = parse_quantity(detail::require(j, "omega_d", p), join(p, "omega_d"));
        cfg.medium.a0 = detail::optional_quantity(j, "a0", p);
        cfg.medium.sigma0 = detail::optional_quantity(j, "sigma0", p);
        cfg.medium.rho0 = detail::optional_quantity(j, "rho0", p);
    }
    {
        const std::string p = "lattice";
        const auto& j = detail::require(doc, p, "");
        detail::require_object(j, p);
        detail::reject_unknown(
            j, {"lambda_lat", "length", "n_periods", "delta_r", "omega_eg", "delta_s", "atomic_mass"}, p);
        auto& l = cfg.lattice;
        l.lambda_lat = detail::optional_quantity(j, "lambda_lat", p);
        l.length = detail::optional_quantity(j, "length", p);
        if (j.contains("n_periods")) l.n_periods = detail::parse_int(j.at("n_periods"), join(p, "n_periods"));
        l.delta_r = detail::optional_quantity(j, "delta_r", p);
        l.omega_eg = detail::optional_quantity(j, "omega_eg", p);
        l.delta_s = detail::optional_quantity(j, "delta_s", p);
        l.atomic_mass = detail::optional_quantity(j, "atomic_mass", p);
    }
    if (doc.contains("stark")) {
        const std::string p = "stark";
        const auto& j = doc.at(p);
        detail::require_object(j, p);
        detail::reject_unknown(j, {"s_g", "s_s"}, p);
        cfg.stark = StarkSection{parse_quantity(detail::require(j, "s_g", p), join(p, "s_g")),
                                 parse_quantity(detail::require(j, "s_s", p), join(p, "s_s"))};
    }
    if (doc.contains("sweep")) {
        const std::string p = "sweep";
        const auto& j = doc.at(p);
        detail::require_object(j, p);
        detail::reject_unknown(j, {"delta_min", "delta_max", "n_points", "resonant_drive", "raman_offset"}, p);
        SweepSection s;
        s.delta_min = parse_quantity(detail::require(j, "delta_min", p), join(p, "delta_min"));
        s.delta_max = parse_quantity(detail::require(j, "delta_max", p), join(p, "delta_max"));
        s.n_points = detail::parse_int(detail::require(j, "n_points", p), join(p, "n_points"));
        if (j.contains("resonant_drive")) {
            if (!j.at("resonant_drive").is_boolean())
                throw ConfigError(join(p, "resonant_drive"), "expected true or false");
            s.resonant_drive = j.at("resonant_drive").get<bool>();
        }
        s.raman_offset = detail::optional_quantity(j, "raman_offset", p);
        cfg.sweep = s;
    }
    if (doc.contains("oracle")) {
        const std::string p = "oracle";
        const auto& j = doc.at(p);
        detail::require_object(j, p);
        detail::reject_unknown(j, {"n_steps"}, p);
        cfg.oracle_steps = detail::parse_int(detail::require(j, "n_steps", p), join(p, "n_steps"));
    }
    if (doc.contains("outputs")) {
        const auto& j = doc.at("outputs");
        if (!j.is_array()) throw ConfigError("outputs", "expected an array");
        for (std::size_t i = 0; i < j.size(); ++i) {
            const std::string p = "outputs[" + std::to_string(i) + "]";
            detail::require_object(j[i], p);
            detail::reject_unknown(j[i], {"format", "path"}, p);
            OutputSpec o{detail::require(j[i], "format", p).get<std::string>(),
                         detail::require(j[i], "path", p).get<std::string>()};
            if (o.format != "csv" && o.format != "json" && o.format != "svg")
                throw ConfigError(join(p, "format"), "expected csv, json or svg");
            cfg.outputs.push_back(std::move(o));
        }
    }
    return cfg;
}

inline nlohmann::json to_json(const RunConfig& cfg) {
    using nlohmann::json;
    json doc;
    doc["model"] = std::string(to_string(cfg.model));

    json& m = doc["medium"];
    m["gamma_e"] = quantity_to_json(cfg.medium.gamma_e);
    m["gamma_s"] = quantity_to_json(cfg.medium.gamma_s);
    m["omega_d"] = quantity_to_json(cfg.medium.omega_d);
    if (cfg.medium.a0) m["a0"] = quantity_to_json(*cfg.medium.a0);
    if (cfg.medium.sigma0) m["sigma0"] = quantity_to_json(*cfg.medium.sigma0);
    if (cfg.medium.rho0) m["rho0"] = quantity_to_json(*cfg.medium.rho0);

    json& l = doc["lattice"];
    l = json::object();
    const auto& ls = cfg.lattice;
    if (ls.lambda_lat) l["lambda_lat"] = quantity_to_json(*ls.lambda_lat);
    if (ls.length) l["length"] = quantity_to_json(*ls.length);
    if (ls.n_periods) l["n_periods"] = *ls.n_periods;
    if (ls.delta_r) l["delta_r"] = quantity_to_json(*ls.delta_r);
    if (ls.omega_eg) l["omega_eg"] = quantity_to_json(*ls.omega_eg);
    if (ls.delta_s) l["delta_s"] = quantity_to_json(*ls.delta_s);
    if (ls.atomic_mass) l["atomic_mass"] = quantity_to_json(*ls.atomic_mass);

    if (cfg.stark) doc["stark"] = {{"s_g", quantity_to_json(cfg.stark->s_g)}, {"s_s", quantity_to_json(cfg.stark->s_s)}};
    if (cfg.sweep) {
        json s;
        s["delta_min"] = quantity_to_json(cfg.sweep->delta_min);
        s["delta_max"] = quantity_to_json(cfg.sweep->delta_max);
        s["n_points"] = cfg.sweep->n_points;
        s["resonant_drive"] = cfg.sweep->resonant_drive;
        if (cfg.sweep->raman_offset) s["raman_offset"] = quantity_to_json(*cfg.sweep->raman_offset);
        doc["sweep"] = s;
    }
    if (cfg.oracle_steps) doc["oracle"] = {{"n_steps", *cfg.oracle_steps}};
    if (!cfg.outputs.empty()) {
        json outs = json::array();
        for (const auto& o : cfg.outputs) outs.push_back({{"format", o.format}, {"path", o.path}});
        doc["outputs"] = outs;
    }
    return doc;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

// ---------------------------------------------------------------------------
// Resolution to SI

struct Sweep {
    double delta_min = 0.0;
    double delta_max = 0.0;
    int n_points = 0;
    bool resonant_drive = true;
    double raman_offset = 0.0;

    /// Uniform grid; the last point is delta_max exactly.
    std::vector<double> grid() const {
        std::vector<double> out(static_cast<std::size_t>(n_points));
        const double step = (delta_max - delta_min) / (n_points - 1);
        for (int i = 0; i < n_points; ++i) out[static_cast<std::size_t>(i)] = delta_min + i * step;
        out.back() = delta_max;
        return out;
    }

    /// Raman detuning paired with a one-photon detuning on this sweep.
    double raman(double delta) const { return resonant_drive ? delta : delta - raman_offset; }
};

struct Scenario {
    Model model = Model::cold_lattice;
    EitMedium medium;
    double lambda_lat = 0.0;
    int n_periods = 0;
    double omega_eg = 0.0;
    std::optional<double> delta_r;
    std::optional<double> atomic_mass;
    std::optional<StarkModulation> stark;
    std::optional<Sweep> sweep;
    std::optional<OdeSettings> oracle;
    std::vector<OutputSpec> outputs;

    double length() const { return n_periods * lambda_lat; }
    double k_s() const { return pi / lambda_lat; }
    double delta_s() const { return k_s() * speed_of_light - omega_eg; }

    /// Lattice geometry; only cold-lattice and two-level scenarios carry delta_r.
    LatticeGeometry geometry() const {
        if (!delta_r) throw ConfigError("lattice.delta_r", "required for the " + std::string(to_string(model)) + " model");
        return {lambda_lat, *delta_r, n_periods, omega_eg, atomic_mass};
    }
};

namespace detail {

enum class Dim { rate, length, density_coeff, cross_section, volume_density, mass };

inline double to_si(const Quantity& q, Dim dim, const std::string& path, double gamma_e, double lambda_lat) {
    auto bad = [&] { return ConfigError(path, "unit '" + std::string(to_string(q.unit)) + "' not valid here"); };
    if (!std::isfinite(q.value)) throw ConfigError(path, "value must be finite");
    switch (q.unit) {
        case Unit::si: return q.value;
        case Unit::rad_s:
            if (dim != Dim::rate) throw bad();
            return q.value;
        case Unit::ge:
            if (dim != Dim::rate || !(gamma_e > 0.0)) throw bad();
            return q.value * gamma_e;
        case Unit::m:
            if (dim != Dim::length) throw bad();
            return q.value;
        case Unit::um:
            if (dim != Dim::length) throw bad();
            return q.value * 1e-6;
        case Unit::nm:
            if (dim != Dim::length) throw bad();
            return q.value * 1e-9;
        case Unit::lat:
            if (dim != Dim::length || !(lambda_lat > 0.0)) throw bad();
            return q.value * lambda_lat;
        case Unit::per_m:
            if (dim != Dim::density_coeff) throw bad();
            return q.value;
        case Unit::m2:
            if (dim != Dim::cross_section) throw bad();
            return q.value;
        case Unit::per_m3:
            if (dim != Dim::volume_density) throw bad();
            return q.value;
        case Unit::kg:
            if (dim != Dim::mass) throw bad();
            return q.value;
    }
    throw bad();
}

}  // namespace detail

/// Applies units and checks every cross-field invariant.
inline Scenario resolve(const RunConfig& cfg) {
    using detail::Dim;
    using detail::to_si;
    Scenario sc;
    sc.model = cfg.model;

    const auto& ms = cfg.medium;
    if (ms.gamma_e.unit == Unit::ge) throw ConfigError("medium.gamma_e", "cannot be given in units of itself");
    const double ge = to_si(ms.gamma_e, Dim::rate, "medium.gamma_e", 0.0, 0.0);
    if (!(ge > 0.0)) throw ConfigError("medium.gamma_e", "must be > 0");
    sc.medium.gamma_e = ge;
    sc.medium.gamma_s = to_si(ms.gamma_s, Dim::rate, "medium.gamma_s", ge, 0.0);
    sc.medium.omega_d = to_si(ms.omega_d, Dim::rate, "medium.omega_d", ge, 0.0);
    if (ms.a0 && (ms.sigma0 || ms.rho0))
        throw ConfigError("medium.a0", "give either a0 or the sigma0/rho0 pair, not both");
    if (ms.a0) {
        sc.medium.a0 = to_si(*ms.a0, Dim::density_coeff, "medium.a0", ge, 0.0);
    } else if (ms.sigma0 && ms.rho0) {
        sc.medium.a0 = to_si(*ms.sigma0, Dim::cross_section, "medium.sigma0", ge, 0.0) *
                       to_si(*ms.rho0, Dim::volume_density, "medium.rho0", ge, 0.0);
    } else {
        throw ConfigError("medium.a0", "missing required field (or sigma0 and rho0)");
    }
    if (!(sc.medium.a0 > 0.0)) throw ConfigError("medium.a0", "must be > 0");
    if (!(sc.medium.gamma_s >= 0.0)) throw ConfigError("medium.gamma_s", "must be >= 0");
    if (!(sc.medium.omega_d >= 0.0)) throw ConfigError("medium.omega_d", "must be >= 0");

    const auto& ls = cfg.lattice;
    if (ls.lambda_lat) {
        if (ls.lambda_lat->unit == Unit::lat) throw ConfigError("lattice.lambda_lat", "cannot be given in units of itself");
        sc.lambda_lat = to_si(*ls.lambda_lat, Dim::length, "lattice.lambda_lat", ge, 0.0);
        if (!(sc.lambda_lat > 0.0)) throw ConfigError("lattice.lambda_lat", "must be > 0");
        if (ls.n_periods) {
            if (ls.length) throw ConfigError("lattice.length", "give two of lambda_lat, length, n_periods");
            sc.n_periods = *ls.n_periods;
        } else if (ls.length) {
            const double total = to_si(*ls.length, Dim::length, "lattice.length", ge, sc.lambda_lat);
            const double n = total / sc.lambda_lat;
            if (std::abs(n - std::round(n)) > 1e-9 * n)
                throw ConfigError("lattice.length", "must be an integer number of lattice periods");
            sc.n_periods = static_cast<int>(std::round(n));
        } else {
            throw ConfigError("lattice.n_periods", "missing required field (or lattice.length)");
        }
    } else {
        if (!ls.length || !ls.n_periods)
            throw ConfigError("lattice.lambda_lat", "missing required field (or length + n_periods)");
        if (ls.length->unit == Unit::lat) throw ConfigError("lattice.length", "'lat' needs lambda_lat");
        sc.n_periods = *ls.n_periods;
        if (sc.n_periods <= 0) throw ConfigError("lattice.n_periods", "must be > 0");
        sc.lambda_lat = to_si(*ls.length, Dim::length, "lattice.length", ge, 0.0) / sc.n_periods;
        if (!(sc.lambda_lat > 0.0)) throw ConfigError("lattice.length", "must be > 0");
    }
    if (sc.n_periods <= 0) throw ConfigError("lattice.n_periods", "must be > 0");

    if (ls.omega_eg && ls.delta_s) throw ConfigError("lattice.delta_s", "give either omega_eg or delta_s, not both");
    if (ls.omega_eg) {
        sc.omega_eg = to_si(*ls.omega_eg, Dim::rate, "lattice.omega_eg", ge, 0.0);
    } else if (ls.delta_s) {
        sc.omega_eg = pi / sc.lambda_lat * speed_of_light - to_si(*ls.delta_s, Dim::rate, "lattice.delta_s", ge, 0.0);
    } else {
        throw ConfigError("lattice.delta_s", "missing required field (or lattice.omega_eg)");
    }
    if (!(sc.omega_eg > 0.0)) throw ConfigError("lattice.omega_eg", "must be > 0");

    if (ls.delta_r) {
        sc.delta_r = to_si(*ls.delta_r, Dim::length, "lattice.delta_r", ge, sc.lambda_lat);
        if (!(*sc.delta_r > 0.0)) throw ConfigError("lattice.delta_r", "must be > 0");
        if (*sc.delta_r >= 0.5 * sc.lambda_lat) throw ConfigError("lattice.delta_r", "must be < lambda_lat/2");
    } else if (cfg.model != Model::thermal_stark) {
        throw ConfigError("lattice.delta_r", "missing required field");
    }
    if (ls.atomic_mass) {
        sc.atomic_mass = to_si(*ls.atomic_mass, Dim::mass, "lattice.atomic_mass", ge, sc.lambda_lat);
        if (!(*sc.atomic_mass > 0.0)) throw ConfigError("lattice.atomic_mass", "must be > 0");
    }

    if (cfg.stark) {
        sc.stark = StarkModulation{to_si(cfg.stark->s_g, Dim::rate, "stark.s_g", ge, 0.0),
                                   to_si(cfg.stark->s_s, Dim::rate, "stark.s_s", ge, 0.0)};
    } else if (cfg.model == Model::thermal_stark) {
        throw ConfigError("stark", "missing required section for the thermal-stark model");
    }

    if (cfg.sweep) {
        const auto& s = *cfg.sweep;
        Sweep out;
        out.delta_min = to_si(s.delta_min, Dim::rate, "sweep.delta_min", ge, 0.0);
        out.delta_max = to_si(s.delta_max, Dim::rate, "sweep.delta_max", ge, 0.0);
        out.n_points = s.n_points;
        out.resonant_drive = s.resonant_drive;
        if (s.n_points < 2) throw ConfigError("sweep.n_points", "must be >= 2");
        if (!(out.delta_min < out.delta_max)) throw ConfigError("sweep.delta_max", "must exceed sweep.delta_min");
        if (!s.resonant_drive) {
            if (!s.raman_offset) throw ConfigError("sweep.raman_offset", "required when resonant_drive is false");
            out.raman_offset = to_si(*s.raman_offset, Dim::rate, "sweep.raman_offset", ge, 0.0);
        }
        sc.sweep = out;
    }
    if (cfg.oracle_steps) {
        if (*cfg.oracle_steps < 1000) throw ConfigError("oracle.n_steps", "must be >= 1000");
        sc.oracle = OdeSettings{*cfg.oracle_steps};
    }
    sc.outputs = cfg.outputs;
    return sc;
}

}  // namespace eitbragg
