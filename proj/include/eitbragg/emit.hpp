#pragma once

// Serialization of sweep results: CSV tables, JSON summaries and static SVG
// line charts. All output is byte-deterministic for identical input.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eitbragg/analysis.hpp"
#include "eitbragg/config.hpp"
#include "eitbragg/runner.hpp"

namespace eitbragg {

/// Failure to write an output file; carries the path.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& path) : std::runtime_error("cannot write '" + path + "'") {}
};

inline constexpr const char* spectrum_csv_header = "delta_rad_s,R,T,A,reK_minus_ks_per_m,imK_per_m";
inline constexpr const char* dispersion_csv_header = "delta_rad_s,reK_minus_ks_per_m,imK_per_m";
inline constexpr const char* susceptibility_csv_header = "delta_rad_s,re_alpha_over_a0,im_alpha_over_a0";

/// Scientific notation with 12 significant digits.
inline std::string format_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

inline void write_spectrum_csv(std::ostream& out, std::span<const SpectrumRecord> records) {
    out << spectrum_csv_header << '\n';
    for (const auto& r : records)
        out << format_sci(r.delta) << ',' << format_sci(r.r) << ',' << format_sci(r.t) << ',' << format_sci(r.a)
            << ',' << format_sci(r.re_k_minus_ks) << ',' << format_sci(r.im_k) << '\n';
}

inline void write_dispersion_csv(std::ostream& out, std::span<const SpectrumRecord> records) {
    out << dispersion_csv_header << '\n';
    for (const auto& r : records)
        out << format_sci(r.delta) << ',' << format_sci(r.re_k_minus_ks) << ',' << format_sci(r.im_k) << '\n';
}

inline void write_susceptibility_csv(std::ostream& out, std::span<const SusceptibilityRecord> records, double a0) {
    out << susceptibility_csv_header << '\n';
    for (const auto& r : records)
        out << format_sci(r.delta) << ',' << format_sci(r.alpha.real() / a0) << ',' << format_sci(r.alpha.imag() / a0)
            << '\n';
}

// ---------------------------------------------------------------------------
// JSON documents

inline nlohmann::json to_json(const GapReport& g) {
    nlohmann::json j;
    j["kind"] = std::string(to_string(g.kind));
    j["lower_edge_rad_s"] = g.lower_edge;
    j["upper_edge_rad_s"] = g.upper_edge;
    j["center_rad_s"] = g.center;
    j["width_rad_s"] = g.width;
    j["max_im_k_per_m"] = g.max_im_k;
    if (g.threshold) j["threshold"] = *g.threshold;
    if (!g.notes.empty()) j["notes"] = g.notes;
    return j;
}

inline nlohmann::json to_json(const BandgapReport& rep, double gamma_e) {
    nlohmann::json j;
    j["gamma_e_rad_s"] = gamma_e;
    j["closed_form"] = nlohmann::json::array();
    for (const auto& g : rep.closed_form) j["closed_form"].push_back(to_json(g));
    j["numeric"] = nlohmann::json::array();
    for (const auto& g : rep.numeric) j["numeric"].push_back(to_json(g));
    if (rep.detuning_bound)
        j["detuning_bound"] = {{"bound_rad_s", rep.detuning_bound->bound},
                               {"delta_s_rad_s", rep.detuning_bound->delta_s},
                               {"satisfied", rep.detuning_bound->satisfied}};
    j["warnings"] = rep.warnings;
    return j;
}

inline nlohmann::json to_json(const ValidationReport& rep) {
    return {{"max_abs_dR", rep.max_dr},     {"max_abs_dR_at_rad_s", rep.max_dr_at},
            {"max_abs_dT", rep.max_dt},     {"max_abs_dT_at_rad_s", rep.max_dt_at},
            {"n_points", rep.n_points},     {"n_steps", rep.n_steps},
            {"saturated_points", rep.saturated}, {"tolerance", rep.tolerance},
            {"passed", rep.passed()}};
}

/// Summary of a spectrum sweep: peak reflectivity and R >= threshold bands.
inline nlohmann::json spectrum_summary(const Scenario& sc, std::span<const SpectrumRecord> records, double threshold) {
    nlohmann::json j;
    j["model"] = std::string(to_string(sc.model));
    j["n_points"] = records.size();
    j["length_m"] = sc.length();
    j["delta_s_rad_s"] = sc.delta_s();
    j["gamma_e_rad_s"] = sc.medium.gamma_e;
    if (!records.empty()) {
        const auto peak = std::max_element(records.begin(), records.end(),
                                           [](const auto& a, const auto& b) { return a.r < b.r; });
        j["peak"] = {{"delta_rad_s", peak->delta}, {"R", peak->r}, {"T", peak->t}, {"A", peak->a}};
    }
    j["numeric_gaps"] = nlohmann::json::array();
    for (const auto& g : detect_gaps_numeric(records, threshold)) j["numeric_gaps"].push_back(to_json(g));
    return j;
}

// ---------------------------------------------------------------------------
// SVG line chart

struct ChartSeries {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;
    std::vector<double> y;
};

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

// 1-2-5 tick spacing giving roughly `target` intervals.
inline double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

inline std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

/// Single-series chart with linear axes.
inline std::string svg_line_chart(const ChartSeries& s) {
    constexpr double width = 640, height = 400, left = 70, right = 20, top = 40, bottom = 55;
    const double pw = width - left - right, ph = height - top - bottom;

    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!s.x.empty()) {
        x0 = *std::min_element(s.x.begin(), s.x.end());
        x1 = *std::max_element(s.x.begin(), s.x.end());
        y0 = *std::min_element(s.y.begin(), s.y.end());
        y1 = *std::max_element(s.y.begin(), s.y.end());
    }
    if (x1 <= x0) x1 = x0 + 1.0;
    if (y1 - y0 < 1e-12 * std::max(1.0, std::abs(y1))) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << detail::escape_xml(s.title) << "</text>\n";
    o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xs = detail::nice_step(x1 - x0, 6);
    for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
        o << "<line x1=\"" << detail::svg_num(px(t)) << "\" y1=\"" << top + ph << "\" x2=\"" << detail::svg_num(px(t))
          << "\" y2=\"" << top + ph + 5 << "\" stroke=\"black\"/>";
        o << "<text x=\"" << detail::svg_num(px(t)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
          << detail::tick_label(t) << "</text>\n";
    }
    const double ys = detail::nice_step(y1 - y0, 5);
    for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
        o << "<line x1=\"" << left - 5 << "\" y1=\"" << detail::svg_num(py(t)) << "\" x2=\"" << left << "\" y2=\""
          << detail::svg_num(py(t)) << "\" stroke=\"black\"/>";
        o << "<text x=\"" << left - 8 << "\" y=\"" << detail::svg_num(py(t) + 4) << "\" text-anchor=\"end\">"
          << detail::tick_label(t) << "</text>\n";
    }
    o << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
      << detail::escape_xml(s.x_label) << "</text>\n";
    o << "<text transform=\"translate(16," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << detail::escape_xml(s.y_label) << "</text>\n";

    o << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (i) o << ' ';
        o << detail::svg_num(px(s.x[i])) << ',' << detail::svg_num(py(s.y[i]));
    }
    o << "\"/>\n</svg>\n";
    return o.str();
}

// ---------------------------------------------------------------------------
// Files

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string());
    out << content;
    out.flush();
    if (!out) throw IoError(path.string());
}

inline std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace eitbragg
