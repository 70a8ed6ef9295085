// eit-bragg: probe spectra, Bloch dispersion and band gaps of EIT media in
// optical lattices or under standing-wave ac Stark modulation.
//
//   eit-bragg <subcommand> --config <path> [--out-dir <path>] [--points N] [--threshold X]
//
// Exit codes: 0 success, 1 invalid input, 2 oracle mismatch (validate), 3 I/O.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eitbragg/config.hpp"
#include "eitbragg/emit.hpp"
#include "eitbragg/runner.hpp"

namespace fs = std::filesystem;
using namespace eitbragg;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_mismatch = 2;
constexpr int exit_io = 3;

struct Options {
    std::string config;
    std::string out_dir = ".";
    std::optional<int> points;
    double threshold = 0.5;
};

struct Chart {
    std::string suffix;
    std::string y_label;
    std::vector<double> y;
};

class Outputs {
public:
    Outputs(const Scenario& sc, const Options& opt, std::string command)
        : out_dir_(opt.out_dir), command_(std::move(command)) {
        specs_ = sc.outputs;
        if (specs_.empty()) {
            const std::string stem = fs::path(opt.config).stem().string();
            for (const char* f : {"csv", "json", "svg"}) specs_.push_back({f, stem});
        }
    }

    bool wants(const std::string& format) const {
        for (const auto& s : specs_)
            if (s.format == format) return true;
        return false;
    }

    void write(const std::string& format, const std::string& extension, const std::string& content) const {
        for (const auto& s : specs_)
            if (s.format == format) emit(path_for(s, extension), content);
    }

    void write_charts(const std::string& title, const std::vector<double>& x_ge, const std::vector<Chart>& charts) const {
        for (const auto& s : specs_) {
            if (s.format != "svg") continue;
            for (const auto& c : charts) {
                ChartSeries series{title + " - " + c.y_label, "detuning / gamma_e", c.y_label, x_ge, c.y};
                emit(path_for(s, "_" + c.suffix + ".svg"), svg_line_chart(series));
            }
        }
    }

private:
    fs::path path_for(const OutputSpec& spec, const std::string& extension) const {
        fs::path stem = spec.path;
        stem.replace_extension();
        fs::path p = stem.is_absolute() ? stem : fs::path(out_dir_) / stem;
        return p.string() + "_" + command_ + extension;
    }

    static void emit(const fs::path& path, const std::string& content) {
        write_file(path, content);
        std::cout << "wrote " << path.string() << '\n';
    }

    std::vector<OutputSpec> specs_;
    fs::path out_dir_;
    std::string command_;
};

Scenario load(const Options& opt) {
    Scenario sc = resolve(load_config(opt.config));
    if (opt.points) {
        if (!sc.sweep) throw ConfigError("sweep", "--points given but the config has no sweep section");
        if (*opt.points < 2) throw ConfigError("--points", "must be >= 2");
        sc.sweep->n_points = *opt.points;
    }
    if (!(opt.threshold > 0.0 && opt.threshold < 1.0)) throw ConfigError("--threshold", "must lie in (0, 1)");
    for (const auto& w : scenario_warnings(sc)) std::cerr << "warning: " << w << '\n';
    return sc;
}

std::vector<double> in_gamma_units(const std::vector<SpectrumRecord>& records, double gamma_e) {
    std::vector<double> x;
    for (const auto& r : records) x.push_back(r.delta / gamma_e);
    return x;
}

template <class F>
std::vector<double> column(const std::vector<SpectrumRecord>& records, F get) {
    std::vector<double> y;
    for (const auto& r : records) y.push_back(get(r));
    return y;
}

int cmd_spectrum(const Options& opt) {
    const Scenario sc = load(opt);
    const auto records = run_spectrum(sc);
    const Outputs out(sc, opt, "spectrum");
    std::ostringstream csv;
    write_spectrum_csv(csv, records);
    out.write("csv", ".csv", csv.str());
    const auto summary = spectrum_summary(sc, records, opt.threshold);
    out.write("json", ".json", dump_json(summary));
    out.write_charts("Spectrum", in_gamma_units(records, sc.medium.gamma_e),
                     {{"R", "R", column(records, [](const auto& r) { return r.r; })},
                      {"T", "T", column(records, [](const auto& r) { return r.t; })},
                      {"A", "A", column(records, [](const auto& r) { return r.a; })}});
    if (summary.contains("peak"))
        std::printf("peak R = %.6f at delta = %.6g gamma_e\n", summary["peak"]["R"].get<double>(),
                    summary["peak"]["delta_rad_s"].get<double>() / sc.medium.gamma_e);
    return exit_ok;
}

int cmd_dispersion(const Options& opt) {
    const Scenario sc = load(opt);
    const auto records = run_spectrum(sc);
    const Outputs out(sc, opt, "dispersion");
    std::ostringstream csv;
    write_dispersion_csv(csv, records);
    out.write("csv", ".csv", csv.str());
    if (out.wants("json")) {
        nlohmann::json j;
        j["model"] = std::string(to_string(sc.model));
        j["k_s_per_m"] = sc.k_s();
        j["delta_s_rad_s"] = sc.delta_s();
        const auto peak = std::max_element(records.begin(), records.end(),
                                           [](const auto& a, const auto& b) { return a.im_k < b.im_k; });
        j["max_im_k"] = {{"delta_rad_s", peak->delta}, {"im_k_per_m", peak->im_k}};
        out.write("json", ".json", dump_json(j));
    }
    out.write_charts("Bloch wave vector", in_gamma_units(records, sc.medium.gamma_e),
                     {{"reK", "Re K - k_s (1/m)", column(records, [](const auto& r) { return r.re_k_minus_ks; })},
                      {"imK", "Im K (1/m)", column(records, [](const auto& r) { return r.im_k; })}});
    return exit_ok;
}

int cmd_susceptibility(const Options& opt) {
    const Scenario sc = load(opt);
    const auto records = run_susceptibility(sc);
    const Outputs out(sc, opt, "susceptibility");
    std::ostringstream csv;
    write_susceptibility_csv(csv, records, sc.medium.a0);
    out.write("csv", ".csv", csv.str());
    if (out.wants("json")) {
        nlohmann::json j;
        j["a0_per_m"] = sc.medium.a0;
        j["gamma_e_rad_s"] = sc.medium.gamma_e;
        if (sc.medium.omega_d > 0.0) j["group_velocity_m_s"] = group_velocity(sc.medium);
        j["n_points"] = records.size();
        out.write("json", ".json", dump_json(j));
    }
    std::vector<double> x, re, im;
    for (const auto& r : records) {
        x.push_back(r.delta / sc.medium.gamma_e);
        re.push_back(r.alpha.real() / sc.medium.a0);
        im.push_back(r.alpha.imag() / sc.medium.a0);
    }
    out.write_charts("Polarizability", x, {{"re_alpha", "Re alpha / a0", re}, {"im_alpha", "Im alpha / a0", im}});
    return exit_ok;
}

int cmd_bandgap(const Options& opt) {
    const Scenario sc = load(opt);
    const auto rep = run_bandgap(sc, opt.threshold);
    const Outputs out(sc, opt, "bandgap");
    out.write("json", ".json", dump_json(to_json(rep, sc.medium.gamma_e)));
    const double ge = sc.medium.gamma_e;
    for (const auto* list : {&rep.closed_form, &rep.numeric})
        for (const auto& g : *list)
            std::printf("%-16s [%.6g, %.6g] gamma_e  width %.6g gamma_e  max Im K %.6g /m\n",
                        std::string(to_string(g.kind)).c_str(), g.lower_edge / ge, g.upper_edge / ge, g.width / ge,
                        g.max_im_k);
    return exit_ok;
}

int cmd_validate(const Options& opt) {
    const Scenario sc = load(opt);
    const auto rep = run_validate(sc);
    const Outputs out(sc, opt, "validate");
    out.write("json", ".json", dump_json(to_json(rep)));
    std::printf("max |dR| = %.3e, max |dT| = %.3e over %d points (RK4, %d steps): %s\n", rep.max_dr, rep.max_dt,
                rep.n_points, rep.n_steps, rep.passed() ? "ok" : "MISMATCH");
    return rep.passed() ? exit_ok : exit_mismatch;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_invalid;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_invalid;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probe spectra, Bloch dispersion and band gaps of EIT media in periodic structures"};
    app.require_subcommand(1);
    Options opt;

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const Options&);
    };
    const Command commands[] = {
        {"spectrum", "R, T, A and Bloch wave vector over the detuning sweep", cmd_spectrum},
        {"dispersion", "Re K - k_s and Im K over the detuning sweep", cmd_dispersion},
        {"bandgap", "closed-form and numerically detected band gaps", cmd_bandgap},
        {"validate", "compare the closed form against the RK4 oracle", cmd_validate},
        {"susceptibility", "Re/Im polarizability of the uniform medium", cmd_susceptibility},
    };
    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--config", opt.config, "run configuration (JSON)")->required();
        sub->add_option("--out-dir", opt.out_dir, "directory for output files");
        sub->add_option("--points", opt.points, "override sweep.n_points");
        sub->add_option("--threshold", opt.threshold, "reflectivity threshold for numeric gap detection");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_invalid;
    }

    for (const auto& c : commands)
        if (app.got_subcommand(c.name)) return guarded([&] { return c.run(opt); });
    return exit_invalid;
}
