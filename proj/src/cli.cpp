#include "vfsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vfsim/config.hpp"
#include "vfsim/errors.hpp"
#include "vfsim/material.hpp"
#include "vfsim/motor.hpp"
#include "vfsim/protocol.hpp"
#include "vfsim/sweep.hpp"

namespace vfsim::cli {
namespace {

std::string g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

Config load_or_default(const std::string& path) {
    return path.empty() ? Config::defaults() : Config::load(path);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open output file: " + path);
    out << text;
    if (!out) throw InputError("failed writing: " + path);
}

nlohmann::json magnet_snapshot_json(const motor::MagnetSolution& sol) {
    nlohmann::json j;
    j["mean_B_T"] = sol.mean_B_T;
    j["mean_remanence_T"] = sol.mean_remanence_T;
    nlohmann::json elements = nlohmann::json::array();
    for (const auto& e : sol.elements) {
        elements.push_back({{"pc", e.pc},
                            {"H_Apm", e.H_Apm},
                            {"B_T", e.B_T},
                            {"J_T", e.J_T},
                            {"remanence_T", e.remanence_T}});
    }
    j["elements"] = std::move(elements);
    return j;
}

nlohmann::json simulate_json(const protocol::RunResult& res) {
    nlohmann::json j;
    j["i_d_A"] = res.i_d_A;
    j["i_q_A"] = res.i_q_A;
    j["f_e_Hz"] = res.waveforms_2.f_e_Hz;
    j["flux"]["amplitude_noload_Wb"] = res.psi_2.amplitude;
    j["flux"]["amplitude_after_load_Wb"] = res.psi_4.amplitude;
    j["flux"]["phase_noload_rad"] = res.psi_2.phase_rad;
    j["flux"]["phase_after_load_rad"] = res.psi_4.phase_rad;
    j["emf"]["amplitude_noload_V"] = res.emf_2.amplitude;
    j["emf"]["amplitude_after_load_V"] = res.emf_4.amplitude;
    j["delta_rad"] = res.delta_rad;
    j["ms"]["flux"] = res.ms_flux;
    j["ms"]["emf"] = res.ms_emf;
    j["ms"]["b_aggregate"] = res.ms_b_aggregate;
    j["ms"]["j_aggregate"] = res.ms_j_aggregate;
    j["ms"]["b_lcf2"] = res.lcf2.ms_b;
    j["ms"]["b_lcf3"] = res.lcf3.ms_b;
    j["ms"]["j_lcf2"] = res.lcf2.ms_j;
    j["ms"]["j_lcf3"] = res.lcf3.ms_j;
    j["remanence_T"]["lcf2"] = res.lcf2.remanence_T;
    j["remanence_T"]["lcf3"] = res.lcf3.remanence_T;
    static const char* const kMagnetNames[] = {"hcf", "lcf2", "lcf3"};
    for (std::size_t mi = 0; mi < res.snapshot.magnets.size() && mi < 3; ++mi) {
        const auto& sol = res.snapshot.magnets[mi];
        if (sol.elements.empty()) continue;  // disabled magnet
        j["load_snapshot"][kMagnetNames[mi]] = magnet_snapshot_json(sol);
    }
    return j;
}

/// Accepts a preset name or the path of a JSON object with an optional
/// "preset" base plus property overrides.
material::MagnetSpec resolve_curve_material(const std::string& name_or_path) {
    std::ifstream in(name_or_path, std::ios::binary);
    if (!in) return material::preset(name_or_path);

    const std::string where = "material file " + name_or_path;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(where + ": expected a JSON object");

    static const char* const kKeys[] = {"preset", "name",  "Br_T",
                                        "iHc_Apm", "mu_rec", "mu_g",
                                        "round_radius_Apm"};
    for (const auto& item : doc.items()) {
        if (std::find_if(std::begin(kKeys), std::end(kKeys), [&](const char* k) {
                return item.key() == k;
            }) == std::end(kKeys)) {
            throw ConfigError(where + ": unknown key '" + item.key() + "'");
        }
    }

    material::MagnetSpec spec;
    spec.name = name_or_path;
    const auto str = [&](const char* key, std::string& field) {
        if (!doc.contains(key)) return;
        if (!doc[key].is_string()) throw ConfigError(where + ": " + key + " must be a string");
        field = doc[key].get<std::string>();
    };
    std::string preset_name;
    str("preset", preset_name);
    if (!preset_name.empty()) {
        const std::string keep = spec.name;
        spec = material::preset(preset_name);
        spec.name = keep;
    }
    str("name", spec.name);
    const auto num = [&](const char* key, double& field) {
        if (!doc.contains(key)) return;
        if (!doc[key].is_number()) throw ConfigError(where + ": " + key + " must be a number");
        field = doc[key].get<double>();
    };
    num("Br_T", spec.Br_T);
    num("iHc_Apm", spec.iHc_Apm);
    num("mu_rec", spec.mu_rec);
    num("mu_g", spec.mu_g);
    num("round_radius_Apm", spec.round_radius_Apm);
    material::validate(spec);
    return spec;
}

}  // namespace

int cmd_curve(const CurveOptions& options, std::ostream& out) {
    material::MagnetSpec spec = resolve_curve_material(options.material);
    if (options.round_radius_Apm) {
        spec.round_radius_Apm = *options.round_radius_Apm;
        material::validate(spec);
    }
    if (options.points < 2) throw InputError("curve needs at least 2 points");
    if (options.recoil_from_T && std::abs(*options.recoil_from_T) > spec.Br_T)
        throw InputError("recoil remanence must lie within +/- Br");
    double lo = options.h_min_Apm;
    double hi = options.h_max_Apm;
    if (lo == 0.0 && hi == 0.0) {
        lo = -2.0 * spec.iHc_Apm;
        hi = 2.0 * spec.iHc_Apm;
    }
    if (!(hi > lo)) throw InputError("curve field range must satisfy h-max > h-min");

    const material::MajorLoop loop(spec);
    const material::MagnetState recoil_state{options.recoil_from_T.value_or(0.0)};
    std::ostringstream csv;
    csv << "H_Apm,J_desc_T,B_desc_T,J_asc_T,B_asc_T";
    if (options.recoil_from_T) csv << ",B_recoil_T";
    csv << '\n';
    for (int k = 0; k < options.points; ++k) {
        const double h =
            lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(options.points - 1);
        csv << g9(h) << ',' << g9(loop.j_descending(h)) << ',' << g9(loop.b_descending(h))
            << ',' << g9(loop.j_ascending(h)) << ',' << g9(loop.b_ascending(h));
        if (options.recoil_from_T) csv << ',' << g9(material::recoil_b(spec, recoil_state, h));
        csv << '\n';
    }
    if (options.output_path.empty())
        out << csv.str();
    else
        write_text_file(options.output_path, csv.str());
    return 0;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out) {
    const Config config = load_or_default(options.config_path);
    const protocol::RunResult res =
        protocol::run_protocol(config, options.i_d_A, options.i_q_A);

    if (options.json) {
        out << simulate_json(res).dump(2) << '\n';
        return 0;
    }
    char line[160];
    std::snprintf(line, sizeof(line), "operating point   id = %.6g A, iq = %.6g A\n",
                  res.i_d_A, res.i_q_A);
    out << line;
    std::snprintf(line, sizeof(line), "electrical freq   %.6g Hz\n",
                  res.waveforms_2.f_e_Hz);
    out << line;
    std::snprintf(line, sizeof(line), "flux fundamental  %.6g Wb -> %.6g Wb\n",
                  res.psi_2.amplitude, res.psi_4.amplitude);
    out << line;
    std::snprintf(line, sizeof(line), "emf fundamental   %.6g V -> %.6g V\n",
                  res.emf_2.amplitude, res.emf_4.amplitude);
    out << line;
    std::snprintf(line, sizeof(line), "phase shift       %.6g rad\n", res.delta_rad);
    out << line;
    std::snprintf(line, sizeof(line), "MS(flux) %.6g   MS(emf) %.6g\n", res.ms_flux,
                  res.ms_emf);
    out << line;
    std::snprintf(line, sizeof(line), "MS(B)    %.6g   MS(J)   %.6g\n", res.ms_b_aggregate,
                  res.ms_j_aggregate);
    out << line;
    std::snprintf(line, sizeof(line),
                  "remanence         lcf2 %.6g T, lcf3 %.6g T\n",
                  res.lcf2.remanence_T, res.lcf3.remanence_T);
    out << line;
    return 0;
}

int cmd_sweep(const SweepOptions& options, std::ostream& out) {
    Config config = load_or_default(options.config_path);
    if (options.jobs > 0) config.sweep.parallelism = options.jobs;

    const sweep::Table table = sweep::run_sweep(config);
    sweep::write_csv(table, options.csv_path);
    std::string heatmap_path = options.heatmap_path;
    if (heatmap_path.empty() && options.plot) {
        std::string stem = options.csv_path;
        if (stem.size() >= 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0)
            stem.resize(stem.size() - 4);
        heatmap_path = stem + "_" + options.metric + ".svg";
    }
    if (!heatmap_path.empty())
        sweep::write_heatmap_svg(table, options.metric, heatmap_path);

    size_t failed = 0;
    for (const auto& row : table.rows)
        if (!row.ok()) ++failed;
    out << table.rows.size() << " rows, " << failed << " failed, csv: " << options.csv_path;
    if (!heatmap_path.empty()) out << ", heatmap: " << heatmap_path;
    out << '\n';

    for (const auto& name : sweep::metric_names()) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& row : table.rows) {
            if (!row.ok()) continue;
            const double v = sweep::metric_value(row, name);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        char line[120];
        if (lo <= hi)
            std::snprintf(line, sizeof(line), "%-10s min %.9g   max %.9g\n", name.c_str(),
                          lo, hi);
        else
            std::snprintf(line, sizeof(line), "%-10s (no finished rows)\n", name.c_str());
        out << line;
    }

    if (failed > 0) {
        std::ostringstream os;
        os << failed << " of " << table.rows.size() << " sweep rows failed";
        throw SolverError(os.str());
    }
    return 0;
}

int cmd_materials(const MaterialsOptions& options, std::ostream& out) {
    const auto& catalog = material::preset_catalog();
    if (options.json) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& entry : catalog) {
            nlohmann::json j;
            j["name"] = entry.spec.name;
            j["Br_T"] = entry.spec.Br_T;
            j["iHc_Apm"] = entry.spec.iHc_Apm;
            j["mu_rec"] = entry.spec.mu_rec;
            j["mu_g"] = entry.spec.mu_g;
            j["round_radius_Apm"] = entry.spec.round_radius_Apm;
            j["note"] = entry.temperature_note;
            list.push_back(std::move(j));
        }
        out << list.dump(2) << '\n';
        return 0;
    }
    char line[200];
    std::snprintf(line, sizeof(line), "%-16s %7s %10s %7s %6s %9s  %s\n", "name", "Br_T",
                  "iHc_kApm", "mu_rec", "mu_g", "R_kApm", "note");
    out << line;
    for (const auto& entry : catalog) {
        std::snprintf(line, sizeof(line), "%-16s %7.3f %10.1f %7.3f %6.2f %9.1f  %s\n",
                      entry.spec.name.c_str(), entry.spec.Br_T, entry.spec.iHc_Apm / 1e3,
                      entry.spec.mu_rec, entry.spec.mu_g,
                      entry.spec.round_radius_Apm / 1e3, entry.temperature_note.c_str());
        out << line;
    }
    return 0;
}

int cmd_config(const ConfigOptions& options, std::ostream& out) {
    out << load_or_default(options.config_path).to_json_text(2);
    return 0;
}

int main_entry(int argc, const char* const* argv) {
    CLI::App app{"variable-flux memory motor simulator"};
    app.require_subcommand(1);

    CurveOptions curve;
    CLI::App* curve_cmd = app.add_subcommand("curve", "sample major-loop branches as CSV");
    curve_cmd->add_option("--material", curve.material,
                          "material preset name or JSON magnet file")
        ->capture_default_str();
    curve_cmd->add_option("--h-min", curve.h_min_Apm, "field start in A/m (0 with --h-max 0 selects -2..+2 iHc)");
    curve_cmd->add_option("--h-max", curve.h_max_Apm, "field end in A/m");
    curve_cmd->add_option("--points", curve.points, "sample count")->capture_default_str();
    curve_cmd->add_option("--recoil", curve.recoil_from_T,
                          "append the recoil line from this remanence in T");
    curve_cmd->add_option("--round-radius", curve.round_radius_Apm,
                          "override the knee rounding half-width in A/m");
    curve_cmd->add_option("-o,--output", curve.output_path, "CSV path (default stdout)");

    SimulateOptions sim;
    CLI::App* sim_cmd =
        app.add_subcommand("simulate", "run the magnetization protocol at one current");
    sim_cmd->add_option("-c,--config", sim.config_path, "config JSON path");
    sim_cmd->add_option("--id", sim.i_d_A, "d-axis load current in A")->capture_default_str();
    sim_cmd->add_option("--iq", sim.i_q_A, "q-axis load current in A")->capture_default_str();
    sim_cmd->add_flag("--json", sim.json, "emit a JSON report");

    SweepOptions swp;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "run the protocol over the current plane");
    sweep_cmd->add_option("-c,--config", swp.config_path, "config JSON path");
    sweep_cmd->add_option("-o,--csv", swp.csv_path, "CSV output path")->capture_default_str();
    sweep_cmd->add_option("--heatmap", swp.heatmap_path, "SVG heatmap output path");
    sweep_cmd->add_option("--metric", swp.metric, "heatmap metric column")
        ->capture_default_str();
    sweep_cmd->add_flag("--plot", swp.plot, "emit the heatmap next to the CSV");
    sweep_cmd->add_option("-j,--jobs,--parallel", swp.jobs,
                          "worker threads (0 keeps config value)");

    MaterialsOptions mat;
    CLI::App* mat_cmd = app.add_subcommand("materials", "list material presets");
    mat_cmd->add_flag("--json", mat.json, "emit JSON");

    ConfigOptions cfg;
    CLI::App* cfg_cmd =
        app.add_subcommand("config", "print the effective configuration as JSON");
    cfg_cmd->add_option("-c,--config", cfg.config_path, "config JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (curve_cmd->parsed()) return cmd_curve(curve, std::cout);
        if (sim_cmd->parsed()) return cmd_simulate(sim, std::cout);
        if (sweep_cmd->parsed()) return cmd_sweep(swp, std::cout);
        if (mat_cmd->parsed()) return cmd_materials(mat, std::cout);
        if (cfg_cmd->parsed()) return cmd_config(cfg, std::cout);
    } catch (const Error& e) {
        nlohmann::json j{{"error", e.kind()}, {"message", e.what()}};
        std::cerr << j.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json j{{"error", "internal"}, {"message", e.what()}};
        std::cerr << j.dump() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace vfsim::cli
