#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace vfsim::cli {

/// Samples the major-loop branches of one material over a field range and
/// writes them as CSV. `material` is a preset name or the path of a JSON
/// magnet description.
struct CurveOptions {
    std::string material = "studied-LCF";
    double h_min_Apm = 0.0;  ///< 0/0 selects -2 iHc .. +2 iHc
    double h_max_Apm = 0.0;
    int points = 401;
    std::optional<double> recoil_from_T;       ///< adds a recoil-line column
    std::optional<double> round_radius_Apm;    ///< overrides the knee rounding
    std::string output_path;  ///< empty writes to stdout
};

/// One protocol run at a fixed stator current.
struct SimulateOptions {
    std::string config_path;  ///< empty uses built-in defaults
    double i_d_A = 0.0;
    double i_q_A = 0.0;
    bool json = false;
};

/// Full current-plane sweep with CSV output and an optional heatmap.
struct SweepOptions {
    std::string config_path;
    std::string csv_path = "sweep.csv";
    std::string heatmap_path;  ///< empty skips the SVG unless `plot` is set
    std::string metric = "ms_flux";
    bool plot = false;  ///< emit the heatmap next to the CSV when no path given
    int jobs = 0;       ///< 0 keeps the configured parallelism
};

struct MaterialsOptions {
    bool json = false;
};

/// Prints the effective configuration, defaults overlaid with an optional
/// file, as JSON.
struct ConfigOptions {
    std::string config_path;
};

int cmd_curve(const CurveOptions& options, std::ostream& out);
int cmd_simulate(const SimulateOptions& options, std::ostream& out);
int cmd_sweep(const SweepOptions& options, std::ostream& out);
int cmd_materials(const MaterialsOptions& options, std::ostream& out);
int cmd_config(const ConfigOptions& options, std::ostream& out);

/// Parses argv, dispatches to a command, and maps failures to a JSON error
/// record on stderr with exit code 1.
int main_entry(int argc, const char* const* argv);

}  // namespace vfsim::cli
