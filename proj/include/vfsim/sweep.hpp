#pragma once

#include <string>
#include <vector>

#include "vfsim/config.hpp"

namespace vfsim::sweep {

/// One operating point of the current-plane sweep. Numeric fields of a failed
/// row are NaN and `error` carries the reason; they serialize as empty cells.
struct Row {
    double theta_deg = 0.0;  ///< advance angle of the current vector, q-axis = 0
    double current_A = 0.0;  ///< current magnitude
    double id_A = 0.0;
    double iq_A = 0.0;
    double ms_b_m2 = 0.0;
    double ms_b_m3 = 0.0;
    double ms_j_m2 = 0.0;
    double ms_j_m3 = 0.0;
    double ms_flux = 0.0;
    double ms_emf = 0.0;
    double rem_m2_T = 0.0;
    double rem_m3_T = 0.0;
    std::string error;

    bool ok() const { return error.empty(); }
};

struct Table {
    SweepConfig grid;
    std::vector<Row> rows;  ///< angle-major order, current varying fastest
};

/// Angle and current magnitude of a grid node; single-step axes collapse to
/// the midpoint of their range.
double grid_theta_deg(const SweepConfig& grid, int theta_index);
double grid_current_A(const SweepConfig& grid, int current_index);

/// Runs the magnetization protocol over the whole grid. Row order and values
/// do not depend on the parallelism setting.
Table run_sweep(const Config& config);

/// Names of the numeric columns a heatmap can plot.
const std::vector<std::string>& metric_names();
double metric_value(const Row& row, const std::string& metric);

std::string to_csv(const Table& table);
void write_csv(const Table& table, const std::string& path);

/// Parses text produced by to_csv. The header must match exactly.
Table read_csv(const std::string& text);

/// Renders the table as a half-annulus heatmap, one sector patch per grid
/// node, with a diverging color scale centered on zero.
std::string render_heatmap_svg(const Table& table, const std::string& metric);
void write_heatmap_svg(const Table& table, const std::string& metric,
                       const std::string& path);

}  // namespace vfsim::sweep
