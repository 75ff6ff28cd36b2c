#pragma once

#include "vfsim/material.hpp"

namespace vfsim::circuit {

/// Permeance coefficient of a magnet-plus-airgap loop with infinitely
/// permeable iron: PC = (l_m A_g) / (l_g A_m). All arguments strictly
/// positive; units cancel as long as lengths and areas are consistent.
double permeance_coefficient(double l_m, double l_g, double A_m, double A_g);

/// Demagnetization load line B = -mu0 pc (H - mmf_shift). A zero shift is the
/// open-circuit line through the origin; a d-axis current moves the line
/// horizontally by the equivalent field N i_d / l_m.
struct LoadLine {
    double pc = 0.0;
    double mmf_shift_Apm = 0.0;
};

double load_line_b(const LoadLine& line, double H_Apm);

struct OperatingPoint {
    double H_Apm = 0.0;
    double B_T = 0.0;
};

inline constexpr double kFluxTolT = 1e-9;     ///< |B_magnet - B_line| convergence bound
inline constexpr int kMaxBisectIterations = 200;
inline constexpr int kMaxBracketExpansions = 4;

/// Intersect the element's clamped recoil characteristic with the load line.
/// Bisection on a bracket centered at the shift with half-width 10 iHc,
/// doubled up to four times when the mismatch does not change sign. The
/// characteristic is strictly increasing and the line strictly decreasing, so
/// the root is unique. SolverError carries the bracket endpoints on failure.
OperatingPoint solve_operating_point(const material::MagnetSpec& spec,
                                     const material::MagnetState& state,
                                     const LoadLine& line);

} // namespace vfsim::circuit
