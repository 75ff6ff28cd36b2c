#pragma once

#include <complex>
#include <string>
#include <vector>

#include "vfsim/circuit.hpp"
#include "vfsim/config.hpp"
#include "vfsim/material.hpp"

namespace vfsim::motor {

/// One magnet block of a pole, discretized into elements that share the
/// material state model but sit on their own load lines.
struct MagnetInstance {
    std::string label;
    material::MagnetSpec spec;
    bool enabled = true;
    double l_m_m = 0.0;
    double A_m_m2 = 0.0;
    double pc_nominal = 0.0;
    double pc_spread = 0.0;
    int elements = 1;
    double turns = 0.0;
    double k_d = 0.0;
    double k_q = 0.0;
    double leakage = 1.0;
    double alpha_rad = 0.0;       ///< electrical angle of this magnet's flux axis
    double direction_sign = 1.0;  ///< sign of the design magnetization axis
};

/// One pole of the machine: the HCF block plus the two LCF blocks, with the
/// per-element magnetization states alongside.
struct PoleAssembly {
    std::vector<MagnetInstance> magnets;                       // [hcf, lcf2, lcf3]
    std::vector<std::vector<material::MagnetState>> states;    // per magnet, per element
    double phase_turns = 0.0;
    double pole_pairs = 0.0;
    double speed_rpm = 0.0;
    double harmonic_3 = 0.0;
};

/// Indices of the magnets inside PoleAssembly::magnets.
inline constexpr int kHcf = 0;
inline constexpr int kLcf2 = 1;
inline constexpr int kLcf3 = 2;

/// Fresh assembly from a validated config: the HCF starts fully magnetized,
/// the variable LCF pair starts at zero remanence.
PoleAssembly build_assembly(const Config& config);

/// Element permeance ladder pc_nominal (1 + spread t_i), t_i uniform in [-1, 1].
std::vector<double> element_pcs(const MagnetInstance& magnet);

/// Equivalent field shift (A/m) the dq currents apply to this magnet's load
/// lines: (turns / l_m) (k_d i_d + k_q i_q).
double applied_field_shift(const MagnetInstance& magnet, double i_d_A, double i_q_A);

struct ElementPoint {
    double pc = 0.0;
    double H_Apm = 0.0;
    double B_T = 0.0;
    double J_T = 0.0;           ///< B - mu0 H at the operating point
    double remanence_T = 0.0;   ///< state after committing the excursion
};

struct MagnetSolution {
    std::vector<ElementPoint> elements;  // empty when the magnet is disabled
    double mean_B_T = 0.0;
    double mean_remanence_T = 0.0;
};

struct AssemblySolution {
    std::vector<MagnetSolution> magnets;
};

/// Solve every enabled element against its shifted load line and commit the
/// excursions to the states. Elements are independent; order does not matter.
AssemblySolution solve_assembly(PoleAssembly& assembly, double i_d_A, double i_q_A);

/// Phase-a flux-linkage phasor of a solved snapshot:
/// phase_turns * sum sigma_m A_m mean(B_m) e^{j alpha_m} over enabled magnets.
std::complex<double> flux_phasor(const PoleAssembly& assembly, const AssemblySolution& solution);

struct Waveforms {
    std::vector<double> psi_Wb;
    std::vector<double> emf_V;
    double dt_s = 0.0;
    double f_e_Hz = 0.0;
};

/// Sample one electrical period of the phase-a linkage
///   psi(theta) = |Psi| cos(theta + arg Psi) + harmonic_3 |Psi| cos(3 theta + 3 arg Psi)
/// and its back-EMF e = -dpsi/dt via central differences with periodic wrap.
Waveforms synth_waveforms(std::complex<double> psi_phasor, int samples_per_period,
                          double speed_rpm, double pole_pairs, double harmonic_3);

} // namespace vfsim::motor
