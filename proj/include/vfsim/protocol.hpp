#pragma once

#include <array>
#include <vector>

#include "vfsim/config.hpp"
#include "vfsim/motor.hpp"

namespace vfsim::protocol {

struct Fundamental {
    double amplitude = 0.0;
    double phase_rad = 0.0;  ///< in (-pi, pi]
};

/// Single-bin DFT of one uniformly sampled period: for x_k = A cos(theta_k + phi)
/// with theta_k = 2 pi k / n it returns exactly (A, phi) up to rounding, and
/// rejects every other integer harmonic exactly. Requires n >= 64.
Fundamental fundamental(const std::vector<double>& samples);

/// phase4 - phase2 wrapped into (-pi, pi]. The interval-2 fundamental is the
/// reference; an amplitude at or below the floor leaves the shift undefined.
double phase_shift(const Fundamental& fund4, const Fundamental& fund2);

/// One step of the magnetize / load / observe schedule.
struct Interval {
    double duration_periods = 0.0;
    double i_d_A = 0.0;
    double i_q_A = 0.0;
};

/// The five-interval schedule: idle sixth-period, +pulse sixth-period,
/// no-load period, on-load period, no-load period.
std::array<Interval, 5> make_plan(const Config& config, double i_d_load_A, double i_q_load_A);

struct MagnetReport {
    double ms_b = 0.0;         ///< field-based state, interval-3 operating B over Br
    double ms_j = 0.0;         ///< polarization state, post-interval-3 remanence over Jr
    double remanence_T = 0.0;  ///< mean element remanence after interval 4
};

struct RunResult {
    double i_d_A = 0.0;
    double i_q_A = 0.0;

    Fundamental psi_2, psi_4;  ///< flux-linkage fundamentals of intervals 2 and 4
    Fundamental emf_2, emf_4;
    double delta_rad = 0.0;    ///< no-load phase shift across the load interval

    motor::Waveforms waveforms_2, waveforms_4;
    motor::AssemblySolution post_pulse;  ///< snapshot at the end of interval 1
    motor::AssemblySolution snapshot;    ///< snapshot at the end of interval 3

    MagnetReport lcf2, lcf3;
    double ms_b_aggregate = 0.0;  ///< both LCF magnets pooled, volume-weighted
    double ms_j_aggregate = 0.0;
    double ms_flux = 0.0;
    double ms_emf = 0.0;
};

/// Execute the schedule on a fresh assembly and reduce it to the four
/// magnetization-state metrics. Solver failures carry the interval index and
/// currents; load currents outside the configured limit are rejected.
RunResult run_protocol(const Config& config, double i_d_load_A, double i_q_load_A);

} // namespace vfsim::protocol
