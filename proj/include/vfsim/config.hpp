#pragma once

#include <optional>
#include <string>

#include "vfsim/material.hpp"

namespace vfsim {

/// One magnet block of the pole: preset choice, optional property overrides,
/// and its place in the magnetic and electric circuit.
struct MagnetConfig {
    std::string preset = "studied-LCF";
    bool enabled = true;
    double l_m_m = 0.004;      ///< magnetization length
    double A_m_m2 = 0.0018;    ///< magnet area normal to flux
    double pc_nominal = 10.0;  ///< element ladder center, spread by MotorConfig::pc_spread
    double k_d = 0.1;          ///< d-axis current coupling
    double k_q = 0.0;          ///< q-axis current coupling, signed
    // Field overrides on top of the preset; absent means "use the preset value".
    std::optional<double> Br_T;
    std::optional<double> iHc_Apm;
    std::optional<double> mu_rec;
    std::optional<double> mu_g;
    std::optional<double> round_radius_Apm;

    /// Preset + overrides, validated.
    material::MagnetSpec resolve() const;
};

struct MotorConfig {
    int pole_pairs = 3;
    double speed_rpm = 3000.0;
    double phase_turns = 17.5;     ///< effective series turns scaling the flux linkage
    double turns_per_pole = 60.0;  ///< N in the mmf shift N (k_d i_d + k_q i_q) / l_m
    double gamma_deg = 30.0;       ///< electrical angle between HCF and each LCF axis
    double leakage = 0.9;          ///< sigma, fraction of magnet flux linking the phase
    double pc_spread = 0.2;        ///< +/- fraction of pc_nominal across elements
    int elements_per_magnet = 5;
    double harmonic_3 = 0.0;       ///< relative third-harmonic content of the linkage
    MagnetConfig hcf;
    MagnetConfig lcf2;
    MagnetConfig lcf3;
};

struct ProtocolConfig {
    double pulse_current_A = 1000.0;  ///< interval-1 d-axis magnetizing pulse
    double current_limit_A = 60.0;    ///< bound on |i_d|, |i_q| accepted for the load interval
    int samples_per_period = 360;     ///< waveform samples over one electrical period, >= 64
};

struct SweepConfig {
    double theta_min_deg = -90.0;
    double theta_max_deg = 90.0;
    int theta_steps = 19;
    double current_min_A = 0.0;
    double current_max_A = 60.0;
    int current_steps = 13;
    int parallelism = 4;
};

struct Config {
    MotorConfig motor;
    ProtocolConfig protocol;
    SweepConfig sweep;

    /// The calibrated defaults every command starts from.
    static Config defaults();

    /// Parse and validate a JSON config document. Absent keys keep their
    /// defaults; unknown keys are rejected with their full path.
    static Config from_json_text(const std::string& text);
    static Config load(const std::string& path);

    /// Full dump of every field, suitable as a config file.
    std::string to_json_text(int indent = 2) const;

    /// Throws ConfigError / DomainError on any out-of-range field.
    void validate() const;
};

} // namespace vfsim
