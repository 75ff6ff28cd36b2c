#include "vfsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vfsim/errors.hpp"
#include "vfsim/material.hpp"

namespace vfsim {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

void expect_object(const json& node, const std::string& path) {
    if (!node.is_object()) fail(path + ": expected an object");
}

/// Reject keys the schema does not know; silent typos in overlay files are
/// worse than a hard error.
void check_keys(const json& node, const std::string& path,
                std::initializer_list<const char*> known) {
    for (const auto& item : node.items()) {
        bool ok = false;
        for (const char* k : known) {
            if (item.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) fail(path + "." + item.key() + ": unknown key");
    }
}

double get_number(const json& node, const std::string& path) {
    if (!node.is_number()) fail(path + ": expected a number");
    return node.get<double>();
}

int get_int(const json& node, const std::string& path) {
    if (!node.is_number_integer()) fail(path + ": expected an integer");
    return node.get<int>();
}

bool get_bool(const json& node, const std::string& path) {
    if (!node.is_boolean()) fail(path + ": expected a boolean");
    return node.get<bool>();
}

std::string get_string(const json& node, const std::string& path) {
    if (!node.is_string()) fail(path + ": expected a string");
    return node.get<std::string>();
}

/// Overlay a magnet block onto its defaults.
void merge_magnet(MagnetConfig& out, const json& node, const std::string& path) {
    expect_object(node, path);
    check_keys(node, path,
               {"preset", "enabled", "l_m_m", "A_m_m2", "pc_nominal", "k_d", "k_q",
                "Br_T", "iHc_Apm", "mu_rec", "mu_g", "round_radius_Apm"});
    for (const auto& item : node.items()) {
        const std::string p = path + "." + item.key();
        const json& v = item.value();
        if (item.key() == "preset")
            out.preset = get_string(v, p);
        else if (item.key() == "enabled")
            out.enabled = get_bool(v, p);
        else if (item.key() == "l_m_m")
            out.l_m_m = get_number(v, p);
        else if (item.key() == "A_m_m2")
            out.A_m_m2 = get_number(v, p);
        else if (item.key() == "pc_nominal")
            out.pc_nominal = get_number(v, p);
        else if (item.key() == "k_d")
            out.k_d = get_number(v, p);
        else if (item.key() == "k_q")
            out.k_q = get_number(v, p);
        else if (item.key() == "Br_T")
            out.Br_T = get_number(v, p);
        else if (item.key() == "iHc_Apm")
            out.iHc_Apm = get_number(v, p);
        else if (item.key() == "mu_rec")
            out.mu_rec = get_number(v, p);
        else if (item.key() == "mu_g")
            out.mu_g = get_number(v, p);
        else if (item.key() == "round_radius_Apm")
            out.round_radius_Apm = get_number(v, p);
    }
}

void merge_motor(MotorConfig& out, const json& node, const std::string& path) {
    expect_object(node, path);
    check_keys(node, path,
               {"pole_pairs", "speed_rpm", "phase_turns", "turns_per_pole", "gamma_deg",
                "leakage", "pc_spread", "elements_per_magnet", "harmonic_3", "hcf",
                "lcf2", "lcf3"});
    for (const auto& item : node.items()) {
        const std::string p = path + "." + item.key();
        const json& v = item.value();
        if (item.key() == "pole_pairs")
            out.pole_pairs = get_int(v, p);
        else if (item.key() == "speed_rpm")
            out.speed_rpm = get_number(v, p);
        else if (item.key() == "phase_turns")
            out.phase_turns = get_number(v, p);
        else if (item.key() == "turns_per_pole")
            out.turns_per_pole = get_number(v, p);
        else if (item.key() == "gamma_deg")
            out.gamma_deg = get_number(v, p);
        else if (item.key() == "leakage")
            out.leakage = get_number(v, p);
        else if (item.key() == "pc_spread")
            out.pc_spread = get_number(v, p);
        else if (item.key() == "elements_per_magnet")
            out.elements_per_magnet = get_int(v, p);
        else if (item.key() == "harmonic_3")
            out.harmonic_3 = get_number(v, p);
        else if (item.key() == "hcf")
            merge_magnet(out.hcf, v, p);
        else if (item.key() == "lcf2")
            merge_magnet(out.lcf2, v, p);
        else if (item.key() == "lcf3")
            merge_magnet(out.lcf3, v, p);
    }
}

void merge_protocol(ProtocolConfig& out, const json& node, const std::string& path) {
    expect_object(node, path);
    check_keys(node, path, {"pulse_current_A", "current_limit_A", "samples_per_period"});
    for (const auto& item : node.items()) {
        const std::string p = path + "." + item.key();
        const json& v = item.value();
        if (item.key() == "pulse_current_A")
            out.pulse_current_A = get_number(v, p);
        else if (item.key() == "current_limit_A")
            out.current_limit_A = get_number(v, p);
        else if (item.key() == "samples_per_period")
            out.samples_per_period = get_int(v, p);
    }
}

void merge_sweep(SweepConfig& out, const json& node, const std::string& path) {
    expect_object(node, path);
    check_keys(node, path,
               {"theta_min_deg", "theta_max_deg", "theta_steps", "current_min_A",
                "current_max_A", "current_steps", "parallelism"});
    for (const auto& item : node.items()) {
        const std::string p = path + "." + item.key();
        const json& v = item.value();
        if (item.key() == "theta_min_deg")
            out.theta_min_deg = get_number(v, p);
        else if (item.key() == "theta_max_deg")
            out.theta_max_deg = get_number(v, p);
        else if (item.key() == "theta_steps")
            out.theta_steps = get_int(v, p);
        else if (item.key() == "current_min_A")
            out.current_min_A = get_number(v, p);
        else if (item.key() == "current_max_A")
            out.current_max_A = get_number(v, p);
        else if (item.key() == "current_steps")
            out.current_steps = get_int(v, p);
        else if (item.key() == "parallelism")
            out.parallelism = get_int(v, p);
    }
}

json magnet_to_json(const MagnetConfig& m) {
    json j;
    j["preset"] = m.preset;
    j["enabled"] = m.enabled;
    j["l_m_m"] = m.l_m_m;
    j["A_m_m2"] = m.A_m_m2;
    j["pc_nominal"] = m.pc_nominal;
    j["k_d"] = m.k_d;
    j["k_q"] = m.k_q;
    if (m.Br_T) j["Br_T"] = *m.Br_T;
    if (m.iHc_Apm) j["iHc_Apm"] = *m.iHc_Apm;
    if (m.mu_rec) j["mu_rec"] = *m.mu_rec;
    if (m.mu_g) j["mu_g"] = *m.mu_g;
    if (m.round_radius_Apm) j["round_radius_Apm"] = *m.round_radius_Apm;
    return j;
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << what << " must be positive and finite, got " << v;
        fail(os.str());
    }
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << what << " must be finite, got " << v;
        fail(os.str());
    }
}

void validate_magnet(const MagnetConfig& m, const char* label) {
    std::string base(label);
    require_positive(m.l_m_m, (base + ".l_m_m").c_str());
    require_positive(m.A_m_m2, (base + ".A_m_m2").c_str());
    require_positive(m.pc_nominal, (base + ".pc_nominal").c_str());
    require_finite(m.k_d, (base + ".k_d").c_str());
    require_finite(m.k_q, (base + ".k_q").c_str());
    // Resolution also validates the underlying magnet spec and preset name.
    try {
        material::validate(m.resolve());
    } catch (const Error& e) {
        fail(base + ": " + e.what());
    }
}

}  // namespace

material::MagnetSpec MagnetConfig::resolve() const {
    material::MagnetSpec spec = material::preset(preset);
    if (Br_T) spec.Br_T = *Br_T;
    if (iHc_Apm) spec.iHc_Apm = *iHc_Apm;
    if (mu_rec) spec.mu_rec = *mu_rec;
    if (mu_g) spec.mu_g = *mu_g;
    if (round_radius_Apm) spec.round_radius_Apm = *round_radius_Apm;
    material::validate(spec);
    return spec;
}

Config Config::defaults() {
    Config c;

    c.motor.hcf.preset = "NdFeB-1.2T";
    c.motor.hcf.A_m_m2 = 0.0036;
    c.motor.hcf.pc_nominal = 5.0;
    c.motor.hcf.k_d = 0.1;
    c.motor.hcf.k_q = 0.0;
    c.motor.hcf.round_radius_Apm = 0.0;

    c.motor.lcf2.preset = "studied-LCF";
    c.motor.lcf2.k_d = 0.1;
    c.motor.lcf2.k_q = -0.03;
    c.motor.lcf2.round_radius_Apm = 0.0;

    c.motor.lcf3.preset = "studied-LCF";
    c.motor.lcf3.k_d = 0.1;
    c.motor.lcf3.k_q = 0.03;
    c.motor.lcf3.round_radius_Apm = 0.0;

    return c;
}

Config Config::from_json_text(const std::string& text) {
    json root = json::parse(text, nullptr, false);
    if (root.is_discarded()) fail("config: not valid JSON");
    expect_object(root, "config");
    check_keys(root, "config", {"motor", "protocol", "sweep"});

    Config c = defaults();
    if (root.contains("motor")) merge_motor(c.motor, root["motor"], "config.motor");
    if (root.contains("protocol"))
        merge_protocol(c.protocol, root["protocol"], "config.protocol");
    if (root.contains("sweep")) merge_sweep(c.sweep, root["sweep"], "config.sweep");
    c.validate();
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

std::string Config::to_json_text(int indent) const {
    json j;
    j["motor"]["pole_pairs"] = motor.pole_pairs;
    j["motor"]["speed_rpm"] = motor.speed_rpm;
    j["motor"]["phase_turns"] = motor.phase_turns;
    j["motor"]["turns_per_pole"] = motor.turns_per_pole;
    j["motor"]["gamma_deg"] = motor.gamma_deg;
    j["motor"]["leakage"] = motor.leakage;
    j["motor"]["pc_spread"] = motor.pc_spread;
    j["motor"]["elements_per_magnet"] = motor.elements_per_magnet;
    j["motor"]["harmonic_3"] = motor.harmonic_3;
    j["motor"]["hcf"] = magnet_to_json(motor.hcf);
    j["motor"]["lcf2"] = magnet_to_json(motor.lcf2);
    j["motor"]["lcf3"] = magnet_to_json(motor.lcf3);
    j["protocol"]["pulse_current_A"] = protocol.pulse_current_A;
    j["protocol"]["current_limit_A"] = protocol.current_limit_A;
    j["protocol"]["samples_per_period"] = protocol.samples_per_period;
    j["sweep"]["theta_min_deg"] = sweep.theta_min_deg;
    j["sweep"]["theta_max_deg"] = sweep.theta_max_deg;
    j["sweep"]["theta_steps"] = sweep.theta_steps;
    j["sweep"]["current_min_A"] = sweep.current_min_A;
    j["sweep"]["current_max_A"] = sweep.current_max_A;
    j["sweep"]["current_steps"] = sweep.current_steps;
    j["sweep"]["parallelism"] = sweep.parallelism;
    return j.dump(indent) + "\n";
}

void Config::validate() const {
    if (motor.pole_pairs < 1) fail("motor.pole_pairs must be at least 1");
    require_positive(motor.speed_rpm, "motor.speed_rpm");
    require_positive(motor.phase_turns, "motor.phase_turns");
    require_positive(motor.turns_per_pole, "motor.turns_per_pole");
    require_finite(motor.gamma_deg, "motor.gamma_deg");
    if (!(motor.gamma_deg > 0.0) || !(motor.gamma_deg < 90.0))
        fail("motor.gamma_deg must lie in (0, 90)");
    if (!(motor.leakage > 0.0) || !(motor.leakage <= 1.0))
        fail("motor.leakage must lie in (0, 1]");
    if (!(motor.pc_spread >= 0.0) || !(motor.pc_spread < 1.0))
        fail("motor.pc_spread must lie in [0, 1)");
    if (motor.elements_per_magnet < 1) fail("motor.elements_per_magnet must be at least 1");
    require_finite(motor.harmonic_3, "motor.harmonic_3");

    validate_magnet(motor.hcf, "motor.hcf");
    validate_magnet(motor.lcf2, "motor.lcf2");
    validate_magnet(motor.lcf3, "motor.lcf3");

    require_finite(protocol.pulse_current_A, "protocol.pulse_current_A");
    require_positive(protocol.current_limit_A, "protocol.current_limit_A");
    if (protocol.samples_per_period < 64)
        fail("protocol.samples_per_period must be at least 64");

    require_finite(sweep.theta_min_deg, "sweep.theta_min_deg");
    require_finite(sweep.theta_max_deg, "sweep.theta_max_deg");
    if (sweep.theta_max_deg < sweep.theta_min_deg)
        fail("sweep.theta_max_deg must not be below sweep.theta_min_deg");
    if (sweep.theta_steps < 1) fail("sweep.theta_steps must be at least 1");
    if (!(sweep.current_min_A >= 0.0)) fail("sweep.current_min_A must be non-negative");
    if (sweep.current_max_A < sweep.current_min_A)
        fail("sweep.current_max_A must not be below sweep.current_min_A");
    if (sweep.current_steps < 1) fail("sweep.current_steps must be at least 1");
    if (sweep.parallelism < 1) fail("sweep.parallelism must be at least 1");
    if ((sweep.theta_steps > 1 && sweep.theta_max_deg == sweep.theta_min_deg) ||
        (sweep.current_steps > 1 && sweep.current_max_A == sweep.current_min_A))
        fail("sweep axis with several steps needs a non-degenerate range");
}

}  // namespace vfsim
