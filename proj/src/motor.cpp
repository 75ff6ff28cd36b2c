#include "vfsim/motor.hpp"

#include <cmath>
#include <sstream>

#include "vfsim/errors.hpp"

namespace vfsim::motor {

namespace {

constexpr double kPi = 3.14159265358979323846;

MagnetInstance make_instance(const std::string& label, const MagnetConfig& mc,
                             const MotorConfig& motor, double alpha_rad) {
    MagnetInstance inst;
    inst.label = label;
    inst.spec = mc.resolve();
    inst.enabled = mc.enabled;
    inst.l_m_m = mc.l_m_m;
    inst.A_m_m2 = mc.A_m_m2;
    inst.pc_nominal = mc.pc_nominal;
    inst.pc_spread = motor.pc_spread;
    inst.elements = motor.elements_per_magnet;
    inst.turns = motor.turns_per_pole;
    inst.k_d = mc.k_d;
    inst.k_q = mc.k_q;
    inst.leakage = motor.leakage;
    inst.alpha_rad = alpha_rad;
    return inst;
}

} // namespace

PoleAssembly build_assembly(const Config& config) {
    config.validate();
    const MotorConfig& m = config.motor;
    const double gamma = m.gamma_deg * kPi / 180.0;

    PoleAssembly assembly;
    assembly.magnets.push_back(make_instance("hcf", m.hcf, m, 0.0));
    assembly.magnets.push_back(make_instance("lcf2", m.lcf2, m, -gamma));
    assembly.magnets.push_back(make_instance("lcf3", m.lcf3, m, +gamma));
    assembly.phase_turns = m.phase_turns;
    assembly.pole_pairs = m.pole_pairs;
    assembly.speed_rpm = m.speed_rpm;
    assembly.harmonic_3 = m.harmonic_3;

    // The HCF holds its full remanence from manufacture; the variable pair
    // starts demagnetized and is magnetized in-situ by the protocol pulse.
    for (const auto& inst : assembly.magnets) {
        const double rem = (inst.label == "hcf") ? inst.spec.Br_T : 0.0;
        assembly.states.emplace_back(inst.elements, material::MagnetState{rem});
    }
    return assembly;
}

std::vector<double> element_pcs(const MagnetInstance& magnet) {
    if (magnet.elements < 1) {
        std::ostringstream oss;
        oss << "magnet '" << magnet.label << "': element count must be >= 1, got "
            << magnet.elements;
        throw DomainError(oss.str());
    }
    std::vector<double> pcs(magnet.elements);
    for (int i = 0; i < magnet.elements; ++i) {
        const double t =
            (magnet.elements == 1) ? 0.0 : 2.0 * i / (magnet.elements - 1.0) - 1.0;
        pcs[i] = magnet.pc_nominal * (1.0 + magnet.pc_spread * t);
        if (!(pcs[i] > 0.0)) {
            std::ostringstream oss;
            oss << "magnet '" << magnet.label << "': pc ladder left the positive range ("
                << pcs[i] << " at element " << i << ")";
            throw DomainError(oss.str());
        }
    }
    return pcs;
}

double applied_field_shift(const MagnetInstance& magnet, double i_d_A, double i_q_A) {
    return magnet.turns / magnet.l_m_m * (magnet.k_d * i_d_A + magnet.k_q * i_q_A);
}

AssemblySolution solve_assembly(PoleAssembly& assembly, double i_d_A, double i_q_A) {
    AssemblySolution solution;
    solution.magnets.resize(assembly.magnets.size());
    for (std::size_t mi = 0; mi < assembly.magnets.size(); ++mi) {
        const MagnetInstance& inst = assembly.magnets[mi];
        MagnetSolution& out = solution.magnets[mi];
        if (!inst.enabled) continue;

        const double shift = applied_field_shift(inst, i_d_A, i_q_A);
        const std::vector<double> pcs = element_pcs(inst);
        double sum_b = 0.0;
        double sum_rem = 0.0;
        for (std::size_t ei = 0; ei < pcs.size(); ++ei) {
            material::MagnetState& state = assembly.states[mi][ei];
            const circuit::LoadLine line{pcs[ei], shift};
            const circuit::OperatingPoint op =
                circuit::solve_operating_point(inst.spec, state, line);
            material::update_state(inst.spec, state, op.H_Apm);

            ElementPoint pt;
            pt.pc = pcs[ei];
            pt.H_Apm = op.H_Apm;
            pt.B_T = op.B_T;
            pt.J_T = op.B_T - material::kMu0 * op.H_Apm;
            pt.remanence_T = state.remanence_now_T;
            out.elements.push_back(pt);
            sum_b += pt.B_T;
            sum_rem += pt.remanence_T;
        }
        out.mean_B_T = sum_b / static_cast<double>(pcs.size());
        out.mean_remanence_T = sum_rem / static_cast<double>(pcs.size());
    }
    return solution;
}

std::complex<double> flux_phasor(const PoleAssembly& assembly, const AssemblySolution& solution) {
    if (solution.magnets.size() != assembly.magnets.size()) {
        throw InputError("flux_phasor: solution does not match the assembly layout");
    }
    std::complex<double> psi{0.0, 0.0};
    for (std::size_t mi = 0; mi < assembly.magnets.size(); ++mi) {
        const MagnetInstance& inst = assembly.magnets[mi];
        if (!inst.enabled) continue;
        const double flux = inst.leakage * inst.direction_sign * inst.A_m_m2 *
                            solution.magnets[mi].mean_B_T;
        psi += flux * std::polar(1.0, inst.alpha_rad);
    }
    return assembly.phase_turns * psi;
}

Waveforms synth_waveforms(std::complex<double> psi_phasor, int samples_per_period,
                          double speed_rpm, double pole_pairs, double harmonic_3) {
    if (samples_per_period < 64) {
        std::ostringstream oss;
        oss << "synth_waveforms: need at least 64 samples per period, got "
            << samples_per_period;
        throw ConfigError(oss.str());
    }
    const double f_e = speed_rpm / 60.0 * pole_pairs;
    if (!(f_e > 0.0)) {
        std::ostringstream oss;
        oss << "synth_waveforms: electrical frequency must be > 0 (speed " << speed_rpm
            << " rpm, " << pole_pairs << " pole pairs)";
        throw DomainError(oss.str());
    }

    const int n = samples_per_period;
    const double amp = std::abs(psi_phasor);
    const double phase = std::arg(psi_phasor);

    Waveforms w;
    w.f_e_Hz = f_e;
    w.dt_s = 1.0 / (f_e * n);
    w.psi_Wb.resize(n);
    w.emf_V.resize(n);
    for (int k = 0; k < n; ++k) {
        const double theta = 2.0 * kPi * k / n;
        w.psi_Wb[k] = amp * std::cos(theta + phase) +
                      harmonic_3 * amp * std::cos(3.0 * (theta + phase));
    }
    for (int k = 0; k < n; ++k) {
        const double next = w.psi_Wb[(k + 1) % n];
        const double prev = w.psi_Wb[(k + n - 1) % n];
        w.emf_V[k] = -(next - prev) / (2.0 * w.dt_s);
    }
    return w;
}

} // namespace vfsim::motor
