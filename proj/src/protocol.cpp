#include "vfsim/protocol.hpp"

#include <cmath>
#include <sstream>

#include "vfsim/errors.hpp"
#include "vfsim/metrics.hpp"

namespace vfsim::protocol {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<metrics::ElementSample> magnet_samples(const motor::MagnetInstance& inst,
                                                   const motor::MagnetSolution& sol,
                                                   bool polarization_state) {
    std::vector<metrics::ElementSample> samples;
    samples.reserve(sol.elements.size());
    const double volume = inst.A_m_m2 * inst.l_m_m / static_cast<double>(inst.elements);
    for (const auto& e : sol.elements) {
        samples.push_back({polarization_state ? e.remanence_T : e.B_T,
                           inst.direction_sign, volume});
    }
    return samples;
}

} // namespace

Fundamental fundamental(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    if (n < 64) {
        std::ostringstream oss;
        oss << "fundamental: need at least 64 samples over one period, got " << n;
        throw InputError(oss.str());
    }
    double c = 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        c += samples[k] * std::cos(theta);
        s += samples[k] * std::sin(theta);
    }
    c *= 2.0 / static_cast<double>(n);
    s *= 2.0 / static_cast<double>(n);
    return {std::hypot(c, s), std::atan2(-s, c)};
}

double phase_shift(const Fundamental& fund4, const Fundamental& fund2) {
    if (!(fund2.amplitude > metrics::kAmplitudeFloor)) {
        throw DegenerateReferenceError(
            "phase shift undefined: interval-2 fundamental amplitude is at the floor");
    }
    if (!(fund4.amplitude > metrics::kAmplitudeFloor)) {
        throw DegenerateReferenceError(
            "phase shift undefined: interval-4 fundamental amplitude is at the floor");
    }
    double d = std::remainder(fund4.phase_rad - fund2.phase_rad, 2.0 * kPi);
    if (d <= -kPi) d += 2.0 * kPi;
    return d;
}

std::array<Interval, 5> make_plan(const Config& config, double i_d_load_A, double i_q_load_A) {
    const double pulse = config.protocol.pulse_current_A;
    return {{{1.0 / 6.0, 0.0, 0.0},
             {1.0 / 6.0, pulse, 0.0},
             {1.0, 0.0, 0.0},
             {1.0, i_d_load_A, i_q_load_A},
             {1.0, 0.0, 0.0}}};
}

RunResult run_protocol(const Config& config, double i_d_load_A, double i_q_load_A) {
    config.validate();
    const double limit = config.protocol.current_limit_A;
    if (std::abs(i_d_load_A) > limit || std::abs(i_q_load_A) > limit) {
        std::ostringstream oss;
        oss << "load currents (" << i_d_load_A << ", " << i_q_load_A
            << ") A exceed the configured limit " << limit << " A";
        throw ConfigError(oss.str());
    }

    motor::PoleAssembly assembly = motor::build_assembly(config);
    const std::array<Interval, 5> plan = make_plan(config, i_d_load_A, i_q_load_A);

    RunResult r;
    r.i_d_A = i_d_load_A;
    r.i_q_A = i_q_load_A;

    std::array<motor::AssemblySolution, 5> solutions;
    for (std::size_t idx = 0; idx < plan.size(); ++idx) {
        try {
            solutions[idx] = motor::solve_assembly(assembly, plan[idx].i_d_A, plan[idx].i_q_A);
        } catch (const SolverError& e) {
            std::ostringstream oss;
            oss << "interval " << idx << " at (i_d=" << plan[idx].i_d_A
                << " A, i_q=" << plan[idx].i_q_A << " A): " << e.what();
            throw SolverError(oss.str());
        }
    }
    r.post_pulse = solutions[1];
    r.snapshot = solutions[3];

    const auto observe = [&](const motor::AssemblySolution& sol) {
        return motor::synth_waveforms(motor::flux_phasor(assembly, sol),
                                      config.protocol.samples_per_period,
                                      assembly.speed_rpm, assembly.pole_pairs,
                                      assembly.harmonic_3);
    };
    r.waveforms_2 = observe(solutions[2]);
    r.waveforms_4 = observe(solutions[4]);
    r.psi_2 = fundamental(r.waveforms_2.psi_Wb);
    r.psi_4 = fundamental(r.waveforms_4.psi_Wb);
    r.emf_2 = fundamental(r.waveforms_2.emf_V);
    r.emf_4 = fundamental(r.waveforms_4.emf_V);
    r.delta_rad = phase_shift(r.psi_4, r.psi_2);

    const auto report = [&](int mi) {
        const motor::MagnetInstance& inst = assembly.magnets[mi];
        MagnetReport rep;
        if (!inst.enabled) return rep;
        rep.ms_b = metrics::ms_b(magnet_samples(inst, solutions[3].magnets[mi], false),
                                 inst.spec.Br_T);
        rep.ms_j = metrics::ms_j(magnet_samples(inst, solutions[3].magnets[mi], true),
                                 inst.spec.Br_T);
        rep.remanence_T = solutions[4].magnets[mi].mean_remanence_T;
        return rep;
    };
    r.lcf2 = report(motor::kLcf2);
    r.lcf3 = report(motor::kLcf3);

    // Pooled LCF view; the two blocks share Br in the default machine, so pool
    // against the volume-weighted reference.
    {
        std::vector<metrics::ElementSample> b_samples;
        std::vector<metrics::ElementSample> j_samples;
        double weighted_br = 0.0;
        double volume = 0.0;
        for (int mi : {motor::kLcf2, motor::kLcf3}) {
            const auto& inst = assembly.magnets[mi];
            if (!inst.enabled) continue;
            auto b = magnet_samples(inst, solutions[3].magnets[mi], false);
            auto j = magnet_samples(inst, solutions[3].magnets[mi], true);
            b_samples.insert(b_samples.end(), b.begin(), b.end());
            j_samples.insert(j_samples.end(), j.begin(), j.end());
            const double v = inst.A_m_m2 * inst.l_m_m;
            weighted_br += inst.spec.Br_T * v;
            volume += v;
        }
        if (!b_samples.empty()) {
            const double br = weighted_br / volume;
            r.ms_b_aggregate = metrics::ms_b(b_samples, br);
            r.ms_j_aggregate = metrics::ms_j(j_samples, br);
        }
    }

    const double delta_emf = phase_shift(r.emf_4, r.emf_2);
    r.ms_flux = metrics::ms_flux(r.psi_4.amplitude, r.psi_2.amplitude, r.delta_rad);
    r.ms_emf = metrics::ms_emf(r.emf_4.amplitude, r.emf_2.amplitude, delta_emf);
    return r;
}

} // namespace vfsim::protocol
