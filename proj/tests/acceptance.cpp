#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "vfsim/circuit.hpp"
#include "vfsim/config.hpp"
#include "vfsim/errors.hpp"
#include "vfsim/material.hpp"
#include "vfsim/metrics.hpp"
#include "vfsim/motor.hpp"
#include "vfsim/protocol.hpp"
#include "vfsim/sweep.hpp"

using namespace vfsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Collects sub-checks of one criterion and remembers the first failure.
struct Gate {
    bool pass = true;
    std::string why;

    void expect(bool ok, const std::string& what) {
        if (!ok && why.empty()) why = what;
        pass = pass && ok;
    }
};

void report(int index, const char* label, const Gate& gate) {
    std::printf("criterion %02d %s: %s%s%s\n", index, label, gate.pass ? "PASS" : "FAIL",
                gate.why.empty() ? "" : " - ", gate.why.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

material::MagnetSpec studied_sharp() {
    return {"studied-sharp", 1.0, 110e3, 1.1, 100.0, 0.0};
}

/// Default 19 x 13 sweep, solved once and shared by several criteria.
const sweep::Table& default_sweep() {
    static const sweep::Table table = [] {
        Config config = Config::defaults();
        config.sweep.parallelism = 8;
        return sweep::run_sweep(config);
    }();
    return table;
}

} // namespace

TEST_CASE("criterion 1: solver matches the analytic intersection", "[acceptance]") {
    Gate gate;
    const auto t0 = std::chrono::steady_clock::now();

    const auto check_point = [&](double Br, double mu_rec, double pc) {
        const material::MagnetSpec spec{"linear", Br, 1e7, mu_rec, mu_rec + 0.1, 0.0};
        const material::MagnetState full{Br};
        const circuit::OperatingPoint op =
            circuit::solve_operating_point(spec, full, {pc, 0.0});
        const double b_ref = pc * Br / (mu_rec + pc);
        const double h_ref = -Br / (material::kMu0 * (mu_rec + pc));
        gate.expect(std::abs(op.B_T - b_ref) <= 1e-6 * std::abs(b_ref),
                    "B* off closed form at Br=" + fmt(Br) + " pc=" + fmt(pc));
        gate.expect(std::abs(op.H_Apm - h_ref) <= 1e-6 * std::abs(h_ref),
                    "H* off closed form at Br=" + fmt(Br) + " pc=" + fmt(pc));
        return op;
    };

    // Named point: Br = 1 T, mu_rec = 1.1, PC = 1.1 intersects at exactly half
    // the remanence, around -361.7 kA/m.
    const circuit::OperatingPoint named = check_point(1.0, 1.1, 1.1);
    gate.expect(std::abs(named.B_T - 0.5) <= 1e-6 * 0.5, "named point B* is not 0.5 T");
    gate.expect(std::abs(named.H_Apm + 361.7e3) < 100.0,
                "named point H* is not near -361.7 kA/m");

    std::mt19937 gen(12345);
    std::uniform_real_distribution<double> br_dist(0.4, 1.4);
    std::uniform_real_distribution<double> mu_dist(1.01, 1.5);
    std::uniform_real_distribution<double> pc_dist(0.5, 12.0);
    for (int k = 0; k < 100; ++k) check_point(br_dist(gen), mu_dist(gen), pc_dist(gen));

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    gate.expect(seconds < 1.0, "runtime " + fmt(seconds) + " s exceeds 1 s");

    report(1, "analytic intersection oracle", gate);
    INFO(gate.why);
    REQUIRE(gate.pass);
}

TEST_CASE("criterion 2: deep excursion matches the piecewise closed form", "[acceptance]") {
    Gate gate;
    const material::MagnetSpec spec = studied_sharp();
    const double h_m = -105e3;
    // Below the knee the branch is the droop asymptote, so the committed
    // remanence is s2 (H + iHc) - s1 H.
    const double s1 = material::kMu0 * (spec.mu_rec - 1.0);
    const double s2 = material::kMu0 * (spec.mu_g - 1.0);
    const double closed = s2 * (h_m + spec.iHc_Apm) - s1 * h_m;

    material::MagnetState single{spec.Br_T};
    material::update_state(spec, single, h_m);
    gate.expect(std::abs(single.remanence_now_T - closed) < 1e-6,
                "single excursion off closed form by " +
                    fmt(single.remanence_now_T - closed));
    gate.expect(std::abs(single.remanence_now_T - 0.635) < 1e-3,
                "remanence " + fmt(single.remanence_now_T) + " not near 0.635 T");

    material::MagnetState marched{spec.Br_T};
    const int steps = 1000000;
    for (int k = 1; k <= steps; ++k) {
        material::update_state(spec, marched, h_m * static_cast<double>(k) / steps);
    }
    gate.expect(std::abs(marched.remanence_now_T - single.remanence_now_T) < 1e-6,
                "dense march differs by " +
                    fmt(marched.remanence_now_T - single.remanence_now_T));

    report(2, "piecewise excursion oracle", gate);
    INFO(gate.why);
    REQUIRE(gate.pass);
}

TEST_CASE("criterion 3: excursions above the knee are reversible", "[acceptance]") {
    Gate gate;
    const material::MagnetSpec spec = studied_sharp();
    const material::MajorLoop loop(spec);
    const double lo = loop.knee_H_Apm() + 5e3;
    const double hi = 2.0 * spec.iHc_Apm;
    const int steps = 2000;
    for (int k = 0; k <= steps; ++k) {
        const double h_m = lo + (hi - lo) * static_cast<double>(k) / steps;
        material::MagnetState state{spec.Br_T};
        material::update_state(spec, state, h_m);
        if (std::abs(state.remanence_now_T - spec.Br_T) >= 1e-9) {
            gate.expect(false, "remanence moved by " +
                                   fmt(state.remanence_now_T - spec.Br_T) +
                                   " T at H_m = " + fmt(h_m));
            break;
        }
    }
    report(3, "reversibility above the knee", gate);
    INFO(gate.why);
    REQUIRE(gate.pass);
}

TEST_CASE("criterion 4: the pulse fully magnetizes the variable pair", "[acceptance]") {
    Gate gate;
    const Config config = Config::defaults();
    const protocol::RunResult run = protocol::run_protocol(config, 0.0, 0.0);

    const char* names[2] = {"lcf2", "lcf3"};
    const int indices[2] = {motor::kLcf2, motor::kLcf3};
    const material::MagnetSpec specs[2] = {config.motor.lcf2.resolve(),
                                           config.motor.lcf3.resolve()};
    for (int m = 0; m < 2; ++m) {
        const auto& sol = run.post_pulse.magnets[indices[m]];
        gate.expect(!sol.elements.empty(), std::string(names[m]) + " missing from snapshot");
        // State after interval 1, read at the recoil intercept H = 0.
        std::vector<metrics::ElementSample> b_samples;
        std::vector<metrics::ElementSample> j_samples;
        for (const auto& el : sol.elements) {
            const material::MagnetState state{el.remanence_T};
            b_samples.push_back({material::recoil_b(specs[m], state, 0.0), 1.0, 1.0});
            j_samples.push_back({el.remanence_T, 1.0, 1.0});
            gate.expect(el.remanence_T >= 0.98 * specs[m].Br_T,
                        std::string(names[m]) + " element remanence " +
                            fmt(el.remanence_T) + " below 0.98 Jr");
        }
        const double ms_b = metrics::ms_b(b_samples, specs[m].Br_T);
        const double ms_j = metrics::ms_j(j_samples, specs[m].Br_T);
        gate.expect(ms_b >= 0.98, std::string(names[m]) + " MS(B) " + fmt(ms_b));
        gate.expect(ms_j >= 0.98, std::string(names[m]) + " MS(J) " + fmt(ms_j));
    }
    report(4, "full magnetization pulse", gate);
    INFO(gate.why);
    REQUIRE(gate.pass);
}

TEST_CASE("criterion 5: d-axis demagnetization is monotone and can reverse", "[acceptance]") {
    Gate gate;
    const Config config = Config::defaults();
    double prev2 = std::numeric_limits<double>::infinity();
    double prev3 = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 12; ++k) {
        const double i_d = -5.0 * k;
        const protocol::RunResult run = protocol::run_protocol(config, i_d, 0.0);
        gate.expect(run.lcf2.ms_b <= prev2 + 1e-12,
                    "lcf2 MS(B) rose at i_d = " + fmt(i_d));
        gate.expect(run.lcf3.ms_b <= prev3 + 1e-12,
                    "lcf3 MS(B) rose at i_d = " + fmt(i_d));
        prev2 = run.lcf2.ms_b;
        prev3 = run.lcf3.ms_b;
    }

    // The raised-coupling config must reverse the pair somewhere on the grid;
    // the deepest d-axis point is the designed witness.
    const Config reversal = Config::load(VFSIM_CONFIG_DIR "/reversal.json");
    const protocol::RunResult reversed = protocol::run_protocol(reversal, -60.0, 0.0);
    gate.expect(std::min(reversed.lcf2.ms_b, reversed.lcf3.ms_b) < 0.0,
                "MS(B) stayed positive under the raised coupling");

    report(5, "d-axis monotonicity and forced reversal", gate);
    INFO(gate.why);
    REQUIRE(gate.pass);
}

TEST_CASE("criterion 6: q-axis asymmetry and mirror symmetry", "[acceptance]") {
    Gate gate;
    const sweep::Table& table = default_sweep();
    for (const auto& row : table.rows) {
        gate.expect(row.ok(), "sweep row failed: " + row.error);
        if (row.iq_A > 0.0) {
            gate.expect(row.ms_b_m3 >= row.ms_b_m2 - 1e-9,
                        "asymmetry violated at theta=" + fmt(row.theta_deg) +
                            " i=" + fmt(row.current_A));
        }
    }

    // theta' = 180 - theta lands on the same i_d with i_q negated, which is
    // the (i_q -> -i_q, magnet swap) mirror of the default grid.
    Config mirrored_cfg = Config::defaults();
    mirrored_cfg.sweep.parallelism = 8;
    mirrored_cfg.sweep.theta_min_deg = 90.0;
    mirrored_cfg.sweep.theta_max_deg = 270.0;
    const sweep::Table mirrored = sweep::run_sweep(mirrored_cfg);

    const int n_theta = table.grid.theta_steps;
    const int n_current = table.grid.current_steps;
    for (int t = 0; t < n_theta; ++t) {
        for (int i = 0; i < n_current; ++i) {
            const sweep::Row& a = table.rows[static_cast<size_t>(t * n_current + i)];
            const sweep::Row& b =
                mirrored.rows[static_cast<size_t>((n_theta - 1 - t) * n_current + i)];
            const std::string at =
                " at theta=" + fmt(a.theta_deg) + " i=" + fmt(a.current_A);
            gate.expect(std::abs(a.id_A - b.id_A) < 1e-9 &&
                            std::abs(a.iq_A + b.iq_A) < 1e-9,
                        "mirror grid mismatch" + at);
            gate.expect(std::abs(a.ms_b_m2 - b.ms_b_m3) < 1e-9 &&
                            std::abs(a.ms_b_m3 - b.ms_b_m2) < 1e-9,
                        "MS(B) mirror broken" + at);
            gate.expect(std::abs(a.ms_j_m2 - b.ms_j_m3) < 1e-9 &&
                            std::abs(a.ms_j_m3 - b.ms_j_m2) < 1e-9,
                        "MS(J) mirror broken" + at);
            gate.expect(std::abs(a.rem_m2_T - b.rem_m3_T) < 1e-9 &&
                            std::abs(a.rem_m3_T - b.rem_m2_T) < 1e-9,
                        "remanence mirror broken" + at);
            gate.expect(std::abs(a.ms_flux - b.ms_flux) < 1e-9,
                        "MS(flux) mirror broken" + at);
        }
    }
    report(6, "q-axis asymmetry and mirror symmetry", gate);
    INFO(gate.why);
    REQUIRE(gate.pass);
}

TEST_CASE("criterion 7: flux and emf metrics agree over the grid", "[acceptance]") {
    Gate gate;
    for (const auto& row : default_sweep().rows) {
        gate.expect(row.ok(), "sweep row failed: " + row.error);
        gate.expect(std::abs(row.ms_flux - row.ms_emf) < 1e-3,
                    "definitions diverge by " + fmt(row.ms_flux - row.ms_emf) +
                        " at theta=" + fmt(row.theta_deg) + " i=" + fmt(row.current_A));
    }
    report(7, "flux and emf definition agreement", gate);
    INFO(gate.why);
    REQUIRE(gate.pass);
}

TEST_CASE("criterion 8: the fixed magnet dictates the flux direction", "[acceptance]") {
    Gate gate;
    const Config reversal = Config::load(VFSIM_CONFIG_DIR "/reversal.json");

    const protocol::RunResult with_hcf = protocol::run_protocol(reversal, -60.0, 0.0);
    gate.expect(with_hcf.lcf2.remanence_T < 0.0 && with_hcf.lcf3.remanence_T < 0.0,
                "variable pair was not driven to negative remanence");
    gate.expect(with_hcf.ms_flux > 0.0,
                "MS(flux) " + fmt(with_hcf.ms_flux) + " flipped despite the HCF");

    Config no_hcf = reversal;
    no_hcf.motor.hcf.enabled = false;
    const protocol::RunResult without = protocol::run_protocol(no_hcf, -60.0, 0.0);
    gate.expect(std::abs(without.delta_rad - kPi) < 1e-6,
                "phase shift " + fmt(without.delta_rad) + " not at pi");
    gate.expect(without.ms_flux < 0.0,
                "MS(flux) " + fmt(without.ms_flux) + " did not flip without the HCF");

    report(8, "fixed-magnet flux dominance", gate);
    INFO(gate.why);
    REQUIRE(gate.pass);
}

TEST_CASE("criterion 9: fundamental extraction is exact for pure tones", "[acceptance]") {
    Gate gate;
    const int n = 360;
    const auto tone = [&](double amp, double phase, double third) {
        std::vector<double> x(n);
        for (int k = 0; k < n; ++k) {
            const double theta = 2.0 * kPi * k / n;
            x[k] = amp * std::cos(theta + phase) + third * std::cos(3.0 * (theta + phase));
        }
        return x;
    };
    const auto check = [&](double amp, double phase, double third) {
        const protocol::Fundamental f = protocol::fundamental(tone(amp, phase, third));
        gate.expect(std::abs(f.amplitude - amp) < 1e-12,
                    "amplitude error " + fmt(f.amplitude - amp));
        gate.expect(std::abs(f.phase_rad - phase) < 1e-12,
                    "phase error " + fmt(f.phase_rad - phase));
    };
    check(0.75, 0.9, 0.0);
    check(1.25, -2.5, 0.0);
    check(0.75, 0.9, 0.25);   // third harmonic must be rejected
    check(1.25, -2.5, 0.6);
    report(9, "dft exactness", gate);
    INFO(gate.why);
    REQUIRE(gate.pass);
}

TEST_CASE("criterion 10: the sweep is deterministic across worker counts", "[acceptance]") {
    Gate gate;
    Config serial = Config::defaults();
    serial.sweep.parallelism = 1;

    const auto t0 = std::chrono::steady_clock::now();
    const sweep::Table table1 = sweep::run_sweep(serial);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    gate.expect(sweep::to_csv(table1) == sweep::to_csv(default_sweep()),
                "csv differs between parallelism 1 and 8");
    gate.expect(seconds < 60.0, "serial sweep took " + fmt(seconds) + " s");

    report(10, "sweep determinism and runtime", gate);
    INFO(gate.why);
    REQUIRE(gate.pass);
}

TEST_CASE("criterion 11: knee rounding converges to the piecewise loop", "[acceptance]") {
    Gate gate;
    const material::MagnetSpec base = studied_sharp();
    const material::MajorLoop sharp(base);
    const double knee = sharp.knee_H_Apm();
    const double s1 = material::kMu0 * (base.mu_rec - 1.0);
    const double s2 = material::kMu0 * (base.mu_g - 1.0);

    const double radii[4] = {100e3, 10e3, 1e3, 100.0};
    double prev = std::numeric_limits<double>::infinity();
    for (double R : radii) {
        material::MagnetSpec spec = base;
        spec.round_radius_Apm = R;
        const material::MajorLoop rounded(spec);

        const double lo = -3.0 * base.iHc_Apm;
        const double hi = base.iHc_Apm;
        const int steps = 44000;
        double max_dev = 0.0;
        for (int k = 0; k <= steps; ++k) {
            const double h = lo + (hi - lo) * static_cast<double>(k) / steps;
            max_dev = std::max(max_dev,
                               std::abs(rounded.j_descending(h) - sharp.j_descending(h)));
        }
        // The asymptote crossing is where the bound is tight.
        max_dev = std::max(max_dev,
                           std::abs(rounded.j_descending(knee) - sharp.j_descending(knee)));

        const double bound = 0.5 * std::abs(s1 - s2) * R;
        gate.expect(max_dev <= bound * (1.0 + 1e-12),
                    "deviation " + fmt(max_dev) + " exceeds " + fmt(bound) +
                        " at R=" + fmt(R));
        gate.expect(max_dev < prev, "deviation did not shrink at R=" + fmt(R));
        prev = max_dev;
    }
    report(11, "knee rounding convergence", gate);
    INFO(gate.why);
    REQUIRE(gate.pass);
}
