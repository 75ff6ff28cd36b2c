#include "vfsim/circuit.hpp"

#include <cmath>
#include <sstream>

#include "vfsim/errors.hpp"

namespace vfsim::circuit {

double permeance_coefficient(double l_m, double l_g, double A_m, double A_g) {
    if (!(l_m > 0.0) || !(l_g > 0.0) || !(A_m > 0.0) || !(A_g > 0.0)) {
        std::ostringstream oss;
        oss << "permeance_coefficient: all dimensions must be > 0 (l_m=" << l_m
            << ", l_g=" << l_g << ", A_m=" << A_m << ", A_g=" << A_g << ")";
        throw DomainError(oss.str());
    }
    return (l_m * A_g) / (l_g * A_m);
}

double load_line_b(const LoadLine& line, double H) {
    return -material::kMu0 * line.pc * (H - line.mmf_shift_Apm);
}

OperatingPoint solve_operating_point(const material::MagnetSpec& spec,
                                     const material::MagnetState& state,
                                     const LoadLine& line) {
    if (!(line.pc > 0.0)) {
        std::ostringstream oss;
        oss << "solve_operating_point: pc must be > 0, got " << line.pc;
        throw DomainError(oss.str());
    }

    // mismatch(H) is strictly increasing: rising characteristic minus falling line.
    const auto mismatch = [&](double H) {
        return material::recoil_b(spec, state, H) - load_line_b(line, H);
    };

    double half = 10.0 * spec.iHc_Apm;
    double lo = 0.0;
    double hi = 0.0;
    for (int expansion = 0;; ++expansion) {
        lo = line.mmf_shift_Apm - half;
        hi = line.mmf_shift_Apm + half;
        if (mismatch(lo) <= 0.0 && mismatch(hi) >= 0.0) break;
        if (expansion == kMaxBracketExpansions) {
            std::ostringstream oss;
            oss << "operating-point bracket failed after " << kMaxBracketExpansions
                << " expansions: no sign change on [" << lo << ", " << hi << "] A/m";
            throw SolverError(oss.str());
        }
        half *= 2.0;
    }

    for (int it = 0; it < kMaxBisectIterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = mismatch(mid);
        if (std::abs(f) < kFluxTolT) {
            return {mid, material::recoil_b(spec, state, mid)};
        }
        (f < 0.0 ? lo : hi) = mid;
    }

    std::ostringstream oss;
    oss << "operating-point bisection did not reach " << kFluxTolT << " T within "
        << kMaxBisectIterations << " iterations on [" << lo << ", " << hi << "] A/m";
    throw SolverError(oss.str());
}

} // namespace vfsim::circuit
