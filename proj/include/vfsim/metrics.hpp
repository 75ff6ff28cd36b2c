#pragma once

#include <vector>

namespace vfsim::metrics {

/// One magnet element as seen by the state metrics: a field or polarization
/// value, the sign of the element's design magnetization axis, and its volume.
struct ElementSample {
    double value = 0.0;
    double sign = 1.0;
    double volume = 1.0;
};

/// Reference fundamentals below this are too small to normalize against.
inline constexpr double kAmplitudeFloor = 1e-12;

/// Volume-weighted mean of signed B over Br. May leave [-1, 1] through the
/// mu0 H part of B at loaded operating points.
double ms_b(const std::vector<ElementSample>& elements, double Br_T);

/// Volume-weighted mean of signed polarization over Jr; stays within
/// [-1, 1] for every reachable magnetization state.
double ms_j(const std::vector<ElementSample>& elements, double Jr_T);

/// cos(delta) * psi4 / psi2 from the no-load flux-linkage fundamentals around
/// the load interval. DegenerateReferenceError when psi2 is below the floor.
double ms_flux(double psi_fund_4, double psi_fund_2, double delta_rad);

/// Same construction applied to the back-EMF fundamentals.
double ms_emf(double emf_fund_4, double emf_fund_2, double delta_rad);

} // namespace vfsim::metrics
