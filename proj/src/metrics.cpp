#include "vfsim/metrics.hpp"

#include <cmath>
#include <sstream>

#include "vfsim/errors.hpp"

namespace vfsim::metrics {

namespace {

double weighted_state_ratio(const std::vector<ElementSample>& elements, double reference,
                            const char* what) {
    if (elements.empty()) {
        throw InputError(std::string(what) + ": empty element set");
    }
    if (!(reference > 0.0)) {
        std::ostringstream oss;
        oss << what << ": reference must be > 0, got " << reference;
        throw DomainError(oss.str());
    }
    double weighted = 0.0;
    double volume = 0.0;
    for (const auto& e : elements) {
        if (!(e.volume > 0.0)) {
            std::ostringstream oss;
            oss << what << ": element volume must be > 0, got " << e.volume;
            throw DomainError(oss.str());
        }
        weighted += e.sign * e.value * e.volume;
        volume += e.volume;
    }
    return weighted / (volume * reference);
}

double reference_ratio(double numerator, double reference, double delta_rad, const char* what) {
    if (!(reference > kAmplitudeFloor)) {
        std::ostringstream oss;
        oss << what << ": reference fundamental " << reference << " is below the floor "
            << kAmplitudeFloor;
        throw DegenerateReferenceError(oss.str());
    }
    if (!(numerator >= 0.0)) {
        std::ostringstream oss;
        oss << what << ": fundamental amplitude must be >= 0, got " << numerator;
        throw DomainError(oss.str());
    }
    return std::cos(delta_rad) * numerator / reference;
}

} // namespace

double ms_b(const std::vector<ElementSample>& elements, double Br_T) {
    return weighted_state_ratio(elements, Br_T, "ms_b");
}

double ms_j(const std::vector<ElementSample>& elements, double Jr_T) {
    return weighted_state_ratio(elements, Jr_T, "ms_j");
}

double ms_flux(double psi_fund_4, double psi_fund_2, double delta_rad) {
    return reference_ratio(psi_fund_4, psi_fund_2, delta_rad, "ms_flux");
}

double ms_emf(double emf_fund_4, double emf_fund_2, double delta_rad) {
    return reference_ratio(emf_fund_4, emf_fund_2, delta_rad, "ms_emf");
}

} // namespace vfsim::metrics
