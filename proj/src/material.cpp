#include "vfsim/material.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vfsim/errors.hpp"

namespace vfsim::material {

void validate(const MagnetSpec& spec) {
    std::ostringstream oss;
    if (!(spec.Br_T > 0.0)) {
        oss << "magnet spec '" << spec.name << "': Br_T must be > 0, got " << spec.Br_T;
        throw DomainError(oss.str());
    }
    if (!(spec.iHc_Apm > 0.0)) {
        oss << "magnet spec '" << spec.name << "': iHc_Apm must be > 0, got " << spec.iHc_Apm;
        throw DomainError(oss.str());
    }
    if (!(spec.mu_rec >= 1.0)) {
        oss << "magnet spec '" << spec.name << "': mu_rec must be >= 1, got " << spec.mu_rec;
        throw DomainError(oss.str());
    }
    if (!(spec.mu_g > spec.mu_rec)) {
        oss << "magnet spec '" << spec.name << "': mu_g must exceed mu_rec (" << spec.mu_g
            << " <= " << spec.mu_rec << ")";
        throw DomainError(oss.str());
    }
    if (!(spec.round_radius_Apm >= 0.0)) {
        oss << "magnet spec '" << spec.name << "': round_radius_Apm must be >= 0, got "
            << spec.round_radius_Apm;
        throw DomainError(oss.str());
    }
}

MajorLoop::MajorLoop(const MagnetSpec& spec)
    : Jr_(spec.Br_T),
      s1_(kMu0 * (spec.mu_rec - 1.0)),
      s2_(kMu0 * (spec.mu_g - 1.0)),
      iHc_(spec.iHc_Apm) {
    const double half = 0.5 * (s1_ - s2_) * spec.round_radius_Apm;
    c_ = half * half;
}

double MajorLoop::j_descending(double H) const {
    const double l1 = Jr_ + s1_ * H;
    const double l2 = s2_ * (H + iHc_);
    const double mid = 0.5 * (l1 + l2);
    const double half = 0.5 * (l1 - l2);
    return mid - std::sqrt(half * half + c_);
}

double MajorLoop::j_ascending(double H) const { return -j_descending(-H); }

double MajorLoop::b_descending(double H) const { return j_descending(H) + kMu0 * H; }

double MajorLoop::b_ascending(double H) const { return j_ascending(H) + kMu0 * H; }

double MajorLoop::knee_H_Apm() const { return (s2_ * iHc_ - Jr_) / (s1_ - s2_); }

double MajorLoop::blend_offset_T() const { return std::sqrt(c_); }

double recoil_b(const MagnetSpec& spec, const MagnetState& state, double H) {
    const MajorLoop loop(spec);
    const double raw = state.remanence_now_T + kMu0 * spec.mu_rec * H;
    const double bd = loop.b_descending(H);
    const double ba = loop.b_ascending(H);
    return std::clamp(raw, std::min(ba, bd), std::max(ba, bd));
}

void update_state(const MagnetSpec& spec, MagnetState& state, double H_m) {
    const double b = recoil_b(spec, state, H_m);
    const double rem = b - kMu0 * spec.mu_rec * H_m;
    state.remanence_now_T = std::clamp(rem, -spec.Br_T, spec.Br_T);
}

double major_descending_j(const MagnetSpec& spec, double H) {
    return MajorLoop(spec).j_descending(H);
}

double major_descending_b(const MagnetSpec& spec, double H) {
    return MajorLoop(spec).b_descending(H);
}

double major_ascending_j(const MagnetSpec& spec, double H) {
    return MajorLoop(spec).j_ascending(H);
}

double major_ascending_b(const MagnetSpec& spec, double H) {
    return MajorLoop(spec).b_ascending(H);
}

namespace {

std::vector<PresetInfo> build_catalog() {
    // Range-backed entries use range midpoints; droop permeability labels map
    // High -> 100, Low -> 20, Negligible -> 5.
    std::vector<PresetInfo> cat;
    cat.push_back({{"studied-LCF", 1.0, 110e3, 1.1, 100.0, 100e3},
                   "semi-hard reference grade of the studied machine"});
    cat.push_back({{"NdFeB-1.2T", 1.2, 900e3, 1.05, 5.0, 10e3},
                   "moderate, negative temperature coefficient"});
    cat.push_back({{"AlNiCo", 0.975, 85e3, 4.0, 100.0, 10e3},
                   "very low temperature sensitivity"});
    cat.push_back({{"MnBi", 0.5, 200e3, 1.2, 5.0, 10e3},
                   "positive temperature coefficient of coercivity"});
    cat.push_back({{"MnAl", 0.65, 90e3, 1.3, 20.0, 10e3},
                   "moderate temperature sensitivity"});
    cat.push_back({{"FeCrCo", 1.2, 40e3, 4.0, 20.0, 10e3},
                   "low temperature sensitivity"});
    cat.push_back({{"FeN", 1.0, 120e3, 1.1, 100.0, 10e3},
                   "very low temperature sensitivity (lab-stage data)"});
    for (const auto& entry : cat) validate(entry.spec);
    return cat;
}

} // namespace

const std::vector<PresetInfo>& preset_catalog() {
    static const std::vector<PresetInfo> catalog = build_catalog();
    return catalog;
}

MagnetSpec preset(const std::string& name) {
    for (const auto& entry : preset_catalog()) {
        if (entry.spec.name == name) return entry.spec;
    }
    std::ostringstream oss;
    oss << "unknown material preset '" << name << "'; valid presets:";
    for (const auto& entry : preset_catalog()) oss << " " << entry.spec.name;
    throw LookupError(oss.str());
}

} // namespace vfsim::material
