#pragma once

#include <string>
#include <vector>

namespace vfsim::material {

/// Vacuum permeability, H/m. All fields are in tesla, all field strengths in A/m.
inline constexpr double kMu0 = 4.0 * 3.14159265358979323846 * 1e-7;

/// Intrinsic description of one magnet grade.
///
/// The descending major branch in the J-H plane is modeled as the smooth
/// minimum of two asymptotes:
///   recoil asymptote  L1(H) = Jr + mu0 (mu_rec - 1) H
///   droop asymptote   L2(H) = mu0 (mu_g - 1) (H + iHc)      (J = 0 at -iHc)
/// blended as (L1+L2)/2 - sqrt(((L1-L2)/2)^2 + c) with c = ((s1-s2) R / 2)^2,
/// which reduces to min(L1, L2) when R = 0. Jr equals Br: at H = 0,
/// J = B - mu0 H = B.
struct MagnetSpec {
    std::string name;
    double Br_T = 0.0;            ///< remanence of the fully magnetized material, > 0
    double iHc_Apm = 0.0;         ///< intrinsic coercivity, > 0
    double mu_rec = 1.0;          ///< relative recoil permeability, >= 1
    double mu_g = 0.0;            ///< relative droop permeability below the knee, > mu_rec
    double round_radius_Apm = 0.0; ///< knee rounding half-width R, >= 0 (0 = sharp knee)
};

/// Throws DomainError when a field is outside its documented range.
void validate(const MagnetSpec& spec);

/// Major-loop pair derived from a spec. The ascending branch is the point
/// reflection of the descending one: J_asc(H) = -J_desc(-H).
class MajorLoop {
public:
    explicit MajorLoop(const MagnetSpec& spec);

    double j_descending(double H_Apm) const;
    double j_ascending(double H_Apm) const;
    double b_descending(double H_Apm) const;
    double b_ascending(double H_Apm) const;

    /// H where the two descending asymptotes cross (the sharp-knee location).
    double knee_H_Apm() const;

    /// Largest deviation of the blended branch from the sharp two-line branch,
    /// reached exactly at the knee: |s1 - s2| R / 2.
    double blend_offset_T() const;

private:
    double Jr_;
    double s1_;   // mu0 (mu_rec - 1)
    double s2_;   // mu0 (mu_g - 1)
    double iHc_;
    double c_;    // blend curvature term
};

/// Magnetization state of one magnet element. The single scalar fixes the
/// recoil line B(H) = remanence_now + mu0 mu_rec H; |remanence_now| <= Jr.
/// remanence_now < 0 means the element's poles are reversed.
struct MagnetState {
    double remanence_now_T = 0.0;
};

/// B on the state's recoil line at H, clamped into the band spanned by the
/// two major branches. The clamp is what makes deep excursions irreversible;
/// beyond the H where the branches cross it saturates along the opposite
/// recoil asymptote. Non-decreasing in H for any valid spec.
double recoil_b(const MagnetSpec& spec, const MagnetState& state, double H_Apm);

/// Commit an excursion whose extreme field was H_m. When the recoil line left
/// the major loop the remanence moves so that the new recoil line passes
/// through the branch point: remanence' = B_branch(H_m) - mu0 mu_rec H_m.
/// Saturation keeps |remanence| <= Jr. Idempotent for repeated identical H_m;
/// never raises remanence on a demagnetizing excursion nor lowers it on a
/// magnetizing one.
void update_state(const MagnetSpec& spec, MagnetState& state, double H_m_Apm);

// Convenience single-call branch evaluators.
double major_descending_j(const MagnetSpec& spec, double H_Apm);
double major_descending_b(const MagnetSpec& spec, double H_Apm);
double major_ascending_j(const MagnetSpec& spec, double H_Apm);
double major_ascending_b(const MagnetSpec& spec, double H_Apm);

/// A catalog entry: the spec plus free-text temperature-sensitivity metadata.
struct PresetInfo {
    MagnetSpec spec;
    std::string temperature_note;
};

/// Built-in presets in stable display order.
const std::vector<PresetInfo>& preset_catalog();

/// Lookup by exact name; LookupError lists the valid names.
MagnetSpec preset(const std::string& name);

} // namespace vfsim::material
