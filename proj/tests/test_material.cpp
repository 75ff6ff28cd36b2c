#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vfsim/errors.hpp"
#include "vfsim/material.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace vfsim;

namespace {

// Studied LCF grade with a sharp knee; the closed-form branch values below
// are derived from the two asymptote lines directly.
material::MagnetSpec studied_sharp() {
    return {"studied-sharp", 1.0, 110e3, 1.1, 100.0, 0.0};
}

material::MagnetSpec ndfeb_sharp() {
    return {"ndfeb-sharp", 1.2, 900e3, 1.05, 5.0, 0.0};
}

} // namespace

TEST_CASE("descending branch follows the closer asymptote", "[material]") {
    const material::MajorLoop loop(studied_sharp());

    SECTION("at H = 0 the polarization equals Jr") {
        REQUIRE_THAT(loop.j_descending(0.0), WithinAbs(1.0, 1e-15));
    }
    SECTION("below the knee the droop line mu0 99 (H + 110e3) takes over") {
        REQUIRE_THAT(loop.j_descending(-105e3), WithinAbs(0.6220353454107792, 1e-12));
        REQUIRE_THAT(loop.j_descending(-105e3),
                     WithinAbs(material::kMu0 * 99.0 * 5.0e3, 1e-12));
    }
    SECTION("above the knee the recoil asymptote holds") {
        const double h = -50e3;
        REQUIRE_THAT(loop.j_descending(h),
                     WithinAbs(1.0 + material::kMu0 * 0.1 * h, 1e-15));
    }
    SECTION("asymptotes cross at the knee") {
        REQUIRE_THAT(loop.knee_H_Apm(), WithinAbs(-102064.9674877707, 1e-6));
        REQUIRE_THAT(loop.j_descending(loop.knee_H_Apm()),
                     WithinAbs(0.9871741379180615, 1e-12));
    }
}

TEST_CASE("flux density adds the vacuum term to the branch", "[material]") {
    SECTION("B = mu0 H where the droop line crosses J = 0") {
        const material::MajorLoop loop(studied_sharp());
        REQUIRE_THAT(loop.b_descending(-110e3), WithinAbs(-0.1382300767579509, 1e-12));
    }
    SECTION("linear region of a square-loop magnet") {
        const material::MajorLoop loop(ndfeb_sharp());
        REQUIRE_THAT(loop.b_descending(-100e3), WithinAbs(1.0680531085492284, 1e-12));
    }
    SECTION("the preset knee rounding only perturbs the linear value slightly") {
        const material::MajorLoop loop(material::MagnetSpec{"n", 1.2, 900e3, 1.05, 5.0, 10e3});
        REQUIRE_THAT(loop.b_descending(-100e3), WithinAbs(1.0680531085492284, 5e-4));
    }
}

TEST_CASE("ascending branch is the point reflection of the descending one", "[material]") {
    const material::MajorLoop loop(studied_sharp());
    for (double h = -3.0 * 110e3; h <= 110e3; h += 7.5e3) {
        CAPTURE(h);
        REQUIRE_THAT(loop.j_ascending(h), WithinAbs(-loop.j_descending(-h), 1e-15));
        REQUIRE_THAT(loop.b_ascending(h),
                     WithinAbs(loop.j_ascending(h) + material::kMu0 * h, 1e-15));
    }
}

TEST_CASE("branches are monotone for sharp and rounded knees", "[material]") {
    auto spec = studied_sharp();
    for (double radius : {0.0, 1e3, 100e3}) {
        spec.round_radius_Apm = radius;
        const material::MajorLoop loop(spec);
        CAPTURE(radius);
        double prev_j = loop.j_descending(-330e3);
        double prev_b = loop.b_descending(-330e3);
        for (double h = -330e3 + 500.0; h <= 110e3; h += 500.0) {
            const double j = loop.j_descending(h);
            const double b = loop.b_descending(h);
            REQUIRE(j >= prev_j - 1e-15);
            REQUIRE(b > prev_b);
            prev_j = j;
            prev_b = b;
        }
    }
}

TEST_CASE("knee rounding blends toward the piecewise branch as R shrinks", "[material]") {
    auto rounded_spec = studied_sharp();
    rounded_spec.round_radius_Apm = 100e3;
    const material::MajorLoop sharp(studied_sharp());
    const material::MajorLoop rounded(rounded_spec);

    const double s1 = material::kMu0 * (1.1 - 1.0);
    const double s2 = material::kMu0 * (100.0 - 1.0);
    const double offset = (s2 - s1) * 100e3 / 2.0;
    REQUIRE_THAT(rounded.blend_offset_T(), WithinRel(offset, 1e-12));
    REQUIRE_THAT(sharp.blend_offset_T(), WithinAbs(0.0, 0.0));

    SECTION("largest deviation sits exactly at the knee") {
        const double knee = sharp.knee_H_Apm();
        REQUIRE_THAT(sharp.j_descending(knee) - rounded.j_descending(knee),
                     WithinRel(offset, 1e-12));
        for (double h = knee - 50e3; h <= knee + 50e3; h += 250.0) {
            REQUIRE(sharp.j_descending(h) - rounded.j_descending(h) <= offset * (1.0 + 1e-12));
        }
    }
    SECTION("deviation decays away from the knee") {
        const double far = sharp.knee_H_Apm() + 300e3;
        REQUIRE(sharp.j_descending(far) - rounded.j_descending(far) < 0.2 * offset);
    }
}

TEST_CASE("recoil line of a full state coincides with the upper branch", "[material]") {
    const auto spec = studied_sharp();
    const material::MagnetState full{1.0};
    const material::MajorLoop loop(spec);
    for (double h = -100e3; h <= 50e3; h += 2.5e3) {
        CAPTURE(h);
        // Same line, different evaluation order: agreement is ulp-level only.
        REQUIRE_THAT(material::recoil_b(spec, full, h),
                     WithinAbs(loop.b_descending(h), 1e-12));
    }
}

TEST_CASE("recoil line of a demagnetized state passes through the origin", "[material]") {
    const auto spec = studied_sharp();
    const material::MagnetState zero{0.0};
    REQUIRE_THAT(material::recoil_b(spec, zero, 0.0), WithinAbs(0.0, 0.0));
    REQUIRE_THAT(material::recoil_b(spec, zero, 50e3),
                 WithinAbs(0.06911503837897545, 1e-12));
}

TEST_CASE("recoil line clamps into the band between the branches", "[material]") {
    const auto spec = studied_sharp();
    const material::MajorLoop loop(spec);
    const material::MagnetState full{1.0};
    // Deep demagnetizing field, beyond the point where the branches cross:
    // the band flips and the clamp lands on the ascending recoil asymptote.
    const double deep = -200e3;
    REQUIRE_THAT(material::recoil_b(spec, full, deep),
                 WithinAbs(loop.b_ascending(deep), 1e-15));
    // Non-decreasing in H across the clamp transitions.
    double prev = material::recoil_b(spec, full, -400e3);
    for (double h = -400e3 + 1e3; h <= 200e3; h += 1e3) {
        const double b = material::recoil_b(spec, full, h);
        REQUIRE(b >= prev - 1e-15);
        prev = b;
    }
}

TEST_CASE("excursions below the knee move the remanence irreversibly", "[material]") {
    const auto spec = studied_sharp();

    SECTION("closed-form excursion to -105 kA/m") {
        material::MagnetState state{1.0};
        material::update_state(spec, state, -105e3);
        REQUIRE_THAT(state.remanence_now_T, WithinAbs(0.6352300345558564, 1e-12));

        // Committing the same extreme again is a no-op.
        material::update_state(spec, state, -105e3);
        REQUIRE_THAT(state.remanence_now_T, WithinAbs(0.6352300345558564, 1e-12));

        // A shallower excursion afterwards does not raise it back.
        material::update_state(spec, state, -60e3);
        REQUIRE_THAT(state.remanence_now_T, WithinAbs(0.6352300345558564, 1e-12));
    }
    SECTION("excursions above the knee leave a full state untouched") {
        material::MagnetState state{1.0};
        material::update_state(spec, state, -50e3);
        // The branch clamp costs a couple of ulp, nothing more.
        REQUIRE_THAT(state.remanence_now_T, WithinAbs(1.0, 1e-12));
    }
    SECTION("deep negative excursion saturates at -Jr") {
        material::MagnetState state{1.0};
        material::update_state(spec, state, -1e6);
        REQUIRE_THAT(state.remanence_now_T, WithinAbs(-1.0, 1e-12));
        REQUIRE(std::abs(state.remanence_now_T) <= 1.0);
    }
}

TEST_CASE("magnetizing excursions raise the remanence along the ascending branch",
          "[material]") {
    const auto spec = studied_sharp();

    SECTION("partial magnetization from zero") {
        material::MagnetState state{0.0};
        material::update_state(spec, state, 118e3);
        REQUIRE_THAT(state.remanence_now_T, WithinAbs(0.9804282353323026, 1e-12));
    }
    SECTION("full magnetization clamps at +Jr") {
        material::MagnetState state{0.0};
        material::update_state(spec, state, 119e3);
        REQUIRE(state.remanence_now_T == 1.0);
    }
    SECTION("a weak positive field does nothing to a demagnetized element") {
        material::MagnetState state{0.0};
        material::update_state(spec, state, 50e3);
        REQUIRE(state.remanence_now_T == 0.0);
    }
    SECTION("never lowers the state") {
        material::MagnetState state{0.3};
        material::update_state(spec, state, 150e3);
        REQUIRE(state.remanence_now_T >= 0.3);
    }
}

TEST_CASE("spec validation rejects out-of-range fields", "[material]") {
    auto ok = studied_sharp();
    REQUIRE_NOTHROW(material::validate(ok));

    auto bad = ok;
    bad.Br_T = 0.0;
    REQUIRE_THROWS_AS(material::validate(bad), DomainError);

    bad = ok;
    bad.iHc_Apm = -1.0;
    REQUIRE_THROWS_AS(material::validate(bad), DomainError);

    bad = ok;
    bad.mu_rec = 0.99;
    REQUIRE_THROWS_AS(material::validate(bad), DomainError);

    bad = ok;
    bad.mu_g = bad.mu_rec;  // droop must be softer than recoil
    REQUIRE_THROWS_AS(material::validate(bad), DomainError);

    bad = ok;
    bad.round_radius_Apm = -10.0;
    REQUIRE_THROWS_AS(material::validate(bad), DomainError);
}

TEST_CASE("preset catalog carries the documented grades", "[material]") {
    const auto& catalog = material::preset_catalog();
    REQUIRE(catalog.size() == 7);

    const auto studied = material::preset("studied-LCF");
    REQUIRE(studied.Br_T == 1.0);
    REQUIRE(studied.iHc_Apm == 110e3);
    REQUIRE(studied.mu_rec == 1.1);
    REQUIRE(studied.mu_g == 100.0);
    REQUIRE(studied.round_radius_Apm == 100e3);

    const auto ndfeb = material::preset("NdFeB-1.2T");
    REQUIRE(ndfeb.Br_T == 1.2);
    REQUIRE(ndfeb.iHc_Apm == 900e3);

    // Range-backed entries use midpoints.
    REQUIRE(material::preset("MnBi").iHc_Apm == 200e3);

    REQUIRE_THROWS_AS(material::preset("unobtainium"), LookupError);
    REQUIRE_THROWS_WITH(material::preset("unobtainium"), ContainsSubstring("studied-LCF"));
}
