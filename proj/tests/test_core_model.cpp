#include <doctest.h>

#include "siwkit/core_model.hpp"
#include "siwkit/design_file.hpp"
#include "test_support.hpp"

using namespace siwkit;
using siwkit::test::error_kind;
using siwkit::test::rel_close;

namespace {

ResonatorDesign reference_design(double p_um = 250.0, std::optional<double> f0_ghz = 20.5) {
    ResonatorDesign d;
    d.substrate = default_substrate();
    d.geometry = CavityGeometry::from_um(3150, 3150, 200, p_um);
    if (f0_ghz) d.target_f0 = units::from_ghz(*f0_ghz);
    return d;
}

}  // namespace

TEST_CASE("default substrate is high-resistivity silicon") {
    const auto s = default_substrate();
    CHECK(s.eps_r == 11.9);
    CHECK(s.mu_r == 1.0);
    CHECK(s.tan_delta == 0.0);
    CHECK(s.h == doctest::Approx(500e-6));
    CHECK(error_kind([] { substrate_preset("unobtainium"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("type invariants are enforced") {
    CHECK(error_kind([] { Substrate::from_io(0.5, 1, 0, 500); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([] { Substrate::from_io(11.9, 0, 0, 500); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([] { Substrate::from_io(11.9, 1, -1e-3, 500); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([] { Substrate::from_io(11.9, 1, 0, 0); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([] { CavityGeometry::from_um(3150, 3150, 250, 250); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([] { CavityGeometry::from_um(0, 3150, 200, 250); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([] { CavityGeometry::from_um(3150, 3150, 200, 250, -1); }) == ErrorKind::InvalidArgument);
    CHECK_FALSE(error_kind([] { CavityGeometry::from_um(3150, 3150, 0, 250); }));

    auto d = reference_design();
    d.target_f0 = -1.0;
    CHECK(error_kind([&] { d.validate(); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("unit round trip through I/O units") {
    auto gen = siwkit::test::rng(1);
    std::uniform_real_distribution<double> len(1.0, 1e5), freq(0.1, 300.0);
    for (int i = 0; i < 1000; ++i) {
        const double um = len(gen);
        const double ghz = freq(gen);
        CHECK(rel_close(units::to_um(units::from_um(um)), um, 1e-12));
        CHECK(rel_close(units::to_ghz(units::from_ghz(ghz)), ghz, 1e-12));
        const auto g = CavityGeometry::from_um(um + 10, um + 20, 1.0, 2.0, um, 0.5 * um);
        CHECK(rel_close(units::to_um(g.w), um + 10, 1e-12));
        CHECK(rel_close(units::to_um(g.l), um + 20, 1e-12));
        CHECK(rel_close(units::to_um(g.probe_w), um, 1e-12));
    }
}

TEST_CASE("validate_design on the reference design") {
    const auto report = validate_design(reference_design());
    REQUIRE(report.rules.size() == 3);
    CHECK(report.frequency_from_target);
    CHECK(report.all_satisfied());
    CHECK(report.all_satisfied(true));

    const auto& wave = report.rule(rule_ids::pitch_vs_wavelength);
    CHECK(wave.satisfied);
    CHECK(wave.lhs == doctest::Approx(250e-6));
    CHECK(wave.rhs == doctest::Approx(25.2238e-3).epsilon(1e-4));

    const auto& diam = report.rule(rule_ids::pitch_vs_diameter);
    CHECK(diam.satisfied);
    CHECK(diam.rhs == doctest::Approx(800e-6));

    const auto& cons = report.rule(rule_ids::pitch_vs_wavelength_conservative);
    CHECK(cons.conservative);
    CHECK(cons.rhs == doctest::Approx(2.1196e-3).epsilon(1e-4));
}

TEST_CASE("p < 4d violated when the pitch is too coarse") {
    auto d = reference_design(900.0);
    const auto report = validate_design(d);
    CHECK_FALSE(report.rule(rule_ids::pitch_vs_diameter).satisfied);
    CHECK(report.rule(rule_ids::pitch_vs_diameter).lhs == doctest::Approx(900e-6));
    CHECK_FALSE(report.all_satisfied());
}

TEST_CASE("conservative rule catches a pitch the literal rule accepts") {
    ResonatorDesign d;
    d.substrate = default_substrate();
    d.geometry = CavityGeometry::from_um(30000, 30000, 1000, 2500);
    d.target_f0 = units::from_ghz(20.5);
    const auto report = validate_design(d);
    CHECK(report.rule(rule_ids::pitch_vs_wavelength).satisfied);
    CHECK_FALSE(report.rule(rule_ids::pitch_vs_wavelength_conservative).satisfied);
    CHECK(report.all_satisfied());
    CHECK_FALSE(report.all_satisfied(true));
}

TEST_CASE("validate_design falls back to the forward model and is pure") {
    const auto d = reference_design(250.0, std::nullopt);
    const auto a = validate_design(d);
    const auto b = validate_design(d);
    CHECK_FALSE(a.frequency_from_target);
    CHECK(a.frequency == doctest::Approx(20.6104e9).epsilon(1e-5));
    REQUIRE(a.rules.size() == b.rules.size());
    for (std::size_t i = 0; i < a.rules.size(); ++i) {
        CHECK(a.rules[i].satisfied == b.rules[i].satisfied);
        CHECK(a.rules[i].lhs == b.rules[i].lhs);
        CHECK(a.rules[i].rhs == b.rules[i].rhs);
        CHECK(a.rules[i].message == b.rules[i].message);
    }
}

TEST_CASE("MissingFrequency when nothing is derivable") {
    ResonatorDesign d;
    d.substrate = default_substrate();
    d.geometry = CavityGeometry::from_um(100, 100, 200, 250);  // correction eats the cavity
    CHECK(error_kind([&] { validate_design(d); }) == ErrorKind::MissingFrequency);
    d.target_f0 = units::from_ghz(20.0);
    CHECK_FALSE(error_kind([&] { validate_design(d); }));
}

TEST_CASE("design file round trip") {
    auto d = reference_design();
    d.geometry.probe_w = units::from_um(320);
    d.geometry.probe_l = units::from_um(840);
    const auto back = parse_design_file(write_design_file(d));
    CHECK(rel_close(back.geometry.w, d.geometry.w, 1e-12));
    CHECK(rel_close(back.geometry.d, d.geometry.d, 1e-12));
    CHECK(rel_close(back.geometry.probe_l, d.geometry.probe_l, 1e-12));
    CHECK(rel_close(back.substrate.h, d.substrate.h, 1e-12));
    REQUIRE(back.target_f0);
    CHECK(rel_close(*back.target_f0, *d.target_f0, 1e-12));
}

TEST_CASE("design file parsing") {
    const auto d = parse_design_file(R"(
# comment
[substrate]
preset = air   ; trailing comment
h_um = 254

[geometry]
w_um = 3150
l_um = 3000
d_um = 200
p_um = 250
)");
    CHECK(d.substrate.eps_r == 1.0);
    CHECK(d.substrate.h == doctest::Approx(254e-6));
    CHECK(d.geometry.l == doctest::Approx(3000e-6));
    CHECK_FALSE(d.target_f0);

    SUBCASE("unknown key rejected") {
        CHECK(error_kind([] { parse_design_file("[geometry]\nw_um=1\nl_um=1\nd_um=0\np_um=1\ncolor=red\n"); }) ==
              ErrorKind::DesignFileError);
    }
    SUBCASE("unknown section rejected") {
        CHECK(error_kind([] { parse_design_file("[extras]\nx=1\n"); }) == ErrorKind::DesignFileError);
    }
    SUBCASE("missing geometry rejected") {
        CHECK(error_kind([] { parse_design_file("[target]\nf0_ghz=20\n"); }) == ErrorKind::DesignFileError);
    }
    SUBCASE("non-numeric value rejected") {
        CHECK(error_kind([] { parse_design_file("[geometry]\nw_um=wide\n"); }) == ErrorKind::DesignFileError);
    }
    SUBCASE("invariant violation reported as a design file error") {
        CHECK(error_kind([] { parse_design_file("[geometry]\nw_um=1\nl_um=1\nd_um=2\np_um=1\n"); }) ==
              ErrorKind::DesignFileError);
    }
    SUBCASE("substrate-only document") {
        const auto s = parse_substrate_file("[substrate]\neps_r = 2.2\n");
        CHECK(s.eps_r == 2.2);
        CHECK(error_kind([] { parse_substrate_file("[geometry]\nw_um=1\n"); }) == ErrorKind::DesignFileError);
    }
}
