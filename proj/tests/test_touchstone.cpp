#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "siwkit/q_extraction.hpp"
#include "siwkit/touchstone.hpp"
#include "test_support.hpp"

using namespace siwkit;
using siwkit::test::error_kind;

namespace {

using C = std::complex<double>;

bool complex_close(C a, C b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(b), 1e-300); }

SParameterTrace random_trace(std::mt19937_64& gen, std::size_t n, bool reciprocal) {
    std::uniform_real_distribution<double> mag(0.01, 0.7), ph(-3.14159, 3.14159), step(1e6, 1e8);
    SParameterTrace t;
    double f = 1e9;
    for (std::size_t i = 0; i < n; ++i) {
        f += step(gen);
        t.freqs.push_back(f);
        t.s11.push_back(std::polar(mag(gen), ph(gen)));
        t.s21.push_back(std::polar(mag(gen), ph(gen)));
        t.s12.push_back(reciprocal ? t.s21.back() : std::polar(mag(gen), ph(gen)));
        t.s22.push_back(std::polar(mag(gen), ph(gen)));
    }
    return t;
}

// 2×2 complex inverse, independent of the library's closed forms.
void inv2(C a, C b, C c, C d, C out[4]) {
    const C det = a * d - b * c;
    out[0] = d / det;
    out[1] = -b / det;
    out[2] = -c / det;
    out[3] = a / det;
}

}  // namespace

TEST_CASE("single MA row") {
    const auto doc = parse_touchstone("! sample\n# GHz S MA R 50\n21.165 0.29 100 0.68 -25 0.68 -25 0.29 100\n");
    REQUIRE(doc.trace.size() == 1);
    CHECK(doc.trace.freqs[0] == doctest::Approx(21.165e9));
    CHECK(std::abs(doc.trace.s21[0]) == doctest::Approx(0.68));
    CHECK(std::arg(doc.trace.s21[0]) == doctest::Approx(-25.0 * std::acos(-1.0) / 180.0));
    CHECK(std::abs(doc.trace.s11[0]) == doctest::Approx(0.29));
    CHECK(doc.trace.z0 == 50.0);
    REQUIRE(doc.comments.size() == 1);
    CHECK(doc.comments[0] == " sample");
}

TEST_CASE("defaults without an option line") {
    const auto doc = parse_touchstone("1 0.5 0 0.5 0 0.5 0 0.5 0\n2 0.5 0 0.5 0 0.5 0 0.5 0 ! inline comment\n");
    CHECK(doc.options.unit == FreqUnit::GHz);
    CHECK(doc.options.format == DataFormat::MA);
    CHECK(doc.options.resistance == 50.0);
    CHECK(doc.trace.freqs[1] == doctest::Approx(2e9));
}

TEST_CASE("option line variants") {
    const auto ri = parse_touchstone("# mhz s ri r 75\n100 0.1 0.2 0.3 0.4 0.3 0.4 0.1 0.2\n");
    CHECK(ri.trace.freqs[0] == doctest::Approx(100e6));
    CHECK(ri.trace.s21[0] == C(0.3, 0.4));
    CHECK(ri.trace.z0 == 75.0);

    const auto db = parse_touchstone("# Hz S DB\n1e9 -3.33 0 -6.0206 90 -6.0206 90 -3.33 0\n");
    CHECK(std::abs(db.trace.s21[0]) == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(std::abs(db.trace.s11[0]) == doctest::Approx(from_db(-3.33)));

    CHECK(error_kind([] { parse_touchstone("# GHz Y MA R 50\n"); }) == ErrorKind::MalformedOptionLine);
    CHECK(error_kind([] { parse_touchstone("# GHz S MA R -5\n"); }) == ErrorKind::MalformedOptionLine);
    CHECK(error_kind([] { parse_touchstone("# GHz S XX\n"); }) == ErrorKind::MalformedOptionLine);
}

TEST_CASE("row errors carry the line number") {
    try {
        parse_touchstone("# GHz S MA R 50\n! c\n21.1 0.29 100 0.68 -25 0.68 -25\n");
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BadRowArity);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK(error_kind([] { parse_touchstone("2 1 0 1 0 1 0 1 0\n1 1 0 1 0 1 0 1 0\n"); }) ==
          ErrorKind::NonMonotonicFrequency);
    CHECK(error_kind([] { parse_touchstone("1 1 0 1 0 1 0 1 zero\n"); }) == ErrorKind::BadRowArity);
}

TEST_CASE("load names the file") {
    const auto missing = std::filesystem::temp_directory_path() / "siwkit_definitely_missing.s2p";
    try {
        load_touchstone(missing);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IoError);
        CHECK(std::string(e.what()).find("siwkit_definitely_missing.s2p") != std::string::npos);
    }

    const auto bad = std::filesystem::temp_directory_path() / "siwkit_bad_row.s2p";
    std::ofstream(bad) << "1 2 3\n";
    try {
        load_touchstone(bad);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BadRowArity);
        CHECK(std::string(e.what()) == "BadRowArity: " + bad.string() +
                                           ": line 1: expected 9 values for a 2-port row, got 3");
    }
    std::filesystem::remove(bad);
}

TEST_CASE("writer format") {
    SParameterTrace t;
    t.freqs = {21.165e9};
    t.s11 = {C(0.1, 0)};
    t.s21 = {std::polar(from_db(-3.33), 0.0)};
    t.s12 = t.s21;
    t.s22 = t.s11;
    const auto text = write_touchstone(t, DataFormat::DB, FreqUnit::GHz, {" generated"});
    CHECK(text.rfind("! generated\n# GHZ S DB R 50\n2.116500000e+01 ", 0) == 0);
    CHECK(text.find(" -3.330000000e+00 0.000000000e+00") != std::string::npos);
    CHECK(parse_data_format("ri") == DataFormat::RI);
}

TEST_CASE("parse/write round trip") {
    auto gen = siwkit::test::rng(7);
    for (auto format : {DataFormat::RI, DataFormat::MA, DataFormat::DB}) {
        for (auto unit : {FreqUnit::Hz, FreqUnit::kHz, FreqUnit::MHz, FreqUnit::GHz}) {
            const auto t = random_trace(gen, 50, false);
            const auto once = parse_touchstone(write_touchstone(t, format, unit)).trace;
            const auto twice = parse_touchstone(write_touchstone(once, format, unit)).trace;
            REQUIRE(once.size() == t.size());
            for (std::size_t i = 0; i < t.size(); ++i) {
                // parse∘write∘parse is the identity on parsed data
                CHECK(twice.freqs[i] == doctest::Approx(once.freqs[i]).epsilon(1e-9));
                CHECK(complex_close(twice.s21[i], once.s21[i], 1e-9));
                CHECK(complex_close(twice.s11[i], once.s11[i], 1e-9));
                // a single write keeps 10 significant digits
                CHECK(once.freqs[i] == doctest::Approx(t.freqs[i]).epsilon(1e-9));
                CHECK(complex_close(once.s12[i], t.s12[i], 5e-9));
                CHECK(complex_close(once.s22[i], t.s22[i], 5e-9));
            }
        }
    }
}

TEST_CASE("RI and MA carry the same complex values") {
    auto gen = siwkit::test::rng(8);
    const auto t = random_trace(gen, 40, true);
    const auto ri = parse_touchstone(write_touchstone(t, DataFormat::RI)).trace;
    const auto ma = parse_touchstone(write_touchstone(ri, DataFormat::MA)).trace;
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(complex_close(ma.s21[i], ri.s21[i], 1e-9));
}

TEST_CASE("s_to_z") {
    SParameterTrace t;
    t.freqs = {1e9, 2e9};
    t.s11 = {0, 0};
    t.s21 = {0, 1};
    t.s12 = {0, 1};
    t.s22 = {0, 0};

    SUBCASE("matched, isolated") {
        auto one = t;
        one.freqs.resize(1);
        one.s11.resize(1);
        one.s21.resize(1);
        one.s12.resize(1);
        one.s22.resize(1);
        const auto z = s_to_z(one);
        CHECK(z.z11[0] == C(50, 0));
        CHECK(z.z22[0] == C(50, 0));
        CHECK(z.z12[0] == C(0, 0));
        CHECK(z.z21[0] == C(0, 0));
    }
    SUBCASE("ideal through is singular") {
        CHECK(error_kind([&] { s_to_z(t); }) == ErrorKind::SingularConversion);
    }
}

TEST_CASE("s_to_z reciprocity and inversion") {
    auto gen = siwkit::test::rng(9);
    const auto t = random_trace(gen, 500, true);
    const auto z = s_to_z(t);
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(complex_close(z.z12[i], z.z21[i], 1e-9));
        // S = (Z − z0 I)(Z + z0 I)⁻¹
        C inv[4];
        inv2(z.z11[i] + t.z0, z.z12[i], z.z21[i], z.z22[i] + t.z0, inv);
        const C a = z.z11[i] - t.z0, b = z.z12[i], c = z.z21[i], d = z.z22[i] - t.z0;
        CHECK(std::abs(a * inv[0] + b * inv[2] - t.s11[i]) < 1e-9);
        CHECK(std::abs(a * inv[1] + b * inv[3] - t.s12[i]) < 1e-9);
        CHECK(std::abs(c * inv[0] + d * inv[2] - t.s21[i]) < 1e-9);
        CHECK(std::abs(c * inv[1] + d * inv[3] - t.s22[i]) < 1e-9);
    }
}
