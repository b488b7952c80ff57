#include <doctest.h>

#include <random>

#include "pmgate/io.hpp"
#include "pmgate/model.hpp"
#include "pmgate/units.hpp"

using namespace pmgate;

namespace {

ModeSpectrum two_qubit_spectrum() {
    ModeSpectrum s;
    s.qubit_count = 2;
    s.modes = {{hz_to_rad(-5e3), {1.0, 1.0}, 0.1}, {hz_to_rad(5e3), {1.0, -1.0}, 0.2}};
    return s;
}

} // namespace

TEST_CASE("well-formed spectra validate cleanly") {
    ModeSpectrum s;
    s.qubit_count = 1;
    s.modes = {{hz_to_rad(-8.5e3), {1.0}, 0.2}, {hz_to_rad(3e3), {0.7}, 0.0}};
    const ValidationReport report = validate_spectrum(s);
    CHECK(report.ok());
    CHECK(report.warnings.empty());
    CHECK(validate_spectrum(two_qubit_spectrum()).ok());
}

TEST_CASE("coupling arity mismatch is a violation") {
    ModeSpectrum s;
    s.qubit_count = 2;
    s.modes = {{hz_to_rad(1e3), {1.0}, 0.0}};
    const ValidationReport report = validate_spectrum(s);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].code == "coupling arity");
}

TEST_CASE("negative occupation is a violation") {
    ModeSpectrum s;
    s.qubit_count = 1;
    s.modes = {{hz_to_rad(1e3), {1.0}, -0.1}};
    const ValidationReport report = validate_spectrum(s);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].code == "negative occupation");
}

TEST_CASE("non-finite values are violations") {
    ModeSpectrum s;
    s.qubit_count = 1;
    s.modes = {{std::numeric_limits<double>::infinity(), {1.0}, 0.0}};
    CHECK_FALSE(validate_spectrum(s).ok());
}

TEST_CASE("duplicate detunings warn but do not fail") {
    ModeSpectrum s;
    s.qubit_count = 1;
    s.modes = {{hz_to_rad(1e3), {1.0}, 0.0}, {hz_to_rad(1e3), {0.5}, 0.0}};
    const ValidationReport report = validate_spectrum(s);
    CHECK(report.ok());
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].code == "duplicate detuning");
}

TEST_CASE("noise models validate their bounds") {
    CHECK_THROWS_AS(validate_noise(Sinusoid{-1.0, 1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_noise(PolynomialDrift{std::vector<double>(10, 1.0)}),
                    std::invalid_argument);
    CHECK_NOTHROW(validate_noise(StaticOffset{100.0}));
    CHECK_NOTHROW(validate_noise(PolynomialDrift{{1.0, 2.0}}));
}

TEST_CASE("gate config rejects a sequence/gate-time mismatch") {
    GateConfig config;
    config.rabi = hz_to_rad(10e3);
    config.gate_time = 100e-6;
    config.sequence = base_sequence(99e-6);
    CHECK_THROWS_AS(validate_gate_config(config), std::invalid_argument);
    config.sequence = base_sequence(100e-6);
    CHECK_NOTHROW(validate_gate_config(config));
    config.rabi = -1.0;
    CHECK_THROWS_AS(validate_gate_config(config), std::invalid_argument);
}

TEST_CASE("spectrum and gate files round-trip field by field") {
    std::mt19937_64 rng(20260811);
    std::uniform_real_distribution<double> det(-1e5, 1e5);
    std::uniform_real_distribution<double> coupling(-2.0, 2.0);
    std::uniform_real_distribution<double> nbar(0.0, 1.0);
    std::uniform_real_distribution<double> dur(1e-6, 1e-4);
    std::uniform_real_distribution<double> phase(-10.0, 10.0);
    for (int trial = 0; trial < 30; ++trial) {
        ModeSpectrum s;
        s.qubit_count = 1 + int(rng() % 2);
        const int n_modes = 1 + int(rng() % 4);
        for (int k = 0; k < n_modes; ++k) {
            Mode mode;
            mode.detuning = hz_to_rad(det(rng));
            for (int mu = 0; mu < s.qubit_count; ++mu) mode.couplings.push_back(coupling(rng));
            mode.thermal_occupation = nbar(rng);
            s.modes.push_back(mode);
        }
        const ModeSpectrum back = spectrum_from_json(spectrum_to_json(s));
        REQUIRE(back.modes.size() == s.modes.size());
        for (std::size_t k = 0; k < s.modes.size(); ++k) {
            CHECK(back.modes[k].detuning ==
                  doctest::Approx(s.modes[k].detuning).epsilon(1e-15));
            CHECK(back.modes[k].thermal_occupation == s.modes[k].thermal_occupation);
            for (std::size_t mu = 0; mu < s.modes[k].couplings.size(); ++mu)
                CHECK(back.modes[k].couplings[mu] == s.modes[k].couplings[mu]);
        }

        std::vector<Segment> segments;
        const int n_seg = 1 + int(rng() % 6);
        for (int i = 0; i < n_seg; ++i) segments.push_back({dur(rng), phase(rng)});
        GateConfig config;
        config.sequence = PhaseSequence(segments);
        config.gate_time = config.sequence.total_duration();
        config.rabi = hz_to_rad(std::abs(det(rng)));
        config.basis = trial % 2 ? SpinBasis::y : SpinBasis::x;
        const GateConfig back_config = gate_from_json(gate_to_json(config));
        CHECK(back_config.rabi == doctest::Approx(config.rabi).epsilon(1e-15));
        CHECK(back_config.gate_time == config.gate_time);
        CHECK(back_config.basis == config.basis);
        REQUIRE(back_config.sequence.size() == config.sequence.size());
        for (std::size_t i = 0; i < config.sequence.size(); ++i) {
            CHECK(back_config.sequence.segments()[i].duration ==
                  config.sequence.segments()[i].duration);
            CHECK(back_config.sequence.segments()[i].phase ==
                  config.sequence.segments()[i].phase);
        }
    }
}

TEST_CASE("json parse diagnostics name the offending field") {
    CHECK_THROWS_WITH_AS(spectrum_from_json(nlohmann::json{{"modes", nlohmann::json::array()}}),
                         doctest::Contains("qubits"), std::invalid_argument);
    nlohmann::json j = {{"qubits", 1},
                        {"modes", {{{"detuning_hz", "oops"}, {"couplings", {1.0}}, {"nbar", 0.0}}}}};
    CHECK_THROWS_WITH_AS(spectrum_from_json(j), doctest::Contains("detuning_hz"),
                         std::invalid_argument);
}
