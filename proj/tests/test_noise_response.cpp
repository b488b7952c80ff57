#include <doctest.h>

#include <numbers>

#include "pmgate/gate_design.hpp"
#include "pmgate/noise_response.hpp"
#include "pmgate/quantum_sim.hpp"
#include "pmgate/trajectory.hpp"
#include "pmgate/units.hpp"

using namespace pmgate;
using std::numbers::pi;

namespace {

struct SingleIon {
    ModeSpectrum spectrum;
    GateConfig config;
};

// standard gate naturally decoupled at delta = 2 pi / tau
SingleIon standard_closed(double tau = 250e-6, double rabi_hz = 5e3) {
    SingleIon s;
    const double delta = two_pi / tau;
    s.spectrum.qubit_count = 1;
    s.spectrum.modes = {{delta, {1.0}, 0.0}};
    s.config.gate_time = tau;
    s.config.basis = SpinBasis::x;
    s.config.sequence = base_sequence(tau);
    s.config.rabi = hz_to_rad(rabi_hz);
    return s;
}

} // namespace

TEST_CASE("closed designs carry no residual excitation") {
    const SingleIon s = standard_closed();
    CHECK(residual_p1(s.config, s.spectrum, std::nullopt) < 1e-20);
}

TEST_CASE("static noise in residual_p1 equals shifting the detuning") {
    const SingleIon s = standard_closed();
    const double eps = 0.07 * s.spectrum.modes[0].detuning;
    const AppliedNoise noise{StaticOffset{eps}, NoiseApplication::additive_detuning};
    ModeSpectrum shifted = s.spectrum;
    shifted.modes[0].detuning += eps;
    CHECK(residual_p1(s.config, s.spectrum, noise) ==
          doctest::Approx(residual_p1(s.config, shifted, std::nullopt)).epsilon(1e-10));
}

TEST_CASE("second-order closure flattens the static response curvature") {
    const double tau = 500e-6;
    const double target = -two_pi * 2e3;
    ModeSpectrum spec;
    spec.qubit_count = 1;
    spec.modes = {{target, {1.0}, 0.1}};
    GateConfig std_cfg;
    std_cfg.gate_time = tau;
    std_cfg.basis = SpinBasis::x;
    std_cfg.sequence = base_sequence(tau); // closed: target * tau = -2 pi
    std_cfg.rabi = two_pi * 1e3;
    GateConfig pm_cfg = std_cfg;
    pm_cfg.sequence = build_sequence(std::vector{target, target}, tau);

    const double h = 0.01 * std::abs(target);
    auto curvature = [&](const GateConfig& cfg) {
        auto p1 = [&](double eps) {
            const AppliedNoise n{StaticOffset{eps}, NoiseApplication::additive_detuning};
            return residual_p1(cfg, spec, n);
        };
        return (p1(h) - 2.0 * p1(0.0) + p1(-h)) / (h * h);
    };
    CHECK(curvature(pm_cfg) < 0.2 * curvature(std_cfg));
}

TEST_CASE("static sweep: exact engine, zero error on a closed design") {
    const SingleIon s = standard_closed();
    std::vector<double> errors = {-two_pi * 300.0, 0.0, two_pi * 300.0};
    const ResponseCurve curve = static_sweep(s.config, s.spectrum, errors, true);
    REQUIRE(curve.values.size() == 3);
    CHECK(curve.values[1] < 1e-15);
    CHECK(curve.values[0] > 0.0);
    CHECK(curve.values[2] > 0.0);
    CHECK(curve.kind == ResponseCurve::Kind::p1);
    // approximate engine agrees to leading order at nbar = 0
    const ResponseCurve approx = static_sweep(s.config, s.spectrum, errors, false);
    CHECK(approx.values[0] == doctest::Approx(curve.values[0]).epsilon(0.1));
}

TEST_CASE("plateau widths grow with the suppression order") {
    const double tau = 500e-6;
    const double target = -two_pi * 2e3;
    ModeSpectrum spec;
    spec.qubit_count = 2;
    spec.modes = {{target, {1.0, 1.0}, 0.1}};
    std::vector<double> errors;
    for (int i = 0; i <= 160; ++i) errors.push_back(-two_pi * 1.2e3 + two_pi * 2.4e3 * i / 160.0);

    auto width_at = [&](const std::vector<double>& order) {
        GateConfig c;
        c.gate_time = tau;
        c.basis = SpinBasis::x;
        c.sequence = order.empty() ? base_sequence(tau) : build_sequence(order, tau);
        c.rabi = solve_rabi(c.sequence, spec, 0.25 * pi);
        const ResponseCurve curve = static_sweep(c, spec, errors, true);
        int count = 0;
        for (double v : curve.values) count += v <= 0.05;
        return count;
    };
    const int w1 = width_at({});
    const int w2 = width_at({target, target});
    const int w3 = width_at({target, target, target});
    CHECK(w1 < w2);
    CHECK(w2 < w3);
}

TEST_CASE("rescaled drive keeps the gate maximally entangling across the sweep") {
    const double tau = 500e-6;
    const double target = -two_pi * 2e3;
    ModeSpectrum spec;
    spec.qubit_count = 2;
    spec.modes = {{target, {1.0, 1.0}, 0.0}};
    GateConfig c;
    c.gate_time = tau;
    c.basis = SpinBasis::x;
    c.sequence = build_sequence(std::vector{target, target}, tau);
    c.rabi = solve_rabi(c.sequence, spec, 0.25 * pi);
    std::vector<double> errors = {-0.2 * std::abs(target), 0.15 * std::abs(target)};
    const ResponseCurve fixed = static_sweep(c, spec, errors, true, false);
    const ResponseCurve rescaled = static_sweep(c, spec, errors, true, true);
    REQUIRE(fixed.values.size() == rescaled.values.size());
    // rescaling changes the drive, so the residual differs
    CHECK(fixed.values[0] != rescaled.values[0]);
}

TEST_CASE("filter function: nonnegative, additive over modes, positive frequencies only") {
    const double tau = 250e-6;
    ModeSpectrum spec;
    spec.qubit_count = 1;
    spec.modes = {{two_pi / tau, {1.0}, 0.0}, {two_pi * 2.7 / tau, {0.6}, 0.0}};
    const PhaseSequence seq =
        build_sequence(std::vector{spec.modes[0].detuning, spec.modes[1].detuning}, tau);
    std::vector<double> omegas;
    for (int i = 1; i <= 20; ++i) omegas.push_back(two_pi * i * 0.1 / tau);
    const FilterFunctionCurve curve = filter_function_first_order(seq, spec, two_pi * 5e3, omegas);
    REQUIRE(curve.total.size() == omegas.size());
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        CHECK(curve.total[i] >= 0.0);
        CHECK(curve.total[i] ==
              doctest::Approx(curve.per_mode[0][i] + curve.per_mode[1][i]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(
        filter_function_first_order(seq, spec, two_pi * 5e3, std::vector{0.0}),
        std::invalid_argument);
    CHECK_THROWS_AS(modal_filter_value(seq, spec.modes[0].detuning, 0.0), std::invalid_argument);
}

TEST_CASE("standard-gate filter function flattens at low frequency") {
    const SingleIon s = standard_closed();
    const double delta = s.spectrum.modes[0].detuning;
    const double f_001 = modal_filter_value(s.config.sequence, delta, 0.001 * delta);
    const double f_01 = modal_filter_value(s.config.sequence, delta, 0.01 * delta);
    CHECK(f_001 == doctest::Approx(f_01).epsilon(0.01));
    // regression against the direct closed form |e^{i w tau} - 1|^2 / (delta + w)^2 / w^2
    const double w = 0.01 * delta;
    const double tau = s.config.gate_time;
    const std::complex<double> k =
        (std::exp(std::complex<double>(0.0, (delta + w) * tau)) - 1.0) /
        std::complex<double>(0.0, delta + w);
    CHECK(modal_filter_value(s.config.sequence, delta, w) ==
          doctest::Approx(std::norm(k) / (w * w)).epsilon(1e-12));
}

TEST_CASE("low-frequency log-log slope tracks the suppression order") {
    const double tau = 250e-6;
    const double delta = two_pi / tau;
    ModeSpectrum spec;
    spec.qubit_count = 1;
    spec.modes = {{delta, {1.0}, 0.0}};
    auto slope = [&](const PhaseSequence& seq) {
        const double w1 = 0.01 * delta, w2 = 0.1 * delta;
        return std::log(modal_filter_value(seq, delta, w2) / modal_filter_value(seq, delta, w1)) /
               std::log(w2 / w1);
    };
    CHECK(std::abs(slope(base_sequence(tau))) < 0.3);
    CHECK(slope(build_sequence(std::vector{delta, delta}, tau)) == doctest::Approx(2.0).epsilon(0.15));
    CHECK(slope(build_sequence(std::vector{delta, delta, delta}, tau)) ==
          doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("phase-averaged response basics") {
    const SingleIon s = standard_closed();
    const double delta = s.spectrum.modes[0].detuning;
    CHECK(phase_averaged_response(s.config, s.spectrum, 0.3 * delta, 0.0, 16).mean == 0.0);
    CHECK_THROWS_AS(phase_averaged_response(s.config, s.spectrum, 0.3 * delta, 0.1, 7),
                    std::invalid_argument);
}

TEST_CASE("standard gate responds almost flat across modulation frequencies") {
    // Fixed strong drive: the response saturates, flat within a factor 3
    const SingleIon s = standard_closed(250e-6, 26e3);
    const double delta = s.spectrum.modes[0].detuning;
    const double depth = 0.1 * delta;
    double lo = 1.0, hi = 0.0;
    for (double ratio : {0.05, 0.1, 0.2, 0.35, 0.5}) {
        const double mean =
            phase_averaged_response(s.config, s.spectrum, ratio * delta, depth, 32).mean;
        lo = std::min(lo, mean);
        hi = std::max(hi, mean);
    }
    CHECK(hi / lo <= 3.0);
}

TEST_CASE("small-depth response matches the first-order filter function") {
    const SingleIon s = standard_closed();
    const double delta = s.spectrum.modes[0].detuning;
    const double depth = 0.01 * delta;
    for (double ratio : {0.01, 0.1, 0.5, 1.0}) {
        const double w = ratio * delta;
        const double exact = phase_averaged_response(s.config, s.spectrum, w, depth, 32).mean;
        const double first = 0.25 * depth * depth * s.config.rabi * s.config.rabi *
                             (modal_filter_value(s.config.sequence, delta, w) +
                              modal_filter_value(s.config.sequence, delta, -w));
        CHECK(exact == doctest::Approx(first).epsilon(0.10));
    }
}

TEST_CASE("phase-grid refinement is converged at 32 points") {
    const SingleIon s = standard_closed();
    const double delta = s.spectrum.modes[0].detuning;
    for (double ratio : {0.07, 0.83}) {
        const double a = phase_averaged_response(s.config, s.spectrum, ratio * delta,
                                                 0.08 * delta, 32)
                             .mean;
        const double b = phase_averaged_response(s.config, s.spectrum, ratio * delta,
                                                 0.08 * delta, 64)
                             .mean;
        CHECK(std::abs(a - b) <= 0.001 * std::abs(b));
    }
}

TEST_CASE("response scales with the depth squared") {
    const SingleIon s = standard_closed();
    const double delta = s.spectrum.modes[0].detuning;
    const double w = 0.23 * delta;
    double first_ratio = 0.0;
    for (double depth : {1e-3 * delta, 3.16e-4 * delta, 1e-4 * delta}) {
        const double mean = phase_averaged_response(s.config, s.spectrum, w, depth, 32).mean;
        const double ratio = mean / (depth * depth);
        if (first_ratio == 0.0)
            first_ratio = ratio;
        else
            CHECK(ratio == doctest::Approx(first_ratio).epsilon(0.02));
    }
}

TEST_CASE("slow modulation approaches the phase-averaged static response") {
    const SingleIon s = standard_closed();
    const double delta = s.spectrum.modes[0].detuning;
    const double depth = 0.05 * delta;
    const double w = 0.001 * delta; // omega tau / 2pi = 0.001
    const double dynamic = phase_averaged_response(s.config, s.spectrum, w, depth, 64).mean;
    double static_avg = 0.0;
    for (int i = 0; i < 64; ++i) {
        const AppliedNoise n{StaticOffset{depth * std::sin(two_pi * i / 64.0)},
                             NoiseApplication::additive_detuning};
        static_avg += single_ion_p1(s.config, s.spectrum, n) / 64.0;
    }
    CHECK(dynamic == doctest::Approx(static_avg).epsilon(0.02));
}

TEST_CASE("polynomial coupling envelopes are annihilated up to order q-1") {
    const double tau = 400e-6;
    const double delta = -two_pi * 2e3;
    ModeSpectrum spec;
    spec.qubit_count = 1;
    spec.modes = {{delta, {1.0}, 0.0}};
    GateConfig c;
    c.gate_time = tau;
    c.basis = SpinBasis::x;
    c.sequence = build_sequence(std::vector{delta, delta, delta}, tau);
    c.rabi = two_pi * 3e3;
    const double scale = c.rabi * tau * c.rabi * tau;
    // order <= q-1 = 2: fully suppressed
    const AppliedNoise drift{PolynomialDrift{{1.0, 2.0 / tau, -1.5 / (tau * tau)}},
                             NoiseApplication::coupling_envelope};
    CHECK(residual_p1(c, spec, drift) < 1e-18 * scale);
    // order q = 3 polynomial survives
    const AppliedNoise cubic{PolynomialDrift{{0.0, 0.0, 0.0, 1.0 / (tau * tau * tau)}},
                             NoiseApplication::coupling_envelope};
    CHECK(residual_p1(c, spec, cubic) > 1e-10 * scale);
}

TEST_CASE("single-qubit views pick out one coupling column") {
    ModeSpectrum spec;
    spec.qubit_count = 2;
    spec.modes = {{1.0, {0.5, -0.25}, 0.1}};
    const ModeSpectrum v0 = single_qubit_view(spec, 0);
    const ModeSpectrum v1 = single_qubit_view(spec, 1);
    CHECK(v0.qubit_count == 1);
    CHECK(v0.modes[0].couplings == std::vector{0.5});
    CHECK(v1.modes[0].couplings == std::vector{-0.25});
    CHECK_THROWS_AS(single_qubit_view(spec, 2), std::invalid_argument);
}
