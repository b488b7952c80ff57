#include "pmgate/noise_response.hpp"

#include <cmath>
#include <stdexcept>

#include "pmgate/gate_design.hpp"
#include "pmgate/quantum_sim.hpp"
#include "pmgate/trajectory.hpp"
#include "pmgate/units.hpp"

namespace pmgate {

namespace {

void check_qubit(const ModeSpectrum& spectrum, int qubit) {
    if (qubit < 0 || qubit >= spectrum.qubit_count)
        throw std::invalid_argument("qubit index out of range");
}

double clamp_value(double v) {
    if (v < 0.0 && v > -1e-12) return 0.0;
    return v;
}

} // namespace

ModeSpectrum single_qubit_view(const ModeSpectrum& spectrum, int qubit) {
    check_qubit(spectrum, qubit);
    ModeSpectrum view;
    view.qubit_count = 1;
    view.modes = spectrum.modes;
    for (Mode& mode : view.modes) mode.couplings = {mode.couplings[std::size_t(qubit)]};
    return view;
}

double residual_p1(const GateConfig& config, const ModeSpectrum& spectrum,
                   const std::optional<AppliedNoise>& noise, int qubit) {
    require_valid(spectrum);
    validate_gate_config(config);
    check_qubit(spectrum, qubit);
    double p1 = 0.0;
    for (const Mode& mode : spectrum.modes) {
        const std::complex<double> endpoint =
            noise ? displacement_noisy(config.sequence, mode.detuning, *noise, config.gate_time)
                  : displacement(config.sequence, mode.detuning, config.gate_time);
        p1 += std::norm(config.rabi * mode.couplings[std::size_t(qubit)] * endpoint);
    }
    return p1;
}

ResponseCurve static_sweep(const GateConfig& config, const ModeSpectrum& spectrum,
                           std::span<const double> errors, bool exact, bool rescale_rabi,
                           int qubit) {
    require_valid(spectrum);
    validate_gate_config(config);
    check_qubit(spectrum, qubit);
    ResponseCurve curve;
    curve.kind = ResponseCurve::Kind::p1;
    curve.metadata = "static detuning error sweep (rad/s abscissa)";
    for (double eps : errors) {
        GateConfig local = config;
        if (rescale_rabi) {
            ModeSpectrum shifted = spectrum;
            for (Mode& mode : shifted.modes) mode.detuning += eps;
            local.rabi = solve_rabi(config.sequence, shifted, 0.25 * std::numbers::pi);
        }
        const AppliedNoise noise{StaticOffset{eps}, NoiseApplication::additive_detuning};
        double p1;
        if (exact) {
            if (spectrum.qubit_count == 1)
                p1 = single_ion_p1(local, spectrum, noise);
            else
                p1 = analytic_observables(local, spectrum, noise).p1;
        } else {
            p1 = residual_p1(local, spectrum, noise, qubit);
        }
        curve.abscissa.push_back(eps);
        curve.values.push_back(clamp_value(p1));
    }
    return curve;
}

double modal_filter_value(const PhaseSequence& seq, double detuning, double omega) {
    if (omega == 0.0) throw std::invalid_argument("filter function undefined at omega = 0");
    const std::complex<double> k = displacement(seq, detuning + omega, seq.total_duration());
    return std::norm(k) / (omega * omega);
}

FilterFunctionCurve filter_function_first_order(const PhaseSequence& seq,
                                                const ModeSpectrum& spectrum, double rabi,
                                                std::span<const double> omegas, int qubit) {
    require_valid(spectrum);
    check_qubit(spectrum, qubit);
    FilterFunctionCurve out;
    out.omega.assign(omegas.begin(), omegas.end());
    out.per_mode.assign(spectrum.modes.size(), std::vector<double>(omegas.size(), 0.0));
    out.total.assign(omegas.size(), 0.0);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!(omegas[i] > 0.0)) throw std::invalid_argument("filter frequencies must be > 0");
        for (std::size_t k = 0; k < spectrum.modes.size(); ++k) {
            const Mode& mode = spectrum.modes[k];
            const double fk = rabi * mode.couplings[std::size_t(qubit)];
            const double value = fk * fk * modal_filter_value(seq, mode.detuning, omegas[i]);
            out.per_mode[k][i] = value;
            out.total[i] += value;
        }
    }
    return out;
}

PhaseAveragedResponse phase_averaged_response(const GateConfig& config,
                                              const ModeSpectrum& spectrum, double omega_mod,
                                              double depth, int phase_grid, int qubit) {
    require_valid(spectrum);
    validate_gate_config(config);
    check_qubit(spectrum, qubit);
    if (phase_grid < 8) throw std::invalid_argument("phase grid must have at least 8 points");
    const ModeSpectrum view = single_qubit_view(spectrum, qubit);
    PhaseAveragedResponse out;
    out.min = 1.0;
    out.max = 0.0;
    double sum = 0.0;
    for (int i = 0; i < phase_grid; ++i) {
        const double phase = two_pi * double(i) / double(phase_grid);
        const AppliedNoise noise{Sinusoid{depth, omega_mod, phase},
                                 NoiseApplication::additive_detuning};
        const double p1 = single_ion_p1(config, view, noise);
        sum += p1;
        out.min = std::min(out.min, p1);
        out.max = std::max(out.max, p1);
    }
    out.mean = sum / double(phase_grid);
    return out;
}

} // namespace pmgate
