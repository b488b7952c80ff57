#include "pmgate/model.hpp"

#include <cmath>
#include <stdexcept>

namespace pmgate {

std::string to_string(SpinBasis basis) {
    switch (basis) {
        case SpinBasis::x: return "x";
        case SpinBasis::y: return "y";
        case SpinBasis::z: return "z";
    }
    return "x";
}

SpinBasis spin_basis_from_string(const std::string& name) {
    if (name == "x") return SpinBasis::x;
    if (name == "y") return SpinBasis::y;
    if (name == "z") return SpinBasis::z;
    throw std::invalid_argument("unknown spin basis '" + name + "' (expected x, y or z)");
}

void validate_noise(const NoiseModel& noise) {
    if (const auto* s = std::get_if<Sinusoid>(&noise)) {
        if (s->depth < 0.0) throw std::invalid_argument("sinusoid depth must be >= 0");
        if (!std::isfinite(s->depth) || !std::isfinite(s->omega_mod) || !std::isfinite(s->phase))
            throw std::invalid_argument("sinusoid parameters must be finite");
    } else if (const auto* p = std::get_if<PolynomialDrift>(&noise)) {
        if (p->coefficients.empty()) throw std::invalid_argument("polynomial drift needs coefficients");
        if (p->coefficients.size() > 9) throw std::invalid_argument("polynomial order must be <= 8");
        for (double c : p->coefficients)
            if (!std::isfinite(c)) throw std::invalid_argument("polynomial coefficients must be finite");
    } else if (const auto* o = std::get_if<StaticOffset>(&noise)) {
        if (!std::isfinite(o->epsilon)) throw std::invalid_argument("static offset must be finite");
    }
}

ValidationReport validate_spectrum(const ModeSpectrum& spectrum) {
    ValidationReport report;
    auto violation = [&](std::string code, std::string msg) {
        report.violations.push_back({std::move(code), std::move(msg)});
    };
    if (spectrum.qubit_count < 1 || spectrum.qubit_count > 2)
        violation("qubit count", "qubit count must be 1 or 2");
    if (spectrum.modes.empty()) violation("empty spectrum", "need at least one mode");
    for (std::size_t k = 0; k < spectrum.modes.size(); ++k) {
        const Mode& m = spectrum.modes[k];
        const std::string at = "mode " + std::to_string(k);
        if (m.couplings.size() != std::size_t(spectrum.qubit_count))
            violation("coupling arity", at + ": " + std::to_string(m.couplings.size()) +
                                             " couplings for " + std::to_string(spectrum.qubit_count) +
                                             " qubit(s)");
        if (m.thermal_occupation < 0.0) violation("negative occupation", at + ": nbar < 0");
        if (!std::isfinite(m.detuning)) violation("non-finite", at + ": detuning not finite");
        if (!std::isfinite(m.thermal_occupation)) violation("non-finite", at + ": nbar not finite");
        for (double f : m.couplings)
            if (!std::isfinite(f)) violation("non-finite", at + ": coupling not finite");
    }
    for (std::size_t k = 0; k < spectrum.modes.size(); ++k)
        for (std::size_t j = k + 1; j < spectrum.modes.size(); ++j)
            if (spectrum.modes[k].detuning == spectrum.modes[j].detuning)
                report.warnings.push_back({"duplicate detuning",
                                           "modes " + std::to_string(k) + " and " + std::to_string(j) +
                                               " share a detuning"});
    return report;
}

void require_valid(const ModeSpectrum& spectrum) {
    const ValidationReport report = validate_spectrum(spectrum);
    if (!report.ok()) {
        std::string msg = "invalid spectrum:";
        for (const auto& v : report.violations) msg += " [" + v.code + "] " + v.message + ";";
        throw std::invalid_argument(msg);
    }
}

void validate_gate_config(const GateConfig& config) {
    if (!(config.rabi >= 0.0) || !std::isfinite(config.rabi))
        throw std::invalid_argument("rabi must be finite and >= 0");
    if (!(config.gate_time > 0.0)) throw std::invalid_argument("gate time must be positive");
    const double total = config.sequence.total_duration();
    if (std::abs(total - config.gate_time) > 1e-12 * config.gate_time)
        throw std::invalid_argument("sequence duration does not match gate time");
}

} // namespace pmgate
