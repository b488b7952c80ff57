#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pmgate/phase_sequence.hpp"

namespace pmgate {

enum class SpinBasis { x, y, z };

std::string to_string(SpinBasis basis);
SpinBasis spin_basis_from_string(const std::string& name);

// One bosonic mode as seen from the drive: detuning delta_k (rad/s),
// per-qubit coupling factors f_k^mu (dimensionless, signed), and the
// initial thermal occupation nbar_k.
struct Mode {
    double detuning = 0.0;
    std::vector<double> couplings;
    double thermal_occupation = 0.0;
};

struct ModeSpectrum {
    int qubit_count = 1; // N in {1, 2}
    std::vector<Mode> modes;
};

// A fully specified gate. The sequence's total duration must equal
// gate_time (relative 1e-12); see validate_gate_config.
struct GateConfig {
    double rabi = 0.0;      // rad/s, >= 0
    double gate_time = 0.0; // s, > 0
    SpinBasis basis = SpinBasis::x;
    PhaseSequence sequence{{{1.0, 0.0}}};
};

// --- detuning noise -------------------------------------------------------

struct StaticOffset {
    double epsilon = 0.0; // rad/s added to every detuning
};

struct Sinusoid {
    double depth = 0.0;     // rad/s, >= 0
    double omega_mod = 0.0; // rad/s
    double phase = 0.0;     // rad; beta(t) = depth * sin(omega_mod t + phase)
};

struct PolynomialDrift {
    std::vector<double> coefficients; // beta_j, j = 0..p, p <= 8
};

using NoiseModel = std::variant<StaticOffset, Sinusoid, PolynomialDrift>;

// The paper uses two distinct injection semantics: an additive error on the
// detuning, and a multiplicative (polynomial) envelope on the coupling.
// Callers must name one; they are never mixed.
enum class NoiseApplication { additive_detuning, coupling_envelope };

struct AppliedNoise {
    NoiseModel model;
    NoiseApplication application = NoiseApplication::additive_detuning;
};

void validate_noise(const NoiseModel& noise);

// --- validation -----------------------------------------------------------

struct ValidationIssue {
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> violations;
    std::vector<ValidationIssue> warnings;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_spectrum(const ModeSpectrum& spectrum);

// Throws std::invalid_argument if the report has violations.
void require_valid(const ModeSpectrum& spectrum);

// Checks rabi >= 0, gate_time > 0 and the duration match.
void validate_gate_config(const GateConfig& config);

} // namespace pmgate
