#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "pmgate/model.hpp"
#include "pmgate/quantum_sim.hpp"

namespace pmgate {

// Theta = entangling_phase_prefactor * Omega^2 * sum_k f_k^1 f_k^2 A_k.
// Fixed once against the Fock-space propagator (|Theta| = pi/4 has to make a
// single-mode standard gate maximally entangling); regression-tested.
inline constexpr double entangling_phase_prefactor = 2.0;

struct NoSolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two-qubit geometric phase of the gate. Requires N = 2.
double entangling_phase(const GateConfig& config, const ModeSpectrum& spectrum);

// Per-mode contributions to the entangling phase at unit Omega^2 prefactor,
// i.e. prefactor * f_k^1 f_k^2 A_k (multiply by Omega^2 for the phase).
std::vector<double> entangling_area_terms(const PhaseSequence& seq, const ModeSpectrum& spectrum);

// Drive strength giving |Theta| = |target_phase|. Throws NoSolutionError when
// the mode areas cancel (|sum_k f_k^1 f_k^2 A_k| < 1e-18 s^2).
double solve_rabi(const PhaseSequence& seq, const ModeSpectrum& spectrum, double target_phase);

struct DesignTarget {
    std::size_t mode_index = 0;
    int order = 1; // closure applications at this mode's detuning
};

enum class Scheme { standard, phase_modulated };
enum class OrderingRule { as_listed, minimize_rabi };

struct DesignRequest {
    ModeSpectrum spectrum; // N = 2
    double gate_time = 0.0;
    std::vector<DesignTarget> targets;
    Scheme scheme = Scheme::phase_modulated;
    OrderingRule ordering = OrderingRule::minimize_rabi;
    SpinBasis basis = SpinBasis::x;
    double target_phase = 0.25 * 3.14159265358979323846;
};

struct DesignCandidate {
    std::vector<double> detunings; // application order, innermost first
    double rabi = 0.0;             // NaN when the areas cancel for this ordering
};

struct DesignResult {
    GateConfig config;
    std::vector<double> ordering; // chosen detuning application order
    std::vector<double> entangling_phase_per_mode;
    std::vector<DesignCandidate> candidates;
};

// Builds the sequence (all distinct orderings of the target detunings when
// minimizing Omega), solves the drive strength, returns the minimum-Omega
// design. Ties within 1e-12 relative go to the lexicographically smaller
// detuning list. Orderings beyond 720 candidates are rejected.
DesignResult design_gate(const DesignRequest& request);

struct DetuningSweepPoint {
    double offset = 0.0; // rad/s added to every mode detuning
    double fidelity = 0.0;
    double rabi = 0.0;
    std::vector<double> ordering;
    bool gap = false; // no-solution at this offset
};

// Ideal (noiseless) Bell fidelity across uniform drive offsets. Per-point
// no-solution failures become gaps, not aborts. Results are independent of
// the worker count.
std::vector<DetuningSweepPoint> detuning_sweep(const DesignRequest& request_template,
                                               std::span<const double> offsets,
                                               unsigned workers = 1);

} // namespace pmgate
