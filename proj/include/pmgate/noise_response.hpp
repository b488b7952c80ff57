#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmgate/model.hpp"

namespace pmgate {

struct ResponseCurve {
    enum class Kind { p1, fidelity, filter_function };
    Kind kind = Kind::p1;
    std::vector<double> abscissa;
    std::vector<double> values; // finite, >= 0 (tiny negative floor clamped)
    std::string metadata;
};

// Small-displacement residual excitation sum_k |Omega f_k^mu alpha~_k(tau_g)|^2.
// The exact thermal value lives in quantum_sim; this agrees with it to first
// order (at nbar = 0).
double residual_p1(const GateConfig& config, const ModeSpectrum& spectrum,
                   const std::optional<AppliedNoise>& noise, int qubit = 0);

// P1 against a static detuning error. exact = true evaluates the thermal
// closed form via quantum_sim; otherwise the small-displacement sum.
// rescale_rabi re-solves the drive strength at each error so the gate stays
// maximally entangling (off by default; needs N = 2).
ResponseCurve static_sweep(const GateConfig& config, const ModeSpectrum& spectrum,
                           std::span<const double> errors, bool exact,
                           bool rescale_rabi = false, int qubit = 0);

// |K(delta, omega)|^2 / omega^2 with K the sequence endpoint at the shifted
// detuning; valid for any omega != 0. Unit coupling; multiply by |Omega f|^2
// for the modal filter function.
double modal_filter_value(const PhaseSequence& seq, double detuning, double omega);

struct FilterFunctionCurve {
    std::vector<double> omega;                // rad/s, > 0
    std::vector<double> total;                // F(omega) = sum_k F_k
    std::vector<std::vector<double>> per_mode; // per_mode[k][i]
};

// First-order detuning-noise filter function, derived by linearizing the
// noisy displacement in the modulation depth and normalized so a unit
// spectral line pi(delta(w - w_mod) + delta(w + w_mod)) reproduces the
// phase-averaged P1. Requires the sequence closed at every mode detuning.
FilterFunctionCurve filter_function_first_order(const PhaseSequence& seq,
                                                const ModeSpectrum& spectrum, double rabi,
                                                std::span<const double> omegas, int qubit = 0);

struct PhaseAveragedResponse {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

// Exact single-qubit P1 averaged over the sinusoid's starting phase on a
// deterministic uniform grid (>= 8 points).
PhaseAveragedResponse phase_averaged_response(const GateConfig& config,
                                              const ModeSpectrum& spectrum, double omega_mod,
                                              double depth, int phase_grid, int qubit = 0);

// Spectrum restricted to one qubit's couplings (for single-ion protocols).
ModeSpectrum single_qubit_view(const ModeSpectrum& spectrum, int qubit);

} // namespace pmgate
