#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "pmgate/model.hpp"

namespace pmgate {

// Reduced qubit state after the gate, modes traced out. Only the top-left
// 2^N x 2^N block is meaningful.
struct SpinDensity {
    int qubits = 1;
    std::array<std::array<std::complex<double>, 4>, 4> m{};
    int dim() const { return 1 << qubits; }
};

struct GateObservables {
    double p0 = 0.0; // probability of measuring n qubits in |1>
    double p1 = 0.0;
    double p2 = 0.0;
    double parity_contrast = 0.0;
    // N = 2: (P0 + P2)/2 + parity_contrast/2. N = 1: the |0> survival P0.
    double bell_fidelity = 0.0;
    // State-dependent displacement Omega * (sum_mu f_k^mu) * alpha~_k(tau_g)
    // of the all-plus spin branch, one entry per mode.
    std::vector<std::complex<double>> mode_residuals;
    double truncation = 0.0; // Fock engine: max top-two-level population
    bool reliable = true;    // false when truncation > 1e-6
    std::string engine = "analytic";
};

// Exact reduced state: each spin branch evolves by its displacement and
// geometric phase, thermal modes traced out in closed form.
SpinDensity spin_density(const GateConfig& config, const ModeSpectrum& spectrum,
                         const std::optional<AppliedNoise>& noise);

GateObservables analytic_observables(const GateConfig& config, const ModeSpectrum& spectrum,
                                     const std::optional<AppliedNoise>& noise);

// Exact thermal-averaged P1 of a single qubit after the state-dependent force.
double single_ion_p1(const GateConfig& config, const ModeSpectrum& spectrum,
                     const std::optional<AppliedNoise>& noise);

// Overlap with the nearest Bell state of the family (|00> + e^{i chi}|11>)/sqrt(2);
// the analysis-pulse calibration absorbs chi, so this is the fidelity the
// parity estimator targets.
double direct_bell_fidelity(const SpinDensity& rho);

struct ParityScanResult {
    double contrast = 0.0;
    double fitted_phase = 0.0;
    double fidelity = 0.0;            // (P0 + P2)/2 + contrast/2
    std::vector<double> parities;     // one per analysis phase
};

// Applies a global pi/2 analysis pulse at each phase, computes the parity
// P0 + P2 - P1 and fits c sin(2 phi + phi0) + b by least squares.
// Requires at least 8 phases.
ParityScanResult parity_scan(const GateConfig& config, const ModeSpectrum& spectrum,
                             const std::vector<double>& analysis_phases,
                             const std::optional<AppliedNoise>& noise);

ParityScanResult parity_scan_density(const SpinDensity& rho,
                                     const std::vector<double>& analysis_phases);

// Brute-force cross-check: time-ordered propagation of the full
// qubit-oscillator state in a truncated Fock space, thermal modes as a
// probability-weighted ensemble over initial Fock states (cumulative
// weight >= 1 - 1e-8). Steps never cross a phase jump and are halved
// until the observables move by < 1e-8.
GateObservables fock_oracle(const GateConfig& config, const ModeSpectrum& spectrum,
                            const std::optional<AppliedNoise>& noise, int cutoff);

} // namespace pmgate
