#pragma once

#include <complex>
#include <vector>

#include "pmgate/model.hpp"
#include "pmgate/phase_sequence.hpp"

namespace pmgate {

// Per-mode, unit-coupling phase-space path. The drive prefactor
// Omega * f_k^mu is applied by consumers.
struct Trajectory {
    double detuning = 0.0;
    struct Sample {
        double time;
        std::complex<double> displacement;
    };
    std::vector<Sample> samples;             // starts at (0, 0), time-ordered
    std::complex<double> endpoint{0.0, 0.0}; // alpha~(tau_g), units s
    double area = 0.0;                       // Im int alpha~* d alpha~, units s^2
};

// alpha~(t) = int_0^t e^{i delta t'} r(t') dt', exact closed form.
// t must lie in [0, total_duration].
std::complex<double> displacement(const PhaseSequence& seq, double detuning, double t);

// A = Im int_0^tau alpha~*(t) dalpha~(t), exact closed form.
double enclosed_area(const PhaseSequence& seq, double detuning);

// Endpoint of the noisy path int_0^t e^{i[delta t' + Phi(t')]} r(t') dt'
// (additive detuning noise, with Phi the integrated detuning error) or
// int_0^t e^{i delta t'} r(t') beta(t') dt' (polynomial coupling envelope).
// Closed form where the noise permits, adaptive quadrature otherwise.
std::complex<double> displacement_noisy(const PhaseSequence& seq, double detuning,
                                        const AppliedNoise& noise, double t);

// Endpoint and enclosed area of the noisy path over the full sequence.
struct EndpointArea {
    std::complex<double> endpoint{0.0, 0.0};
    double area = 0.0;
};
EndpointArea noisy_endpoint_and_area(const PhaseSequence& seq, double detuning,
                                     const AppliedNoise& noise);

// Uniform samples inside every segment plus all segment boundaries.
Trajectory sample_trajectory(const PhaseSequence& seq, double detuning, int points_per_segment);

// Integrated detuning error Phi(t) = int_0^t beta(t'') dt'' for an
// additive noise model; exposed for the noise-response module.
double integrated_detuning_error(const NoiseModel& noise, double t);

} // namespace pmgate
