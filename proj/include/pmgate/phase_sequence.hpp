#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace pmgate {

// Wraps an angle to [-pi, pi).
double wrap_phase(double phi);

struct Segment {
    double duration; // s, > 0
    double phase;    // rad, stored wrapped to [-pi, pi)
};

// Piecewise-constant coupling-phase schedule. The modulation function is
// r(t) = exp(-i*phase_n) while t lies in the n-th segment's half-open
// interval [start_n, start_n + duration_n), and 0 outside [0, total).
class PhaseSequence {
  public:
    explicit PhaseSequence(std::vector<Segment> segments);

    const std::vector<Segment>& segments() const { return segments_; }
    std::size_t size() const { return segments_.size(); }
    double total_duration() const { return starts_.back(); }

    // Start time of segment n; starts(size()) is the total duration.
    double start(std::size_t n) const { return starts_[n]; }

    // r(t); zero outside [0, total_duration).
    std::complex<double> value(double t) const;

    // Index of the segment containing t in [0, total_duration).
    std::size_t segment_index(double t) const;

  private:
    std::vector<Segment> segments_;
    std::vector<double> starts_; // size()+1 entries, cumulative
};

// Single segment of the given duration with phase 0.
PhaseSequence base_sequence(double segment_time);

// Appends a copy of the sequence with every phase shifted by
// detuning * total_duration - pi, doubling the duration. The returned
// sequence closes the phase-space trajectory of a mode at `detuning`.
PhaseSequence apply_closure(const PhaseSequence& seq, double detuning);

// apply_closure folded over `detunings` (first element applied first,
// i.e. innermost) starting from a base segment of gate_time / 2^q.
// Repeating a detuning raises its suppression order. q > 20 is rejected.
PhaseSequence build_sequence(std::span<const double> detunings, double gate_time);

// M_j = integral over [0, total] of r(t) e^{i delta t} t^j dt, exact per
// segment. Units s^(j+1). j <= 8.
std::complex<double> sequence_moment(const PhaseSequence& seq, double detuning, int order);

struct BichromaticSegment {
    double duration;
    double phase_blue;
    double phase_red;
};

// Hardware export: phase_blue = spin_phase + phi_n, phase_red = spin_phase - phi_n,
// so (phase_blue - phase_red)/2 recovers the coupling phase exactly.
std::vector<BichromaticSegment> bichromatic_phases(const PhaseSequence& seq, double spin_phase);

} // namespace pmgate
