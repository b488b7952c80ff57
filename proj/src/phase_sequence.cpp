#include "pmgate/phase_sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pmgate {

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::complex<double> iu{0.0, 1.0};

// B_l(delta, h) = integral over [0, h] of s^l e^{i delta s} ds.
// Series for small |delta*h| (the closed form cancels catastrophically),
// upward recursion otherwise. Stable for l <= 9 at the 4.0 threshold.
std::complex<double> power_integral(int l, double delta, double h) {
    const double x = delta * h;
    if (std::abs(x) < 4.0) {
        // sum over m of (i delta)^m / m! * h^(l+m+1) / (l+m+1)
        std::complex<double> term = std::pow(h, l + 1) / double(l + 1);
        std::complex<double> sum = term;
        for (int m = 1; m < 80; ++m) {
            term *= iu * x / double(m) * (double(l + m) / double(l + m + 1));
            sum += term;
            if (std::abs(term) < 1e-20 * std::abs(sum) + 1e-300) break;
        }
        return sum;
    }
    // I_0 = (e^{i x} - 1) / (i delta);  I_l = h^l e^{i x}/(i delta) - (l/(i delta)) I_{l-1}
    std::complex<double> acc = (std::exp(iu * x) - 1.0) / (iu * delta);
    for (int m = 1; m <= l; ++m) {
        acc = std::pow(h, m) * std::exp(iu * x) / (iu * delta) - double(m) / (iu * delta) * acc;
    }
    return acc;
}

} // namespace

double wrap_phase(double phi) {
    double r = std::remainder(phi, 2.0 * pi);
    if (r >= pi) r -= 2.0 * pi;
    if (r < -pi) r += 2.0 * pi;
    return r;
}

PhaseSequence::PhaseSequence(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw std::invalid_argument("phase sequence needs at least one segment");
    starts_.reserve(segments_.size() + 1);
    double t = 0.0;
    starts_.push_back(0.0);
    for (auto& seg : segments_) {
        if (!(seg.duration > 0.0) || !std::isfinite(seg.duration))
            throw std::invalid_argument("segment duration must be positive and finite");
        if (!std::isfinite(seg.phase)) throw std::invalid_argument("segment phase must be finite");
        seg.phase = wrap_phase(seg.phase);
        t += seg.duration;
        starts_.push_back(t);
    }
}

std::size_t PhaseSequence::segment_index(double t) const {
    auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
    if (it == starts_.begin()) return 0;
    std::size_t n = std::size_t(it - starts_.begin()) - 1;
    return std::min(n, segments_.size() - 1);
}

std::complex<double> PhaseSequence::value(double t) const {
    if (t < 0.0 || t >= total_duration()) return {0.0, 0.0};
    return std::exp(-iu * segments_[segment_index(t)].phase);
}

PhaseSequence base_sequence(double segment_time) {
    if (!(segment_time > 0.0) || !std::isfinite(segment_time))
        throw std::invalid_argument("base sequence duration must be positive");
    return PhaseSequence({{segment_time, 0.0}});
}

PhaseSequence apply_closure(const PhaseSequence& seq, double detuning) {
    if (!std::isfinite(detuning)) throw std::invalid_argument("detuning must be finite");
    const double shift = detuning * seq.total_duration() - pi;
    std::vector<Segment> out;
    out.reserve(2 * seq.size());
    out.insert(out.end(), seq.segments().begin(), seq.segments().end());
    for (const auto& seg : seq.segments()) out.push_back({seg.duration, seg.phase + shift});
    return PhaseSequence(std::move(out));
}

PhaseSequence build_sequence(std::span<const double> detunings, double gate_time) {
    if (detunings.empty()) throw std::invalid_argument("need at least one detuning");
    if (detunings.size() > 20) throw std::invalid_argument("more than 20 closure applications");
    if (!(gate_time > 0.0)) throw std::invalid_argument("gate time must be positive");
    const double segment_time = gate_time / double(std::size_t(1) << detunings.size());
    PhaseSequence seq = base_sequence(segment_time);
    for (double d : detunings) seq = apply_closure(seq, d);
    return seq;
}

std::complex<double> sequence_moment(const PhaseSequence& seq, double detuning, int order) {
    if (order < 0 || order > 8) throw std::invalid_argument("moment order must be in [0, 8]");
    if (!std::isfinite(detuning)) throw std::invalid_argument("detuning must be finite");
    // Per segment, shift to local time: t = t_n + s, expand t^j binomially.
    std::complex<double> total{0.0, 0.0};
    for (std::size_t n = 0; n < seq.size(); ++n) {
        const double t0 = seq.start(n);
        const double h = seq.segments()[n].duration;
        const double phi = seq.segments()[n].phase;
        std::complex<double> inner{0.0, 0.0};
        double binom = 1.0;
        for (int l = order; l >= 0; --l) {
            // C(order, l) * t0^(order-l) * B_l
            inner += binom * std::pow(t0, order - l) * power_integral(l, detuning, h);
            binom *= double(l) / double(order - l + 1);
        }
        total += std::exp(iu * (detuning * t0 - phi)) * inner;
    }
    return total;
}

std::vector<BichromaticSegment> bichromatic_phases(const PhaseSequence& seq, double spin_phase) {
    std::vector<BichromaticSegment> out;
    out.reserve(seq.size());
    for (const auto& seg : seq.segments())
        out.push_back({seg.duration, spin_phase + seg.phase, spin_phase - seg.phase});
    return out;
}

} // namespace pmgate
