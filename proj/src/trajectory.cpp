#include "pmgate/trajectory.hpp"

#include <cmath>
#include <stdexcept>

#include "pmgate/integrate.hpp"

namespace pmgate {

namespace {

constexpr std::complex<double> iu{0.0, 1.0};

// (e^z - 1) / z, stable near z = 0. z is purely imaginary here.
std::complex<double> expm1_over(std::complex<double> z) {
    if (std::abs(z) < 1e-4) {
        std::complex<double> term{1.0, 0.0};
        std::complex<double> sum = term;
        for (int m = 2; m <= 8; ++m) {
            term *= z / double(m);
            sum += term;
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / z;
}

// int_a^b e^{i delta s} ds
std::complex<double> window_integral(double delta, double a, double b) {
    const double h = b - a;
    return h * std::exp(iu * (delta * a)) * expm1_over(iu * (delta * h));
}

// Swept area of one segment relative to its own start:
// T(h) = Im over the triangle a<=s<t<=b of e^{i delta (t-s)} = h/delta - sin(delta h)/delta^2.
double segment_triangle(double delta, double h) {
    const double x = delta * h;
    if (std::abs(x) < 1e-3) {
        // series of (h/delta)(1 - sin x / x)
        return delta * h * h * h * (1.0 / 6.0 - x * x / 120.0 + x * x * x * x / 5040.0);
    }
    return h / delta - std::sin(x) / (delta * delta);
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0 + x * x * x * x / 120.0;
    return std::sin(x) / x;
}

// beta(t) for the coupling-envelope mode (polynomial only).
double envelope_value(const PolynomialDrift& poly, double t) {
    double acc = 0.0;
    for (std::size_t j = poly.coefficients.size(); j-- > 0;) acc = acc * t + poly.coefficients[j];
    return acc;
}

// Integrand of the noisy path on segment n, callable at absolute time t.
std::function<std::complex<double>(double)> noisy_integrand(const PhaseSequence& seq,
                                                            std::size_t n, double detuning,
                                                            const AppliedNoise& noise) {
    const double phi = seq.segments()[n].phase;
    if (noise.application == NoiseApplication::coupling_envelope) {
        const auto* poly = std::get_if<PolynomialDrift>(&noise.model);
        if (!poly)
            throw std::invalid_argument("coupling envelope supports polynomial noise only");
        return [=](double t) {
            return envelope_value(*poly, t) * std::exp(iu * (detuning * t - phi));
        };
    }
    const NoiseModel model = noise.model;
    return [=](double t) {
        return std::exp(iu * (detuning * t + integrated_detuning_error(model, t) - phi));
    };
}

bool is_plain_static(const AppliedNoise& noise) {
    return noise.application == NoiseApplication::additive_detuning &&
           std::holds_alternative<StaticOffset>(noise.model);
}

} // namespace

double integrated_detuning_error(const NoiseModel& noise, double t) {
    if (const auto* s = std::get_if<StaticOffset>(&noise)) return s->epsilon * t;
    if (const auto* m = std::get_if<Sinusoid>(&noise)) {
        // int_0^t depth sin(w t' + phase) dt' = (2 depth / w) sin(w t / 2) sin(phase + w t / 2)
        const double half = 0.5 * m->omega_mod * t;
        return m->depth * t * sinc(half) * std::sin(m->phase + half);
    }
    const auto& poly = std::get<PolynomialDrift>(noise);
    double acc = 0.0;
    for (std::size_t j = poly.coefficients.size(); j-- > 0;)
        acc = acc * t + poly.coefficients[j] / double(j + 1);
    return acc * t;
}

std::complex<double> displacement(const PhaseSequence& seq, double detuning, double t) {
    if (t < 0.0 || t > seq.total_duration() * (1.0 + 1e-12))
        throw std::invalid_argument("time outside the sequence window");
    t = std::min(t, seq.total_duration());
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t n = 0; n < seq.size() && seq.start(n) < t; ++n) {
        const double b = std::min(seq.start(n + 1), t);
        acc += std::exp(-iu * seq.segments()[n].phase) * window_integral(detuning, seq.start(n), b);
    }
    return acc;
}

double enclosed_area(const PhaseSequence& seq, double detuning) {
    std::complex<double> endpoint{0.0, 0.0};
    double area = 0.0;
    for (std::size_t n = 0; n < seq.size(); ++n) {
        const double h = seq.segments()[n].duration;
        const std::complex<double> step =
            std::exp(-iu * seq.segments()[n].phase) * window_integral(detuning, seq.start(n), seq.start(n + 1));
        area += segment_triangle(detuning, h) + std::imag(std::conj(endpoint) * step);
        endpoint += step;
    }
    return area;
}

std::complex<double> displacement_noisy(const PhaseSequence& seq, double detuning,
                                        const AppliedNoise& noise, double t) {
    validate_noise(noise.model);
    if (is_plain_static(noise))
        return displacement(seq, detuning + std::get<StaticOffset>(noise.model).epsilon, t);
    if (t < 0.0 || t > seq.total_duration() * (1.0 + 1e-12))
        throw std::invalid_argument("time outside the sequence window");
    t = std::min(t, seq.total_duration());
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t n = 0; n < seq.size() && seq.start(n) < t; ++n) {
        const double a = seq.start(n);
        const double b = std::min(seq.start(n + 1), t);
        acc += complex_integral(noisy_integrand(seq, n, detuning, noise), a, b, 1e-11 * (b - a));
    }
    return acc;
}

EndpointArea noisy_endpoint_and_area(const PhaseSequence& seq, double detuning,
                                     const AppliedNoise& noise) {
    validate_noise(noise.model);
    if (is_plain_static(noise)) {
        const double shifted = detuning + std::get<StaticOffset>(noise.model).epsilon;
        return {displacement(seq, shifted, seq.total_duration()), enclosed_area(seq, shifted)};
    }
    EndpointArea out;
    for (std::size_t n = 0; n < seq.size(); ++n) {
        const double a = seq.start(n);
        const double b = seq.start(n + 1);
        const PathIntegrals part =
            path_integrals(noisy_integrand(seq, n, detuning, noise), a, b, 1e-11 * (b - a));
        out.area += part.triangle + std::imag(std::conj(out.endpoint) * part.integral);
        out.endpoint += part.integral;
    }
    return out;
}

Trajectory sample_trajectory(const PhaseSequence& seq, double detuning, int points_per_segment) {
    if (points_per_segment < 1) throw std::invalid_argument("points_per_segment must be >= 1");
    Trajectory traj;
    traj.detuning = detuning;
    traj.samples.push_back({0.0, {0.0, 0.0}});
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t n = 0; n < seq.size(); ++n) {
        const double a = seq.start(n);
        const double h = seq.segments()[n].duration;
        const std::complex<double> r = std::exp(-iu * seq.segments()[n].phase);
        for (int j = 1; j <= points_per_segment; ++j) {
            const double t = a + h * double(j) / double(points_per_segment);
            traj.samples.push_back({t, acc + r * window_integral(detuning, a, t)});
        }
        acc += r * window_integral(detuning, a, a + h);
        traj.samples.back().displacement = acc; // boundary sample from the running sum
    }
    traj.endpoint = acc;
    traj.area = enclosed_area(seq, detuning);
    return traj;
}

} // namespace pmgate
