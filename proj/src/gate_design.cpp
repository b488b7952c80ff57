#include "pmgate/gate_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pmgate/parallel.hpp"
#include "pmgate/trajectory.hpp"

namespace pmgate {

namespace {

void require_two_qubits(const ModeSpectrum& spectrum) {
    require_valid(spectrum);
    if (spectrum.qubit_count != 2)
        throw std::invalid_argument("entangling-phase operations need a two-qubit spectrum");
}

double coupling_product_area(const PhaseSequence& seq, const ModeSpectrum& spectrum) {
    double acc = 0.0;
    for (const Mode& mode : spectrum.modes)
        acc += mode.couplings[0] * mode.couplings[1] * enclosed_area(seq, mode.detuning);
    return acc;
}

std::uint64_t multiset_permutation_count(std::vector<double> detunings) {
    std::sort(detunings.begin(), detunings.end());
    std::uint64_t numerator = 1;
    for (std::size_t i = 2; i <= detunings.size(); ++i) numerator *= i;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= detunings.size(); ++i) {
        if (i < detunings.size() && detunings[i] == detunings[i - 1]) {
            ++run;
            continue;
        }
        for (std::size_t j = 2; j <= run; ++j) numerator /= j;
        run = 1;
    }
    return numerator;
}

} // namespace

std::vector<double> entangling_area_terms(const PhaseSequence& seq, const ModeSpectrum& spectrum) {
    require_two_qubits(spectrum);
    std::vector<double> terms;
    terms.reserve(spectrum.modes.size());
    for (const Mode& mode : spectrum.modes)
        terms.push_back(entangling_phase_prefactor * mode.couplings[0] * mode.couplings[1] *
                        enclosed_area(seq, mode.detuning));
    return terms;
}

double entangling_phase(const GateConfig& config, const ModeSpectrum& spectrum) {
    require_two_qubits(spectrum);
    validate_gate_config(config);
    return entangling_phase_prefactor * config.rabi * config.rabi *
           coupling_product_area(config.sequence, spectrum);
}

double solve_rabi(const PhaseSequence& seq, const ModeSpectrum& spectrum, double target_phase) {
    require_two_qubits(spectrum);
    const double area = coupling_product_area(seq, spectrum);
    if (std::abs(area) < 1e-18)
        throw NoSolutionError("entangling area ~ 0: mode contributions cancel");
    return std::sqrt(std::abs(target_phase) / (entangling_phase_prefactor * std::abs(area)));
}

DesignResult design_gate(const DesignRequest& request) {
    require_two_qubits(request.spectrum);
    if (!(request.gate_time > 0.0)) throw std::invalid_argument("gate time must be positive");

    std::vector<double> expanded;
    int total_order = 0;
    for (const DesignTarget& t : request.targets) {
        if (t.mode_index >= request.spectrum.modes.size())
            throw std::invalid_argument("target mode index out of range");
        if (t.order < 1) throw std::invalid_argument("suppression order must be >= 1");
        total_order += t.order;
        for (int q = 0; q < t.order; ++q)
            expanded.push_back(request.spectrum.modes[t.mode_index].detuning);
    }
    if (request.scheme == Scheme::phase_modulated) {
        if (expanded.empty()) throw std::invalid_argument("phase-modulated design needs targets");
        if (total_order > 20) throw std::invalid_argument("total suppression order above 20");
    }

    std::vector<std::vector<double>> orderings;
    if (request.scheme == Scheme::standard) {
        orderings.push_back({});
    } else if (request.ordering == OrderingRule::as_listed) {
        orderings.push_back(expanded);
    } else {
        if (multiset_permutation_count(expanded) > 720)
            throw std::invalid_argument("more than 720 ordering candidates");
        std::vector<double> perm = expanded;
        std::sort(perm.begin(), perm.end());
        do {
            orderings.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    DesignResult result;
    std::size_t best = orderings.size();
    double best_rabi = std::numeric_limits<double>::infinity();
    for (const auto& order : orderings) {
        const PhaseSequence seq = order.empty() ? base_sequence(request.gate_time)
                                                : build_sequence(order, request.gate_time);
        DesignCandidate candidate;
        candidate.detunings = order;
        try {
            candidate.rabi = solve_rabi(seq, request.spectrum, request.target_phase);
        } catch (const NoSolutionError&) {
            candidate.rabi = std::numeric_limits<double>::quiet_NaN();
        }
        result.candidates.push_back(candidate);
        if (std::isnan(candidate.rabi)) continue;
        const std::size_t i = result.candidates.size() - 1;
        if (candidate.rabi < best_rabi * (1.0 - 1e-12)) {
            best_rabi = candidate.rabi;
            best = i;
        } else if (candidate.rabi <= best_rabi * (1.0 + 1e-12) &&
                   candidate.detunings < result.candidates[best].detunings) {
            best_rabi = std::min(best_rabi, candidate.rabi);
            best = i;
        }
    }
    if (best == orderings.size())
        throw NoSolutionError("entangling area ~ 0 for every ordering candidate");

    const auto& chosen = result.candidates[best];
    result.ordering = chosen.detunings;
    result.config.rabi = chosen.rabi;
    result.config.gate_time = request.gate_time;
    result.config.basis = request.basis;
    result.config.sequence = chosen.detunings.empty()
                                 ? base_sequence(request.gate_time)
                                 : build_sequence(chosen.detunings, request.gate_time);
    const std::vector<double> terms = entangling_area_terms(result.config.sequence, request.spectrum);
    result.entangling_phase_per_mode.reserve(terms.size());
    for (double t : terms)
        result.entangling_phase_per_mode.push_back(chosen.rabi * chosen.rabi * t);
    return result;
}

std::vector<DetuningSweepPoint> detuning_sweep(const DesignRequest& request_template,
                                               std::span<const double> offsets,
                                               unsigned workers) {
    require_two_qubits(request_template.spectrum);
    std::vector<DetuningSweepPoint> points(offsets.size());
    parallel_for(offsets.size(), workers, [&](std::size_t i) {
        DetuningSweepPoint& point = points[i];
        point.offset = offsets[i];
        DesignRequest request = request_template;
        for (Mode& mode : request.spectrum.modes) mode.detuning += offsets[i];
        try {
            const DesignResult design = design_gate(request);
            point.rabi = design.config.rabi;
            point.ordering = design.ordering;
            point.fidelity =
                analytic_observables(design.config, request.spectrum, std::nullopt).bell_fidelity;
        } catch (const NoSolutionError&) {
            point.gap = true;
            point.fidelity = std::numeric_limits<double>::quiet_NaN();
            point.rabi = std::numeric_limits<double>::quiet_NaN();
        }
    });
    return points;
}

} // namespace pmgate
