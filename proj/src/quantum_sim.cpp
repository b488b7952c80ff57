#include "pmgate/quantum_sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <thread>

#include "pmgate/trajectory.hpp"

namespace pmgate {

namespace {

constexpr std::complex<double> iu{0.0, 1.0};

// <c|lambda> for a single qubit, c in {0,1}, lambda index 0 = '+', 1 = '-'.
std::complex<double> eigen_amp(SpinBasis s, int c, int l) {
    const double rs2 = 1.0 / std::sqrt(2.0);
    switch (s) {
        case SpinBasis::x: return (c == 1 && l == 1) ? -rs2 : rs2;
        case SpinBasis::y:
            if (c == 0) return rs2;
            return l == 0 ? iu * rs2 : -iu * rs2;
        case SpinBasis::z: return (c == l) ? 1.0 : 0.0;
    }
    return 0.0;
}

int branch_sign(int branch, int qubit) { return ((branch >> qubit) & 1) ? -1 : 1; }

// F_{lambda,k} = sum_mu lambda^mu f_k^mu
double branch_factor(const Mode& mode, int branch, int n_qubits) {
    double f = 0.0;
    for (int mu = 0; mu < n_qubits; ++mu) f += branch_sign(branch, mu) * mode.couplings[mu];
    return f;
}

struct ModePath {
    std::complex<double> endpoint;
    double area;
};

std::vector<ModePath> mode_paths(const GateConfig& config, const ModeSpectrum& spectrum,
                                 const std::optional<AppliedNoise>& noise) {
    std::vector<ModePath> out;
    out.reserve(spectrum.modes.size());
    for (const Mode& mode : spectrum.modes) {
        if (noise) {
            const EndpointArea ea = noisy_endpoint_and_area(config.sequence, mode.detuning, *noise);
            out.push_back({ea.endpoint, ea.area});
        } else {
            out.push_back({displacement(config.sequence, mode.detuning, config.gate_time),
                           enclosed_area(config.sequence, mode.detuning)});
        }
    }
    return out;
}

GateObservables observables_from_density(const SpinDensity& rho,
                                         std::vector<std::complex<double>> residuals) {
    GateObservables obs;
    obs.mode_residuals = std::move(residuals);
    if (rho.qubits == 1) {
        obs.p0 = std::real(rho.m[0][0]);
        obs.p1 = std::real(rho.m[1][1]);
        obs.p2 = 0.0;
        obs.parity_contrast = 2.0 * std::abs(rho.m[0][1]);
        obs.bell_fidelity = obs.p0;
        return obs;
    }
    obs.p0 = std::real(rho.m[0][0]);
    obs.p1 = std::real(rho.m[1][1]) + std::real(rho.m[2][2]);
    obs.p2 = std::real(rho.m[3][3]);
    obs.parity_contrast = 2.0 * std::abs(rho.m[0][3]);
    obs.bell_fidelity = 0.5 * (obs.p0 + obs.p2) + 0.5 * obs.parity_contrast;
    return obs;
}

std::vector<std::complex<double>> all_plus_residuals(const GateConfig& config,
                                                     const ModeSpectrum& spectrum,
                                                     const std::vector<ModePath>& paths) {
    std::vector<std::complex<double>> res(spectrum.modes.size());
    for (std::size_t k = 0; k < spectrum.modes.size(); ++k) {
        const double f = branch_factor(spectrum.modes[k], 0, spectrum.qubit_count);
        res[k] = config.rabi * f * paths[k].endpoint;
    }
    return res;
}

void check_inputs(const GateConfig& config, const ModeSpectrum& spectrum) {
    require_valid(spectrum);
    validate_gate_config(config);
}

} // namespace

SpinDensity spin_density(const GateConfig& config, const ModeSpectrum& spectrum,
                         const std::optional<AppliedNoise>& noise) {
    check_inputs(config, spectrum);
    const int n = spectrum.qubit_count;
    const int branches = 1 << n;
    const std::vector<ModePath> paths = mode_paths(config, spectrum, noise);

    // Branch displacements are collinear (real couplings scale one complex
    // endpoint), so the displacement interference phase Im(a'^* a) vanishes
    // and only the geometric phase and the thermal overlap remain.
    std::vector<double> theta(branches, 0.0);
    for (int b = 0; b < branches; ++b)
        for (std::size_t k = 0; k < paths.size(); ++k) {
            const double f = branch_factor(spectrum.modes[k], b, n);
            theta[b] += config.rabi * config.rabi * f * f * paths[k].area;
        }

    std::vector<std::complex<double>> weight(branches);
    for (int b = 0; b < branches; ++b) {
        std::complex<double> c{1.0, 0.0};
        for (int mu = 0; mu < n; ++mu)
            c *= std::conj(eigen_amp(config.basis, 0, (b >> mu) & 1));
        weight[b] = c;
    }

    // rho in the branch basis
    std::array<std::array<std::complex<double>, 4>, 4> rho_b{};
    for (int b = 0; b < branches; ++b)
        for (int b2 = 0; b2 < branches; ++b2) {
            double log_overlap = 0.0;
            for (std::size_t k = 0; k < paths.size(); ++k) {
                const double df = branch_factor(spectrum.modes[k], b, n) -
                                  branch_factor(spectrum.modes[k], b2, n);
                const double sep = config.rabi * df;
                log_overlap -= sep * sep * std::norm(paths[k].endpoint) *
                               (spectrum.modes[k].thermal_occupation + 0.5);
            }
            rho_b[b][b2] = weight[b] * std::conj(weight[b2]) *
                           std::exp(std::complex<double>(log_overlap, theta[b] - theta[b2]));
        }

    // transform to the computational basis
    SpinDensity rho;
    rho.qubits = n;
    for (int c = 0; c < branches; ++c)
        for (int c2 = 0; c2 < branches; ++c2) {
            std::complex<double> acc{0.0, 0.0};
            for (int b = 0; b < branches; ++b) {
                std::complex<double> vb{1.0, 0.0};
                for (int mu = 0; mu < n; ++mu)
                    vb *= eigen_amp(config.basis, (c >> mu) & 1, (b >> mu) & 1);
                for (int b2 = 0; b2 < branches; ++b2) {
                    std::complex<double> vb2{1.0, 0.0};
                    for (int mu = 0; mu < n; ++mu)
                        vb2 *= std::conj(eigen_amp(config.basis, (c2 >> mu) & 1, (b2 >> mu) & 1));
                    acc += vb * rho_b[b][b2] * vb2;
                }
            }
            rho.m[c][c2] = acc;
        }
    return rho;
}

GateObservables analytic_observables(const GateConfig& config, const ModeSpectrum& spectrum,
                                     const std::optional<AppliedNoise>& noise) {
    const SpinDensity rho = spin_density(config, spectrum, noise);
    const std::vector<ModePath> paths = mode_paths(config, spectrum, noise);
    GateObservables obs =
        observables_from_density(rho, all_plus_residuals(config, spectrum, paths));
    obs.engine = "analytic";
    return obs;
}

double single_ion_p1(const GateConfig& config, const ModeSpectrum& spectrum,
                     const std::optional<AppliedNoise>& noise) {
    if (spectrum.qubit_count != 1) throw std::invalid_argument("single_ion_p1 needs one qubit");
    return analytic_observables(config, spectrum, noise).p1;
}

double direct_bell_fidelity(const SpinDensity& rho) {
    if (rho.qubits != 2) throw std::invalid_argument("Bell fidelity needs two qubits");
    return 0.5 * (std::real(rho.m[0][0]) + std::real(rho.m[3][3])) + std::abs(rho.m[0][3]);
}

ParityScanResult parity_scan_density(const SpinDensity& rho,
                                     const std::vector<double>& analysis_phases) {
    if (rho.qubits != 2) throw std::invalid_argument("parity scan needs two qubits");
    if (analysis_phases.size() < 8)
        throw std::invalid_argument("parity scan needs at least 8 analysis phases");

    ParityScanResult result;
    result.parities.reserve(analysis_phases.size());
    for (double phi : analysis_phases) {
        // global pi/2 pulse about the equatorial axis at angle phi:
        // r = (I - i sigma_phi)/sqrt(2)
        const double rs2 = 1.0 / std::sqrt(2.0);
        std::array<std::array<std::complex<double>, 2>, 2> r{};
        r[0][0] = r[1][1] = rs2;
        r[0][1] = -iu * std::exp(-iu * phi) * rs2;
        r[1][0] = -iu * std::exp(iu * phi) * rs2;
        std::array<std::array<std::complex<double>, 4>, 4> R{};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d) R[a * 2 + c][b * 2 + d] = r[a][b] * r[c][d];
        double parity = 0.0;
        for (int c = 0; c < 4; ++c) {
            std::complex<double> diag{0.0, 0.0};
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) diag += R[c][a] * rho.m[a][b] * std::conj(R[c][b]);
            const int ones = ((c >> 0) & 1) + ((c >> 1) & 1);
            parity += (ones % 2 == 0 ? 1.0 : -1.0) * std::real(diag);
        }
        result.parities.push_back(parity);
    }

    // least squares for A sin(2 phi) + B cos(2 phi) + b
    double sss = 0, scc = 0, ssc = 0, ss = 0, sc = 0, sn = 0;
    double ys = 0, yc = 0, y1 = 0;
    for (std::size_t i = 0; i < analysis_phases.size(); ++i) {
        const double s = std::sin(2.0 * analysis_phases[i]);
        const double c = std::cos(2.0 * analysis_phases[i]);
        sss += s * s;
        scc += c * c;
        ssc += s * c;
        ss += s;
        sc += c;
        sn += 1.0;
        ys += result.parities[i] * s;
        yc += result.parities[i] * c;
        y1 += result.parities[i];
    }
    // solve the 3x3 normal equations by Cramer
    const double a11 = sss, a12 = ssc, a13 = ss;
    const double a22 = scc, a23 = sc, a33 = sn;
    const double det = a11 * (a22 * a33 - a23 * a23) - a12 * (a12 * a33 - a23 * a13) +
                       a13 * (a12 * a23 - a22 * a13);
    if (std::abs(det) < 1e-12) throw std::invalid_argument("degenerate analysis phase set");
    const double dA = ys * (a22 * a33 - a23 * a23) - a12 * (yc * a33 - a23 * y1) +
                      a13 * (yc * a23 - a22 * y1);
    const double dB = a11 * (yc * a33 - a23 * y1) - ys * (a12 * a33 - a23 * a13) +
                      a13 * (a12 * y1 - yc * a13);
    const double A = dA / det;
    const double B = dB / det;
    result.contrast = std::hypot(A, B);
    result.fitted_phase = std::atan2(B, A);
    return result;
}

ParityScanResult parity_scan(const GateConfig& config, const ModeSpectrum& spectrum,
                             const std::vector<double>& analysis_phases,
                             const std::optional<AppliedNoise>& noise) {
    if (spectrum.qubit_count != 2) throw std::invalid_argument("parity scan needs two qubits");
    const SpinDensity rho = spin_density(config, spectrum, noise);
    ParityScanResult result = parity_scan_density(rho, analysis_phases);
    result.fidelity =
        0.5 * (std::real(rho.m[0][0]) + std::real(rho.m[3][3])) + 0.5 * result.contrast;
    return result;
}

// --- truncated Fock-space propagator ---------------------------------------

namespace {

struct FockGrid {
    int n_qubits;
    int n_modes;
    int cutoff;
    int spin_dim;
    int mode_dim;
    std::vector<int> stride;
    std::vector<double> root; // sqrt(0..cutoff+1)

    int occupation(int fock, int k) const { return (fock / stride[k]) % (cutoff + 1); }
};

using State = std::vector<std::complex<double>>;

// out += derivative of psi: sum_mu sigma_s^mu sum_k (gamma a_k^dag - gamma^* a_k) psi
void apply_generator(const FockGrid& g, SpinBasis basis,
                     const std::vector<std::complex<double>>& gamma, const State& psi,
                     State& out) {
    std::fill(out.begin(), out.end(), std::complex<double>{0.0, 0.0});
    const int D = g.mode_dim;
    for (int s = 0; s < g.spin_dim; ++s) {
        for (int mu = 0; mu < g.n_qubits; ++mu) {
            const int bit = (s >> mu) & 1;
            int s2 = s;
            std::complex<double> m{1.0, 0.0};
            switch (basis) {
                case SpinBasis::x: s2 = s ^ (1 << mu); break;
                case SpinBasis::y:
                    s2 = s ^ (1 << mu);
                    m = bit == 0 ? iu : -iu;
                    break;
                case SpinBasis::z: m = bit == 0 ? 1.0 : -1.0; break;
            }
            for (int k = 0; k < g.n_modes; ++k) {
                const std::complex<double> up = m * gamma[std::size_t(mu) * g.n_modes + k];
                const std::complex<double> down = -m * std::conj(gamma[std::size_t(mu) * g.n_modes + k]);
                const int stride = g.stride[k];
                for (int f = 0; f < D; ++f) {
                    const std::complex<double> amp = psi[std::size_t(s) * D + f];
                    if (amp == std::complex<double>{0.0, 0.0}) continue;
                    const int n = g.occupation(f, k);
                    if (n < g.cutoff)
                        out[std::size_t(s2) * D + f + stride] += up * g.root[n + 1] * amp;
                    if (n > 0) out[std::size_t(s2) * D + f - stride] += down * g.root[n] * amp;
                }
            }
        }
    }
}

struct GammaEval {
    const GateConfig* config;
    const ModeSpectrum* spectrum;
    const std::optional<AppliedNoise>* noise;

    // gamma_{mu,k}(t) for the segment holding phase phi
    void eval(double t, double phi, std::vector<std::complex<double>>& gamma) const {
        const auto& modes = spectrum->modes;
        double extra_phase = 0.0;
        double envelope = 1.0;
        if (*noise) {
            if ((*noise)->application == NoiseApplication::coupling_envelope) {
                const auto& poly = std::get<PolynomialDrift>((*noise)->model);
                envelope = 0.0;
                for (std::size_t j = poly.coefficients.size(); j-- > 0;)
                    envelope = envelope * t + poly.coefficients[j];
            } else {
                extra_phase = integrated_detuning_error((*noise)->model, t);
            }
        }
        for (int mu = 0; mu < spectrum->qubit_count; ++mu)
            for (std::size_t k = 0; k < modes.size(); ++k)
                gamma[std::size_t(mu) * modes.size() + k] =
                    config->rabi * modes[k].couplings[mu] * envelope *
                    std::exp(iu * (modes[k].detuning * t + extra_phase - phi));
    }
};

double top_two_population(const FockGrid& g, const State& psi) {
    double pop = 0.0;
    for (int s = 0; s < g.spin_dim; ++s)
        for (int f = 0; f < g.mode_dim; ++f) {
            bool top = false;
            for (int k = 0; k < g.n_modes; ++k)
                if (g.occupation(f, k) >= g.cutoff - 1) top = true;
            if (top) pop += std::norm(psi[std::size_t(s) * g.mode_dim + f]);
        }
    return pop;
}

struct MemberResult {
    SpinDensity rho;
    std::vector<std::complex<double>> mode_amp; // <a_k> of the all-plus spin branch
    double truncation = 0.0;
};

// Probability-weighted initial Fock states of the thermal product state,
// enumerated in decreasing weight until the cumulative weight reaches
// 1 - 1e-8 (then renormalized).
std::vector<std::pair<std::vector<int>, double>> thermal_ensemble(const ModeSpectrum& spectrum,
                                                                  int cutoff) {
    const std::size_t m = spectrum.modes.size();
    auto weight_of = [&](const std::vector<int>& occ) {
        double w = 1.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double nb = spectrum.modes[k].thermal_occupation;
            if (nb == 0.0) {
                if (occ[k] != 0) return 0.0;
                continue;
            }
            w *= std::pow(nb / (nb + 1.0), occ[k]) / (nb + 1.0);
        }
        return w;
    };
    using Entry = std::pair<double, std::vector<int>>;
    std::priority_queue<Entry> heap;
    heap.push({weight_of(std::vector<int>(m, 0)), std::vector<int>(m, 0)});
    std::vector<std::pair<std::vector<int>, double>> members;
    double cum = 0.0;
    while (!heap.empty() && cum < 1.0 - 1e-8) {
        auto [w, occ] = heap.top();
        heap.pop();
        if (w <= 0.0) break;
        members.push_back({occ, w});
        cum += w;
        // canonical successor rule: bump coordinate k only when all lower
        // coordinates are zero, so each tuple is generated exactly once
        for (std::size_t k = 0; k < m; ++k) {
            bool lower_zero = true;
            for (std::size_t j = 0; j < k; ++j)
                if (occ[j] != 0) lower_zero = false;
            if (!lower_zero) continue;
            if (occ[k] >= cutoff) continue;
            auto next = occ;
            ++next[k];
            heap.push({weight_of(next), next});
        }
    }
    if (members.empty()) throw std::runtime_error("empty thermal ensemble");
    for (auto& [occ, w] : members) w /= cum;
    return members;
}

MemberResult propagate_member(const FockGrid& g, const GateConfig& config,
                              const ModeSpectrum& spectrum,
                              const std::optional<AppliedNoise>& noise,
                              const std::vector<int>& occ0, int refine) {
    const int D = g.mode_dim;
    const std::size_t dim = std::size_t(g.spin_dim) * D;
    State psi(dim, {0.0, 0.0});
    int f0 = 0;
    for (int k = 0; k < g.n_modes; ++k) f0 += occ0[k] * g.stride[k];
    psi[f0] = 1.0; // spin |0...0> is index 0

    GammaEval ge{&config, &spectrum, &noise};
    std::vector<std::complex<double>> gamma(std::size_t(g.n_qubits) * g.n_modes);
    State k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

    double rate = config.rabi;
    double max_f = 0.0;
    for (const auto& mode : spectrum.modes) {
        rate = std::max(rate, std::abs(mode.detuning));
        double fsum = 0.0;
        for (double f : mode.couplings) fsum += std::abs(f);
        max_f = std::max(max_f, fsum);
    }
    const double drive_rate = config.rabi * std::max(max_f, 1e-30) * std::sqrt(double(g.cutoff + 1));
    rate = std::max(rate + drive_rate, 1.0 / config.gate_time);

    MemberResult result;
    const auto& seq = config.sequence;
    for (std::size_t n = 0; n < seq.size(); ++n) {
        const double a = seq.start(n);
        const double h_seg = seq.segments()[n].duration;
        const double phi = seq.segments()[n].phase;
        const int steps = std::max(4, int(std::ceil(h_seg * rate / 0.02))) * refine;
        const double h = h_seg / steps;
        for (int step = 0; step < steps; ++step) {
            const double t = a + h * step;
            ge.eval(t, phi, gamma);
            apply_generator(g, config.basis, gamma, psi, k1);
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + 0.5 * h * k1[i];
            ge.eval(t + 0.5 * h, phi, gamma);
            apply_generator(g, config.basis, gamma, tmp, k2);
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + 0.5 * h * k2[i];
            apply_generator(g, config.basis, gamma, tmp, k3);
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + h * k3[i];
            ge.eval(t + h, phi, gamma);
            apply_generator(g, config.basis, gamma, tmp, k4);
            for (std::size_t i = 0; i < dim; ++i)
                psi[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        result.truncation = std::max(result.truncation, top_two_population(g, psi));
    }

    // reduced spin state
    result.rho.qubits = g.n_qubits;
    for (int s = 0; s < g.spin_dim; ++s)
        for (int s2 = 0; s2 < g.spin_dim; ++s2) {
            std::complex<double> acc{0.0, 0.0};
            for (int f = 0; f < D; ++f)
                acc += psi[std::size_t(s) * D + f] * std::conj(psi[std::size_t(s2) * D + f]);
            result.rho.m[s][s2] = acc;
        }

    // <a_k> on the all-plus spin branch
    std::vector<std::complex<double>> chi(D, {0.0, 0.0});
    for (int s = 0; s < g.spin_dim; ++s) {
        std::complex<double> v{1.0, 0.0};
        for (int mu = 0; mu < g.n_qubits; ++mu)
            v *= std::conj(eigen_amp(config.basis, (s >> mu) & 1, 0));
        for (int f = 0; f < D; ++f) chi[f] += v * psi[std::size_t(s) * D + f];
    }
    double norm = 0.0;
    for (const auto& c : chi) norm += std::norm(c);
    result.mode_amp.assign(g.n_modes, {0.0, 0.0});
    if (norm > 1e-300) {
        for (int k = 0; k < g.n_modes; ++k) {
            std::complex<double> acc{0.0, 0.0};
            for (int f = 0; f < D; ++f) {
                const int n = g.occupation(f, k);
                if (n < g.cutoff) acc += std::conj(chi[f]) * g.root[n + 1] * chi[f + g.stride[k]];
            }
            result.mode_amp[k] = acc / norm;
        }
    }
    return result;
}

GateObservables assemble_fock(const FockGrid& g, const GateConfig& config,
                              const ModeSpectrum& spectrum,
                              const std::optional<AppliedNoise>& noise,
                              const std::vector<std::pair<std::vector<int>, double>>& members,
                              int refine) {
    std::vector<MemberResult> results(members.size());
    const unsigned workers =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), members.size());
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < members.size(); i += workers)
                results[i] = propagate_member(g, config, spectrum, noise, members[i].first, refine);
        });
    for (auto& th : pool) th.join();

    SpinDensity rho;
    rho.qubits = g.n_qubits;
    std::vector<std::complex<double>> amps(g.n_modes, {0.0, 0.0});
    // diagnostic = top-two-level population of the propagated mixed state,
    // i.e. the ensemble-weighted sum, maximized over segment boundaries
    double truncation = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const double w = members[i].second;
        for (int a = 0; a < g.spin_dim; ++a)
            for (int b = 0; b < g.spin_dim; ++b) rho.m[a][b] += w * results[i].rho.m[a][b];
        for (int k = 0; k < g.n_modes; ++k) amps[k] += w * results[i].mode_amp[k];
        truncation += w * results[i].truncation;
    }
    GateObservables obs = observables_from_density(rho, std::move(amps));
    obs.truncation = truncation;
    obs.reliable = truncation <= 1e-6;
    obs.engine = "fock";
    return obs;
}

} // namespace

GateObservables fock_oracle(const GateConfig& config, const ModeSpectrum& spectrum,
                            const std::optional<AppliedNoise>& noise, int cutoff) {
    check_inputs(config, spectrum);
    if (noise) validate_noise(noise->model);
    if (cutoff < 5) throw std::invalid_argument("cutoff must be >= 5");
    const int n_modes = int(spectrum.modes.size());
    double dim_check = 1.0;
    for (int k = 0; k < n_modes; ++k) dim_check *= cutoff + 1;
    if (dim_check > 400.0) throw std::invalid_argument("Hilbert space exceeds the 20^2 guard");

    FockGrid g;
    g.n_qubits = spectrum.qubit_count;
    g.n_modes = n_modes;
    g.cutoff = cutoff;
    g.spin_dim = 1 << g.n_qubits;
    g.mode_dim = int(dim_check);
    g.stride.resize(n_modes);
    int s = 1;
    for (int k = 0; k < n_modes; ++k) {
        g.stride[k] = s;
        s *= cutoff + 1;
    }
    g.root.resize(cutoff + 2);
    for (int n = 0; n <= cutoff + 1; ++n) g.root[n] = std::sqrt(double(n));

    const auto members = thermal_ensemble(spectrum, cutoff);

    GateObservables prev = assemble_fock(g, config, spectrum, noise, members, 1);
    for (int refine = 2; refine <= 64; refine *= 2) {
        GateObservables cur = assemble_fock(g, config, spectrum, noise, members, refine);
        const double delta = std::max({std::abs(cur.p0 - prev.p0), std::abs(cur.p1 - prev.p1),
                                       std::abs(cur.p2 - prev.p2),
                                       std::abs(cur.parity_contrast - prev.parity_contrast),
                                       std::abs(cur.bell_fidelity - prev.bell_fidelity)});
        if (delta < 1e-8) return cur;
        prev = std::move(cur);
    }
    throw std::runtime_error("Fock propagation did not converge under step halving");
}

} // namespace pmgate
