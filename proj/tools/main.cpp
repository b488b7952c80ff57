// pmgate: batch front-end for phase-modulated entangling-gate design and
// analysis. Inputs are JSON spectrum/gate files (Hz at the boundary),
// outputs are CSV/JSON artifacts plus a manifest per run.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pmgate/gate_design.hpp"
#include "pmgate/io.hpp"
#include "pmgate/noise_response.hpp"
#include "pmgate/parallel.hpp"
#include "pmgate/quantum_sim.hpp"
#include "pmgate/trajectory.hpp"
#include "pmgate/units.hpp"

namespace {

constexpr const char* kVersion = "pmgate 1.0.0";

using namespace pmgate;

struct ExitCode {
    static constexpr int ok = 0;
    static constexpr int input_error = 1;
    static constexpr int no_solution = 2;
    static constexpr int unreliable = 3;
};

unsigned resolve_workers(unsigned requested) {
    unsigned workers = requested == 0 ? 1 : requested;
    if (const char* cap = std::getenv("PMGATE_MAX_WORKERS")) {
        const long parsed = std::strtol(cap, nullptr, 10);
        if (parsed > 0) workers = std::min<unsigned>(workers, unsigned(parsed));
    }
    return workers;
}

std::vector<DesignTarget> parse_targets(const std::string& text) {
    std::vector<DesignTarget> targets;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("bad --targets entry '" + item + "' (want mode:order)");
        targets.push_back({std::size_t(std::stoul(item.substr(0, colon))),
                           std::stoi(item.substr(colon + 1))});
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (targets.empty()) throw std::invalid_argument("--targets is empty");
    return targets;
}

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 2) throw std::invalid_argument("need at least 2 sweep points");
    if (!(lo < hi)) throw std::invalid_argument("sweep range must satisfy min < max");
    std::vector<double> xs(points);
    for (int i = 0; i < points; ++i) xs[i] = lo + (hi - lo) * double(i) / double(points - 1);
    return xs;
}

std::vector<double> logspace(double lo, double hi, int points) {
    if (!(lo > 0.0)) throw std::invalid_argument("log-spaced range needs min > 0");
    std::vector<double> xs = linspace(std::log(lo), std::log(hi), points);
    for (double& x : xs) x = std::exp(x);
    return xs;
}

struct NoiseFlags {
    std::string kind = "none";
    std::string apply = "additive";
    double offset_hz = 0.0;
    double depth_hz = 0.0;
    double freq_hz = 0.0;
    double phase_rad = 0.0;
    std::vector<double> coefficients;

    void attach(CLI::App* cmd) {
        cmd->add_option("--noise", kind, "noise model: none|static|sinusoid|polynomial")
            ->check(CLI::IsMember({"none", "static", "sinusoid", "polynomial"}));
        cmd->add_option("--noise-apply", apply, "additive (detuning) or envelope (coupling)")
            ->check(CLI::IsMember({"additive", "envelope"}));
        cmd->add_option("--noise-offset-hz", offset_hz, "static offset (Hz)");
        cmd->add_option("--noise-depth-hz", depth_hz, "sinusoid depth (Hz)");
        cmd->add_option("--noise-freq-hz", freq_hz, "sinusoid modulation frequency (Hz)");
        cmd->add_option("--noise-phase-rad", phase_rad, "sinusoid starting phase (rad)");
        cmd->add_option("--noise-coeffs", coefficients,
                        "polynomial coefficients beta_j in (rad/s)/s^j, lowest order first")
            ->delimiter(',');
    }

    std::optional<AppliedNoise> build() const {
        if (kind == "none") return std::nullopt;
        const NoiseApplication mode = apply == "envelope" ? NoiseApplication::coupling_envelope
                                                          : NoiseApplication::additive_detuning;
        if (kind == "static")
            return AppliedNoise{StaticOffset{hz_to_rad(offset_hz)}, mode};
        if (kind == "sinusoid")
            return AppliedNoise{Sinusoid{hz_to_rad(depth_hz), hz_to_rad(freq_hz), phase_rad}, mode};
        return AppliedNoise{PolynomialDrift{coefficients}, mode};
    }
};

void finish(RunManifest manifest, const std::filesystem::path& manifest_path,
            std::chrono::steady_clock::time_point t0) {
    manifest.version = kVersion;
    manifest.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest.outputs.push_back(manifest_path);
    write_manifest(manifest, manifest_path);
}

std::string join_ordering_hz(const std::vector<double>& detunings) {
    std::string out;
    for (std::size_t i = 0; i < detunings.size(); ++i) {
        if (i) out += ';';
        out += format_double(rad_to_hz(detunings[i]));
    }
    return out;
}

// --- subcommand payloads ---------------------------------------------------

struct DesignArgs {
    std::string spectrum_path;
    std::string out;
    double gate_time = 0.0;
    std::string targets = "0:1";
    std::string scheme = "pm";
    std::string ordering = "minimize";
    std::string basis = "x";
    double target_phase = 0.25 * std::numbers::pi;
};

int run_design(const DesignArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    DesignRequest request;
    request.spectrum = load_spectrum(args.spectrum_path);
    request.gate_time = args.gate_time;
    request.targets = parse_targets(args.targets);
    request.scheme = args.scheme == "standard" ? Scheme::standard : Scheme::phase_modulated;
    request.ordering =
        args.ordering == "as-listed" ? OrderingRule::as_listed : OrderingRule::minimize_rabi;
    request.basis = spin_basis_from_string(args.basis);
    request.target_phase = args.target_phase;

    const DesignResult result = design_gate(request);

    nlohmann::json j = design_to_json(result);
    nlohmann::json residuals = nlohmann::json::array();
    for (const Mode& mode : request.spectrum.modes) {
        const auto endpoint =
            displacement(result.config.sequence, mode.detuning, request.gate_time);
        residuals.push_back({{"re", endpoint.real()}, {"im", endpoint.imag()}});
    }
    j["per_mode_displacement"] = residuals;

    RunManifest manifest;
    manifest.command = "design";
    manifest.inputs = {args.spectrum_path};
    const std::filesystem::path design_path = args.out + ".json";
    const std::filesystem::path seq_path = args.out + ".sequence.csv";
    save_json(j, design_path);
    std::vector<std::vector<std::string>> rows;
    for (const Segment& seg : result.config.sequence.segments())
        rows.push_back({format_double(seg.duration), format_double(seg.phase)});
    write_csv(seq_path, {"duration_s", "phase_rad"}, rows);
    manifest.outputs = {design_path, seq_path};
    finish(std::move(manifest), args.out + ".manifest.json", t0);
    return ExitCode::ok;
}

struct SweepArgs {
    std::string kind;
    std::string spectrum_path;
    std::string gate_path;
    std::string out;
    double gate_time = 0.0;
    std::string targets = "0:1";
    std::string scheme = "pm";
    std::string ordering = "minimize";
    std::string basis = "x";
    double min_hz = 0.0, max_hz = 0.0;
    double min_ratio = 0.01, max_ratio = 1.0;
    double depth_hz = 0.0;
    int points = 2;
    int phase_grid = 32;
    int qubit = 0;
    bool exact = false;
    bool rescale_rabi = false;
    bool linear_grid = false;
    unsigned parallel = 1;
};

int run_sweep_detuning(const SweepArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    DesignRequest request;
    request.spectrum = load_spectrum(args.spectrum_path);
    request.gate_time = args.gate_time;
    request.targets = parse_targets(args.targets);
    request.scheme = args.scheme == "standard" ? Scheme::standard : Scheme::phase_modulated;
    request.basis = spin_basis_from_string(args.basis);

    std::vector<double> offsets = linspace(hz_to_rad(args.min_hz), hz_to_rad(args.max_hz),
                                           args.points);
    const auto sweep = detuning_sweep(request, offsets, resolve_workers(args.parallel));
    std::vector<std::vector<std::string>> rows;
    std::size_t gaps = 0;
    for (const auto& p : sweep) {
        if (p.gap) {
            ++gaps;
            rows.push_back({format_double(rad_to_hz(p.offset)), "", "", "", "1"});
        } else {
            rows.push_back({format_double(rad_to_hz(p.offset)), format_double(p.fidelity),
                            format_double(rad_to_hz(p.rabi)), join_ordering_hz(p.ordering), "0"});
        }
    }
    const std::filesystem::path csv = args.out + ".csv";
    write_csv(csv, {"offset_hz", "fidelity", "rabi_hz", "ordering", "gap"}, rows);
    RunManifest manifest;
    manifest.command = "sweep detuning";
    manifest.inputs = {args.spectrum_path};
    manifest.outputs = {csv};
    finish(std::move(manifest), args.out + ".manifest.json", t0);
    if (gaps == sweep.size()) {
        std::cerr << "entangling area ~ 0 at every offset\n";
        return ExitCode::no_solution;
    }
    return ExitCode::ok;
}

int run_sweep_static(const SweepArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModeSpectrum spectrum = load_spectrum(args.spectrum_path);
    const GateConfig config = load_gate(args.gate_path);
    const std::vector<double> errors =
        linspace(hz_to_rad(args.min_hz), hz_to_rad(args.max_hz), args.points);
    const ResponseCurve curve =
        static_sweep(config, spectrum, errors, args.exact, args.rescale_rabi, args.qubit);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < curve.abscissa.size(); ++i)
        rows.push_back(
            {format_double(rad_to_hz(curve.abscissa[i])), format_double(curve.values[i])});
    const std::filesystem::path csv = args.out + ".csv";
    write_csv(csv, {"error_hz", "p1"}, rows);
    RunManifest manifest;
    manifest.command = "sweep static-error";
    manifest.inputs = {args.spectrum_path, args.gate_path};
    manifest.outputs = {csv};
    finish(std::move(manifest), args.out + ".manifest.json", t0);
    return ExitCode::ok;
}

int run_sweep_filter(const SweepArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModeSpectrum spectrum = load_spectrum(args.spectrum_path);
    const GateConfig config = load_gate(args.gate_path);
    const double unit = two_pi / config.gate_time; // omega at ratio 1
    const std::vector<double> ratios =
        args.linear_grid ? linspace(args.min_ratio, args.max_ratio, args.points)
                         : logspace(args.min_ratio, args.max_ratio, args.points);
    std::vector<double> omegas;
    for (double r : ratios) omegas.push_back(r * unit);
    const FilterFunctionCurve curve =
        filter_function_first_order(config.sequence, spectrum, config.rabi, omegas, args.qubit);
    std::vector<std::string> header = {"omega_taug_over_2pi", "f_total"};
    for (std::size_t k = 0; k < spectrum.modes.size(); ++k)
        header.push_back("f_mode_" + std::to_string(k + 1));
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        std::vector<std::string> row = {format_double(ratios[i]), format_double(curve.total[i])};
        for (std::size_t k = 0; k < spectrum.modes.size(); ++k)
            row.push_back(format_double(curve.per_mode[k][i]));
        rows.push_back(std::move(row));
    }
    const std::filesystem::path csv = args.out + ".csv";
    write_csv(csv, header, rows);
    RunManifest manifest;
    manifest.command = "sweep filter-function";
    manifest.inputs = {args.spectrum_path, args.gate_path};
    manifest.outputs = {csv};
    finish(std::move(manifest), args.out + ".manifest.json", t0);
    return ExitCode::ok;
}

int run_sweep_response(const SweepArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModeSpectrum spectrum = load_spectrum(args.spectrum_path);
    const GateConfig config = load_gate(args.gate_path);
    const double unit = two_pi / config.gate_time;
    const std::vector<double> ratios =
        args.linear_grid ? linspace(args.min_ratio, args.max_ratio, args.points)
                         : logspace(args.min_ratio, args.max_ratio, args.points);
    std::vector<PhaseAveragedResponse> responses(ratios.size());
    parallel_for(ratios.size(), resolve_workers(args.parallel), [&](std::size_t i) {
        responses[i] = phase_averaged_response(config, spectrum, ratios[i] * unit,
                                               hz_to_rad(args.depth_hz), args.phase_grid,
                                               args.qubit);
    });
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < ratios.size(); ++i)
        rows.push_back({format_double(ratios[i]), format_double(responses[i].mean),
                        format_double(responses[i].min), format_double(responses[i].max)});
    const std::filesystem::path csv = args.out + ".csv";
    write_csv(csv, {"omega_taug_over_2pi", "p1_mean", "p1_min", "p1_max"}, rows);
    RunManifest manifest;
    manifest.command = "sweep response";
    manifest.inputs = {args.spectrum_path, args.gate_path};
    manifest.outputs = {csv};
    finish(std::move(manifest), args.out + ".manifest.json", t0);
    return ExitCode::ok;
}

struct TrajectoryArgs {
    std::string spectrum_path;
    std::string gate_path;
    std::string out;
    int mode = 0;
    int points = 64;
};

int run_trajectory(const TrajectoryArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModeSpectrum spectrum = load_spectrum(args.spectrum_path);
    const GateConfig config = load_gate(args.gate_path);
    if (args.mode < 0 || std::size_t(args.mode) >= spectrum.modes.size())
        throw std::invalid_argument("--mode index out of range");
    const Trajectory traj =
        sample_trajectory(config.sequence, spectrum.modes[std::size_t(args.mode)].detuning,
                          args.points);
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : traj.samples)
        rows.push_back({format_double(s.time), format_double(s.displacement.real()),
                        format_double(s.displacement.imag())});
    const std::filesystem::path csv = args.out + ".csv";
    write_csv(csv, {"time_s", "re_alpha", "im_alpha"}, rows);
    RunManifest manifest;
    manifest.command = "trajectory";
    manifest.inputs = {args.spectrum_path, args.gate_path};
    manifest.outputs = {csv};
    finish(std::move(manifest), args.out + ".manifest.json", t0);
    return ExitCode::ok;
}

struct SimulateArgs {
    std::string spectrum_path;
    std::string gate_path;
    std::string out;
    std::string engine = "analytic";
    int cutoff = 12;
    NoiseFlags noise;
};

int run_simulate(const SimulateArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModeSpectrum spectrum = load_spectrum(args.spectrum_path);
    const GateConfig config = load_gate(args.gate_path);
    const std::optional<AppliedNoise> noise = args.noise.build();
    const GateObservables obs = args.engine == "fock"
                                    ? fock_oracle(config, spectrum, noise, args.cutoff)
                                    : analytic_observables(config, spectrum, noise);
    const std::filesystem::path json_path = args.out + ".json";
    save_json(observables_to_json(obs), json_path);
    RunManifest manifest;
    manifest.command = "simulate";
    manifest.inputs = {args.spectrum_path, args.gate_path};
    manifest.outputs = {json_path};
    finish(std::move(manifest), args.out + ".manifest.json", t0);
    if (!obs.reliable) {
        std::cerr << "Fock truncation diagnostic above 1e-6; result unreliable\n";
        return ExitCode::unreliable;
    }
    return ExitCode::ok;
}

struct BichromaticArgs {
    std::string gate_path;
    std::string out;
    double spin_phase = 0.0;
};

int run_bichromatic(const BichromaticArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const GateConfig config = load_gate(args.gate_path);
    const auto rows_data = bichromatic_phases(config.sequence, args.spin_phase);
    std::vector<std::vector<std::string>> rows;
    for (const auto& seg : rows_data)
        rows.push_back({format_double_sci17(seg.duration), format_double_sci17(seg.phase_blue),
                        format_double_sci17(seg.phase_red)});
    const std::filesystem::path csv = args.out + ".csv";
    write_csv(csv, {"duration_s", "phase_blue_rad", "phase_red_rad"}, rows);
    RunManifest manifest;
    manifest.command = "export-bichromatic";
    manifest.inputs = {args.gate_path};
    manifest.outputs = {csv};
    finish(std::move(manifest), args.out + ".manifest.json", t0);
    return ExitCode::ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"phase-modulated entangling gate design and analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    DesignArgs design;
    CLI::App* cmd_design = app.add_subcommand("design", "construct a gate from a mode spectrum");
    cmd_design->add_option("--spectrum", design.spectrum_path, "spectrum JSON")->required();
    cmd_design->add_option("--gate-time-s", design.gate_time, "gate duration (s)")->required();
    cmd_design->add_option("--targets", design.targets, "mode:order list, e.g. 0:1,1:2");
    cmd_design->add_option("--scheme", design.scheme)->check(CLI::IsMember({"pm", "standard"}));
    cmd_design->add_option("--ordering", design.ordering)
        ->check(CLI::IsMember({"minimize", "as-listed"}));
    cmd_design->add_option("--basis", design.basis)->check(CLI::IsMember({"x", "y", "z"}));
    cmd_design->add_option("--target-phase-rad", design.target_phase);
    cmd_design->add_option("--out", design.out, "output prefix")->required();

    SweepArgs sweep;
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "parameter sweeps emitting CSV curves");
    cmd_sweep->add_option("kind", sweep.kind, "detuning|static-error|filter-function|response")
        ->required()
        ->check(CLI::IsMember({"detuning", "static-error", "filter-function", "response"}));
    cmd_sweep->add_option("--spectrum", sweep.spectrum_path)->required();
    cmd_sweep->add_option("--gate", sweep.gate_path, "gate/design JSON (curve sweeps)");
    cmd_sweep->add_option("--gate-time-s", sweep.gate_time, "gate duration (detuning sweep)");
    cmd_sweep->add_option("--targets", sweep.targets);
    cmd_sweep->add_option("--scheme", sweep.scheme)->check(CLI::IsMember({"pm", "standard"}));
    cmd_sweep->add_option("--basis", sweep.basis)->check(CLI::IsMember({"x", "y", "z"}));
    cmd_sweep->add_option("--min-hz", sweep.min_hz);
    cmd_sweep->add_option("--max-hz", sweep.max_hz);
    cmd_sweep->add_option("--min-ratio", sweep.min_ratio, "omega tau_g / 2 pi lower bound");
    cmd_sweep->add_option("--max-ratio", sweep.max_ratio, "omega tau_g / 2 pi upper bound");
    cmd_sweep->add_option("--depth-hz", sweep.depth_hz, "modulation depth (response sweep)");
    cmd_sweep->add_option("--points", sweep.points)->required();
    cmd_sweep->add_option("--phase-grid", sweep.phase_grid);
    cmd_sweep->add_option("--qubit", sweep.qubit);
    cmd_sweep->add_flag("--exact", sweep.exact, "thermal closed form instead of |Omega f a|^2");
    cmd_sweep->add_flag("--rescale-rabi", sweep.rescale_rabi);
    cmd_sweep->add_flag("--linear", sweep.linear_grid, "linear ratio grid (default log)");
    cmd_sweep->add_option("--parallel", sweep.parallel, "worker threads");
    cmd_sweep->add_option("--out", sweep.out)->required();

    TrajectoryArgs traj;
    CLI::App* cmd_traj = app.add_subcommand("trajectory", "sample a mode's phase-space path");
    cmd_traj->add_option("--spectrum", traj.spectrum_path)->required();
    cmd_traj->add_option("--gate", traj.gate_path)->required();
    cmd_traj->add_option("--mode", traj.mode)->required();
    cmd_traj->add_option("--points", traj.points, "samples per segment");
    cmd_traj->add_option("--out", traj.out)->required();

    SimulateArgs sim;
    CLI::App* cmd_sim = app.add_subcommand("simulate", "compute gate observables");
    cmd_sim->add_option("--spectrum", sim.spectrum_path)->required();
    cmd_sim->add_option("--gate", sim.gate_path)->required();
    cmd_sim->add_option("--engine", sim.engine)->check(CLI::IsMember({"analytic", "fock"}));
    cmd_sim->add_option("--cutoff", sim.cutoff, "Fock levels per mode");
    sim.noise.attach(cmd_sim);
    cmd_sim->add_option("--out", sim.out)->required();

    BichromaticArgs bi;
    CLI::App* cmd_bi = app.add_subcommand("export-bichromatic", "per-segment sideband phases");
    cmd_bi->add_option("--gate", bi.gate_path)->required();
    cmd_bi->add_option("--spin-phase-rad", bi.spin_phase);
    cmd_bi->add_option("--out", bi.out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_design->parsed()) return run_design(design);
        if (cmd_sweep->parsed()) {
            if (sweep.kind == "detuning") return run_sweep_detuning(sweep);
            if (sweep.kind == "static-error") return run_sweep_static(sweep);
            if (sweep.kind == "filter-function") return run_sweep_filter(sweep);
            return run_sweep_response(sweep);
        }
        if (cmd_traj->parsed()) return run_trajectory(traj);
        if (cmd_sim->parsed()) return run_simulate(sim);
        if (cmd_bi->parsed()) return run_bichromatic(bi);
    } catch (const NoSolutionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitCode::no_solution;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitCode::input_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitCode::input_error;
    }
    return ExitCode::ok;
}
