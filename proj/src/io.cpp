#include "pmgate/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "pmgate/units.hpp"

namespace pmgate {

namespace {

double require_number(const nlohmann::json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_number())
        throw std::invalid_argument("missing or non-numeric field '" + field + "'");
    return j[field].get<double>();
}

} // namespace

std::string format_double(double v) {
    char buffer[64];
    const auto res = std::to_chars(buffer, buffer + sizeof(buffer), v);
    return std::string(buffer, res.ptr);
}

std::string format_double_sci17(double v) {
    char buffer[64];
    const auto res =
        std::to_chars(buffer, buffer + sizeof(buffer), v, std::chars_format::scientific, 16);
    return std::string(buffer, res.ptr);
}

nlohmann::json spectrum_to_json(const ModeSpectrum& spectrum) {
    nlohmann::json j;
    j["qubits"] = spectrum.qubit_count;
    j["modes"] = nlohmann::json::array();
    for (const Mode& mode : spectrum.modes) {
        j["modes"].push_back({{"detuning_hz", rad_to_hz(mode.detuning)},
                              {"couplings", mode.couplings},
                              {"nbar", mode.thermal_occupation}});
    }
    return j;
}

ModeSpectrum spectrum_from_json(const nlohmann::json& j) {
    ModeSpectrum spectrum;
    if (!j.contains("qubits") || !j["qubits"].is_number_integer())
        throw std::invalid_argument("missing or non-integer field 'qubits'");
    spectrum.qubit_count = j["qubits"].get<int>();
    if (!j.contains("modes") || !j["modes"].is_array())
        throw std::invalid_argument("missing or non-array field 'modes'");
    for (const auto& jm : j["modes"]) {
        Mode mode;
        mode.detuning = hz_to_rad(require_number(jm, "detuning_hz"));
        mode.thermal_occupation = require_number(jm, "nbar");
        if (!jm.contains("couplings") || !jm["couplings"].is_array())
            throw std::invalid_argument("missing or non-array field 'couplings'");
        for (const auto& c : jm["couplings"]) {
            if (!c.is_number()) throw std::invalid_argument("non-numeric coupling entry");
            mode.couplings.push_back(c.get<double>());
        }
        spectrum.modes.push_back(std::move(mode));
    }
    require_valid(spectrum);
    return spectrum;
}

nlohmann::json gate_to_json(const GateConfig& config) {
    nlohmann::json j;
    j["rabi_hz"] = rad_to_hz(config.rabi);
    j["gate_time_s"] = config.gate_time;
    j["basis"] = to_string(config.basis);
    j["sequence"] = nlohmann::json::array();
    for (const Segment& seg : config.sequence.segments())
        j["sequence"].push_back({{"duration_s", seg.duration}, {"phase_rad", seg.phase}});
    return j;
}

GateConfig gate_from_json(const nlohmann::json& j) {
    GateConfig config;
    config.rabi = hz_to_rad(require_number(j, "rabi_hz"));
    config.gate_time = require_number(j, "gate_time_s");
    if (!j.contains("basis") || !j["basis"].is_string())
        throw std::invalid_argument("missing or non-string field 'basis'");
    config.basis = spin_basis_from_string(j["basis"].get<std::string>());
    if (!j.contains("sequence") || !j["sequence"].is_array() || j["sequence"].empty())
        throw std::invalid_argument("missing, non-array or empty field 'sequence'");
    std::vector<Segment> segments;
    for (const auto& js : j["sequence"])
        segments.push_back({require_number(js, "duration_s"), require_number(js, "phase_rad")});
    config.sequence = PhaseSequence(std::move(segments));
    validate_gate_config(config);
    return config;
}

nlohmann::json observables_to_json(const GateObservables& obs) {
    nlohmann::json residuals = nlohmann::json::array();
    for (const auto& r : obs.mode_residuals)
        residuals.push_back({{"re", r.real()}, {"im", r.imag()}});
    return {{"p0", obs.p0},
            {"p1", obs.p1},
            {"p2", obs.p2},
            {"parity_contrast", obs.parity_contrast},
            {"bell_fidelity", obs.bell_fidelity},
            {"per_mode_residual", residuals},
            {"diagnostics",
             {{"truncation", obs.truncation}, {"reliable", obs.reliable}, {"engine", obs.engine}}}};
}

nlohmann::json design_to_json(const DesignResult& result) {
    nlohmann::json j = gate_to_json(result.config);
    nlohmann::json ordering = nlohmann::json::array();
    for (double d : result.ordering) ordering.push_back(rad_to_hz(d));
    j["ordering_hz"] = ordering;
    j["entangling_phase_per_mode"] = result.entangling_phase_per_mode;
    nlohmann::json candidates = nlohmann::json::array();
    for (const DesignCandidate& c : result.candidates) {
        nlohmann::json jc;
        jc["ordering_hz"] = nlohmann::json::array();
        for (double d : c.detunings) jc["ordering_hz"].push_back(rad_to_hz(d));
        if (std::isnan(c.rabi))
            jc["rabi_hz"] = nullptr;
        else
            jc["rabi_hz"] = rad_to_hz(c.rabi);
        candidates.push_back(jc);
    }
    j["rabi_solutions_considered"] = candidates;
    return j;
}

namespace {

nlohmann::json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

} // namespace

ModeSpectrum load_spectrum(const std::filesystem::path& path) {
    try {
        return spectrum_from_json(parse_file(path));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("spectrum file " + path.string() + ": " + e.what());
    }
}

GateConfig load_gate(const std::filesystem::path& path) {
    try {
        return gate_from_json(parse_file(path));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("gate file " + path.string() + ": " + e.what());
    }
}

void save_json(const nlohmann::json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buffer[1 << 16];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0)
        EVP_DigestUpdate(ctx, buffer, std::size_t(in.gcount()));
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["inputs"] = nlohmann::json::array();
    for (const auto& input : manifest.inputs)
        j["inputs"].push_back({{"path", input.string()}, {"sha256", sha256_file(input)}});
    j["outputs"] = nlohmann::json::array();
    for (const auto& output : manifest.outputs) j["outputs"].push_back(output.string());
    j["wall_time_s"] = manifest.wall_time_s;
    j["version"] = manifest.version;
    save_json(j, path);
}

} // namespace pmgate
