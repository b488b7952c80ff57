#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmgate/gate_design.hpp"
#include "pmgate/model.hpp"
#include "pmgate/quantum_sim.hpp"

namespace pmgate {

// Shortest representation that round-trips the double exactly.
std::string format_double(double v);
// 17-significant-digit scientific notation (bichromatic export).
std::string format_double_sci17(double v);

// Spectrum file: {"qubits": N, "modes": [{"detuning_hz", "couplings", "nbar"}]}
nlohmann::json spectrum_to_json(const ModeSpectrum& spectrum);
ModeSpectrum spectrum_from_json(const nlohmann::json& j);

// Gate file: {"rabi_hz", "gate_time_s", "basis", "sequence": [{"duration_s", "phase_rad"}]}
// Parsers ignore extra keys, so a design file doubles as a gate file.
nlohmann::json gate_to_json(const GateConfig& config);
GateConfig gate_from_json(const nlohmann::json& j);

nlohmann::json observables_to_json(const GateObservables& obs);
nlohmann::json design_to_json(const DesignResult& result);

ModeSpectrum load_spectrum(const std::filesystem::path& path);
GateConfig load_gate(const std::filesystem::path& path);
void save_json(const nlohmann::json& j, const std::filesystem::path& path);

// Plain LF-terminated CSV; cells are preformatted strings.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
    std::string command;
    std::vector<std::filesystem::path> inputs;
    std::vector<std::filesystem::path> outputs;
    double wall_time_s = 0.0;
    std::string version;
};

// Writes {command, inputs: [{path, sha256}], outputs, wall_time_s, version}.
// The manifest is the only output holding volatile fields.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

} // namespace pmgate
