#pragma once

#include <string>

#include <json.hpp>

#include "qemscope/clifford.hpp"
#include "qemscope/spl_noise.hpp"
#include "qemscope/tem_mpo.hpp"

namespace qemscope {

// Round-trip-exact decimal formatting (17 significant digits, '.' decimal).
std::string format_double(double value);

// Noise-model JSON:
// {"n": int, "layers": [[{"sites": [q] or [q1,q2], "axis": "X".."ZZ",
//  "rate": float}]], "theta": float}.
// The loader validates qubit ranges, two-qubit adjacency, and rate >= 0.
nlohmann::json noise_to_json(const NoiseModel& model);
NoiseModel noise_from_json(const nlohmann::json& j);

// Circuit JSON: {"n": int, "layers": [{"cnots": [[c,t],...],
//  "sq": ["H","S",...]}]} with single-qubit names from the 24-gate table
// (aliases accepted on input, canonical names written).
nlohmann::json circuit_to_json(int n, const std::vector<CliffordLayer>& layers);
std::vector<CliffordLayer> circuit_from_json(const nlohmann::json& j, int& n);

NoiseModel load_noise(const std::string& path);
void save_noise(const std::string& path, const NoiseModel& model);
std::vector<CliffordLayer> load_circuit(const std::string& path, int& n);
void save_circuit(const std::string& path, int n, const std::vector<CliffordLayer>& layers);

// MPO checkpoint: magic "QMPO", uint32 site count, then per site 4 tensors in
// letter order, each with uint32 rows, uint32 cols, and row-major
// little-endian float64 entries.
void save_mpo(const std::string& path, const DiagonalPauliMpo& mpo);
DiagonalPauliMpo load_mpo(const std::string& path);

}  // namespace qemscope
