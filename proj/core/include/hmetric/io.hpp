#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hmetric/config.hpp"
#include "hmetric/toda.hpp"

namespace hmetric {

/// Write to path.tmp, then rename over path. Creates parent directories.
/// Throws IoError.
void write_atomic(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

/// Pretty-printed JSON with a trailing newline.
std::string dump_json(const nlohmann::json& j);

/// 64-bit FNV-1a, hex.
std::string fnv1a_hex(const std::string& bytes);

/// Versions of the library modules, recorded in every manifest.
nlohmann::json module_versions();

/// Manifest of an artifact directory: config hash, module versions, grid
/// parameters and the artifact list.
nlohmann::json make_manifest(const ExperimentConfig& c, double R,
                             const std::vector<std::string>& artifacts);

/// Solution metadata (no field values).
nlohmann::json solution_metadata(const Solution& s);

/// Writes unknown_<i>.csv, weight_<i>.csv and solution.json into dir and
/// returns the file names written.
std::vector<std::string> write_solution(const std::string& dir, const Solution& s);

/// Rebuilds a solution from the unknown_<i>.csv files of dir.
Solution load_solution(const std::string& dir, const TodaProblem& p);

}  // namespace hmetric
