#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "grades/core.hpp"
#include "grades/rip_bounds.hpp"
#include "grades/solver.hpp"

// On-disk formats for instances, bounds and solve results (JSON with a
// schema_version field), plus CSV traces. Everything here is double.
namespace grades::io {

inline constexpr int kSchemaVersion = 1;

/// A file could not be read or written. The message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file was readable but is not a valid document of the expected kind.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// How an instance was generated. Kept alongside the instance for provenance.
struct GenerationInfo {
  std::string ensemble;  // "gaussian" or "identity"
  std::string amplitude;  // "pm1" or "normal"
  std::uint64_t seed = 0;
  std::uint64_t matrix_seed = 0;
  std::uint64_t signal_seed = 0;
  bool operator==(const GenerationInfo&) const = default;
};

struct InstanceRecord {
  ProblemInstance<double> instance;
  std::optional<GenerationInfo> generation;
};

/// Bounds plus the derived quantities reported alongside them.
struct BoundsRecord {
  RipBounds<double> bounds;
  double delta = 0;
  bool condition_ok = false;
  double reference_eps = 1e-10;
  double y_norm_sq = 0;
  /// Iteration bound for reference_eps; absent when the condition fails.
  std::optional<std::uint64_t> predicted_iterations;
};

struct SolveRecord {
  SolveResult<double> result;
  std::string mode;  // "certified" or "heuristic"
  double gamma = 0;
  double eps = 0;
  std::optional<double> recovery_error;
};

BoundsRecord make_bounds_record(const RipBounds<double>& bounds, double y_norm_sq,
                                double reference_eps);

nlohmann::json to_json(const InstanceRecord& record);
nlohmann::json to_json(const BoundsRecord& record);
nlohmann::json to_json(const SolveRecord& record);

InstanceRecord instance_from_json(const nlohmann::json& doc);
BoundsRecord bounds_from_json(const nlohmann::json& doc);
SolveRecord solve_from_json(const nlohmann::json& doc);

/// Serialized form of a JSON document as written to disk (2-space indent,
/// trailing newline).
std::string dump(const nlohmann::json& doc);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
nlohmann::json read_json_file(const std::filesystem::path& path);

InstanceRecord read_instance(const std::filesystem::path& path);
BoundsRecord read_bounds(const std::filesystem::path& path);
SolveRecord read_solve(const std::filesystem::path& path);

/// "iteration,objective" CSV, LF line endings.
std::string trace_csv(const std::vector<double>& trace);

/// Shortest decimal text that reads back to exactly `value`.
std::string format_double(double value);

}  // namespace grades::io
