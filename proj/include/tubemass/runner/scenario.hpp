#pragma once

// Scenario configs: JSON documents with an integer schema_version, a
// mandatory seed and one task tag. Polynomials are arrays of terms
// {exponents, coeff_re, coeff_im}; the 2n exponents are those of
// z_1..z_n followed by conj(z_1)..conj(z_n).

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "tubemass/currents.hpp"
#include "tubemass/manifold.hpp"
#include "tubemass/region.hpp"

namespace tubemass::runner {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum class Task { tube_mass, monotone, convex, zeros, hausdorff, potential, expint, verify_forms };

Task parse_task(const std::string& tag);
std::string task_name(Task task);

struct SamplingConfig {
  std::uint64_t seed = 0;
  std::size_t samples = 1'000'000;
  int batches = 32;
  double epsilon_factor = 0.05;
};

struct Scenario {
  std::string name;
  Task task = Task::tube_mass;
  int n = 0;
  SamplingConfig sampling;
  Json doc;
  /// SHA-1 over "blob <size>\0<bytes>" of the config text, as git does.
  std::string config_hash;
};

/// Throws ConfigError with the offending JSON path.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

std::string git_blob_hash(const std::string& bytes);

// Builders for the pieces of a scenario; all report bad input as ConfigError.
HoloPoly parse_holo(const Json& terms, int n, const std::string& path);
jets::ScalarField parse_field(const Json& j, int n, const std::string& path);
std::shared_ptr<const manifold::DefiningSystem> parse_manifold(const Json& j, int n, const std::string& path);
currents::CurrentSpec parse_current(const Json& j, int n, std::uint64_t seed, const std::string& path);
currents::ConvexBody parse_convex(const Json& j, int n, const std::string& path);
sampling::Box parse_box(const Json& j, const std::string& path);

/// JSON Schema of scenario documents.
Json schema();

}  // namespace tubemass::runner
