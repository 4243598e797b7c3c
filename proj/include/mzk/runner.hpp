#pragma once

#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mzk/config.hpp"
#include "mzk/field.hpp"

namespace mzk {

struct Artifact {
  std::string path;  // relative to the output directory
  std::string checksum;
};

struct RunManifest {
  std::string experiment;
  std::string version;
  std::string started;
  std::string finished;
  std::string outcome;
  bool success = false;
  std::string error;
  std::vector<Artifact> artifacts;
  nlohmann::json results = nlohmann::json::object();
};

std::string code_version();

/// Builds the initial field described by the [initial] block.
Field2D make_initial_data(const RunConfig& cfg, const SpectralGrid& grid);

/// Runs the configured experiment, writing its artifacts under
/// cfg.output_dir and manifest.json last. On failure the manifest records the
/// error and the exception is rethrown; artifacts written so far are kept.
RunManifest run(const RunConfig& cfg);

/// 2 for configuration errors, 4 for I/O and format errors, 3 otherwise.
int exit_code_for(std::exception_ptr error);

/// Worker count: the flag wins over the MZK_THREADS value, which wins over
/// `fallback` (the config file's setting). Throws ConfigurationError for a
/// malformed or non-positive value.
int resolve_threads(std::optional<int> flag, const char* env_value, int fallback = 1);

}  // namespace mzk
