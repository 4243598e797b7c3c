#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mzk/estimates.hpp"
#include "mzk/evolution.hpp"

namespace mzk {

inline const std::vector<std::string> kExperiments{"groundstate", "evolve", "picard", "envelope",
                                                   "smoothing",   "probe",  "fit",    "report"};

struct GridBlock {
  int n_x = 256;
  int n_y = 256;
  double period_x = 40.0;
  double period_y = 40.0;
};

/// Initial data for evolve, fit, picard and probe.
///   zero      u0 = 0
///   soliton   amplitude_factor * Q_c (c = speed)
///   gaussian  amplitude exp(-(x/sigma_x)^2/2 - (y/sigma_y)^2/2)
///   random    band-limited field with unit H^s norm (s = norm_s, seeded)
/// A positive mass_ratio rescales the data to mass_ratio * M[Q]; a positive
/// norm_hs rescales it to that H^{norm_s} norm. At most one may be set.
struct InitialBlock {
  std::string kind = "soliton";
  double speed = 1.0;
  double amplitude_factor = 1.0;
  double amplitude = 1.0;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  double band = 4.0;
  double mass_ratio = 0.0;
  double norm_hs = 0.0;
  double norm_s = 0.8;
};

struct GroundStateBlock {
  double speed = 1.0;
  double tol = 1e-10;
  int max_iter = 500;
};

struct PicardBlock {
  double T = 0.01;
  int n_iter = 4;
  int n_time_samples = 65;
  double s = 0.8;
};

struct EnvelopeBlock {
  std::vector<int> levels{2, 3, 4};
  std::vector<double> horizons{1, 2, 4, 8, 16};
  int n_time_samples = 64;
};

struct SmoothingBlock {
  double s = 0.8;
  int ensemble_size = 32;
  std::vector<double> horizons{1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1, 2, 4};
  int n_time_samples = 64;
  double band = 4.0;
};

struct ProbeBlock {
  double s = 0.8;
  std::vector<double> horizons{1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4};
  int n_time_samples = 33;
};

struct FitBlock {
  std::string series = "grad_l2";
  /// Window bounds; both negative selects the default last-decade window.
  double t_a = -1.0;
  double t_b = -1.0;
};

struct RateBlock {
  double c_s = 1.0;
  std::vector<double> norms{1, 2, 4, 8, 16};
  std::string variant = "ball_free";
};

struct RunConfig {
  std::string experiment;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  GridBlock grid;
  InitialBlock initial;
  EvolveConfig evolve;
  GroundStateBlock groundstate;
  PicardBlock picard;
  EnvelopeBlock envelope;
  SmoothingBlock smoothing;
  ProbeBlock probe;
  FitBlock fit;
  RateBlock rate;
  /// Every (section.key, value) pair read from the file, in file order.
  std::vector<std::pair<std::string, std::string>> echo;
  std::vector<std::string> sections_present;

  bool has_section(const std::string& name) const;
};

/// Parses the key = value format with [section] headers. Comments start with
/// '#' or ';' at the beginning of a line. Keys before the first header belong
/// to the top level (experiment, output_dir, seed, threads).
///
/// Throws ConfigurationError naming the origin and line for syntax errors,
/// unknown sections or keys, type mismatches and out-of-range values, and
/// when a block required by the experiment is missing.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RunConfig parse_config(const std::filesystem::path& path);

/// Checks that the blocks the chosen experiment needs are present.
void require_experiment_blocks(const RunConfig& cfg);

}  // namespace mzk
