#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lswave/presets.hpp"

namespace lswave {

/// Problem with a run configuration (parse failure, unknown key, schema
/// violation). The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A complete run description: a named preset with overrides, or a custom
/// local-potential model assembled from scratch.
struct RunConfig {
  std::string model = "model-a";  // preset name, or "custom"
  PresetOptions options;          // overrides for named presets

  // Custom model description (model == "custom").
  int L = 0;
  Dispersion mode = Dispersion::nonrelativistic;
  std::vector<Channel> channels;
  std::vector<double> coupling;  // row-major N x N
  std::string shape;             // "woods-saxon" | "gauss" | "double-gauss"
  std::vector<double> shape_params;
  double rmax = 25.0;
  double v0 = 0.0;

  // State search.
  std::optional<cplx> guess;  // complex pole seed
  std::optional<double> scan_lo, scan_hi;
  int scan_npts = 121;

  // Sweep request.
  std::string sweep_param = "v1";
  std::vector<double> sweep_values;

  // Real energies for the on-shell unitarity check.
  std::vector<double> check_energies;

  std::string out_dir = ".";
};

/// Parses the sectioned key = value format:
///   # comment
///   [model]
///   name = model-c
///   x = 0.5
///   [mesh]
///   n = 200
/// Unknown sections or keys, malformed values, and schema violations (an
/// option a model does not take, a custom model missing its shape) raise
/// ConfigError.
RunConfig parse_run_config(std::istream& is);

/// Convenience: parse from a file path (ConfigError on unreadable file).
RunConfig load_run_config(const std::string& path);

/// Materializes the run: named presets are built with the configured
/// overrides; custom models are assembled into a single-job preset whose
/// state comes from `guess` (resonance) or the scan window (bound).
Preset build_preset(const RunConfig& config);

}  // namespace lswave
