#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lswave/presets.hpp"
#include "lswave/spectrum.hpp"
#include "lswave/structure.hpp"

namespace lswave {

/// One analyzed state. Gamma = -2 Im E_pole; B_E = threshold_ref - Re E_pole.
struct ReportRow {
  std::string id;
  cplx E_pole{};
  double B_E = 0.0;
  double Gamma = 0.0;
  std::vector<cplx> X;  // per-channel compositeness, residue route
  cplx Z{};
  double U = 0.0;
  std::vector<double> X_tilde;
  double Z_tilde = 0.0;
  cplx X_dVdE{};  // energy-dependence sum-rule route
};

/// One state's full result: the report row plus both density-profile routes
/// (residue-normalized amplitude and unit-normalized discrete eigenvector).
struct StateResult {
  ReportRow row;
  DensityProfile profile;         // residue route
  DensityProfile profile_schrod;  // inverse-iteration route
  double rank1_residual = 0.0;
};

/// Runs the full pipeline (pole -> residues -> profiles -> compositeness ->
/// dV/dE cross-check, discrete-eigenvector route alongside) for every state
/// declared by the preset, in declaration order.
std::vector<StateResult> run_preset(const Preset& preset);

/// Locates one state of a preset job: either polishing a complex seed or
/// picking the requested root of a real-axis determinant scan.
cplx locate_state(const PresetJob& job, const MomentumMesh& mesh, const StateSpec& state);

/// Full single-state pipeline: locate, extract residues, build both
/// wave-function routes, integrate the compositeness measures.
StateResult analyze_state(const PresetJob& job, const MomentumMesh& mesh, const StateSpec& state,
                          double threshold_ref);

/// One point of an interaction-slope sweep.
struct SweepPoint {
  double value = 0.0;
  bool ok = false;
  std::string error;  // failure description when !ok
  ReportRow row;
};

/// Sweeps the slope v1 of a preset's energy law. The base configuration is
/// solved at v1 = 0 first and the law's expansion point is pinned to that
/// pole, so the pole itself stays fixed across the sweep. Points are solved
/// on a worker pool; per-point failures are recorded and the sweep continues.
/// Results preserve the order of `values`.
std::vector<SweepPoint> scan_v1(const std::string& preset_name, const PresetOptions& base,
                                const std::vector<double>& values);

// ---- CSV serialization ----
// Deterministic: fixed column order, shortest round-trip number formatting,
// '\n' line ends. Complex numbers are split into _re/_im columns.

/// Columns: q_MeV, reP_ch1, imP_ch1, reP_ch2, ... One row per mesh node.
/// An empty profile yields a header-only file.
void write_profile_csv(std::ostream& os, const DensityProfile& profile,
                       const MomentumMesh& mesh);

/// Reads a profile written by write_profile_csv. Optionally returns the
/// momentum column through `q_out`.
DensityProfile read_profile_csv(std::istream& is, std::vector<double>* q_out = nullptr);

/// Columns: id, E_pole_re, E_pole_im, B_E, Gamma, X<j>_re, X<j>_im ...,
/// Z_re, Z_im, U, X_tilde_<j> ..., Z_tilde, X_dVdE_re, X_dVdE_im.
void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows);

/// Reads rows written by write_report_csv (value-exact round trip).
std::vector<ReportRow> read_report_csv(std::istream& is);

/// Sweep rows: the swept parameter value followed by the report columns.
/// Failed points are skipped (they are reported through SweepPoint).
void write_sweep_csv(std::ostream& os, const std::string& param,
                     const std::vector<SweepPoint>& points);

}  // namespace lswave
