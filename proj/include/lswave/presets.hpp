#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lswave/kinematics.hpp"
#include "lswave/numerics.hpp"
#include "lswave/potential.hpp"
#include "lswave/unstable.hpp"

namespace lswave {

/// One discrete state of a preset and how to find it.
struct StateSpec {
  std::string label;       // "0s", "0p", "resonance", ...
  cplx guess{};            // pole seed when from_scan is false
  bool from_scan = false;  // locate by sign-scanning the real-axis determinant
  int scan_index = 0;      // which ascending-energy scan root this state is
};

/// One (interaction, channel set) solve unit of a preset. Presets whose
/// states live at different angular momenta carry one job per L.
struct PresetJob {
  std::shared_ptr<InteractionModel> model;
  ChannelSet channels;
  std::vector<StateSpec> states;
  double scan_lo = 0.0;  // bound-state scan window, used when any state is from_scan
  double scan_hi = 0.0;
  int scan_npts = 121;
};

/// A fully assembled scenario: interaction(s), channels, mesh, and the states
/// to report on.
struct Preset {
  std::string name;
  MomentumMesh mesh;
  std::vector<PresetJob> jobs;
  double threshold_ref = 0.0;  // B_E = threshold_ref - Re E_pole

  // Only set for the dressed-bare-state preset.
  std::shared_ptr<const DecayLoop> loop;
  cplx m_phys{};
};

/// Optional overrides applied on top of a preset's defaults.
struct PresetOptions {
  std::optional<double> theta_deg;
  std::optional<int> mesh_n;
  std::optional<double> mesh_scale;
  std::optional<double> v0;     // interaction depth (local models)
  double v1 = 0.0;              // linear energy slope of the interaction
  std::optional<cplx> E0;       // expansion point of the energy law
  std::optional<double> x;      // channel-mixing strength (coupled preset)
  std::optional<double> beta;   // exchange strength (dressed preset)
  bool q_independent = false;   // momentum-independent self-energy variant
};

/// Builds one of the four shipped scenarios:
///  - "model-a": single channel, Woods-Saxon well, nonrelativistic; four
///    bound states (0s, 0p, 0d, 1s) across L = 0, 1, 2.
///  - "model-b": single channel, attractive core + repulsive barrier
///    (two Gaussians), nonrelativistic; one resonance, rotated contour.
///  - "model-c": two coupled semirelativistic channels, Gaussian contact
///    shape; x = 0 gives a single-channel bound state, x != 0 a resonance.
///  - "model-d": bare state dressed by a two-particle decay loop, scattered
///    off a partner via a regularized exchange interaction; one resonance.
/// Throws std::invalid_argument for unknown names or inapplicable options.
Preset make_preset(const std::string& name, const PresetOptions& opt = {});

/// The four shipped preset names in canonical order.
const std::vector<std::string>& preset_names();

}  // namespace lswave
