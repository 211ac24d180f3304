#include "lswave/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace lswave {

namespace {

void reject_option(bool present, const std::string& preset, const char* what) {
  if (present) {
    throw std::invalid_argument("preset '" + preset + "' does not take option " + what);
  }
}

MomentumMesh default_mesh(const PresetOptions& opt, double theta_deg_default) {
  const int n = opt.mesh_n.value_or(200);
  const double scale = opt.mesh_scale.value_or(300.0);
  const double theta = deg2rad(opt.theta_deg.value_or(theta_deg_default));
  return tangent_mapped_mesh(n, scale, theta);
}

Preset make_model_a(const PresetOptions& opt) {
  reject_option(opt.x.has_value(), "model-a", "x");
  reject_option(opt.beta.has_value(), "model-a", "beta");
  reject_option(opt.q_independent, "model-a", "q_independent");

  const double m = 1115.7;
  const double M = 35.0 * m;
  const double R_ws = 3.6, a_ws = 0.5;
  const auto profile = [=](cplx rc) { return 1.0 / (1.0 + std::exp((rc - R_ws) / a_ws)); };
  const double ceiling = std::atan(pi * a_ws / R_ws);
  const EnergyLaw law{opt.v0.value_or(-35.0), opt.v1, opt.E0.value_or(cplx(0.0))};
  const ChannelSet channels({Channel{m, M, Dispersion::nonrelativistic}});
  const double thr = channels[0].threshold();

  Preset p;
  p.name = "model-a";
  p.mesh = default_mesh(opt, 0.0);
  p.threshold_ref = thr;
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  const struct {
    int L;
    std::vector<StateSpec> states;
  } groups[] = {
      {0, {{"0s", 0.0, true, 0}, {"1s", 0.0, true, 1}}},
      {1, {{"0p", 0.0, true, 0}}},
      {2, {{"0d", 0.0, true, 0}}},
  };
  for (const auto& g : groups) {
    PresetJob job;
    job.model = std::make_shared<LocalPotential>(g.L, one, law, profile, 25.0, ceiling);
    job.channels = channels;
    job.states = g.states;
    job.scan_lo = thr - 30.0;
    job.scan_hi = thr - 0.05;
    p.jobs.push_back(std::move(job));
  }
  return p;
}

Preset make_model_b(const PresetOptions& opt) {
  reject_option(opt.x.has_value(), "model-b", "x");
  reject_option(opt.beta.has_value(), "model-b", "beta");
  reject_option(opt.q_independent, "model-b", "q_independent");

  const double m = 938.9;
  const double b1 = 2.5, b2 = 5.0;
  const auto profile = [=](cplx rc) {
    return 2.0 * std::exp(-(rc / b1) * (rc / b1)) - std::exp(-(rc / b2) * (rc / b2));
  };
  const EnergyLaw law{opt.v0.value_or(-50.0), opt.v1, opt.E0.value_or(cplx(0.0))};

  Preset p;
  p.name = "model-b";
  p.mesh = default_mesh(opt, 20.0);
  p.threshold_ref = 2.0 * m;
  PresetJob job;
  job.model = std::make_shared<LocalPotential>(0, Eigen::MatrixXd::Ones(1, 1), law, profile, 30.0);
  job.channels = ChannelSet({Channel{m, m, Dispersion::nonrelativistic}});
  job.states = {{"resonance", cplx(1884.0, -0.5), false, 0}};
  p.jobs.push_back(std::move(job));
  return p;
}

Preset make_model_c(const PresetOptions& opt) {
  reject_option(opt.beta.has_value(), "model-c", "beta");
  reject_option(opt.q_independent, "model-c", "q_independent");

  const double x = opt.x.value_or(0.5);
  const double b = 0.5;
  const auto profile = [=](cplx rc) { return std::exp(-(rc / b) * (rc / b)); };
  const EnergyLaw law{opt.v0.value_or(-650.0), opt.v1, opt.E0.value_or(cplx(0.0))};
  const Channel ch1{495.7, 938.9, Dispersion::semirelativistic};
  const Channel ch2{138.0, 1193.1, Dispersion::semirelativistic};
  const double thr1 = ch1.threshold();

  Preset p;
  p.name = "model-c";
  p.threshold_ref = thr1;
  PresetJob job;
  if (x == 0.0) {
    // the second channel decouples entirely; solve the single-channel problem
    p.mesh = default_mesh(opt, 0.0);
    job.model = std::make_shared<LocalPotential>(0, Eigen::MatrixXd::Ones(1, 1), law, profile, 6.0);
    job.channels = ChannelSet({ch1});
    job.states = {{"bound", 0.0, true, 0}};
    job.scan_lo = thr1 - 10.0;
    job.scan_hi = thr1 - 0.1;
  } else {
    p.mesh = default_mesh(opt, 20.0);
    Eigen::MatrixXd coupling(2, 2);
    coupling << 1.0, x, x, 0.0;
    job.model = std::make_shared<LocalPotential>(0, coupling, law, profile, 6.0);
    job.channels = ChannelSet({ch1, ch2});
    job.states = {{"resonance", cplx(1412.0, -7.0), false, 0}};
  }
  p.jobs.push_back(std::move(job));
  return p;
}

Preset make_model_d(const PresetOptions& opt) {
  reject_option(opt.x.has_value(), "model-d", "x");
  reject_option(opt.v0.has_value(), "model-d", "v0 (use beta)");
  if (opt.v1 != 0.0) {
    throw std::invalid_argument("preset 'model-d': the exchange interaction carries no energy law");
  }

  const double M_partner = 938.9;
  const double beta = opt.beta.value_or(opt.q_independent ? -1.0 : -2.0);
  const BareCoupling bc{0.15, 600.0, 600.0, 138.0};
  auto loop = std::make_shared<const DecayLoop>(bc, 300, 600.0, deg2rad(20.0));

  Preset p;
  p.name = "model-d";
  p.mesh = default_mesh(opt, 20.0);
  p.loop = loop;
  p.m_phys = physical_mass(*loop);
  p.threshold_ref = p.m_phys.real() + M_partner;
  PresetJob job;
  job.model = std::make_shared<YukawaFormFactor>(0, beta, 450.0, 1000.0);
  job.channels = dressed_channel_set(loop, M_partner, opt.q_independent);
  const cplx guess =
      opt.q_independent ? p.m_phys + M_partner - 3.0 : cplx(1364.0, -32.0);
  job.states = {{"resonance", guess, false, 0}};
  p.jobs.push_back(std::move(job));
  return p;
}

}  // namespace

Preset make_preset(const std::string& name, const PresetOptions& opt) {
  if (name == "model-a") return make_model_a(opt);
  if (name == "model-b") return make_model_b(opt);
  if (name == "model-c") return make_model_c(opt);
  if (name == "model-d") return make_model_d(opt);
  throw std::invalid_argument("unknown preset '" + name +
                              "'; expected one of model-a, model-b, model-c, model-d");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"model-a", "model-b", "model-c", "model-d"};
  return names;
}

}  // namespace lswave
