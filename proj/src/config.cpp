#include "lswave/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace lswave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

using Section = std::map<std::string, std::string>;
using SectionMap = std::map<std::string, Section>;

SectionMap parse_sections(std::istream& is) {
  SectionMap out;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section '" +
                          line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      out[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value, got '" +
                        line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    }
    if (section.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": key '" + key +
                        "' outside any [section]");
    }
    if (!out[section].emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key +
                        "' in [" + section + "]");
    }
  }
  return out;
}

class SectionReader {
 public:
  SectionReader(SectionMap& map, const std::string& name) : name_(name) {
    const auto it = map.find(name);
    if (it != map.end()) section_ = &it->second;
  }

  std::optional<std::string> take(const std::string& key) {
    if (!section_) return std::nullopt;
    const auto it = section_->find(key);
    if (it == section_->end()) return std::nullopt;
    std::string v = it->second;
    section_->erase(it);
    return v;
  }

  std::optional<double> take_double(const std::string& key) {
    const auto v = take(key);
    if (!v) return std::nullopt;
    return parse_double(key, *v);
  }

  std::optional<int> take_int(const std::string& key) {
    const auto v = take(key);
    if (!v) return std::nullopt;
    const double d = parse_double(key, *v);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d) fail(key, *v, "an integer");
    return i;
  }

  std::optional<bool> take_bool(const std::string& key) {
    const auto v = take(key);
    if (!v) return std::nullopt;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    fail(key, *v, "a boolean");
    return std::nullopt;
  }

  std::optional<std::vector<double>> take_list(const std::string& key) {
    const auto v = take(key);
    if (!v) return std::nullopt;
    std::vector<double> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) fail(key, *v, "a comma-separated number list");
      out.push_back(parse_double(key, item));
    }
    return out;
  }

 private:
  double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') fail(key, v, "a number");
    return d;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& v, const char* what) {
    throw ConfigError("config [" + name_ + "] " + key + ": expected " + what + ", got '" + v +
                      "'");
  }

  std::string name_;
  Section* section_ = nullptr;
};

void reject_leftovers(const SectionMap& map) {
  static const char* known_sections[] = {"model", "mesh", "pole", "scan",
                                         "sweep", "check", "output"};
  for (const auto& [section, keys] : map) {
    const bool known = std::any_of(std::begin(known_sections), std::end(known_sections),
                                   [&](const char* s) { return section == s; });
    if (!known) throw ConfigError("config: unknown section [" + section + "]");
    if (!keys.empty()) {
      throw ConfigError("config [" + section + "]: unknown key '" + keys.begin()->first + "'");
    }
  }
}

std::function<cplx(cplx)> make_profile(const RunConfig& c, double* theta_ceiling) {
  const auto need = [&](std::size_t n) {
    if (c.shape_params.size() != n) {
      throw ConfigError("config [model] shape_params: shape '" + c.shape + "' takes " +
                        std::to_string(n) + " parameter(s), got " +
                        std::to_string(c.shape_params.size()));
    }
  };
  *theta_ceiling = pi / 4.0;
  if (c.shape == "woods-saxon") {
    need(2);
    const double R = c.shape_params[0], a = c.shape_params[1];
    if (R <= 0 || a <= 0) throw ConfigError("config [model] shape_params: need R > 0, a > 0");
    *theta_ceiling = std::atan(pi * a / R);
    return [R, a](cplx rc) { return 1.0 / (1.0 + std::exp((rc - R) / a)); };
  }
  if (c.shape == "gauss") {
    need(1);
    const double b = c.shape_params[0];
    if (b <= 0) throw ConfigError("config [model] shape_params: need b > 0");
    return [b](cplx rc) { return std::exp(-(rc / b) * (rc / b)); };
  }
  if (c.shape == "double-gauss") {
    need(4);
    const double c1 = c.shape_params[0], b1 = c.shape_params[1];
    const double c2 = c.shape_params[2], b2 = c.shape_params[3];
    if (b1 <= 0 || b2 <= 0) throw ConfigError("config [model] shape_params: need b1, b2 > 0");
    return [c1, b1, c2, b2](cplx rc) {
      return c1 * std::exp(-(rc / b1) * (rc / b1)) + c2 * std::exp(-(rc / b2) * (rc / b2));
    };
  }
  throw ConfigError("config [model] shape: unknown shape '" + c.shape +
                    "' (woods-saxon | gauss | double-gauss)");
}

}  // namespace

RunConfig parse_run_config(std::istream& is) {
  SectionMap map = parse_sections(is);
  RunConfig c;

  SectionReader model(map, "model");
  if (const auto v = model.take("name")) c.model = *v;
  const bool custom = c.model == "custom";

  if (const auto v = model.take_double("v0")) {
    if (custom) {
      c.v0 = *v;
    } else {
      c.options.v0 = *v;
    }
  }
  if (const auto v = model.take_double("v1")) c.options.v1 = *v;
  {
    const auto re = model.take_double("E0_re");
    const auto im = model.take_double("E0_im");
    if (re || im) c.options.E0 = cplx(re.value_or(0.0), im.value_or(0.0));
  }
  if (const auto v = model.take_double("x")) c.options.x = *v;
  if (const auto v = model.take_double("beta")) c.options.beta = *v;
  if (const auto v = model.take_bool("q_independent")) c.options.q_independent = *v;

  if (const auto v = model.take_int("L")) {
    if (!custom) throw ConfigError("config [model] L: only custom models take L");
    c.L = *v;
  }
  if (const auto v = model.take("mode")) {
    if (!custom) throw ConfigError("config [model] mode: only custom models take mode");
    if (*v == "nonrelativistic" || *v == "nr") {
      c.mode = Dispersion::nonrelativistic;
    } else if (*v == "semirelativistic" || *v == "sr") {
      c.mode = Dispersion::semirelativistic;
    } else {
      throw ConfigError("config [model] mode: expected nonrelativistic|nr|semirelativistic|sr");
    }
  }
  if (const auto v = model.take("shape")) {
    if (!custom) throw ConfigError("config [model] shape: only custom models take shape");
    c.shape = *v;
  }
  if (const auto v = model.take_list("shape_params")) {
    if (!custom) throw ConfigError("config [model] shape_params: only custom models take shape_params");
    c.shape_params = *v;
  }
  if (const auto v = model.take_double("rmax")) {
    if (!custom) throw ConfigError("config [model] rmax: only custom models take rmax");
    c.rmax = *v;
  }
  if (const auto v = model.take_list("coupling")) {
    if (!custom) throw ConfigError("config [model] coupling: only custom models take coupling");
    c.coupling = *v;
  }
  if (custom && (c.options.x || c.options.beta || c.options.q_independent)) {
    throw ConfigError("config [model]: custom models do not take x, beta, or q_independent");
  }
  for (int j = 1;; ++j) {
    const auto v = model.take_list("channel" + std::to_string(j));
    if (!v) break;
    if (!custom) throw ConfigError("config [model] channel1: only custom models define channels");
    if (v->size() != 2) {
      throw ConfigError("config [model] channel" + std::to_string(j) + ": expected 'm1, m2'");
    }
    c.channels.push_back(Channel{(*v)[0], (*v)[1], c.mode});
  }

  SectionReader mesh(map, "mesh");
  if (const auto v = mesh.take_int("n")) c.options.mesh_n = *v;
  if (const auto v = mesh.take_double("scale")) c.options.mesh_scale = *v;
  if (const auto v = mesh.take_double("theta_deg")) c.options.theta_deg = *v;

  SectionReader pole(map, "pole");
  {
    const auto re = pole.take_double("guess_re");
    const auto im = pole.take_double("guess_im");
    if (re || im) c.guess = cplx(re.value_or(0.0), im.value_or(0.0));
  }

  SectionReader scan(map, "scan");
  c.scan_lo = scan.take_double("lo");
  c.scan_hi = scan.take_double("hi");
  if (const auto v = scan.take_int("npts")) c.scan_npts = *v;

  SectionReader sweep(map, "sweep");
  if (const auto v = sweep.take("param")) c.sweep_param = *v;
  if (const auto v = sweep.take_list("values")) c.sweep_values = *v;

  SectionReader check(map, "check");
  if (const auto v = check.take_list("energies")) c.check_energies = *v;

  SectionReader output(map, "output");
  if (const auto v = output.take("dir")) c.out_dir = *v;

  reject_leftovers(map);

  // mesh sanity before any build work
  if (c.options.mesh_n && *c.options.mesh_n < 8) {
    throw ConfigError("config [mesh] n: need n >= 8");
  }
  if (c.options.mesh_scale && *c.options.mesh_scale <= 0.0) {
    throw ConfigError("config [mesh] scale: need scale > 0");
  }
  if (c.options.theta_deg && (*c.options.theta_deg < 0.0 || *c.options.theta_deg >= 45.0)) {
    throw ConfigError("config [mesh] theta_deg: need 0 <= theta < 45");
  }
  if (c.scan_lo.has_value() != c.scan_hi.has_value()) {
    throw ConfigError("config [scan]: lo and hi must be given together");
  }
  if (c.scan_lo && *c.scan_lo >= *c.scan_hi) {
    throw ConfigError("config [scan]: need lo < hi");
  }
  if (c.scan_npts < 2) throw ConfigError("config [scan] npts: need npts >= 2");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  return parse_run_config(is);
}

Preset build_preset(const RunConfig& config) {
  if (config.model != "custom") {
    try {
      Preset p = make_preset(config.model, config.options);
      if (config.scan_lo) {
        for (PresetJob& job : p.jobs) {
          job.scan_lo = *config.scan_lo;
          job.scan_hi = *config.scan_hi;
          job.scan_npts = config.scan_npts;
        }
      }
      return p;
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(ex.what());
    }
  }

  if (config.channels.empty()) {
    throw ConfigError("config [model]: custom model needs at least channel1 = m1, m2");
  }
  const int N = static_cast<int>(config.channels.size());
  if (config.coupling.size() != static_cast<std::size_t>(N) * static_cast<std::size_t>(N)) {
    throw ConfigError("config [model] coupling: expected " + std::to_string(N * N) +
                      " row-major entries for " + std::to_string(N) + " channel(s)");
  }
  Eigen::MatrixXd coupling(N, N);
  for (int j = 0; j < N; ++j) {
    for (int l = 0; l < N; ++l) {
      coupling(j, l) = config.coupling[static_cast<std::size_t>(j * N + l)];
    }
  }
  if (!coupling.isApprox(coupling.transpose(), 1e-12)) {
    throw ConfigError("config [model] coupling: matrix must be symmetric");
  }
  if (config.L < 0 || config.L > 6) {
    throw ConfigError("config [model] L: supported range is 0..6");
  }
  if (config.rmax <= 0.0) throw ConfigError("config [model] rmax: need rmax > 0 fm");

  if (config.shape.empty()) {
    throw ConfigError("config [model]: custom model needs shape = woods-saxon|gauss|double-gauss");
  }
  double ceiling = pi / 4.0;
  const auto profile = make_profile(config, &ceiling);
  const EnergyLaw law{config.v0, config.options.v1, config.options.E0.value_or(cplx(0.0))};

  Preset p;
  p.name = "custom";
  const int n = config.options.mesh_n.value_or(200);
  const double scale = config.options.mesh_scale.value_or(300.0);
  const double theta = deg2rad(config.options.theta_deg.value_or(0.0));
  if (theta >= ceiling) {
    throw ConfigError("config [mesh] theta_deg: rotation reaches the interaction's "
                      "analyticity ceiling for this shape");
  }
  p.mesh = tangent_mapped_mesh(n, scale, theta);

  PresetJob job;
  job.model = std::make_shared<LocalPotential>(config.L, coupling, law, profile, config.rmax,
                                               ceiling);
  job.channels = ChannelSet(config.channels);
  const double thr = job.channels.lowest_threshold();
  p.threshold_ref = thr;
  job.scan_lo = config.scan_lo.value_or(thr - 30.0);
  job.scan_hi = config.scan_hi.value_or(thr - 0.05);
  job.scan_npts = config.scan_npts;
  if (config.guess) {
    job.states = {{"resonance", *config.guess, false, 0}};
  } else {
    job.states = {{"bound", 0.0, true, 0}};
  }
  p.jobs.push_back(std::move(job));
  return p;
}

}  // namespace lswave
