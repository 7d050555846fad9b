#include "dmimo/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dmimo {

double ScenarioConfig::arrival_rate(int user) const {
  return traffic.at(user).load_kbps * 1000.0 * M_LN2 * frame_duration_s;
}

double ScenarioConfig::delay_bound_frames(int user) const {
  const double frames = traffic.at(user).delay_bound_ms / 1000.0 / frame_duration_s;
  return double(std::llround(frames));
}

QoSSpec ScenarioConfig::qos(int user) const {
  return QoSSpec::make(arrival_rate(user), delay_bound_frames(user),
                       traffic.at(user).violation_prob);
}

void ScenarioConfig::validate() const {
  deployment.validate();
  if (traffic.size() != static_cast<std::size_t>(deployment.num_users()))
    throw std::invalid_argument("scenario: one traffic entry per user required");
  if (!(bandwidth_hz > 0) || !(frame_duration_s > 0))
    throw std::invalid_argument("scenario: bandwidth and frame duration must be positive");
  if (!(power.reference > 0) || power.kappa < 0)
    throw std::invalid_argument("scenario: reference power must be positive, kappa >= 0");
  if (!(interference.threshold > 0) || !(interference.grid_resolution_m > 0))
    throw std::invalid_argument("scenario: interference parameters must be positive");
  if (train_frames < 1 || eval_frames < 1)
    throw std::invalid_argument("scenario: frame counts must be positive");
  for (std::size_t u = 0; u < traffic.size(); ++u) {
    if (!(traffic[u].load_kbps > 0))
      throw std::invalid_argument("scenario: traffic load must be positive");
    if (delay_bound_frames(static_cast<int>(u)) < 1)
      throw std::invalid_argument("scenario: delay bound below one frame");
    if (!(traffic[u].violation_prob > 0) || !(traffic[u].violation_prob < 1))
      throw std::invalid_argument("scenario: violation probability outside (0, 1)");
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct RawConfig {
  std::map<std::string, std::string> kv;

  bool has(const std::string& k) const { return kv.count(k) > 0; }
  std::string take(const std::string& k) {
    auto it = kv.find(k);
    if (it == kv.end()) throw std::invalid_argument("scenario: missing key " + k);
    std::string v = it->second;
    kv.erase(it);
    return v;
  }
  double take_double(const std::string& k) {
    const std::string v = take(k);
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (trim(v.substr(pos)) != "") throw std::invalid_argument("bad number for " + k + ": " + v);
    return x;
  }
  long take_long(const std::string& k) { return std::llround(take_double(k)); }
  Vec2 take_vec2(const std::string& k) {
    std::istringstream in(take(k));
    Vec2 p;
    if (!(in >> p.x >> p.y)) throw std::invalid_argument("bad coordinate for " + k);
    return p;
  }
};

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("scenario line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw std::invalid_argument("scenario line " + std::to_string(lineno) + ": empty key or value");
    if (!raw.kv.emplace(key, val).second)
      throw std::invalid_argument("scenario: duplicate key " + key);
  }
  return raw;
}

// Collects user.N.* / bs.N.* indexed keys, 1-based and dense.
int indexed_count(const RawConfig& raw, const std::string& prefix) {
  int n = 0;
  while (true) {
    const std::string base = prefix + "." + std::to_string(n + 1) + ".";
    bool found = false;
    for (const auto& [k, v] : raw.kv)
      if (k.rfind(base, 0) == 0) found = true;
    if (!found) break;
    ++n;
  }
  return n;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  RawConfig raw = tokenize(text);
  ScenarioConfig cfg;
  cfg.traffic.clear();

  const int bs_antennas = raw.has("bs_antennas") ? int(raw.take_long("bs_antennas")) : 2;
  const int user_antennas = raw.has("user_antennas") ? int(raw.take_long("user_antennas")) : 2;

  if (raw.has("deployment")) cfg.deployment_name = raw.take("deployment");
  if (cfg.deployment_name == "inline") {
    const int nbs = indexed_count(raw, "bs");
    const int nmu = indexed_count(raw, "user");
    if (nbs == 0 || nmu == 0)
      throw std::invalid_argument("inline deployment needs bs.N.position and user.N.position");
    for (int m = 1; m <= nbs; ++m) {
      const std::string base = "bs." + std::to_string(m) + ".";
      cfg.deployment.bs_positions.push_back(raw.take_vec2(base + "position"));
      cfg.deployment.bs_antennas.push_back(
          raw.has(base + "antennas") ? int(raw.take_long(base + "antennas")) : bs_antennas);
    }
    for (int u = 1; u <= nmu; ++u) {
      const std::string base = "user." + std::to_string(u) + ".";
      cfg.deployment.user_positions.push_back(raw.take_vec2(base + "position"));
      cfg.deployment.user_antennas.push_back(
          raw.has(base + "antennas") ? int(raw.take_long(base + "antennas")) : user_antennas);
    }
  } else {
    cfg.deployment = builtin_deployment(cfg.deployment_name, bs_antennas, user_antennas);
  }

  double d_ref = 1.0, eta = 3.0, calib = 50.0;
  if (raw.has("pathloss.d_ref_m")) d_ref = raw.take_double("pathloss.d_ref_m");
  if (raw.has("pathloss.exponent")) eta = raw.take_double("pathloss.exponent");
  if (raw.has("pathloss.calibration_distance_m"))
    calib = raw.take_double("pathloss.calibration_distance_m");
  cfg.pathloss = PathLossModel::calibrated(d_ref, eta, calib);

  if (raw.has("bandwidth_hz")) cfg.bandwidth_hz = raw.take_double("bandwidth_hz");
  if (raw.has("frame_duration_s")) cfg.frame_duration_s = raw.take_double("frame_duration_s");
  if (raw.has("power.reference")) cfg.power.reference = raw.take_double("power.reference");
  if (raw.has("power.kappa")) cfg.power.kappa = raw.take_double("power.kappa");
  if (raw.has("interference.threshold"))
    cfg.interference.threshold = raw.take_double("interference.threshold");
  if (raw.has("interference.grid_m"))
    cfg.interference.grid_resolution_m = raw.take_double("interference.grid_m");
  if (raw.has("seed")) cfg.seed = static_cast<std::uint64_t>(raw.take_long("seed"));
  if (raw.has("train_frames")) cfg.train_frames = raw.take_long("train_frames");
  if (raw.has("eval_frames")) cfg.eval_frames = raw.take_long("eval_frames");
  if (raw.has("scheme")) cfg.scheme = raw.take("scheme");

  if (raw.has("tracker.mode")) {
    const std::string mode = raw.take("tracker.mode");
    if (mode == "batch")
      cfg.tracker.mode = TrackerConfig::Mode::batch;
    else if (mode == "streaming")
      cfg.tracker.mode = TrackerConfig::Mode::streaming;
    else
      throw std::invalid_argument("tracker.mode must be batch or streaming");
  }
  if (raw.has("tracker.step")) cfg.tracker.step = raw.take_double("tracker.step");
  if (raw.has("tracker.filter")) cfg.tracker.filter = raw.take_double("tracker.filter");
  if (raw.has("tracker.budget")) cfg.tracker.budget = raw.take_long("tracker.budget");
  if (raw.has("tracker.warmup")) cfg.tracker.warmup = raw.take_long("tracker.warmup");
  if (raw.has("tracker.tolerance")) cfg.tracker.tolerance = raw.take_double("tracker.tolerance");
  if (raw.has("tracker.lambda_init")) cfg.tracker.lambda_init = raw.take_double("tracker.lambda_init");
  if (raw.has("tracker.lambda_ceiling"))
    cfg.tracker.lambda_ceiling = raw.take_double("tracker.lambda_ceiling");
  if (raw.has("tracker.sweep_warm_start"))
    cfg.tracker.sweep_warm_start = raw.take_long("tracker.sweep_warm_start") != 0;

  const int users = cfg.deployment.num_users();
  cfg.traffic.resize(users);
  for (int u = 1; u <= users; ++u) {
    const std::string base = "user." + std::to_string(u) + ".";
    UserTraffic& t = cfg.traffic[u - 1];
    if (raw.has(base + "load_kbps")) t.load_kbps = raw.take_double(base + "load_kbps");
    if (raw.has(base + "delay_bound_ms")) t.delay_bound_ms = raw.take_double(base + "delay_bound_ms");
    if (raw.has(base + "violation_prob")) t.violation_prob = raw.take_double(base + "violation_prob");
  }

  if (!raw.kv.empty()) throw std::invalid_argument("scenario: unknown key " + raw.kv.begin()->first);
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

bool is_valid_axis(const std::string& axis) {
  return axis == "load" || axis == "kappa" || axis == "delay-bound" || axis == "xi";
}

void apply_axis(ScenarioConfig& config, const std::string& axis, double value) {
  if (axis == "load") {
    for (auto& t : config.traffic) t.load_kbps = value;
  } else if (axis == "kappa") {
    config.power.kappa = value;
  } else if (axis == "delay-bound") {
    for (auto& t : config.traffic) t.delay_bound_ms = value;
  } else if (axis == "xi") {
    for (auto& t : config.traffic) t.violation_prob = value;
  } else {
    throw std::invalid_argument("unknown sweep axis: " + axis);
  }
  config.validate();
}

std::string scenario_listing() {
  std::ostringstream out;
  for (const std::string& name : builtin_deployment_names()) {
    const Deployment d = builtin_deployment(name, 2, 2);
    out << name << ": " << d.num_bs() << " BS, " << d.num_users() << " user(s)\n";
    for (int m = 0; m < d.num_bs(); ++m)
      out << "  bs " << (m + 1) << " at (" << d.bs_positions[m].x << ", " << d.bs_positions[m].y
          << ")\n";
    for (int u = 0; u < d.num_users(); ++u)
      out << "  user " << (u + 1) << " at (" << d.user_positions[u].x << ", "
          << d.user_positions[u].y << ")\n";
  }
  return out.str();
}

}  // namespace dmimo
