// Copyright 2026 The thz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "thz/cli.hpp"
#include "thz/errors.hpp"

extern char** environ;

namespace thz::cli {

namespace {

using nlohmann::json;

const char* kCommands[] = {"spectrum", "optimize", "map", "driveplane", "tomography", "validate", "gap"};

// Every config field, visited in a fixed order. Section "" is the top level.
template <class V>
void visit_fields(V& v, RunConfig& c) {
  v("", "seed", c.seed);
  v("", "threads", c.threads);
  v("", "out", c.out);

  SystemParams& s = c.system;
  v("system", "f_thz", s.f_thz);
  v("system", "delta", s.delta);
  v("system", "omega", s.omega);
  v("system", "omega_sb", s.omega_sb);
  v("system", "chi", s.chi);
  v("system", "kappa", s.kappa);
  v("system", "gamma", s.gamma);
  v("system", "n_fock", s.n_fock);

  v("spectrum", "omega_sb_values", c.spectrum.omega_sb_values);
  v("spectrum", "channels", c.spectrum.channels);
  v("spectrum", "thz_grid", c.spectrum.thz_grid);
  v("spectrum", "optical_grid", c.spectrum.optical_grid);

  OptimizeConfig& o = c.optimize;
  v("optimize", "f_thz", o.f_thz);
  v("optimize", "chi", o.chi);
  v("optimize", "kappa", o.kappa);
  v("optimize", "gamma", o.gamma);
  v("optimize", "omega_max", o.omega_max);
  v("optimize", "n_fock", o.n_fock);
  v("optimize", "grid_omega", o.opt.grid_omega);
  v("optimize", "grid_theta", o.opt.grid_theta);
  v("optimize", "xtol", o.opt.xtol);
  v("optimize", "max_iterations", o.opt.max_iterations);

  MapConfig& m = c.map;
  v("map", "chi", m.chi);
  v("map", "kappa", m.kappa);
  v("map", "f_thz", m.f_thz);
  v("map", "gamma", m.gamma);
  v("map", "omega_max", m.omega_max);
  v("map", "n_fock", m.n_fock);
  v("map", "compute_gap", m.compute_gap);
  v("map", "grid_omega", m.opt.grid_omega);
  v("map", "grid_theta", m.opt.grid_theta);
  v("map", "xtol", m.opt.xtol);
  v("map", "max_iterations", m.opt.max_iterations);

  v("driveplane", "omega1", c.driveplane.omega1);
  v("driveplane", "omega2", c.driveplane.omega2);

  TomographyConfig& t = c.tomography;
  v("tomography", "state", t.state);
  v("tomography", "reference", t.reference);
  v("tomography", "n_shot", t.n_shot);
  v("tomography", "eta_e", t.eta_e);
  v("tomography", "eta_g", t.eta_g);
  v("tomography", "n_ave", t.n_ave);
  v("tomography", "rotation", t.rotation);
  v("tomography", "singular_offset", t.singular_offset);
  v("tomography", "smoothing_sigma", t.smoothing_sigma);

  v("validate", "n_fock", c.validate.n_fock);
  v("validate", "tol", c.validate.tol);
  v("validate", "samples_per_period", c.validate.samples_per_period);

  v("gap", "omega_r_tilde", c.gap.omega_r_tilde);
  v("gap", "delta", c.gap.delta);
  v("gap", "omega_max", c.gap.omega_max);
}

std::string path_of(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

class Reader {
 public:
  Reader(YAML::Node root, std::string source, std::map<std::string, std::string> env_origin)
      : root_(std::move(root)), source_(std::move(source)), env_origin_(std::move(env_origin)) {}

  template <class T>
  void operator()(const std::string& section, const std::string& key, T& value) {
    known_.insert(path_of(section, key));
    if (!section.empty()) known_sections_.insert(section);
    const YAML::Node parent = section.empty() ? root_ : root_[section];
    if (!parent || !parent.IsMap()) return;
    const YAML::Node n = parent[key];
    if (!n) return;
    const std::string p = path_of(section, key);
    marks_[p] = where(n, p);
    read(n, p, value);
  }

  // Rejects keys that no field claimed.
  void check_unknown() const {
    for (auto it = root_.begin(); it != root_.end(); ++it) {
      const std::string key = it->first.as<std::string>();
      if (known_sections_.count(key)) {
        if (!it->second.IsMap()) fail(it->second, key, "section '" + key + "' must be a mapping");
        for (auto jt = it->second.begin(); jt != it->second.end(); ++jt) {
          const std::string sub = jt->first.as<std::string>();
          if (!known_.count(key + "." + sub))
            fail(jt->first, key + "." + sub, "unknown key '" + sub + "' in section '" + key + "'");
        }
      } else if (!known_.count(key)) {
        fail(it->first, key, "unknown key '" + key + "'");
      }
    }
  }

  const std::map<std::string, std::string>& marks() const { return marks_; }

 private:
  std::string where(const YAML::Node& n, const std::string& path) const {
    auto e = env_origin_.find(path);
    if (e != env_origin_.end()) return "environment " + e->second;
    const YAML::Mark m = n.Mark();
    if (m.is_null()) return source_;
    return source_ + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
  }

  [[noreturn]] void fail(const YAML::Node& n, const std::string& path, const std::string& msg) const {
    throw ConfigError(where(n, path) + ": " + msg);
  }

  template <class T>
  T scalar(const YAML::Node& n, const std::string& path, const char* type) const {
    if (!n.IsScalar()) fail(n, path, std::string("expected ") + type + " for " + path);
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, path, std::string("expected ") + type + " for " + path + ", got '" + n.Scalar() + "'");
    }
  }

  void read(const YAML::Node& n, const std::string& p, double& v) const { v = scalar<double>(n, p, "a number"); }
  void read(const YAML::Node& n, const std::string& p, int& v) const { v = scalar<int>(n, p, "an integer"); }
  void read(const YAML::Node& n, const std::string& p, bool& v) const { v = scalar<bool>(n, p, "true or false"); }
  void read(const YAML::Node& n, const std::string& p, std::string& v) const {
    v = scalar<std::string>(n, p, "a string");
  }
  void read(const YAML::Node& n, const std::string& p, std::uint64_t& v) const {
    if (n.IsScalar() && !n.Scalar().empty() && n.Scalar()[0] == '-')
      fail(n, p, "expected a non-negative integer for " + p);
    v = scalar<std::uint64_t>(n, p, "a non-negative integer");
  }

  // per-emitter pair; a scalar sets both
  void read(const YAML::Node& n, const std::string& p, std::array<double, 2>& v) const {
    if (n.IsScalar()) {
      v[0] = v[1] = scalar<double>(n, p, "a number");
      return;
    }
    if (!n.IsSequence() || n.size() != 2) fail(n, p, "expected a number or a pair [x1, x2] for " + p);
    for (int i = 0; i < 2; ++i) v[i] = scalar<double>(n[i], p, "a number");
  }

  template <class T>
  void read(const YAML::Node& n, const std::string& p, std::vector<T>& v) const {
    v.clear();
    if (n.IsScalar()) {
      v.emplace_back();
      read(n, p, v.back());
      return;
    }
    if (!n.IsSequence()) fail(n, p, "expected a list for " + p);
    for (const YAML::Node& e : n) {
      v.emplace_back();
      read(e, p, v.back());
    }
  }

  void read(const YAML::Node& n, const std::string& p, Axis& a) const {
    if (!n.IsMap()) fail(n, p, "expected {min, max, points, log} for " + p);
    for (auto it = n.begin(); it != n.end(); ++it) {
      const std::string k = it->first.as<std::string>();
      if (k == "min")
        read(it->second, p + ".min", a.min);
      else if (k == "max")
        read(it->second, p + ".max", a.max);
      else if (k == "points")
        read(it->second, p + ".points", a.points);
      else if (k == "log")
        read(it->second, p + ".log", a.log);
      else
        fail(it->first, p, "unknown key '" + k + "' in axis " + p);
    }
  }

  YAML::Node root_;
  std::string source_;
  std::map<std::string, std::string> env_origin_;
  std::set<std::string> known_, known_sections_;
  std::map<std::string, std::string> marks_;
};

class Writer {
 public:
  explicit Writer(bool runtime) : runtime_(runtime) {}
  template <class T>
  void operator()(const std::string& section, const std::string& key, T& value) {
    if (section.empty() && (key == "threads" || key == "out") && !runtime_) return;
    json& slot = section.empty() ? j_[key] : j_[section][key];
    slot = to_json(value);
  }
  json& result() { return j_; }

 private:
  static json to_json(const Axis& a) {
    return json{{"min", a.min}, {"max", a.max}, {"points", a.points}, {"log", a.log}};
  }
  template <class T>
  static json to_json(const T& v) {
    return json(v);
  }
  bool runtime_;
  json j_ = json::object();
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

[[noreturn]] void invalid(const RunConfig& c, const std::string& path, const std::string& msg) {
  auto it = c.anchors.find(path);
  if (it == c.anchors.end()) it = c.anchors.lower_bound(path + ".");
  const bool hit = it != c.anchors.end() && (it->first == path || it->first.rfind(path + ".", 0) == 0);
  const std::string at = hit ? it->second : c.source;
  throw ConfigError(at + ": " + path + ": " + msg);
}

void check_axis(const RunConfig& c, const std::string& path, const Axis& a) {
  if (a.points < 0) invalid(c, path, "points must be >= 0");
  if (!std::isfinite(a.min) || !std::isfinite(a.max) || a.min > a.max) invalid(c, path, "need finite min <= max");
  if (a.points > 1 && a.min == a.max) invalid(c, path, "min == max with more than one point");
  if (a.log && a.points > 0 && a.min <= 0.0) invalid(c, path, "log axis needs min > 0");
}

template <class T>
bool one_of(const T& v, std::initializer_list<const char*> options) {
  for (const char* o : options)
    if (v == o) return true;
  return false;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (int i = 0; i < 7; ++i)
    if (name == kCommands[i]) return static_cast<Command>(i);
  return std::nullopt;
}

std::string command_name(Command c) { return kCommands[static_cast<int>(c)]; }

EnvList environment_overrides() {
  EnvList out;
  for (char** e = environ; e && *e; ++e) {
    std::string kv(*e);
    if (kv.rfind(kEnvPrefix, 0) != 0) continue;
    auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    out.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

RunConfig default_config() {
  RunConfig c;
  SystemParams& s = c.system;
  s.f_thz = 1000.0;
  s.omega = {499.7, 496.3};
  s.delta = {874.9, 868.9};
  s.omega_sb = {16.7, 17.5};
  s.chi = {24.4, 24.4};
  s.kappa = 59.6;
  s.gamma = {0.03979, 0.03979};
  s.n_fock = 6;
  return c;
}

RunConfig load_config(const std::string& text, const std::string& source, const EnvList& env) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                      ": " + e.msg);
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ConfigError(source + ":1:1: top level must be a mapping");
  // a written manifest carries the resolved inputs under "config"
  if (root["manifest"] && root["config"]) root = root["config"];

  std::map<std::string, std::string> env_origin;
  for (const auto& [name, value] : env) {
    if (name.rfind(kEnvPrefix, 0) != 0) continue;
    std::string rest = lower(name.substr(kEnvPrefix.size()));
    YAML::Node parsed;
    try {
      parsed = YAML::Load(value);
    } catch (const YAML::ParserException& e) {
      throw ConfigError("environment " + name + ": " + e.msg);
    }
    auto sep = rest.find("__");
    std::string path;
    if (sep == std::string::npos) {
      root[rest] = parsed;
      path = rest;
    } else {
      std::string section = rest.substr(0, sep), key = rest.substr(sep + 2);
      if (!root[section]) root[section] = YAML::Node(YAML::NodeType::Map);
      root[section][key] = parsed;
      path = section + "." + key;
    }
    env_origin[path] = name;
  }

  RunConfig c = default_config();
  c.source = source;
  Reader r(root, source, env_origin);
  visit_fields(r, c);
  r.check_unknown();
  c.anchors = r.marks();
  validate_config(c);
  return c;
}

RunConfig load_config_file(const std::string& path, const EnvList& env) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str(), path, env);
}

void validate_config(const RunConfig& c) {
  if (c.threads < 0) invalid(c, "threads", "must be >= 0");
  if (c.out.empty()) invalid(c, "out", "must not be empty");
  try {
    c.system.validate();
  } catch (const InvalidArgument& e) {
    invalid(c, "system", e.what());
  }

  for (const std::string& ch : c.spectrum.channels)
    if (!one_of(ch, {"thz", "optical"})) invalid(c, "spectrum.channels", "unknown channel '" + ch + "' (thz, optical)");
  for (double v : c.spectrum.omega_sb_values)
    if (!(v >= 0.0)) invalid(c, "spectrum.omega_sb_values", "must be >= 0");
  check_axis(c, "spectrum.thz_grid", c.spectrum.thz_grid);
  check_axis(c, "spectrum.optical_grid", c.spectrum.optical_grid);

  const OptimizeConfig& o = c.optimize;
  for (double f : o.f_thz)
    if (!(f > 0.0)) invalid(c, "optimize.f_thz", "must be > 0");
  if (!(o.chi > 0.0)) invalid(c, "optimize.chi", "must be > 0");
  if (!(o.kappa > 0.0)) invalid(c, "optimize.kappa", "must be > 0");
  if (!(o.gamma >= 0.0)) invalid(c, "optimize.gamma", "must be >= 0");
  if (!(o.omega_max > 0.0)) invalid(c, "optimize.omega_max", "must be > 0");
  if (o.n_fock < 2) invalid(c, "optimize.n_fock", "must be >= 2");
  if (o.opt.grid_omega < 1 || o.opt.grid_theta < 1) invalid(c, "optimize.grid_omega", "grids need >= 1 point");
  if (!(o.opt.xtol > 0.0)) invalid(c, "optimize.xtol", "must be > 0");
  if (o.opt.max_iterations < 0) invalid(c, "optimize.max_iterations", "must be >= 0");

  const MapConfig& m = c.map;
  check_axis(c, "map.chi", m.chi);
  check_axis(c, "map.kappa", m.kappa);
  if (!(m.f_thz > 0.0)) invalid(c, "map.f_thz", "must be > 0");
  if (!(m.gamma >= 0.0)) invalid(c, "map.gamma", "must be >= 0");
  if (!(m.omega_max > 0.0)) invalid(c, "map.omega_max", "must be > 0");
  if (m.n_fock < 2) invalid(c, "map.n_fock", "must be >= 2");
  if (m.opt.grid_omega < 1 || m.opt.grid_theta < 1) invalid(c, "map.grid_omega", "grids need >= 1 point");

  check_axis(c, "driveplane.omega1", c.driveplane.omega1);
  check_axis(c, "driveplane.omega2", c.driveplane.omega2);

  const TomographyConfig& t = c.tomography;
  if (!one_of(t.state, {"steady", "bell"})) invalid(c, "tomography.state", "expected steady or bell");
  if (!one_of(t.reference, {"prepared", "bell"})) invalid(c, "tomography.reference", "expected prepared or bell");
  if (!one_of(t.rotation, {"ideal", "fast", "slow"}))
    invalid(c, "tomography.rotation", "expected ideal, fast or slow");
  for (std::uint64_t n : t.n_shot)
    if (n == 0) invalid(c, "tomography.n_shot", "shot counts must be > 0");
  for (double e : t.eta_e)
    if (!(e >= 0.0 && e <= 1.0)) invalid(c, "tomography.eta_e", "must lie in [0, 1]");
  if (!(t.eta_g >= 0.0 && t.eta_g <= 1.0)) invalid(c, "tomography.eta_g", "must lie in [0, 1]");
  if (t.n_ave < 1) invalid(c, "tomography.n_ave", "must be >= 1");
  if (!(t.singular_offset > 0.0 && t.singular_offset < 1.0))
    invalid(c, "tomography.singular_offset", "must lie in (0, 1)");
  if (!(t.smoothing_sigma >= 0.0)) invalid(c, "tomography.smoothing_sigma", "must be >= 0");

  if (c.validate.n_fock < 2) invalid(c, "validate.n_fock", "must be >= 2");
  if (!(c.validate.tol > 0.0)) invalid(c, "validate.tol", "must be > 0");
  if (c.validate.samples_per_period < 4) invalid(c, "validate.samples_per_period", "must be >= 4");

  if (!(c.gap.omega_r_tilde > 0.0)) invalid(c, "gap.omega_r_tilde", "must be > 0");
  check_axis(c, "gap.delta", c.gap.delta);
  if (c.gap.delta.points > 0 && (c.gap.delta.min < 0.0 || c.gap.delta.max >= c.gap.omega_r_tilde))
    invalid(c, "gap.delta", "detunings must lie in [0, omega_r_tilde)");
  if (!(c.gap.omega_max > 0.0)) invalid(c, "gap.omega_max", "must be > 0");
}

std::string canonical_json(const RunConfig& c, Command cmd, bool runtime_fields) {
  Writer w(runtime_fields);
  RunConfig copy = c;
  visit_fields(w, copy);
  json j = w.result();
  if (!runtime_fields) j = json{{"command", command_name(cmd)}, {"inputs", j}};
  return j.dump();
}

std::string manifest_hash(const RunConfig& c, Command cmd) { return git_blob_hash(canonical_json(c, cmd, false)); }

}  // namespace thz::cli
