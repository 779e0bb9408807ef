// Copyright 2026 The STQS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stqs/config.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

namespace stqs {

namespace {

std::string where(const std::string& origin, const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.line < 0) return origin;
  return origin + ":" + std::to_string(m.line + 1);
}

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    throw ConfigError(where(origin_, node) + ": " + msg);
  }

  void check_map(const YAML::Node& node, const std::string& section) const {
    if (!node.IsMap()) fail(node, "section '" + section + "' must be a mapping");
  }

  void check_keys(const YAML::Node& node, const std::string& section,
                  const std::set<std::string>& allowed) const {
    check_map(node, section);
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "' in section '" + section + "'");
    }
  }

  template <typename T>
  T get(const YAML::Node& node, const std::string& key) const {
    const YAML::Node v = node[key];
    try {
      if (!v.IsScalar()) fail(v, "'" + key + "' must be a scalar");
      return v.as<T>();
    } catch (const YAML::BadConversion&) {
      fail(v, "'" + key + "' has the wrong type");
    }
  }

  template <typename T>
  void opt(const YAML::Node& node, const std::string& key, T& out) const {
    if (node[key]) out = get<T>(node, key);
  }

  std::vector<std::string> string_list(const YAML::Node& node, const std::string& key) const {
    const YAML::Node v = node[key];
    std::vector<std::string> out;
    if (v.IsScalar()) {
      out.push_back(v.as<std::string>());
    } else if (v.IsSequence()) {
      for (const auto& e : v) {
        if (!e.IsScalar()) fail(e, "'" + key + "' entries must be scalars");
        out.push_back(e.as<std::string>());
      }
    } else {
      fail(v, "'" + key + "' must be a list");
    }
    return out;
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
};

template <typename F>
auto guarded(const Reader& r, const YAML::Node& node, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    r.fail(node, e.what());
  }
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<NoiseClass> parse_classes(const std::vector<std::string>& names) {
  if (names.size() == 1 && names[0] == "all") return all_noise_classes();
  std::vector<NoiseClass> out;
  for (const auto& n : names) {
    const NoiseClass c = parse_noise_class(n);
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  if (out.empty()) throw std::invalid_argument("error class list is empty");
  return out;
}

std::vector<Role> parse_roles(const std::vector<std::string>& names) {
  if (names.size() == 1 && names[0] == "all") return {};
  std::vector<Role> out;
  for (const auto& n : names) {
    const Role r = parse_role(n);
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  }
  return out;
}

std::string classes_label(const std::vector<NoiseClass>& classes) {
  bool all = true;
  for (NoiseClass c : all_noise_classes()) {
    if (std::find(classes.begin(), classes.end(), c) == classes.end()) all = false;
  }
  if (all) return "all";
  std::vector<std::string> names;
  for (NoiseClass c : classes) names.push_back(noise_class_name(c));
  return join(names, "+");
}

std::string roles_label(const std::vector<Role>& roles) {
  if (roles.empty()) return "all";
  std::vector<std::string> names;
  for (Role r : roles) names.push_back(role_name(r));
  return join(names, "+");
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("expected a boolean, got '" + s + "'");
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v;
  if (s == ".inf" || s == "inf") return kInfinity;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("expected a number, got '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  std::size_t used = 0;
  long long v;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

int parse_count(const std::string& s, const std::string& what) {
  const long long v = parse_int(s);
  if (v < 1 || v > 1000000) throw std::invalid_argument(what + " must be a positive count");
  return static_cast<int>(v);
}

void check_scalars(const ExperimentConfig& c) {
  if (c.shots < 1) throw std::invalid_argument("shots must be at least 1");
  if (!(c.scope.epsilon >= 0.0 && c.scope.epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1], got " + std::to_string(c.scope.epsilon));
  }
  if (c.n_s < 1 || c.n_f < 1 || c.n_dm < 1 || c.n_scaling < 1) {
    throw std::invalid_argument("qubit counts must be at least 1");
  }
  if (c.threads < 1) throw std::invalid_argument("threads must be at least 1");
}

const std::set<std::string> kExperimentKeys{
    "kind", "n_s", "n_f", "n_dm", "n_scaling", "phi_soil", "phi_free", "phi", "shots",
    "backend", "post_select", "delay_tau", "delay_time_unit", "correction", "scaling_mode",
    "swap_source", "threads"};
const std::set<std::string> kNoiseKeys{"platform", "preset", "epsilon", "classes", "roles",
                                       "isolate", "idle_relaxation", "delay_relaxation", "profile"};
const std::set<std::string> kProfileKeys{"t1", "t2", "sge", "tge", "spe", "me", "me_p01", "me_p10",
                                         "single_gate_time", "two_gate_time", "readout_time"};
const std::set<std::string> kSweepKeys{"repetitions", "axes"};
const std::set<std::string> kOutputKeys{"format", "path", "master_seed", "jobs"};

void apply_axis_value(ExperimentConfig& c, RunManifest& m, const std::string& name, const std::string& value) {
  if (name == "shots") {
    const long long v = parse_int(value);
    if (v < 1) throw std::invalid_argument("shots must be at least 1");
    c.shots = static_cast<std::uint64_t>(v);
  } else if (name == "n_s") {
    c.n_s = parse_count(value, name);
  } else if (name == "n_f") {
    c.n_f = parse_count(value, name);
  } else if (name == "n_dm") {
    c.n_dm = parse_count(value, name);
  } else if (name == "n_scaling") {
    c.n_scaling = parse_count(value, name);
  } else if (name == "n_sensors") {
    const int n = parse_count(value, name);
    const ExperimentKind k = c.kind == ExperimentKind::swap_test ? c.swap_source : c.kind;
    if (k == ExperimentKind::radar) {
      c.n_s = c.n_f = n;
    } else if (k == ExperimentKind::dark_matter) {
      c.n_dm = n;
    } else {
      c.n_scaling = n;
    }
  } else if (name == "phi") {
    c.phi = parse_double(value);
  } else if (name == "phi_soil") {
    c.phi_soil = parse_double(value);
  } else if (name == "phi_free") {
    c.phi_free = parse_double(value);
  } else if (name == "delta_phi") {
    c.phi_soil = c.phi_free + parse_double(value);
  } else if (name == "epsilon") {
    c.scope.epsilon = parse_double(value);
  } else if (name == "platform") {
    c.platform = parse_platform(value);
    c.profile = default_profile(c.platform);
  } else if (name == "noise_preset") {
    apply_noise_preset(c, value);
  } else if (name == "error_classes") {
    c.scope.classes = parse_classes(split(value, '+'));
  } else if (name == "role_scope") {
    c.scope.roles = parse_roles(split(value, '+'));
  } else if (name == "scaling_mode") {
    c.scaling_mode = parse_scaling_mode(value);
  } else if (name == "post_select") {
    c.post_select = parse_bool(value);
  } else if (name == "delay_tau") {
    c.delay_tau = parse_double(value);
  } else if (name == "backend") {
    if (value == "auto") {
      m.backend_auto = true;
    } else {
      c.backend = parse_backend(value);
      m.backend_auto = false;
    }
  } else if (name == "correction") {
    c.correction = parse_correction(value);
  } else {
    throw std::invalid_argument("unknown sweep axis '" + name + "'");
  }
}

Backend auto_backend(const ExperimentConfig& c) {
  int qubits = c.total_qubits();
  if (c.kind == ExperimentKind::swap_test) {
    qubits = c.swap_source == ExperimentKind::radar ? c.n_s + c.n_f + 1 : c.n_dm + 1;
  }
  return qubits <= kMaxDenseDensityQubits ? Backend::dense : Backend::trajectory;
}

}  // namespace

const std::vector<std::string>& sweep_axis_names() {
  static const std::vector<std::string> names{
      "shots", "n_s", "n_f", "n_dm", "n_scaling", "n_sensors", "phi", "phi_soil", "phi_free",
      "delta_phi", "epsilon", "platform", "noise_preset", "error_classes", "role_scope",
      "scaling_mode", "post_select", "delay_tau", "backend", "correction"};
  return names;
}

const std::vector<std::string>& noise_preset_names() {
  static const std::vector<std::string> names{"noiseless", "default", "readout_off", "sge_off",
                                              "tge_off", "gates_off", "spe_off", "t1_off",
                                              "t2_off", "t1t2_off"};
  return names;
}

void apply_noise_preset(ExperimentConfig& c, const std::string& preset) {
  using NC = NoiseClass;
  auto off = [&](std::vector<NoiseClass> classes) {
    c.scope.epsilon = 1.0;
    c.scope.classes = std::move(classes);
  };
  if (preset == "noiseless") {
    off(all_noise_classes());
  } else if (preset == "default") {
    c.scope.epsilon = 0.0;
    c.scope.classes = all_noise_classes();
  } else if (preset == "readout_off") {
    off({NC::readout});
  } else if (preset == "sge_off") {
    off({NC::single_gate});
  } else if (preset == "tge_off") {
    off({NC::two_gate});
  } else if (preset == "gates_off") {
    off({NC::single_gate, NC::two_gate});
  } else if (preset == "spe_off") {
    off({NC::state_prep});
  } else if (preset == "t1_off") {
    off({NC::t1});
  } else if (preset == "t2_off") {
    off({NC::t2});
  } else if (preset == "t1t2_off") {
    off({NC::t1, NC::t2});
  } else {
    throw std::invalid_argument("unknown noise preset '" + preset + "'");
  }
}

ParsedConfig parse_config_string(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  const Reader r(origin);
  if (!root.IsMap()) throw ConfigError(origin + ": config must be a mapping with an 'experiment' section");
  r.check_keys(root, "<top>", {"experiment", "noise", "sweep", "output"});
  if (!root["experiment"]) throw ConfigError(origin + ": missing section 'experiment'");

  ParsedConfig pc;
  ExperimentConfig& c = pc.experiment;
  RunManifest& m = pc.manifest;

  const YAML::Node ex = root["experiment"];
  r.check_keys(ex, "experiment", kExperimentKeys);
  if (!ex["kind"]) r.fail(ex, "missing key 'kind' in section 'experiment'");
  guarded(r, ex["kind"], [&] { c.kind = parse_experiment(r.get<std::string>(ex, "kind")); return 0; });
  r.opt(ex, "n_s", c.n_s);
  r.opt(ex, "n_f", c.n_f);
  r.opt(ex, "n_dm", c.n_dm);
  r.opt(ex, "n_scaling", c.n_scaling);
  r.opt(ex, "phi_soil", c.phi_soil);
  r.opt(ex, "phi_free", c.phi_free);
  r.opt(ex, "phi", c.phi);
  if (ex["shots"]) {
    const long long shots = r.get<long long>(ex, "shots");
    if (shots < 1) r.fail(ex["shots"], "shots must be at least 1");
    c.shots = static_cast<std::uint64_t>(shots);
  }
  if (ex["backend"]) {
    guarded(r, ex["backend"], [&] {
      apply_axis_value(c, m, "backend", r.get<std::string>(ex, "backend"));
      return 0;
    });
  }
  r.opt(ex, "post_select", c.post_select);
  r.opt(ex, "delay_tau", c.delay_tau);
  r.opt(ex, "delay_time_unit", c.delay_time_unit);
  if (ex["correction"]) {
    guarded(r, ex["correction"], [&] { c.correction = parse_correction(r.get<std::string>(ex, "correction")); return 0; });
  }
  if (ex["scaling_mode"]) {
    guarded(r, ex["scaling_mode"], [&] { c.scaling_mode = parse_scaling_mode(r.get<std::string>(ex, "scaling_mode")); return 0; });
  }
  if (ex["swap_source"]) {
    guarded(r, ex["swap_source"], [&] { c.swap_source = parse_experiment(r.get<std::string>(ex, "swap_source")); return 0; });
  }
  r.opt(ex, "threads", c.threads);

  if (const YAML::Node nz = root["noise"]) {
    r.check_keys(nz, "noise", kNoiseKeys);
    if (nz["platform"]) {
      guarded(r, nz["platform"], [&] {
        c.platform = parse_platform(r.get<std::string>(nz, "platform"));
        c.profile = default_profile(c.platform);
        return 0;
      });
    }
    if (nz["preset"]) {
      if (nz["epsilon"] || nz["classes"]) r.fail(nz["preset"], "'preset' conflicts with 'epsilon'/'classes'");
      guarded(r, nz["preset"], [&] { apply_noise_preset(c, r.get<std::string>(nz, "preset")); return 0; });
    }
    r.opt(nz, "epsilon", c.scope.epsilon);
    if (nz["epsilon"] && !(c.scope.epsilon >= 0.0 && c.scope.epsilon <= 1.0)) {
      r.fail(nz["epsilon"], "epsilon must lie in [0, 1], got " + std::to_string(c.scope.epsilon));
    }
    if (nz["classes"]) {
      guarded(r, nz["classes"], [&] { c.scope.classes = parse_classes(r.string_list(nz, "classes")); return 0; });
    }
    if (nz["roles"]) {
      guarded(r, nz["roles"], [&] { c.scope.roles = parse_roles(r.string_list(nz, "roles")); return 0; });
    }
    r.opt(nz, "isolate", c.scope.isolate);
    r.opt(nz, "idle_relaxation", c.noise_options.idle_relaxation);
    r.opt(nz, "delay_relaxation", c.noise_options.delay_relaxation);
    if (const YAML::Node pf = nz["profile"]) {
      r.check_keys(pf, "noise.profile", kProfileKeys);
      NoiseProfile& p = c.profile;
      r.opt(pf, "t1", p.t1);
      r.opt(pf, "t2", p.t2);
      r.opt(pf, "sge", p.sge);
      r.opt(pf, "tge", p.tge);
      r.opt(pf, "spe", p.spe);
      if (pf["me"]) {
        const double me = r.get<double>(pf, "me");
        p.me = {me, me};
      }
      r.opt(pf, "me_p01", p.me.p01);
      r.opt(pf, "me_p10", p.me.p10);
      r.opt(pf, "single_gate_time", p.durations.single_gate);
      r.opt(pf, "two_gate_time", p.durations.two_gate);
      r.opt(pf, "readout_time", p.durations.readout);
      guarded(r, pf, [&] { p.validate(); return 0; });
    }
  }

  if (const YAML::Node sw = root["sweep"]) {
    r.check_keys(sw, "sweep", kSweepKeys);
    r.opt(sw, "repetitions", m.repetitions);
    if (m.repetitions < 1) r.fail(sw["repetitions"], "repetitions must be at least 1");
    if (const YAML::Node axes = sw["axes"]) {
      r.check_map(axes, "sweep.axes");
      const auto& allowed = sweep_axis_names();
      for (const auto& kv : axes) {
        const std::string name = kv.first.as<std::string>();
        if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
          r.fail(kv.first, "unknown sweep axis '" + name + "'");
        }
        SweepAxis axis{name, {}};
        if (!kv.second.IsSequence() || kv.second.size() == 0) r.fail(kv.second, "sweep axis '" + name + "' must be a nonempty list");
        for (const auto& v : kv.second) {
          if (v.IsSequence()) {
            std::vector<std::string> parts;
            for (const auto& e : v) parts.push_back(e.as<std::string>());
            axis.values.push_back(join(parts, "+"));
          } else if (v.IsScalar()) {
            axis.values.push_back(v.as<std::string>());
          } else {
            r.fail(v, "sweep values must be scalars or lists");
          }
          // Apply once to a scratch copy so bad values are reported with a line.
          ExperimentConfig scratch = c;
          RunManifest scratch_m = m;
          guarded(r, v, [&] { apply_axis_value(scratch, scratch_m, name, axis.values.back()); check_scalars(scratch); return 0; });
        }
        for (const auto& a : m.axes) {
          if (a.name == name) r.fail(kv.first, "duplicate sweep axis '" + name + "'");
        }
        m.axes.push_back(std::move(axis));
      }
      bool has_preset = false, has_eps = false, has_classes = false;
      for (const auto& a : m.axes) {
        has_preset |= a.name == "noise_preset";
        has_eps |= a.name == "epsilon";
        has_classes |= a.name == "error_classes";
      }
      if (has_preset && (has_eps || has_classes)) {
        r.fail(axes, "sweep axis 'noise_preset' conflicts with 'epsilon'/'error_classes'");
      }
    }
  }

  if (const YAML::Node out = root["output"]) {
    r.check_keys(out, "output", kOutputKeys);
    if (out["format"]) {
      const std::string f = r.get<std::string>(out, "format");
      if (f == "csv") {
        m.format = OutputFormat::csv;
      } else if (f == "jsonl") {
        m.format = OutputFormat::jsonl;
      } else {
        r.fail(out["format"], "format must be csv or jsonl");
      }
    }
    r.opt(out, "path", m.output_path);
    r.opt(out, "master_seed", m.master_seed);
    r.opt(out, "jobs", m.jobs);
    if (m.jobs < 1) r.fail(out["jobs"], "jobs must be at least 1");
  }
  c.seed = m.master_seed;

  guarded(r, ex, [&] { check_scalars(c); return 0; });
  if (m.axes.empty()) {
    guarded(r, ex, [&] { c.validate(); return 0; });
  }
  if (m.backend_auto) c.backend = auto_backend(c);
  return pc;
}

ParsedConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  ParsedConfig pc = parse_config_string(buf.str(), path);
  pc.manifest.config_path = path;
  return pc;
}

std::string emit_config(const ParsedConfig& pc) {
  const ExperimentConfig& c = pc.experiment;
  const RunManifest& m = pc.manifest;
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << experiment_name(c.kind);
  e << YAML::Key << "n_s" << YAML::Value << c.n_s;
  e << YAML::Key << "n_f" << YAML::Value << c.n_f;
  e << YAML::Key << "n_dm" << YAML::Value << c.n_dm;
  e << YAML::Key << "n_scaling" << YAML::Value << c.n_scaling;
  e << YAML::Key << "phi_soil" << YAML::Value << c.phi_soil;
  e << YAML::Key << "phi_free" << YAML::Value << c.phi_free;
  e << YAML::Key << "phi" << YAML::Value << c.phi;
  e << YAML::Key << "shots" << YAML::Value << c.shots;
  e << YAML::Key << "backend" << YAML::Value << (m.backend_auto ? std::string("auto") : backend_name(c.backend));
  e << YAML::Key << "post_select" << YAML::Value << c.post_select;
  e << YAML::Key << "delay_tau" << YAML::Value << c.delay_tau;
  e << YAML::Key << "delay_time_unit" << YAML::Value << c.delay_time_unit;
  e << YAML::Key << "correction" << YAML::Value << correction_name(c.correction);
  e << YAML::Key << "scaling_mode" << YAML::Value << scaling_mode_name(c.scaling_mode);
  e << YAML::Key << "swap_source" << YAML::Value << experiment_name(c.swap_source);
  e << YAML::Key << "threads" << YAML::Value << c.threads;
  e << YAML::EndMap;

  e << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "platform" << YAML::Value << platform_name(c.platform);
  e << YAML::Key << "epsilon" << YAML::Value << c.scope.epsilon;
  e << YAML::Key << "classes" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (NoiseClass k : c.scope.classes) e << noise_class_name(k);
  e << YAML::EndSeq;
  e << YAML::Key << "roles" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  if (c.scope.roles.empty()) e << "all";
  for (Role k : c.scope.roles) e << role_name(k);
  e << YAML::EndSeq;
  e << YAML::Key << "isolate" << YAML::Value << c.scope.isolate;
  e << YAML::Key << "idle_relaxation" << YAML::Value << c.noise_options.idle_relaxation;
  e << YAML::Key << "delay_relaxation" << YAML::Value << c.noise_options.delay_relaxation;
  const NoiseProfile& p = c.profile;
  e << YAML::Key << "profile" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "t1" << YAML::Value << p.t1;
  e << YAML::Key << "t2" << YAML::Value << p.t2;
  e << YAML::Key << "sge" << YAML::Value << p.sge;
  e << YAML::Key << "tge" << YAML::Value << p.tge;
  e << YAML::Key << "spe" << YAML::Value << p.spe;
  e << YAML::Key << "me_p01" << YAML::Value << p.me.p01;
  e << YAML::Key << "me_p10" << YAML::Value << p.me.p10;
  e << YAML::Key << "single_gate_time" << YAML::Value << p.durations.single_gate;
  e << YAML::Key << "two_gate_time" << YAML::Value << p.durations.two_gate;
  e << YAML::Key << "readout_time" << YAML::Value << p.durations.readout;
  e << YAML::EndMap;
  e << YAML::EndMap;

  e << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "repetitions" << YAML::Value << m.repetitions;
  if (!m.axes.empty()) {
    e << YAML::Key << "axes" << YAML::Value << YAML::BeginMap;
    for (const auto& a : m.axes) {
      e << YAML::Key << a.name << YAML::Value << YAML::Flow << YAML::BeginSeq;
      for (const auto& v : a.values) e << v;
      e << YAML::EndSeq;
    }
    e << YAML::EndMap;
  }
  e << YAML::EndMap;

  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "format" << YAML::Value << (m.format == OutputFormat::csv ? "csv" : "jsonl");
  e << YAML::Key << "path" << YAML::Value << m.output_path;
  e << YAML::Key << "master_seed" << YAML::Value << m.master_seed;
  e << YAML::Key << "jobs" << YAML::Value << m.jobs;
  e << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

std::vector<GridEntry> expand_grid(const ParsedConfig& pc) {
  const auto& axes = pc.manifest.axes;
  std::vector<GridEntry> out;
  std::vector<std::size_t> index(axes.size(), 0);
  while (true) {
    GridEntry entry;
    entry.index = index;
    entry.config = pc.experiment;
    RunManifest m = pc.manifest;
    try {
      for (std::size_t a = 0; a < axes.size(); ++a) apply_axis_value(entry.config, m, axes[a].name, axes[a].values[index[a]]);
      if (m.backend_auto) entry.config.backend = auto_backend(entry.config);
      entry.config.validate();
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
    // Row-major increment: the last axis varies fastest.
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++index[a] < axes[a].values.size()) break;
      index[a] = 0;
      if (a == 0) return out;
    }
    if (axes.empty()) return out;
  }
}

std::uint64_t row_seed(std::uint64_t master_seed, const std::vector<std::size_t>& index, int repetition) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(master_seed);
  mix(index.size());
  for (std::size_t i : index) mix(i);
  mix(static_cast<std::uint64_t>(repetition));
  return h;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "experiment", "platform", "n_sensors", "n_s", "n_f", "phi_true", "epsilon", "error_classes",
      "role_scope", "shots", "backend", "post_select", "seed", "phi_est", "accuracy_pct", "overlap",
      "kept_fraction", "master_seed"};
  return cols;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

struct RowFields {
  std::vector<std::pair<std::string, std::string>> text;
};

int sensor_count(const ExperimentConfig& c) {
  const ExperimentKind k = c.kind == ExperimentKind::swap_test ? c.swap_source : c.kind;
  switch (k) {
    case ExperimentKind::radar: return c.n_s + c.n_f;
    case ExperimentKind::dark_matter: return c.n_dm;
    default: return c.n_scaling;
  }
}

bool has_radar_counts(const ExperimentConfig& c) {
  return c.kind == ExperimentKind::radar ||
         (c.kind == ExperimentKind::swap_test && c.swap_source == ExperimentKind::radar);
}

}  // namespace

std::string csv_row(const RunResult& r, std::uint64_t master_seed) {
  const ExperimentConfig& c = r.config;
  const bool radar = has_radar_counts(c);
  std::vector<std::string> f{
      experiment_name(c.kind),
      platform_name(c.platform),
      std::to_string(sensor_count(c)),
      radar ? std::to_string(c.n_s) : "",
      radar ? std::to_string(c.n_f) : "",
      opt_num(r.phi_true),
      num(c.scope.epsilon),
      classes_label(c.scope.classes),
      roles_label(c.scope.roles),
      std::to_string(c.shots),
      backend_name(c.backend),
      c.post_select ? "true" : "false",
      std::to_string(r.seed),
      opt_num(r.phi_est),
      opt_num(r.accuracy_pct),
      opt_num(r.overlap),
      c.kind == ExperimentKind::swap_test ? "" : num(r.kept_fraction),
      std::to_string(master_seed)};
  return join(f, ",");
}

std::string jsonl_row(const RunResult& r, std::uint64_t master_seed) {
  const ExperimentConfig& c = r.config;
  const bool radar = has_radar_counts(c);
  nlohmann::ordered_json j;
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
  j["experiment"] = experiment_name(c.kind);
  j["platform"] = platform_name(c.platform);
  j["n_sensors"] = sensor_count(c);
  j["n_s"] = radar ? nlohmann::ordered_json(c.n_s) : nlohmann::ordered_json();
  j["n_f"] = radar ? nlohmann::ordered_json(c.n_f) : nlohmann::ordered_json();
  j["phi_true"] = opt(r.phi_true);
  j["epsilon"] = c.scope.epsilon;
  j["error_classes"] = classes_label(c.scope.classes);
  j["role_scope"] = roles_label(c.scope.roles);
  j["shots"] = c.shots;
  j["backend"] = backend_name(c.backend);
  j["post_select"] = c.post_select;
  j["seed"] = r.seed;
  j["phi_est"] = opt(r.phi_est);
  j["accuracy_pct"] = opt(r.accuracy_pct);
  j["overlap"] = opt(r.overlap);
  j["kept_fraction"] = c.kind == ExperimentKind::swap_test ? nlohmann::ordered_json() : nlohmann::ordered_json(r.kept_fraction);
  j["master_seed"] = master_seed;
  return j.dump();
}

ExecutionSummary execute(const ParsedConfig& pc, std::ostream& out, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  const RunManifest& m = pc.manifest;
  const std::vector<GridEntry> grid = expand_grid(pc);
  const int reps = m.repetitions;
  const bool csv = m.format == OutputFormat::csv;

  struct Slot {
    std::vector<std::string> rows;
    std::vector<std::string> errors;
    bool done = false;
  };
  std::vector<Slot> slots(grid.size());
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};

  auto work = [&](int threads_per_point) {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= grid.size()) return;
      Slot slot;
      const GridEntry& g = grid[i];
      std::string where = "grid point " + std::to_string(i);
      if (!g.error.empty()) {
        slot.errors.push_back(where + ": " + g.error);
      } else {
        try {
          ExperimentConfig cfg = g.config;
          cfg.threads = threads_per_point;
          const PreparedExperiment prep = PreparedExperiment::prepare(cfg);
          for (int rep = 0; rep < reps; ++rep) {
            try {
              const RunResult r = prep.sample(row_seed(m.master_seed, g.index, rep));
              slot.rows.push_back(csv ? csv_row(r, m.master_seed) : jsonl_row(r, m.master_seed));
            } catch (const std::exception& e) {
              slot.errors.push_back(where + " repetition " + std::to_string(rep) + ": " + e.what());
            }
          }
        } catch (const std::exception& e) {
          slot.errors.push_back(where + ": " + e.what());
        }
      }
      slot.done = true;
      {
        std::lock_guard<std::mutex> lock(mu);
        slots[i] = std::move(slot);
      }
      cv.notify_all();
    }
  };

  const int workers = std::max(1, std::min<int>(m.jobs, static_cast<int>(grid.size())));
  const int threads_per_point = workers == 1 ? pc.experiment.threads : 1;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work, threads_per_point);

  if (csv) out << join(csv_columns(), ",") << "\n";
  ExecutionSummary summary;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Slot slot;
    {
      std::unique_lock<std::mutex> lock(mu);
      cv.wait(lock, [&] { return slots[i].done; });
      slot = std::move(slots[i]);
    }
    for (const auto& row : slot.rows) out << row << "\n";
    for (const auto& err : slot.errors) log << "error: " << err << "\n";
    out.flush();
    summary.rows += slot.rows.size();
    summary.failed += slot.errors.size();
  }
  for (auto& t : pool) t.join();

  summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  summary.exit_code = summary.failed > 0 ? 2 : 0;
  if (csv) {
    out << "# wall_time_s=" << num(summary.wall_seconds) << " version=" << STQS_VERSION
        << " rows=" << summary.rows << " failed=" << summary.failed << "\n";
  } else {
    nlohmann::ordered_json footer;
    footer["footer"] = {{"wall_time_s", summary.wall_seconds},
                        {"version", STQS_VERSION},
                        {"rows", summary.rows},
                        {"failed", summary.failed}};
    out << footer.dump() << "\n";
  }
  return summary;
}

std::string describe_profiles() {
  std::ostringstream s;
  s << std::left << std::setw(16) << "platform" << std::setw(10) << "T1" << std::setw(10) << "T2"
    << std::setw(8) << "SGE" << std::setw(8) << "TGE" << std::setw(8) << "SPE" << std::setw(8) << "ME"
    << std::setw(10) << "readout" << std::setw(10) << "1q gate" << std::setw(10) << "2q gate" << "\n";
  auto t = [](double sec) {
    char buf[32];
    if (std::isinf(sec)) return std::string("inf");
    if (sec >= 1.0) {
      std::snprintf(buf, sizeof buf, "%gs", sec);
    } else if (sec >= 1e-3) {
      std::snprintf(buf, sizeof buf, "%gms", sec * 1e3);
    } else if (sec >= 1e-6) {
      std::snprintf(buf, sizeof buf, "%gus", sec * 1e6);
    } else {
      std::snprintf(buf, sizeof buf, "%gns", sec * 1e9);
    }
    return std::string(buf);
  };
  auto pct = [](double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g%%", p * 100.0);
    return std::string(buf);
  };
  for (Platform p : table_platforms()) {
    const NoiseProfile prof = default_profile(p);
    s << std::left << std::setw(16) << platform_name(p) << std::setw(10) << t(prof.t1) << std::setw(10)
      << t(prof.t2) << std::setw(8) << pct(prof.sge) << std::setw(8) << pct(prof.tge) << std::setw(8)
      << pct(prof.spe) << std::setw(8) << pct(prof.me.p01) << std::setw(10) << t(prof.durations.readout)
      << std::setw(10) << t(prof.durations.single_gate) << std::setw(10) << t(prof.durations.two_gate)
      << "\n";
  }
  s << "custom          noiseless unless overridden in the config\n";
  return s.str();
}

}  // namespace stqs
