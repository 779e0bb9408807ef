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

#include "stqs/noise.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stqs/channel.h"

namespace stqs {

std::string platform_name(Platform p) {
  switch (p) {
    case Platform::trapped_ion: return "trapped_ion";
    case Platform::rydberg: return "rydberg";
    case Platform::superconducting: return "superconducting";
    case Platform::nv_center: return "nv_center";
    case Platform::custom: return "custom";
  }
  return "?";
}

Platform parse_platform(const std::string& name) {
  for (Platform p : {Platform::trapped_ion, Platform::rydberg, Platform::superconducting,
                     Platform::nv_center, Platform::custom}) {
    if (platform_name(p) == name) return p;
  }
  throw std::invalid_argument("unknown platform '" + name + "'");
}

const std::vector<Platform>& table_platforms() {
  static const std::vector<Platform> all{Platform::trapped_ion, Platform::rydberg,
                                         Platform::superconducting, Platform::nv_center};
  return all;
}

std::string noise_class_name(NoiseClass c) {
  switch (c) {
    case NoiseClass::readout: return "readout";
    case NoiseClass::single_gate: return "single_gate";
    case NoiseClass::two_gate: return "two_gate";
    case NoiseClass::state_prep: return "state_prep";
    case NoiseClass::t1: return "t1";
    case NoiseClass::t2: return "t2";
  }
  return "?";
}

NoiseClass parse_noise_class(const std::string& name) {
  for (NoiseClass c : all_noise_classes()) {
    if (noise_class_name(c) == name) return c;
  }
  throw std::invalid_argument("unknown error class '" + name + "'");
}

const std::vector<NoiseClass>& all_noise_classes() {
  static const std::vector<NoiseClass> all{NoiseClass::readout, NoiseClass::single_gate,
                                           NoiseClass::two_gate, NoiseClass::state_prep,
                                           NoiseClass::t1, NoiseClass::t2};
  return all;
}

namespace {

void check_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string("noise profile: ") + what + " must lie in [0, 1]");
  }
}

double scale_time(double t, double eps) {
  if (eps >= 1.0 || std::isinf(t)) return kInfinity;
  return t / (1.0 - eps);
}

}  // namespace

void NoiseProfile::validate() const {
  check_prob(sge, "sge");
  check_prob(tge, "tge");
  check_prob(spe, "spe");
  check_prob(me.p01, "me p01");
  check_prob(me.p10, "me p10");
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw std::invalid_argument("noise profile: T1 and T2 must be positive");
  if (!(t2 <= 2.0 * t1)) throw std::invalid_argument("noise profile: T2 must not exceed 2 T1");
  if (!(durations.single_gate > 0.0) || !(durations.two_gate > 0.0) || !(durations.readout > 0.0)) {
    throw std::invalid_argument("noise profile: durations must be positive");
  }
}

bool NoiseProfile::is_noiseless() const {
  return sge == 0.0 && tge == 0.0 && spe == 0.0 && me.is_zero() && std::isinf(t1) && std::isinf(t2);
}

PlatformRanges table_ranges(Platform p) {
  constexpr double us = 1e-6;
  constexpr double ns = 1e-9;
  constexpr double ms = 1e-3;
  switch (p) {
    case Platform::trapped_ion:
      // "min-hr" and "ms-s"
      return {{60.0, 3600.0 * 10}, {ms, 10.0}, {0.0, 0.01}, {0.01, 0.02},
              {0.0, 0.01}, {0.01, 0.02}, {30 * us, 100 * us}};
    case Platform::rydberg:
      return {{10 * us, 1000 * us}, {10 * us, 100 * us}, {0.001, 0.01}, {0.01, 0.05},
              {0.01, 0.05}, {0.01, 0.10}, {1 * us, 10 * us}};
    case Platform::superconducting:
      return {{10 * us, 200 * us}, {10 * us, 300 * us}, {0.0, 0.001}, {0.01, 0.02},
              {0.01, 0.01}, {0.01, 0.05}, {100 * ns, 500 * ns}};
    case Platform::nv_center:
      return {{1 * ms, 10 * ms}, {10 * us, 100 * us}, {0.0, 0.01}, {0.01, 0.05},
              {0.0, 0.01}, {0.01, 0.10}, {1 * us, 10 * us}};
    case Platform::custom: break;
  }
  throw std::invalid_argument("no published ranges for platform " + platform_name(p));
}

NoiseProfile default_profile(Platform p) {
  constexpr double us = 1e-6;
  constexpr double ns = 1e-9;
  NoiseProfile prof;
  prof.platform = p;
  auto me = [](double v) { return ReadoutError{v, v}; };
  switch (p) {
    case Platform::trapped_ion:
      prof.t1 = 600.0;
      prof.t2 = 1.0;
      prof.sge = 0.005;
      prof.tge = 0.015;
      prof.spe = 0.005;
      prof.me = me(0.015);
      prof.durations = {10 * us, 200 * us, 50 * us};
      break;
    case Platform::rydberg:
      prof.t1 = 100 * us;
      prof.t2 = 50 * us;
      prof.sge = 0.005;
      prof.tge = 0.03;
      prof.spe = 0.03;
      prof.me = me(0.05);
      prof.durations = {1 * us, 1 * us, 5 * us};
      break;
    case Platform::superconducting:
      prof.t1 = 100 * us;
      prof.t2 = 100 * us;
      prof.sge = 0.0005;
      prof.tge = 0.015;
      prof.spe = 0.01;
      prof.me = me(0.03);
      prof.durations = {35 * ns, 300 * ns, 300 * ns};
      break;
    case Platform::nv_center:
      prof.t1 = 5e-3;
      prof.t2 = 50 * us;
      prof.sge = 0.005;
      prof.tge = 0.03;
      prof.spe = 0.005;
      prof.me = me(0.05);
      prof.durations = {50 * ns, 1 * us, 5 * us};
      break;
    case Platform::custom:
      return noiseless_profile();
  }
  return prof;
}

NoiseProfile noiseless_profile() { return NoiseProfile{}; }

void NoiseScope::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1], got " + std::to_string(epsilon));
  }
}

bool NoiseScope::class_enabled(NoiseClass c) const {
  return std::find(classes.begin(), classes.end(), c) != classes.end();
}

bool NoiseScope::role_in_scope(Role r) const {
  return roles.empty() || std::find(roles.begin(), roles.end(), r) != roles.end();
}

NoiseProfile scale_profile(const NoiseProfile& profile, const NoiseScope& scope) {
  scope.validate();
  const double eps = scope.epsilon;
  // Classes outside the scope keep their value, or vanish when isolating.
  auto factor = [&](NoiseClass c) { return scope.class_enabled(c) ? eps : (scope.isolate ? 1.0 : 0.0); };
  NoiseProfile out = profile;
  const double me = 1.0 - factor(NoiseClass::readout);
  out.me = {profile.me.p01 * me, profile.me.p10 * me};
  out.sge = profile.sge * (1.0 - factor(NoiseClass::single_gate));
  out.tge = profile.tge * (1.0 - factor(NoiseClass::two_gate));
  out.spe = profile.spe * (1.0 - factor(NoiseClass::state_prep));
  out.t1 = scale_time(profile.t1, factor(NoiseClass::t1));
  out.t2 = scale_time(profile.t2, factor(NoiseClass::t2));
  return out;
}

namespace {

class NoiseInserter {
 public:
  NoiseInserter(const Circuit& ideal, const NoiseProfile& profile, const NoiseScope& scope,
                const NoiseOptions& options)
      : out_(ideal.num_qubits(), ideal.roles()),
        profile_(profile),
        options_(options),
        clock_(ideal.num_qubits(), 0.0),
        in_scope_(ideal.num_qubits(), false) {
    for (int q = 0; q < ideal.num_qubits(); ++q) in_scope_[q] = scope.role_in_scope(ideal.role(q));
    out_.set_external_inputs(ideal.external_inputs());
  }

  Circuit run(const Circuit& ideal) {
    const auto& external = ideal.external_inputs();
    if (profile_.spe > 0.0) {
      for (int q = 0; q < out_.num_qubits(); ++q) {
        if (!in_scope_[q]) continue;
        if (std::find(external.begin(), external.end(), q) != external.end()) continue;
        out_.add_channel(channels::bit_flip(profile_.spe), {q});
      }
    }
    for (const auto& op : ideal.instructions()) {
      if (const auto* g = std::get_if<GateOp>(&op)) {
        gate(g->gate, {});
      } else if (const auto* c = std::get_if<ControlledOp>(&op)) {
        gate(c->gate, c->controls);
      } else if (const auto* m = std::get_if<MeasureOp>(&op)) {
        measure(*m);
      } else {
        throw std::invalid_argument("attach_noise: circuit already contains channels");
      }
    }
    for (const auto& f : ideal.fixups()) out_.add_fixup(f);
    out_.mark_noise_attached();
    return out_;
  }

 private:
  void relax(int q, double t) {
    if (!in_scope_[q] || !(t > 0.0)) return;
    if (std::isinf(profile_.t1) && std::isinf(profile_.t2)) return;
    out_.add_channel(channels::thermal_relaxation(t, profile_.t1, profile_.t2), {q});
  }

  void gate(const Gate& g, const std::vector<int>& controls) {
    const auto& qs = g.qubits;
    double start = 0.0;
    for (int q : qs) start = std::max(start, clock_[q]);
    // Classical control waits for the measurement results.
    for (int q : controls) start = std::max(start, clock_[q]);
    if (options_.idle_relaxation) {
      for (int q : qs) relax(q, start - clock_[q]);
    }

    if (controls.empty()) {
      out_.add(g);
    } else {
      out_.controlled(g, controls);
    }

    double duration;
    if (g.kind == GateKind::delay) {
      duration = g.wall_time;
      if (options_.delay_relaxation) {
        for (int q : qs) relax(q, duration);
      }
    } else {
      const bool single = qs.size() == 1;
      duration = single ? profile_.durations.single_gate : profile_.durations.two_gate;
      const double p = single ? profile_.sge : profile_.tge;
      if (p > 0.0) {
        std::vector<int> scoped;
        for (int q : qs) {
          if (in_scope_[q]) scoped.push_back(q);
        }
        if (scoped.size() == qs.size()) {
          out_.add_channel(channels::depolarizing(p, static_cast<int>(qs.size())), qs);
        } else {
          for (int q : scoped) out_.add_channel(channels::depolarizing(p, 1), {q});
        }
      }
      for (int q : qs) relax(q, duration);
    }
    for (int q : qs) clock_[q] = start + duration;
  }

  void measure(const MeasureOp& m) {
    MeasureOp noisy = m;
    if (in_scope_[m.qubit]) noisy.readout = profile_.me;
    out_.push(noisy);
    clock_[m.qubit] += profile_.durations.readout;
  }

  Circuit out_;
  NoiseProfile profile_;
  NoiseOptions options_;
  std::vector<double> clock_;
  std::vector<bool> in_scope_;
};

}  // namespace

Circuit attach_noise(const Circuit& circuit, const NoiseProfile& profile, const NoiseScope& scope,
                     const NoiseOptions& options) {
  if (circuit.noise_attached() || circuit.has_noise()) {
    throw std::invalid_argument("attach_noise: circuit already carries noise");
  }
  scope.validate();
  circuit.validate();
  NoiseInserter inserter(circuit, profile, scope, options);
  return inserter.run(circuit);
}

}  // namespace stqs
