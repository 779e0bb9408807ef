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

#ifndef STQS_NOISE_H
#define STQS_NOISE_H

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "stqs/circuit.h"
#include "stqs/measurement.h"
#include "stqs/state.h"

namespace stqs {

enum class Platform { trapped_ion, rydberg, superconducting, nv_center, custom };

std::string platform_name(Platform p);
Platform parse_platform(const std::string& name);
const std::vector<Platform>& table_platforms();

enum class NoiseClass { readout, single_gate, two_gate, state_prep, t1, t2 };

std::string noise_class_name(NoiseClass c);
NoiseClass parse_noise_class(const std::string& name);
const std::vector<NoiseClass>& all_noise_classes();

/// Seconds.
struct Durations {
  double single_gate = 0.0;
  double two_gate = 0.0;
  double readout = 0.0;
  bool operator==(const Durations&) const = default;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct NoiseProfile {
  Platform platform = Platform::custom;
  double t1 = kInfinity;  // seconds
  double t2 = kInfinity;  // seconds
  double sge = 0.0;
  double tge = 0.0;
  double spe = 0.0;
  ReadoutError me;
  Durations durations{1e-9, 1e-9, 1e-9};

  /// Probabilities in [0, 1], positive durations and times, T2 <= 2 T1.
  void validate() const;
  bool is_noiseless() const;
  bool operator==(const NoiseProfile&) const = default;
};

/// Published parameter ranges of a platform (lower, upper), used to check
/// that shipped defaults are in range.
struct PlatformRanges {
  std::pair<double, double> t1, t2, sge, tge, spe, me, readout;
};
PlatformRanges table_ranges(Platform p);

NoiseProfile default_profile(Platform p);
NoiseProfile noiseless_profile();

struct NoiseScope {
  double epsilon = 0.0;
  std::vector<NoiseClass> classes = all_noise_classes();  // classes epsilon acts on
  std::vector<Role> roles;                                // empty = every role
  bool isolate = false;  // classes outside `classes` are switched off entirely

  void validate() const;
  bool class_enabled(NoiseClass c) const;
  bool role_in_scope(Role r) const;
  bool operator==(const NoiseScope&) const = default;
};

struct NoiseOptions {
  bool idle_relaxation = true;   // relax qubits while they wait for others
  bool delay_relaxation = true;  // relax during Delay gates over their wall time
  bool operator==(const NoiseOptions&) const = default;
};

/// p -> (1 - eps) p and T -> T / (1 - eps) for the enabled classes; the
/// other classes are kept, or removed when the scope isolates.
/// The result may violate T2 <= 2 T1 when only one of them is scaled.
NoiseProfile scale_profile(const NoiseProfile& profile, const NoiseScope& scope);

/// Inserts noise channels into an ideal circuit (see README for the policy).
/// Only qubits whose role is in `scope.roles` receive noise; the profile is
/// used as given (scale it first). Throws if the circuit is already noisy.
Circuit attach_noise(const Circuit& circuit, const NoiseProfile& profile, const NoiseScope& scope,
                     const NoiseOptions& options = {});

}  // namespace stqs

#endif  // STQS_NOISE_H
