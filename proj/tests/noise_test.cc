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

#include <cmath>

#include <gtest/gtest.h>

#include "stqs/noise.h"
#include "stqs/simulator.h"

using namespace stqs;

namespace {

int count_channels(const Circuit& c, int qubit) {
  int n = 0;
  for (const auto& op : c.instructions()) {
    if (const auto* ch = std::get_if<ChannelOp>(&op)) {
      for (int q : ch->qubits) n += q == qubit;
    }
  }
  return n;
}

bool in_range(double v, std::pair<double, double> r) { return v >= r.first && v <= r.second; }

}  // namespace

TEST(Profiles, DefaultsSitInsideTableRanges) {
  for (Platform p : table_platforms()) {
    const NoiseProfile prof = default_profile(p);
    const PlatformRanges r = table_ranges(p);
    EXPECT_NO_THROW(prof.validate()) << platform_name(p);
    EXPECT_TRUE(in_range(prof.t1, r.t1)) << platform_name(p);
    EXPECT_TRUE(in_range(prof.t2, r.t2)) << platform_name(p);
    EXPECT_TRUE(in_range(prof.sge, r.sge)) << platform_name(p);
    EXPECT_TRUE(in_range(prof.tge, r.tge)) << platform_name(p);
    EXPECT_TRUE(in_range(prof.spe, r.spe)) << platform_name(p);
    EXPECT_TRUE(in_range(prof.me.p01, r.me)) << platform_name(p);
    EXPECT_TRUE(in_range(prof.durations.readout, r.readout)) << platform_name(p);
    EXPECT_LE(prof.t2, 2.0 * prof.t1);
  }
}

TEST(Profiles, ValidateRejectsBadValues) {
  NoiseProfile p = default_profile(Platform::rydberg);
  p.t2 = 3.0 * p.t1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = default_profile(Platform::rydberg);
  p.sge = 1.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Profiles, NamesRoundTrip) {
  for (Platform p : table_platforms()) EXPECT_EQ(parse_platform(platform_name(p)), p);
  for (NoiseClass c : all_noise_classes()) EXPECT_EQ(parse_noise_class(noise_class_name(c)), c);
  EXPECT_THROW(parse_platform("quantum_dot"), std::invalid_argument);
}

TEST(Scaling, EpsilonEndpoints) {
  const NoiseProfile p = default_profile(Platform::superconducting);
  NoiseScope s;
  s.epsilon = 0.0;
  EXPECT_EQ(scale_profile(p, s), p);
  s.epsilon = 1.0;
  EXPECT_TRUE(scale_profile(p, s).is_noiseless());
  s.epsilon = 0.25;
  const NoiseProfile q = scale_profile(p, s);
  EXPECT_DOUBLE_EQ(q.tge, p.tge * 0.75);
  EXPECT_DOUBLE_EQ(q.t1, p.t1 / 0.75);
  s.epsilon = 1.3;
  EXPECT_THROW(scale_profile(p, s), std::invalid_argument);
}

TEST(Scaling, OnlySelectedClassesMove) {
  const NoiseProfile p = default_profile(Platform::rydberg);
  NoiseScope s;
  s.epsilon = 1.0;
  s.classes = {NoiseClass::readout};
  const NoiseProfile q = scale_profile(p, s);
  EXPECT_TRUE(q.me.is_zero());
  EXPECT_EQ(q.sge, p.sge);
  EXPECT_EQ(q.t1, p.t1);
}

TEST(Scaling, IsolateRemovesOtherClasses) {
  const NoiseProfile p = default_profile(Platform::rydberg);
  NoiseScope s;
  s.epsilon = 0.5;
  s.classes = {NoiseClass::two_gate};
  s.isolate = true;
  const NoiseProfile q = scale_profile(p, s);
  EXPECT_DOUBLE_EQ(q.tge, p.tge * 0.5);
  EXPECT_EQ(q.sge, 0.0);
  EXPECT_TRUE(q.me.is_zero());
  EXPECT_TRUE(std::isinf(q.t1));
  EXPECT_TRUE(std::isinf(q.t2));
}

TEST(Attach, NoiselessProfileAddsNoChannels) {
  Circuit c(2);
  c.add(gates::h(0)).add(gates::cnot(0, 1));
  c.measure(0).measure(1);
  const Circuit out = attach_noise(c, noiseless_profile(), NoiseScope{});
  EXPECT_FALSE(out.has_noise());
  EXPECT_EQ(exact_distribution(out), exact_distribution(c));
}

TEST(Attach, RejectsDoubleAttachment) {
  Circuit c(1);
  c.add(gates::h(0));
  c.measure(0);
  const NoiseProfile p = default_profile(Platform::superconducting);
  const Circuit once = attach_noise(c, p, NoiseScope{});
  EXPECT_THROW(attach_noise(once, p, NoiseScope{}), std::invalid_argument);
}

TEST(Attach, RoleFilterLeavesOtherQubitsClean) {
  Circuit c(2, {Role::sensing, Role::memory});
  c.add(gates::h(0)).add(gates::cnot(0, 1)).add(gates::h(1));
  c.measure(0).measure(1);
  NoiseScope s;
  s.roles = {Role::memory};
  const Circuit out = attach_noise(c, default_profile(Platform::rydberg), s);
  EXPECT_EQ(count_channels(out, 0), 0);
  EXPECT_GT(count_channels(out, 1), 0);
}

TEST(Attach, ReadoutErrorIsFolded) {
  Circuit c(1);
  c.measure(0);
  NoiseProfile p = noiseless_profile();
  p.me = {0.1, 0.2};
  const auto dist = exact_distribution(attach_noise(c, p, NoiseScope{}));
  EXPECT_NEAR(dist[1], 0.1, 1e-12);
}

TEST(Attach, StatePrepErrorFlipsInitialQubit) {
  Circuit c(1);
  c.measure(0);
  NoiseProfile p = noiseless_profile();
  p.spe = 0.04;
  const auto dist = exact_distribution(attach_noise(c, p, NoiseScope{}));
  EXPECT_NEAR(dist[1], 0.04, 1e-12);
}

TEST(Attach, IdleQubitRelaxesWhileOthersWork) {
  // Qubit 1 is excited, then waits through ten gates on qubit 0 before a CNOT
  // that depends on both (ASAP scheduling cannot pull it forward). Only qubit 1 is noisy.
  Circuit c(2, {Role::sensing, Role::memory});
  c.add(gates::x(1));
  for (int i = 0; i < 10; ++i) c.add(gates::x(0));
  c.add(gates::cnot(0, 1));
  c.measure(0).measure(1);
  NoiseProfile p = noiseless_profile();
  p.t1 = 1e-5;
  p.t2 = 1e-5;
  p.durations = {1e-6, 1e-6, 1e-6};
  NoiseScope scope;
  scope.roles = {Role::memory};
  const auto dist = exact_distribution(attach_noise(c, p, scope));
  // Excited for its own X, nine idle slots and the CNOT.
  const double survived = std::exp(-11e-6 / 1e-5);
  EXPECT_NEAR(dist[2], survived, 0.02);
  NoiseOptions off;
  off.idle_relaxation = false;
  const auto quiet = exact_distribution(attach_noise(c, p, scope, off));
  EXPECT_GT(quiet[2], dist[2]);
}

TEST(Attach, MoreNoiseMeansWorseFidelity) {
  Circuit c(3);
  c.add(gates::h(0)).add(gates::cnot(0, 1)).add(gates::cnot(1, 2));
  c.add(gates::cnot(1, 2)).add(gates::cnot(0, 1)).add(gates::h(0));
  for (int q = 0; q < 3; ++q) c.measure(q);
  double last = -1.0;
  for (double eps : {0.0, 0.5, 0.9, 1.0}) {
    NoiseScope s;
    s.epsilon = eps;
    const NoiseProfile p = scale_profile(default_profile(Platform::rydberg), s);
    const double p000 = exact_distribution(p.is_noiseless() ? c : attach_noise(c, p, s))[0];
    EXPECT_GT(p000, last);
    last = p000;
  }
  EXPECT_NEAR(last, 1.0, 1e-12);
}
