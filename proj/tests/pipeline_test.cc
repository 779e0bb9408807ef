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
#include <random>

#include <gtest/gtest.h>

#include "stqs/experiments.h"
#include "stqs/pipeline.h"
#include "stqs/simulator.h"

using namespace stqs;

namespace {

double memory_phase(const PipelineSpec& spec) {
  const PipelineLayout layout = pipeline_layout(spec);
  return relative_phase(final_state(build_pipeline(spec)), layout.memory);
}

double wrap(double x) { return std::remainder(x, 2.0 * M_PI); }

}  // namespace

TEST(Pipeline, LayoutPutsMemoryLast) {
  PipelineSpec spec;
  spec.n_sensing = 2;
  spec.steps = {ProbePrep{}, Sensing{Encoding::phase, {0.1, 0.2}}, Storage{}, Delay{0.3}, Retrieval{},
                Sensing{Encoding::phase, {0.1, 0.1}}, Storage{}};
  const PipelineLayout layout = pipeline_layout(spec);
  EXPECT_EQ(layout.num_qubits, 5);
  EXPECT_EQ(layout.memory, 4);
  ASSERT_EQ(layout.blocks.size(), 2u);
  EXPECT_EQ(build_pipeline(spec).role(4), Role::memory);
}

TEST(Pipeline, RejectsSensingBeforePreparation) {
  PipelineSpec spec;
  spec.n_sensing = 2;
  spec.steps = {Sensing{Encoding::phase, {0.1, 0.2}}, Storage{}};
  EXPECT_THROW(build_pipeline(spec), std::invalid_argument);
}

TEST(Pipeline, RejectsWrongAngleCount) {
  PipelineSpec spec;
  spec.n_sensing = 3;
  spec.steps = {ProbePrep{}, Sensing{Encoding::phase, {0.1, 0.2}}, Storage{}};
  EXPECT_THROW(build_pipeline(spec), std::invalid_argument);
}

TEST(Pipeline, SingleStepStoresSummedPhase) {
  PipelineSpec spec;
  spec.n_sensing = 3;
  spec.steps = {ProbePrep{}, Sensing{Encoding::phase, {0.1, 0.25, 0.05}}, Storage{Correction::physical_z}};
  EXPECT_NEAR(wrap(memory_phase(spec) - 0.4), 0.0, 1e-10);
}

TEST(Pipeline, PhasesAddAcrossSteps) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int t = 0; t < 10; ++t) {
    const double a = u(rng), b = u(rng), tau = u(rng);
    PipelineSpec spec;
    spec.n_sensing = 3;
    spec.steps = {ProbePrep{}, Sensing{Encoding::phase, {a, 0.0, 0.0}}, Storage{Correction::physical_z},
                  Delay{tau}, Retrieval{}, Sensing{Encoding::phase, {0.0, b, 0.0}},
                  Storage{Correction::physical_z}};
    EXPECT_NEAR(wrap(memory_phase(spec) - (a + b + tau)), 0.0, 1e-9);
  }
}

TEST(Pipeline, DelayRateScalesPhase) {
  PipelineSpec spec;
  spec.n_sensing = 1;
  spec.steps = {ProbePrep{}, Sensing{Encoding::phase, {0.2}}, Storage{Correction::physical_z},
                Delay{0.3, 2.0}};
  EXPECT_NEAR(wrap(memory_phase(spec) - 0.8), 0.0, 1e-10);
}

TEST(Pipeline, PostProcessingMatchesPhysicalCorrection) {
  // Same readout statistics whether the parity is fixed by Z or classically.
  for (Correction corr : {Correction::physical_z, Correction::post_processing}) {
    const Circuit c = radar_circuit(2, 2, 0.5, 0.2, corr);
    const auto dist = exact_distribution(c);
    const auto memory_pos = c.measured_qubits().size() - 1;
    double p_plus = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (!((i >> memory_pos) & 1u)) p_plus += dist[i];
    }
    EXPECT_NEAR(p_plus, std::pow(std::cos(2 * (0.5 - 0.2) / 2.0), 2), 1e-12) << correction_name(corr);
  }
}

TEST(Pipeline, RadarMemoryPhaseMatchesOracle) {
  // 3 soil sensors at 0.9 and 3 free sensors at 0.1: memory phase 3 * 0.8.
  PipelineSpec spec;
  spec.n_sensing = 6;
  spec.steps = {ProbePrep{{3}}, Sensing{Encoding::phase, {0.9, 0.9, 0.9, 0.1, 0.1, 0.1}},
                Storage{Correction::physical_z}};
  EXPECT_NEAR(wrap(memory_phase(spec) - 2.4), 0.0, 1e-10);
}

TEST(Pipeline, AssembleSkipsNoiselessProfile) {
  PipelineSpec spec;
  spec.n_sensing = 2;
  spec.steps = {ProbePrep{}, Sensing{Encoding::phase, {0.1, 0.2}}, Storage{}, Processing{}};
  NoiseScope s;
  s.epsilon = 1.0;
  EXPECT_FALSE(assemble(spec, default_profile(Platform::rydberg), s).has_noise());
  s.epsilon = 0.0;
  EXPECT_TRUE(assemble(spec, default_profile(Platform::rydberg), s).has_noise());
}
