// Copyright 2026 The topicsim Authors
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

#ifndef TOPICSIM_ENGINE_H_
#define TOPICSIM_ENGINE_H_

#include <vector>

#include <Eigen/Dense>

#include "topicsim/rng.h"
#include "topicsim/types.h"

namespace topicsim {

// Browser-side parameters of the exposure mechanism.
struct EngineParams {
  // Top topics retained per epoch when building the per-epoch profile.
  int top_z = 5;
  // Number of past epochs an exposed profile spans. The accumulated
  // one-new-topic-per-epoch stream simulated here does not depend on it; a
  // continuously present observer recovers each epoch's new topic by
  // subtracting consecutive exposed profiles.
  int profile_window = 3;
  // Probability that the exposed topic is replaced by one drawn uniformly
  // from the whole taxonomy.
  double noise_p = 0.05;
  // Epoch length in weeks; rates are per week.
  double epoch_weeks = 1.0;
  int n_topic = 349;
  // When true, an epoch with an empty profile exposes a uniformly random
  // topic instead of nothing.
  bool pad_random = false;
};

// The per-epoch profile: the top_z most visited topics, sorted ascending.
struct EpochProfile {
  TopicSet topics;
};

// One per-site, per-epoch exposure. `is_random` is simulation ground truth
// for validation only; attacker-side code must never branch on it.
struct ExposedDraw {
  TopicId topic = kNoTopic;
  bool is_random = false;

  friend bool operator==(const ExposedDraw&, const ExposedDraw&) = default;
};

// Draws per-topic visit counts for one epoch: independent Poisson variables
// with mean rate * epoch_weeks. Topics with zero sampled visits are omitted.
TopicHistory SampleEpochVisits(Eigen::Ref<const RateVector> rates,
                               const EngineParams& params, Rng& rng);

// Keeps the top_z topics by visit count. Ties at the boundary rank are
// broken uniformly at random so low topic ids gain no systematic advantage.
EpochProfile TopZProfile(const TopicHistory& history,
                         const EngineParams& params, Rng& rng);

// One per-site exposure from the epoch profile: with probability noise_p a
// uniform topic from the taxonomy, otherwise a uniform pick from the
// profile (kNoTopic if the profile is empty and padding is off).
ExposedDraw DrawExposedTopic(const EpochProfile& profile,
                             const EngineParams& params, Rng& rng);

// The draw stream one site observes for one persona, one entry per epoch.
struct SiteLog {
  std::vector<ExposedDraw> draws;
};

// Simulates one persona over n_epochs epochs observed by n_sites sites.
// Each epoch samples one shared visit history and one shared profile; each
// site then receives an independent exposure from that profile.
std::vector<SiteLog> RunPersona(Eigen::Ref<const RateVector> rates,
                                int n_epochs, int n_sites,
                                const EngineParams& params, Rng& rng);

}  // namespace topicsim

#endif  // TOPICSIM_ENGINE_H_
