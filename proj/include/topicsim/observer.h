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

#ifndef TOPICSIM_OBSERVER_H_
#define TOPICSIM_OBSERVER_H_

#include <map>
#include <span>

#include "topicsim/engine.h"
#include "topicsim/types.h"

namespace topicsim {

// Attacker-side accumulation of one site's exposure stream: for each topic,
// the number of epochs it entered the site's view. Only the topic values of
// the draws are consumed; the noise flag is simulation ground truth the
// attacker does not have.
struct ReconstructedProfile {
  std::map<TopicId, int> entry_counts;
  int n_epochs = 0;

  void Add(const ExposedDraw& draw) {
    if (draw.topic != kNoTopic) ++entry_counts[draw.topic];
    ++n_epochs;
  }

  TopicSet Support() const {
    TopicSet support;
    support.reserve(entry_counts.size());
    for (const auto& [topic, count] : entry_counts) support.push_back(topic);
    return support;
  }
};

ReconstructedProfile Accumulate(std::span<const ExposedDraw> draws);

// P[X >= f] for X ~ Binomial(n, p), summed exactly over the upper tail so
// tiny probabilities keep full relative precision.
double BinomialTail(int f, int n, double p);

struct DenoiseParams {
  // A topic whose pure-noise occurrence probability exceeds this target is
  // filtered out of the reconstructed profile.
  double p_star_min = 1e-5;
  // Replacement probability used by the exposure mechanism under attack.
  double noise_p = 0.05;
  int n_topic = 349;
  // The published threshold table has its first step one epoch earlier than
  // exact tail arithmetic implies (31 vs 32). When set, thresholds follow
  // the published table for n_epochs < 276; otherwise they are computed.
  bool published_thresholds = false;
};

// Smallest occurrence count whose pure-noise probability over n_epochs
// epochs is at most p_star_min, with per-epoch noise probability
// noise_p / n_topic. Zero when noise is disabled (no filter needed).
int ComputeFmin(int n_epochs, const DenoiseParams& params);

// Topics appearing at least ComputeFmin(profile.n_epochs) times.
TopicSet Denoise(const ReconstructedProfile& profile,
                 const DenoiseParams& params);

// Profile an observer with direct access to topic histories would build:
// the union of all visited topics, no exposure mechanism in between.
TopicSet BaselineProfile(std::span<const TopicHistory> histories);

}  // namespace topicsim

#endif  // TOPICSIM_OBSERVER_H_
