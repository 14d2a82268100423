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

#include "topicsim/engine.h"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace topicsim {

namespace {

// Shared by SampleEpochVisits and RunPersona so both paths sample
// identically: iterate the support in topic order, one Poisson draw each.
void SampleVisitsInto(const std::vector<TopicId>& support,
                      std::vector<std::poisson_distribution<std::int64_t>>& dists,
                      Rng& rng, TopicHistory& out) {
  out.counts.clear();
  for (std::size_t i = 0; i < support.size(); ++i) {
    std::int64_t count = dists[i](rng);
    if (count > 0) out.counts.push_back({support[i], count});
  }
}

void SupportOf(Eigen::Ref<const RateVector> rates, double epoch_weeks,
               std::vector<TopicId>& support,
               std::vector<std::poisson_distribution<std::int64_t>>& dists) {
  support.clear();
  dists.clear();
  for (Eigen::Index t = 0; t < rates.size(); ++t) {
    double rate = rates[t];
    if (rate < 0.0) throw std::invalid_argument("negative visit rate");
    double mean = rate * epoch_weeks;
    if (mean > 0.0) {
      support.push_back(static_cast<TopicId>(t));
      dists.emplace_back(mean);
    }
  }
}

void TopZInto(const TopicHistory& history, int top_z, Rng& rng,
              EpochProfile& profile) {
  profile.topics.clear();
  const std::size_t m = history.counts.size();
  const std::size_t z = static_cast<std::size_t>(top_z);
  if (m <= z) {
    for (const TopicCount& tc : history.counts) {
      profile.topics.push_back(tc.topic);
    }
    std::sort(profile.topics.begin(), profile.topics.end());
    return;
  }

  std::vector<TopicCount> ranked = history.counts;
  std::sort(ranked.begin(), ranked.end(),
            [](const TopicCount& a, const TopicCount& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.topic < b.topic;
            });

  // Everything strictly above the boundary count is in; the remaining slots
  // are filled uniformly at random from the topics tied at the boundary.
  const std::int64_t boundary = ranked[z - 1].count;
  std::size_t first_tied = 0;
  while (ranked[first_tied].count > boundary) ++first_tied;
  std::size_t last_tied = first_tied;
  while (last_tied + 1 < m && ranked[last_tied + 1].count == boundary) {
    ++last_tied;
  }

  for (std::size_t i = 0; i < first_tied; ++i) {
    profile.topics.push_back(ranked[i].topic);
  }
  std::size_t slots = z - first_tied;
  std::size_t tied = last_tied - first_tied + 1;
  if (slots == tied) {
    for (std::size_t i = first_tied; i <= last_tied; ++i) {
      profile.topics.push_back(ranked[i].topic);
    }
  } else {
    // Partial Fisher-Yates over the tied block.
    for (std::size_t s = 0; s < slots; ++s) {
      std::uniform_int_distribution<std::size_t> pick(first_tied + s,
                                                      last_tied);
      std::swap(ranked[first_tied + s], ranked[pick(rng)]);
      profile.topics.push_back(ranked[first_tied + s].topic);
    }
  }
  std::sort(profile.topics.begin(), profile.topics.end());
}

}  // namespace

TopicHistory SampleEpochVisits(Eigen::Ref<const RateVector> rates,
                               const EngineParams& params, Rng& rng) {
  std::vector<TopicId> support;
  std::vector<std::poisson_distribution<std::int64_t>> dists;
  SupportOf(rates, params.epoch_weeks, support, dists);
  TopicHistory history;
  history.counts.reserve(support.size());
  SampleVisitsInto(support, dists, rng, history);
  return history;
}

EpochProfile TopZProfile(const TopicHistory& history,
                         const EngineParams& params, Rng& rng) {
  if (params.top_z < 1) throw std::invalid_argument("top_z must be >= 1");
  EpochProfile profile;
  TopZInto(history, params.top_z, rng, profile);
  return profile;
}

ExposedDraw DrawExposedTopic(const EpochProfile& profile,
                             const EngineParams& params, Rng& rng) {
  std::bernoulli_distribution noisy(params.noise_p);
  std::uniform_int_distribution<TopicId> any_topic(
      0, static_cast<TopicId>(params.n_topic - 1));
  if (noisy(rng)) {
    return {any_topic(rng), true};
  }
  if (profile.topics.empty()) {
    if (params.pad_random) return {any_topic(rng), true};
    return {kNoTopic, false};
  }
  std::uniform_int_distribution<std::size_t> pick(0,
                                                  profile.topics.size() - 1);
  return {profile.topics[pick(rng)], false};
}

std::vector<SiteLog> RunPersona(Eigen::Ref<const RateVector> rates,
                                int n_epochs, int n_sites,
                                const EngineParams& params, Rng& rng) {
  if (n_sites < 1) throw std::invalid_argument("n_sites must be >= 1");
  if (n_epochs < 0) throw std::invalid_argument("n_epochs must be >= 0");

  std::vector<TopicId> support;
  std::vector<std::poisson_distribution<std::int64_t>> dists;
  SupportOf(rates, params.epoch_weeks, support, dists);

  std::vector<SiteLog> logs(static_cast<std::size_t>(n_sites));
  for (SiteLog& log : logs) {
    log.draws.reserve(static_cast<std::size_t>(n_epochs));
  }

  TopicHistory history;
  history.counts.reserve(support.size());
  EpochProfile profile;
  for (int e = 0; e < n_epochs; ++e) {
    SampleVisitsInto(support, dists, rng, history);
    TopZInto(history, params.top_z, rng, profile);
    for (SiteLog& log : logs) {
      log.draws.push_back(DrawExposedTopic(profile, params, rng));
    }
  }
  return logs;
}

}  // namespace topicsim
