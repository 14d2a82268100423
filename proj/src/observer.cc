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

#include "topicsim/observer.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace topicsim {

ReconstructedProfile Accumulate(std::span<const ExposedDraw> draws) {
  ReconstructedProfile profile;
  for (const ExposedDraw& draw : draws) profile.Add(draw);
  return profile;
}

double BinomialTail(int f, int n, double p) {
  if (n < 0) throw std::invalid_argument("BinomialTail: n must be >= 0");
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("BinomialTail: p must be in [0, 1]");
  }
  if (f <= 0) return 1.0;
  if (f > n) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  // First upper-tail term in log space, then the term ratio recurrence
  // term(k+1) = term(k) * (n-k)/(k+1) * p/(1-p). Terms are nonnegative, so
  // the sum never cancels.
  double log_first = std::lgamma(n + 1.0) - std::lgamma(f + 1.0) -
                     std::lgamma(n - f + 1.0) + f * std::log(p) +
                     (n - f) * std::log1p(-p);
  double term = std::exp(log_first);
  double sum = term;
  double odds = p / (1.0 - p);
  for (int k = f; k < n; ++k) {
    term *= odds * static_cast<double>(n - k) / static_cast<double>(k + 1);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return std::min(sum, 1.0);
}

namespace {

int PublishedFmin(int n_epochs) {
  return n_epochs <= 30 ? 2 : 3;
}

}  // namespace

int ComputeFmin(int n_epochs, const DenoiseParams& params) {
  if (n_epochs < 0) throw std::invalid_argument("ComputeFmin: n_epochs < 0");
  if (params.n_topic < 1) {
    throw std::invalid_argument("ComputeFmin: n_topic must be >= 1");
  }
  if (!(params.p_star_min > 0.0 && params.p_star_min < 1.0)) {
    throw std::invalid_argument("ComputeFmin: p_star_min must be in (0, 1)");
  }
  // With no random replacement there is nothing to filter.
  if (params.noise_p == 0.0) return 0;

  if (params.published_thresholds && n_epochs >= 1 && n_epochs < 276) {
    return PublishedFmin(n_epochs);
  }

  double p_rnd = params.noise_p / params.n_topic;
  int f = 0;
  while (BinomialTail(f, n_epochs, p_rnd) > params.p_star_min) ++f;
  return f;
}

TopicSet Denoise(const ReconstructedProfile& profile,
                 const DenoiseParams& params) {
  int f_min = ComputeFmin(profile.n_epochs, params);
  TopicSet kept;
  for (const auto& [topic, count] : profile.entry_counts) {
    if (count >= f_min) kept.push_back(topic);
  }
  return kept;
}

TopicSet BaselineProfile(std::span<const TopicHistory> histories) {
  std::set<TopicId> topics;
  for (const TopicHistory& history : histories) {
    for (const TopicCount& tc : history.counts) topics.insert(tc.topic);
  }
  return TopicSet(topics.begin(), topics.end());
}

}  // namespace topicsim
