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

#ifndef TOPICSIM_ANALYSIS_H_
#define TOPICSIM_ANALYSIS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "topicsim/engine.h"
#include "topicsim/observer.h"
#include "topicsim/types.h"

namespace topicsim {

// Fraction of personas whose profile is shared by at least k personas in
// total (themselves included), under exact set equality.
double KAnonymity(std::span<const TopicSet> profiles, int k);

// KAnonymity for every k in [1, k_max], grouping only once.
std::vector<double> KAnonymityCurve(std::span<const TopicSet> profiles,
                                    int k_max);

struct AnonymityReport {
  std::vector<double> prob_k;  // index k-1 holds Prob(k-anon)
  int population = 0;
  int n_epochs = 0;
  int runs = 1;
  std::string model;
};

// Exposure streams of a whole population: streams[persona][site] is the
// per-epoch draw log of one site.
struct SimulatedDraws {
  int n_epochs = 0;
  int n_sites = 0;
  std::vector<std::vector<SiteLog>> streams;
};

// Simulates every persona once over n_epochs epochs and n_sites sites using
// a per-persona substream of (seed, tag), so results do not depend on how
// personas are scheduled across workers.
SimulatedDraws SimulatePopulationDraws(const Population& personas,
                                       int n_epochs, int n_sites,
                                       const EngineParams& params,
                                       std::uint64_t seed, std::uint64_t tag);

// Denoised (or raw-support, when denoised=false) profiles of one site after
// the first n_epochs draws.
std::vector<TopicSet> ProfilesAtEpoch(const SimulatedDraws& draws, int site,
                                      int n_epochs,
                                      const DenoiseParams& params,
                                      bool denoised = true);

// Prob(k-anon) on site 0 profiles at each requested epoch count. Epoch
// counts must be ascending; profiles are accumulated incrementally.
std::vector<double> AnonSeries(const SimulatedDraws& draws,
                               std::span<const int> eval_epochs,
                               const DenoiseParams& params, int k);

struct ReidentReport {
  double tp_rate = 0.0;  // victim unique on site A, exactly one match on
                         // site B, and the match is the victim
  double fp_rate = 0.0;  // as above but the single match is someone else
  double p1 = 0.0;       // fraction of victims unique on site A
  double p2 = 0.0;       // fraction with equal profiles on both sites
  int n_epochs = 0;
  int population = 0;
};

// Cross-site matching on already-built per-site profiles (index-aligned).
ReidentReport MatchCrossSite(std::span<const TopicSet> site_a,
                             std::span<const TopicSet> site_b);

// Reports for each requested epoch count, from one two-site simulation.
std::vector<ReidentReport> ReidentSeries(const SimulatedDraws& draws,
                                         std::span<const int> eval_epochs,
                                         const DenoiseParams& params,
                                         bool denoised);

// Full two-website experiment: every persona doubles as the victim; shared
// browsing history per persona, independent per-site exposure and noise.
ReidentReport ReidentExperiment(const Population& personas, int n_epochs,
                                const EngineParams& engine,
                                const DenoiseParams& denoise,
                                std::uint64_t seed, std::uint64_t tag = 0);

// Same pipeline with matching on raw accumulated supports instead of the
// denoised profiles.
ReidentReport ReidentWithoutDenoise(const Population& personas, int n_epochs,
                                    const EngineParams& engine,
                                    const DenoiseParams& denoise,
                                    std::uint64_t seed, std::uint64_t tag = 0);

// Prob(k-anon) without any exposure mechanism: profiles are unions of the
// visited-topic sets over the first n epochs, for each requested n.
std::vector<double> BaselineAnonSeries(const Population& personas,
                                       std::span<const int> eval_epochs,
                                       const EngineParams& params, int k,
                                       std::uint64_t seed, std::uint64_t tag);

}  // namespace topicsim

#endif  // TOPICSIM_ANALYSIS_H_
