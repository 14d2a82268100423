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

#ifndef TOPICSIM_POPULATION_H_
#define TOPICSIM_POPULATION_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "topicsim/rng.h"
#include "topicsim/trace_stats.h"
#include "topicsim/types.h"

namespace topicsim {

enum class ModelKind { kReal, kIid, kCrossover };

std::string ModelKindName(ModelKind kind);
std::optional<ModelKind> ParseModelKind(std::string_view name);

struct PopulationModel {
  ModelKind kind = ModelKind::kIid;
  int size = 1;
  std::uint64_t seed = 0;
};

// Trace-driven population: the persona pool itself, order preserved.
Population RealPopulation(const Population& pool);

// Draws one persona from the marginals: a topic count from the
// topics-per-user ECDF by inverse transform, that many distinct topics from
// the normalized popularity distribution (redrawing duplicates), and the
// population average rate for each chosen topic.
RateVector IidPersona(const EmpiricalMarginals& marginals, Rng& rng);

// Mask-mixes two parents: the child takes p0's rate where the mask is true
// and p1's rate elsewhere.
RateVector Crossover(Eigen::Ref<const RateVector> p0,
                     Eigen::Ref<const RateVector> p1, const BoolMask& mask);

// Picks two distinct parents uniformly and mixes them with a fair-coin mask
// over the whole topic universe.
RateVector CrossoverPersona(const Population& pool, Rng& rng);

// Builds a population of model.size personas. Iid and crossover personas
// are generated on per-index substreams of model.seed, so the result is
// identical no matter how many workers run the loop.
Population GeneratePopulation(const PopulationModel& model,
                              const EmpiricalMarginals* marginals,
                              const Population* pool);

// `persona_id,topic_id,rate` CSV with only nonzero rates, for audit and
// replay of generated populations.
void WritePopulationCsv(const Population& personas, std::ostream& out);
Population ReadPopulationCsv(std::istream& in, int n_topic);
Population ReadPopulationCsvFile(const std::string& path, int n_topic);

}  // namespace topicsim

#endif  // TOPICSIM_POPULATION_H_
