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

#include "topicsim/population.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "topicsim/csv.h"
#include "topicsim/parallel.h"

namespace topicsim {

std::string ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kReal:
      return "real";
    case ModelKind::kIid:
      return "iid";
    case ModelKind::kCrossover:
      return "crossover";
  }
  return "unknown";
}

std::optional<ModelKind> ParseModelKind(std::string_view name) {
  if (name == "real") return ModelKind::kReal;
  if (name == "iid") return ModelKind::kIid;
  if (name == "crossover") return ModelKind::kCrossover;
  return std::nullopt;
}

Population RealPopulation(const Population& pool) {
  if (pool.cols() == 0) throw std::invalid_argument("empty persona pool");
  return pool;
}

RateVector IidPersona(const EmpiricalMarginals& marginals, Rng& rng) {
  const int n_topic = marginals.n_topic;

  // Cumulative popularity over topics with positive popularity, normalized
  // to sum 1, so a uniform draw inverts to a topic index.
  std::vector<TopicId> active;
  std::vector<double> cum;
  double total = 0.0;
  for (TopicId t = 0; t < n_topic; ++t) {
    double pop = marginals.popularity[t];
    if (pop > 0.0) {
      total += pop;
      active.push_back(t);
      cum.push_back(total);
    }
  }
  if (active.empty()) {
    throw std::invalid_argument("marginals have no topic with popularity > 0");
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int topic_count = marginals.topics_per_user.Quantile(unit(rng));
  if (topic_count > static_cast<int>(active.size())) {
    throw std::runtime_error("marginals too narrow");
  }

  RateVector rates = RateVector::Zero(n_topic);
  int chosen = 0;
  while (chosen < topic_count) {
    double u = unit(rng) * total;
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    TopicId topic = active[static_cast<std::size_t>(it - cum.begin())];
    if (rates[topic] > 0.0) continue;  // redraw duplicates
    rates[topic] = marginals.avg_rate[topic];
    ++chosen;
  }
  return rates;
}

RateVector Crossover(Eigen::Ref<const RateVector> p0,
                     Eigen::Ref<const RateVector> p1, const BoolMask& mask) {
  if (p0.size() != p1.size() || mask.size() != p0.size()) {
    throw std::invalid_argument("crossover: mismatched vector sizes");
  }
  return mask.select(p0.array(), p1.array());
}

RateVector CrossoverPersona(const Population& pool, Rng& rng) {
  const Eigen::Index n = pool.cols();
  if (n < 2) {
    throw std::invalid_argument("crossover requires a pool of >= 2 personas");
  }
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  Eigen::Index first = pick(rng);
  Eigen::Index second = first;
  while (second == first) second = pick(rng);

  BoolMask mask(pool.rows());
  std::bernoulli_distribution coin(0.5);
  for (Eigen::Index t = 0; t < mask.size(); ++t) mask[t] = coin(rng);
  return Crossover(pool.col(first), pool.col(second), mask);
}

Population GeneratePopulation(const PopulationModel& model,
                              const EmpiricalMarginals* marginals,
                              const Population* pool) {
  if (model.size < 1) {
    throw std::invalid_argument("population size must be >= 1");
  }
  switch (model.kind) {
    case ModelKind::kReal: {
      if (pool == nullptr) {
        throw std::invalid_argument("real model requires a persona pool");
      }
      if (model.size != pool->cols()) {
        throw std::invalid_argument(
            "real model size must equal the pool size");
      }
      return RealPopulation(*pool);
    }
    case ModelKind::kIid: {
      if (marginals == nullptr) {
        throw std::invalid_argument("iid model requires marginals");
      }
      Population personas(marginals->n_topic, model.size);
      ParallelFor(static_cast<std::size_t>(model.size), [&](std::size_t u) {
        Rng rng = MakeRng(model.seed, {streams::kPopulation, u});
        personas.col(static_cast<Eigen::Index>(u)) =
            IidPersona(*marginals, rng);
      });
      return personas;
    }
    case ModelKind::kCrossover: {
      if (pool == nullptr) {
        throw std::invalid_argument("crossover model requires a parent pool");
      }
      if (pool->cols() < 2) {
        throw std::invalid_argument(
            "crossover model requires a pool of >= 2 personas");
      }
      Population personas(pool->rows(), model.size);
      ParallelFor(static_cast<std::size_t>(model.size), [&](std::size_t u) {
        Rng rng = MakeRng(model.seed, {streams::kPopulation, u});
        personas.col(static_cast<Eigen::Index>(u)) =
            CrossoverPersona(*pool, rng);
      });
      return personas;
    }
  }
  throw std::invalid_argument("unknown population model");
}

void WritePopulationCsv(const Population& personas, std::ostream& out) {
  out << "persona_id,topic_id,rate\n";
  for (Eigen::Index u = 0; u < personas.cols(); ++u) {
    for (Eigen::Index t = 0; t < personas.rows(); ++t) {
      double rate = personas(t, u);
      if (rate > 0.0) {
        out << u << "," << t << "," << FormatDouble(rate, 17) << "\n";
      }
    }
  }
}

Population ReadPopulationCsv(std::istream& in, int n_topic) {
  struct Entry {
    std::int64_t persona;
    TopicId topic;
    double rate;
  };
  std::vector<Entry> entries;
  std::int64_t max_persona = -1;

  std::string line;
  bool header = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (header) {
      header = false;
      continue;
    }
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = SplitCsvLine(line);
    if (fields.size() != 3) {
      throw std::runtime_error("population csv: malformed row at line " +
                               std::to_string(line_no));
    }
    std::optional<std::int64_t> persona = ParseInt64(fields[0]);
    std::optional<std::int64_t> topic = ParseInt64(fields[1]);
    std::optional<double> rate = ParseDouble(fields[2]);
    if (!persona || *persona < 0 || !topic || *topic < 0 ||
        *topic >= n_topic || !rate || !(*rate > 0.0)) {
      throw std::runtime_error("population csv: invalid row at line " +
                               std::to_string(line_no));
    }
    entries.push_back({*persona, static_cast<TopicId>(*topic), *rate});
    max_persona = std::max(max_persona, *persona);
  }
  if (max_persona < 0) throw std::runtime_error("population csv: no personas");

  Population personas = Population::Zero(n_topic, max_persona + 1);
  for (const Entry& e : entries) personas(e.topic, e.persona) = e.rate;
  return personas;
}

Population ReadPopulationCsvFile(const std::string& path, int n_topic) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open population file: " + path);
  return ReadPopulationCsv(in, n_topic);
}

}  // namespace topicsim
