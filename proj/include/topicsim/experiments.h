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

#ifndef TOPICSIM_EXPERIMENTS_H_
#define TOPICSIM_EXPERIMENTS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topicsim/analysis.h"
#include "topicsim/population.h"
#include "topicsim/trace_stats.h"

namespace topicsim {

enum class ExperimentKind {
  kAnonVsN,          // Prob(k-anon) across observation epochs
  kAnonVsSize,       // Prob(k-anon) across population sizes
  kKCurve,           // Prob(k-anon) across k at a fixed point
  kPSweep,           // Prob(k-anon) across replacement probabilities
  kReident,          // two-website re-identification, denoised matching
  kReidentNofilter,  // two-website re-identification, raw-support matching
  kBaselineNoApi,    // profiles straight from topic histories
};

std::string ExperimentKindName(ExperimentKind kind);
std::optional<ExperimentKind> ParseExperimentKind(std::string_view name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kAnonVsN;
  ModelKind model = ModelKind::kIid;
  int size = 268;
  std::vector<int> sizes;          // anon_vs_size grid
  int epochs_min = 1;
  int epochs_max = 25;             // single-point experiments use the max
  double noise_p = 0.05;
  std::vector<double> p_values;    // p_sweep grid
  int k = 2;
  int k_max = 10;
  int top_z = 5;
  int profile_window = 3;
  int n_topic = 349;
  bool pad_random = false;
  double p_star_min = 1e-5;
  bool published_thresholds = false;
  int runs = 10;
  std::uint64_t seed = 1;
  int crossover_pool = 268;        // parents drawn from marginals when no pool
  std::string out_dir;
  std::optional<std::string> debug_draws_path;

  // Resolved inputs. When neither is present, iid and crossover models run
  // from default synthetic marginals.
  std::optional<EmpiricalMarginals> marginals;
  std::optional<Population> pool;

  EngineParams Engine(double p) const {
    return {top_z, profile_window, p, 1.0, n_topic, pad_random};
  }
  DenoiseParams Denoiser(double p) const {
    return {p_star_min, p, n_topic, published_thresholds};
  }
};

// One averaged measurement. `k` is empty for re-identification metrics.
struct ResultRow {
  std::string experiment;
  std::string model;
  int population = 0;
  int n_epochs = 0;
  double p = 0.0;
  std::optional<int> k;
  std::string metric;
  double value = 0.0;
  double stderr_value = 0.0;
  int runs = 1;
  std::uint64_t seed = 0;
};

// Runs the configured experiment over its grid, averaging over
// config.runs independently seeded runs.
std::vector<ResultRow> RunExperiment(const ExperimentConfig& config);

// `experiment,model,population,N,p,k,metric,value,stderr,runs,seed`.
void WriteResultsCsv(std::span<const ResultRow> rows, std::ostream& out);

// `N,f_min` for N in [1, n_max].
void WriteFminTable(int n_max, const DenoiseParams& params, std::ostream& out);

// Parses a JSON config document and loads any referenced input files
// (marginals, trace + host map, persona population). Unknown keys and
// inconsistent fields raise std::invalid_argument naming the field.
ExperimentConfig ParseExperimentConfig(const std::string& json_text);

// The population for one (grid point, run) cell, fresh for synthetic models.
Population MakeRunPopulation(const ExperimentConfig& config, int size,
                             std::uint64_t grid_index, std::uint64_t run);

}  // namespace topicsim

#endif  // TOPICSIM_EXPERIMENTS_H_
