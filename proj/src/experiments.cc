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

#include "topicsim/experiments.h"

#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "topicsim/csv.h"
#include "topicsim/parallel.h"

namespace topicsim {

namespace {

// Stream tags local to experiment orchestration; values are part of the
// reproducibility contract of result files.
constexpr std::uint64_t kTagParentPool = 101;
constexpr std::uint64_t kTagPopulation = 102;
constexpr std::uint64_t kTagSimulation = 103;

struct MeanStderr {
  double mean = 0.0;
  double stderr_value = 0.0;
};

MeanStderr Summarize(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

std::vector<int> EpochGrid(const ExperimentConfig& cfg) {
  std::vector<int> grid;
  for (int n = cfg.epochs_min; n <= cfg.epochs_max; ++n) grid.push_back(n);
  return grid;
}

void MaybeDumpDraws(const ExperimentConfig& cfg, const SimulatedDraws& draws,
                    std::uint64_t grid_index, std::uint64_t run) {
  if (!cfg.debug_draws_path || grid_index != 0 || run != 0) return;
  std::ofstream out(*cfg.debug_draws_path);
  if (!out) {
    throw std::runtime_error("cannot write draw log: " +
                             *cfg.debug_draws_path);
  }
  out << "persona_id,site,epoch,topic_id,is_random\n";
  for (std::size_t u = 0; u < draws.streams.size(); ++u) {
    for (std::size_t s = 0; s < draws.streams[u].size(); ++s) {
      const SiteLog& log = draws.streams[u][s];
      for (std::size_t e = 0; e < log.draws.size(); ++e) {
        const ExposedDraw& draw = log.draws[e];
        out << u << "," << s << "," << (e + 1) << "," << draw.topic << ","
            << (draw.is_random ? 1 : 0) << "\n";
      }
    }
  }
}

ResultRow MakeRow(const ExperimentConfig& cfg, int population, int n_epochs,
                  double p, std::optional<int> k, std::string metric,
                  MeanStderr stats) {
  ResultRow row;
  row.experiment = ExperimentKindName(cfg.experiment);
  row.model = ModelKindName(cfg.model);
  row.population = population;
  row.n_epochs = n_epochs;
  row.p = p;
  row.k = k;
  row.metric = std::move(metric);
  row.value = stats.mean;
  row.stderr_value = stats.stderr_value;
  row.runs = cfg.runs;
  row.seed = cfg.seed;
  return row;
}

void Validate(const ExperimentConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("'runs' must be >= 1");
  if (cfg.size < 1) throw std::invalid_argument("'size' must be >= 1");
  if (cfg.epochs_min < 0 || cfg.epochs_max < cfg.epochs_min) {
    throw std::invalid_argument("'epochs' range must satisfy 0 <= min <= max");
  }
  if (cfg.noise_p < 0.0 || cfg.noise_p > 1.0) {
    throw std::invalid_argument("'p' must be in [0, 1]");
  }
  for (double p : cfg.p_values) {
    if (p < 0.0 || p > 1.0) {
      throw std::invalid_argument("'p_values' entries must be in [0, 1]");
    }
  }
  if (cfg.k < 1) throw std::invalid_argument("'k' must be >= 1");
  if (cfg.k_max < 1) throw std::invalid_argument("'k_max' must be >= 1");
  if (cfg.top_z < 1) throw std::invalid_argument("'z' must be >= 1");
  if (cfg.profile_window < 1) {
    throw std::invalid_argument("'profile_window' must be >= 1");
  }
  if (cfg.n_topic < 1) throw std::invalid_argument("'n_topic' must be >= 1");
  if (!(cfg.p_star_min > 0.0 && cfg.p_star_min < 1.0)) {
    throw std::invalid_argument("'p_star_min' must be in (0, 1)");
  }
  if (cfg.crossover_pool < 2) {
    throw std::invalid_argument("'crossover_pool' must be >= 2");
  }
  if (cfg.experiment == ExperimentKind::kAnonVsSize && cfg.sizes.empty()) {
    throw std::invalid_argument("'sizes' is required for anon_vs_size");
  }
  for (int size : cfg.sizes) {
    if (size < 1) throw std::invalid_argument("'sizes' entries must be >= 1");
  }
  switch (cfg.model) {
    case ModelKind::kReal:
      if (!cfg.pool) {
        throw std::invalid_argument(
            "model 'real' requires 'trace'+'hostmap' or 'population_file'");
      }
      break;
    case ModelKind::kIid:
    case ModelKind::kCrossover:
      break;
  }
  if (cfg.marginals && cfg.marginals->n_topic != cfg.n_topic) {
    throw std::invalid_argument("'n_topic' conflicts with the marginals");
  }
  if (cfg.pool && cfg.pool->rows() != cfg.n_topic) {
    throw std::invalid_argument("'n_topic' conflicts with the persona pool");
  }
}

const EmpiricalMarginals& RequireMarginals(const ExperimentConfig& cfg) {
  if (!cfg.marginals) {
    throw std::invalid_argument(
        "this model requires marginals ('marginals', 'synth' or "
        "'trace'+'hostmap')");
  }
  return *cfg.marginals;
}

}  // namespace

std::string ExperimentKindName(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kAnonVsN:
      return "anon_vs_N";
    case ExperimentKind::kAnonVsSize:
      return "anon_vs_size";
    case ExperimentKind::kKCurve:
      return "k_curve";
    case ExperimentKind::kPSweep:
      return "p_sweep";
    case ExperimentKind::kReident:
      return "reident";
    case ExperimentKind::kReidentNofilter:
      return "reident_nofilter";
    case ExperimentKind::kBaselineNoApi:
      return "baseline_no_api";
  }
  return "unknown";
}

std::optional<ExperimentKind> ParseExperimentKind(std::string_view name) {
  if (name == "anon_vs_N") return ExperimentKind::kAnonVsN;
  if (name == "anon_vs_size") return ExperimentKind::kAnonVsSize;
  if (name == "k_curve") return ExperimentKind::kKCurve;
  if (name == "p_sweep") return ExperimentKind::kPSweep;
  if (name == "reident") return ExperimentKind::kReident;
  if (name == "reident_nofilter") return ExperimentKind::kReidentNofilter;
  if (name == "baseline_no_api") return ExperimentKind::kBaselineNoApi;
  return std::nullopt;
}

Population MakeRunPopulation(const ExperimentConfig& cfg, int size,
                             std::uint64_t grid_index, std::uint64_t run) {
  switch (cfg.model) {
    case ModelKind::kReal: {
      PopulationModel model{ModelKind::kReal,
                            static_cast<int>(cfg.pool->cols()), 0};
      return GeneratePopulation(model, nullptr, &*cfg.pool);
    }
    case ModelKind::kIid: {
      PopulationModel model{
          ModelKind::kIid, size,
          DeriveSeed(cfg.seed, {kTagPopulation, grid_index, run})};
      return GeneratePopulation(model, &RequireMarginals(cfg), nullptr);
    }
    case ModelKind::kCrossover: {
      PopulationModel model{
          ModelKind::kCrossover, size,
          DeriveSeed(cfg.seed, {kTagPopulation, grid_index, run})};
      if (cfg.pool) {
        return GeneratePopulation(model, nullptr, &*cfg.pool);
      }
      PopulationModel parents{
          ModelKind::kIid, cfg.crossover_pool,
          DeriveSeed(cfg.seed, {kTagParentPool, grid_index, run})};
      Population pool =
          GeneratePopulation(parents, &RequireMarginals(cfg), nullptr);
      return GeneratePopulation(model, nullptr, &pool);
    }
  }
  throw std::invalid_argument("unknown population model");
}

namespace {

std::vector<ResultRow> RunAnonVsN(const ExperimentConfig& cfg) {
  const std::vector<int> grid = EpochGrid(cfg);
  const int size = cfg.model == ModelKind::kReal
                       ? static_cast<int>(cfg.pool->cols())
                       : cfg.size;
  std::vector<std::vector<double>> values(
      grid.size(), std::vector<double>(static_cast<std::size_t>(cfg.runs)));

  ParallelFor(static_cast<std::size_t>(cfg.runs), [&](std::size_t r) {
    Population personas = MakeRunPopulation(cfg, size, 0, r);
    SimulatedDraws draws = SimulatePopulationDraws(
        personas, cfg.epochs_max, 1, cfg.Engine(cfg.noise_p), cfg.seed,
        DeriveSeed(cfg.seed, {kTagSimulation, 0, r}));
    MaybeDumpDraws(cfg, draws, 0, r);
    std::vector<double> series =
        AnonSeries(draws, grid, cfg.Denoiser(cfg.noise_p), cfg.k);
    for (std::size_t i = 0; i < grid.size(); ++i) values[i][r] = series[i];
  });

  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rows.push_back(MakeRow(cfg, size, grid[i], cfg.noise_p, cfg.k,
                           "prob_anon", Summarize(values[i])));
  }
  return rows;
}

std::vector<ResultRow> RunAnonVsSize(const ExperimentConfig& cfg) {
  const int n_epochs = cfg.epochs_max;
  const std::size_t n_grid = cfg.sizes.size();
  const std::size_t runs = static_cast<std::size_t>(cfg.runs);
  std::vector<std::vector<double>> values(n_grid, std::vector<double>(runs));

  ParallelFor(n_grid * runs, [&](std::size_t task) {
    std::size_t g = task / runs;
    std::size_t r = task % runs;
    Population personas = MakeRunPopulation(cfg, cfg.sizes[g], g, r);
    SimulatedDraws draws = SimulatePopulationDraws(
        personas, n_epochs, 1, cfg.Engine(cfg.noise_p), cfg.seed,
        DeriveSeed(cfg.seed, {kTagSimulation, g, r}));
    MaybeDumpDraws(cfg, draws, g, r);
    const int eval[] = {n_epochs};
    values[g][r] =
        AnonSeries(draws, eval, cfg.Denoiser(cfg.noise_p), cfg.k).front();
  });

  std::vector<ResultRow> rows;
  for (std::size_t g = 0; g < n_grid; ++g) {
    rows.push_back(MakeRow(cfg, cfg.sizes[g], n_epochs, cfg.noise_p, cfg.k,
                           "prob_anon", Summarize(values[g])));
  }
  return rows;
}

std::vector<ResultRow> RunKCurve(const ExperimentConfig& cfg) {
  const int n_epochs = cfg.epochs_max;
  const int size = cfg.model == ModelKind::kReal
                       ? static_cast<int>(cfg.pool->cols())
                       : cfg.size;
  const std::size_t runs = static_cast<std::size_t>(cfg.runs);
  std::vector<std::vector<double>> values(
      static_cast<std::size_t>(cfg.k_max), std::vector<double>(runs));

  ParallelFor(runs, [&](std::size_t r) {
    Population personas = MakeRunPopulation(cfg, size, 0, r);
    SimulatedDraws draws = SimulatePopulationDraws(
        personas, n_epochs, 1, cfg.Engine(cfg.noise_p), cfg.seed,
        DeriveSeed(cfg.seed, {kTagSimulation, 0, r}));
    MaybeDumpDraws(cfg, draws, 0, r);
    std::vector<TopicSet> profiles =
        ProfilesAtEpoch(draws, 0, n_epochs, cfg.Denoiser(cfg.noise_p));
    std::vector<double> curve = KAnonymityCurve(profiles, cfg.k_max);
    for (int k = 1; k <= cfg.k_max; ++k) {
      values[static_cast<std::size_t>(k - 1)][r] =
          curve[static_cast<std::size_t>(k - 1)];
    }
  });

  std::vector<ResultRow> rows;
  for (int k = 1; k <= cfg.k_max; ++k) {
    rows.push_back(MakeRow(cfg, size, n_epochs, cfg.noise_p, k, "prob_anon",
                           Summarize(values[static_cast<std::size_t>(k - 1)])));
  }
  return rows;
}

std::vector<ResultRow> RunPSweep(const ExperimentConfig& cfg) {
  const int n_epochs = cfg.epochs_max;
  const int size = cfg.model == ModelKind::kReal
                       ? static_cast<int>(cfg.pool->cols())
                       : cfg.size;
  std::vector<double> p_grid = cfg.p_values;
  if (p_grid.empty()) {
    for (int i = 0; i <= 10; ++i) p_grid.push_back(0.01 * i);
  }
  const std::size_t n_grid = p_grid.size();
  const std::size_t runs = static_cast<std::size_t>(cfg.runs);
  std::vector<std::vector<double>> values(n_grid, std::vector<double>(runs));

  ParallelFor(n_grid * runs, [&](std::size_t task) {
    std::size_t g = task / runs;
    std::size_t r = task % runs;
    double p = p_grid[g];
    Population personas = MakeRunPopulation(cfg, size, g, r);
    SimulatedDraws draws = SimulatePopulationDraws(
        personas, n_epochs, 1, cfg.Engine(p), cfg.seed,
        DeriveSeed(cfg.seed, {kTagSimulation, g, r}));
    MaybeDumpDraws(cfg, draws, g, r);
    const int eval[] = {n_epochs};
    values[g][r] = AnonSeries(draws, eval, cfg.Denoiser(p), cfg.k).front();
  });

  std::vector<ResultRow> rows;
  for (std::size_t g = 0; g < n_grid; ++g) {
    rows.push_back(MakeRow(cfg, size, n_epochs, p_grid[g], cfg.k, "prob_anon",
                           Summarize(values[g])));
  }
  return rows;
}

std::vector<ResultRow> RunReident(const ExperimentConfig& cfg,
                                  bool denoised) {
  const std::vector<int> grid = EpochGrid(cfg);
  const int size = cfg.model == ModelKind::kReal
                       ? static_cast<int>(cfg.pool->cols())
                       : cfg.size;
  const std::size_t runs = static_cast<std::size_t>(cfg.runs);
  std::vector<std::vector<ReidentReport>> reports(
      grid.size(), std::vector<ReidentReport>(runs));

  ParallelFor(runs, [&](std::size_t r) {
    Population personas = MakeRunPopulation(cfg, size, 0, r);
    SimulatedDraws draws = SimulatePopulationDraws(
        personas, cfg.epochs_max, 2, cfg.Engine(cfg.noise_p), cfg.seed,
        DeriveSeed(cfg.seed, {kTagSimulation, 0, r}));
    MaybeDumpDraws(cfg, draws, 0, r);
    std::vector<ReidentReport> series =
        ReidentSeries(draws, grid, cfg.Denoiser(cfg.noise_p), denoised);
    for (std::size_t i = 0; i < grid.size(); ++i) reports[i][r] = series[i];
  });

  std::vector<ResultRow> rows;
  std::vector<double> scratch(runs);
  auto emit = [&](std::size_t i, const std::string& metric,
                  double ReidentReport::* field) {
    for (std::size_t r = 0; r < runs; ++r) {
      scratch[r] = reports[i][r].*field;
    }
    rows.push_back(MakeRow(cfg, size, grid[i], cfg.noise_p, std::nullopt,
                           metric, Summarize(scratch)));
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    emit(i, "tp_rate", &ReidentReport::tp_rate);
    emit(i, "fp_rate", &ReidentReport::fp_rate);
    emit(i, "p1", &ReidentReport::p1);
    emit(i, "p2", &ReidentReport::p2);
  }
  return rows;
}

std::vector<ResultRow> RunBaselineNoApi(const ExperimentConfig& cfg) {
  const std::vector<int> grid = EpochGrid(cfg);
  const int size = cfg.model == ModelKind::kReal
                       ? static_cast<int>(cfg.pool->cols())
                       : cfg.size;
  const std::size_t runs = static_cast<std::size_t>(cfg.runs);
  std::vector<std::vector<double>> values(
      grid.size(), std::vector<double>(runs));

  ParallelFor(runs, [&](std::size_t r) {
    Population personas = MakeRunPopulation(cfg, size, 0, r);
    std::vector<double> series = BaselineAnonSeries(
        personas, grid, cfg.Engine(0.0), cfg.k, cfg.seed,
        DeriveSeed(cfg.seed, {kTagSimulation, 0, r}));
    for (std::size_t i = 0; i < grid.size(); ++i) values[i][r] = series[i];
  });

  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rows.push_back(MakeRow(cfg, size, grid[i], 0.0, cfg.k, "prob_anon",
                           Summarize(values[i])));
  }
  return rows;
}

}  // namespace

std::vector<ResultRow> RunExperiment(const ExperimentConfig& cfg) {
  Validate(cfg);
  switch (cfg.experiment) {
    case ExperimentKind::kAnonVsN:
      return RunAnonVsN(cfg);
    case ExperimentKind::kAnonVsSize:
      return RunAnonVsSize(cfg);
    case ExperimentKind::kKCurve:
      return RunKCurve(cfg);
    case ExperimentKind::kPSweep:
      return RunPSweep(cfg);
    case ExperimentKind::kReident:
      return RunReident(cfg, /*denoised=*/true);
    case ExperimentKind::kReidentNofilter:
      return RunReident(cfg, /*denoised=*/false);
    case ExperimentKind::kBaselineNoApi:
      return RunBaselineNoApi(cfg);
  }
  throw std::invalid_argument("unknown experiment");
}

void WriteResultsCsv(std::span<const ResultRow> rows, std::ostream& out) {
  out << "experiment,model,population,N,p,k,metric,value,stderr,runs,seed\n";
  for (const ResultRow& row : rows) {
    out << row.experiment << "," << row.model << "," << row.population << ","
        << row.n_epochs << "," << FormatDouble(row.p) << ",";
    if (row.k) out << *row.k;
    out << "," << row.metric << "," << FormatDouble(row.value) << ","
        << FormatDouble(row.stderr_value) << "," << row.runs << "," << row.seed
        << "\n";
  }
}

void WriteFminTable(int n_max, const DenoiseParams& params,
                    std::ostream& out) {
  if (n_max < 1) throw std::invalid_argument("'n_max' must be >= 1");
  out << "N,f_min\n";
  for (int n = 1; n <= n_max; ++n) {
    out << n << "," << ComputeFmin(n, params) << "\n";
  }
}

namespace {

void ParseEpochs(const nlohmann::json& value, ExperimentConfig& cfg) {
  if (value.is_number_integer()) {
    cfg.epochs_min = cfg.epochs_max = value.get<int>();
    return;
  }
  if (value.is_object()) {
    cfg.epochs_min = value.at("min").get<int>();
    cfg.epochs_max = value.at("max").get<int>();
    return;
  }
  if (value.is_string()) {
    std::string s = value.get<std::string>();
    std::size_t dots = s.find("..");
    if (dots != std::string::npos) {
      auto lo = ParseInt64(s.substr(0, dots));
      auto hi = ParseInt64(s.substr(dots + 2));
      if (lo && hi) {
        cfg.epochs_min = static_cast<int>(*lo);
        cfg.epochs_max = static_cast<int>(*hi);
        return;
      }
    } else if (auto single = ParseInt64(s)) {
      cfg.epochs_min = cfg.epochs_max = static_cast<int>(*single);
      return;
    }
  }
  throw std::invalid_argument(
      "'epochs' must be an integer, \"A..B\" or {\"min\":A,\"max\":B}");
}

SynthMarginalConfig ParseSynthConfig(const nlohmann::json& j, int n_topic) {
  SynthMarginalConfig synth;
  synth.n_topic = n_topic;
  for (const auto& [key, value] : j.items()) {
    if (key == "n_topic") {
      synth.n_topic = value.get<int>();
    } else if (key == "n_active") {
      synth.n_active = value.get<int>();
    } else if (key == "popularity_exponent") {
      synth.popularity_exponent = value.get<double>();
    } else if (key == "top_popularity") {
      synth.top_popularity = value.get<double>();
    } else if (key == "rate_top") {
      synth.rate_top = value.get<double>();
    } else if (key == "rate_exponent") {
      synth.rate_exponent = value.get<double>();
    } else if (key == "rate_jitter_sigma") {
      synth.rate_jitter_sigma = value.get<double>();
    } else if (key == "topics_log_mean") {
      synth.topics_log_mean = value.get<double>();
    } else if (key == "topics_log_sigma") {
      synth.topics_log_sigma = value.get<double>();
    } else if (key == "topics_per_user_pmf") {
      for (const auto& pair : value) {
        synth.topics_per_user_pmf.emplace_back(pair.at(0).get<int>(),
                                               pair.at(1).get<double>());
      }
    } else if (key == "seed") {
      synth.seed = value.get<std::uint64_t>();
    } else {
      throw std::invalid_argument("unknown 'synth' config key '" + key + "'");
    }
  }
  return synth;
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("config must be a JSON object");
  }

  ExperimentConfig cfg;
  bool explicit_n_topic = false;
  bool explicit_size = false;
  std::optional<nlohmann::json> synth_json;
  std::string marginals_path, trace_path, hostmap_path, taxonomy_path,
      population_path;
  std::int64_t min_pages = 10;

  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") {
      auto kind = ParseExperimentKind(value.get<std::string>());
      if (!kind) {
        throw std::invalid_argument("unknown 'experiment' \"" +
                                    value.get<std::string>() + "\"");
      }
      cfg.experiment = *kind;
    } else if (key == "model") {
      auto kind = ParseModelKind(value.get<std::string>());
      if (!kind) {
        throw std::invalid_argument("unknown 'model' \"" +
                                    value.get<std::string>() + "\"");
      }
      cfg.model = *kind;
    } else if (key == "size") {
      cfg.size = value.get<int>();
      explicit_size = true;
    } else if (key == "sizes") {
      cfg.sizes = value.get<std::vector<int>>();
    } else if (key == "epochs") {
      ParseEpochs(value, cfg);
    } else if (key == "p") {
      cfg.noise_p = value.get<double>();
    } else if (key == "p_values") {
      cfg.p_values = value.get<std::vector<double>>();
    } else if (key == "k") {
      cfg.k = value.get<int>();
    } else if (key == "k_max") {
      cfg.k_max = value.get<int>();
    } else if (key == "z") {
      cfg.top_z = value.get<int>();
    } else if (key == "profile_window") {
      cfg.profile_window = value.get<int>();
    } else if (key == "n_topic") {
      cfg.n_topic = value.get<int>();
      explicit_n_topic = true;
    } else if (key == "pad_random") {
      cfg.pad_random = value.get<bool>();
    } else if (key == "p_star_min") {
      cfg.p_star_min = value.get<double>();
    } else if (key == "published_thresholds") {
      cfg.published_thresholds = value.get<bool>();
    } else if (key == "runs") {
      cfg.runs = value.get<int>();
    } else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "crossover_pool") {
      cfg.crossover_pool = value.get<int>();
    } else if (key == "out") {
      cfg.out_dir = value.get<std::string>();
    } else if (key == "debug_draws") {
      cfg.debug_draws_path = value.get<std::string>();
    } else if (key == "marginals") {
      marginals_path = value.get<std::string>();
    } else if (key == "synth") {
      synth_json = value;
    } else if (key == "trace") {
      trace_path = value.get<std::string>();
    } else if (key == "hostmap") {
      hostmap_path = value.get<std::string>();
    } else if (key == "taxonomy") {
      taxonomy_path = value.get<std::string>();
    } else if (key == "population_file") {
      population_path = value.get<std::string>();
    } else if (key == "min_pages") {
      min_pages = value.get<std::int64_t>();
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }

  if (!taxonomy_path.empty()) {
    Taxonomy taxonomy = LoadTaxonomyFile(taxonomy_path);
    if (explicit_n_topic && cfg.n_topic != taxonomy.n_topic) {
      throw std::invalid_argument("'n_topic' conflicts with 'taxonomy'");
    }
    cfg.n_topic = taxonomy.n_topic;
    explicit_n_topic = true;
  }

  // Input precedence: an explicit persona population beats a trace, which
  // beats a marginals file, which beats synthetic marginals.
  if (!population_path.empty()) {
    cfg.pool = ReadPopulationCsvFile(population_path, cfg.n_topic);
    cfg.marginals = ComputeMarginals(*cfg.pool);
  } else if (!trace_path.empty() || !hostmap_path.empty()) {
    if (trace_path.empty() || hostmap_path.empty()) {
      throw std::invalid_argument("'trace' and 'hostmap' must be given "
                                  "together");
    }
    HostTopicMap map = LoadHostTopicMapFile(hostmap_path, cfg.n_topic);
    std::ifstream in(trace_path);
    if (!in) {
      throw std::invalid_argument("cannot open 'trace' file: " + trace_path);
    }
    IngestResult ingest = IngestTrace(in, map);
    UserHistories active = ActiveUserFilter(ingest.histories, min_pages);
    if (active.empty()) {
      throw std::invalid_argument("'trace' has no active users");
    }
    Population pool(cfg.n_topic, static_cast<Eigen::Index>(active.size()));
    Eigen::Index u = 0;
    for (const auto& [user, epochs] : active) {
      pool.col(u++) = UserRates(epochs, cfg.n_topic);
    }
    cfg.pool = std::move(pool);
    cfg.marginals = ComputeMarginals(*cfg.pool);
  } else if (!marginals_path.empty()) {
    cfg.marginals = ReadMarginalsFile(marginals_path);
    if (explicit_n_topic && cfg.marginals->n_topic != cfg.n_topic) {
      throw std::invalid_argument("'n_topic' conflicts with 'marginals'");
    }
    cfg.n_topic = cfg.marginals->n_topic;
  } else {
    SynthMarginalConfig synth =
        synth_json ? ParseSynthConfig(*synth_json, cfg.n_topic)
                   : SynthMarginalConfig{};
    if (!synth_json) synth.n_topic = cfg.n_topic;
    if (explicit_n_topic && synth.n_topic != cfg.n_topic) {
      throw std::invalid_argument("'n_topic' conflicts with 'synth'");
    }
    cfg.n_topic = synth.n_topic;
    if (synth.n_active > synth.n_topic) {
      synth.n_active = synth.n_topic;
    }
    cfg.marginals = SynthMarginals(synth);
  }

  if (cfg.model == ModelKind::kReal && cfg.pool) {
    if (explicit_size && cfg.size != cfg.pool->cols()) {
      throw std::invalid_argument(
          "'size' conflicts with the real persona pool");
    }
    cfg.size = static_cast<int>(cfg.pool->cols());
  }

  Validate(cfg);
  return cfg;
}

}  // namespace topicsim
