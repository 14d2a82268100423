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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "topicsim/csv.h"
#include "topicsim/experiments.h"
#include "topicsim/parallel.h"

namespace {

constexpr const char* kVersion = "0.1.0";

struct SimulateFlags {
  std::string config_path;
  std::optional<std::string> experiment, model, epochs, marginals, trace,
      hostmap, taxonomy, population_file, out, debug_draws;
  std::optional<int> size, k, k_max, z, profile_window, n_topic, runs,
      crossover_pool;
  std::optional<std::int64_t> min_pages;
  std::optional<std::uint64_t> seed;
  std::optional<double> p, p_star_min;
  std::vector<int> sizes;
  std::vector<double> p_values;
  bool pad_random = false;
  bool published_thresholds = false;
};

// Flags mirror config keys one to one; a flag that was passed overrides the
// key from the config file.
nlohmann::json MergeConfig(const SimulateFlags& flags) {
  nlohmann::json j = nlohmann::json::object();
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) {
      throw std::runtime_error("cannot open config file: " +
                               flags.config_path);
    }
    j = nlohmann::json::parse(in);
    if (!j.is_object()) {
      throw std::runtime_error("config file must hold a JSON object");
    }
  }
  auto set = [&j](const char* key, const auto& value) { j[key] = value; };
  if (flags.experiment) set("experiment", *flags.experiment);
  if (flags.model) set("model", *flags.model);
  if (flags.size) set("size", *flags.size);
  if (!flags.sizes.empty()) set("sizes", flags.sizes);
  if (flags.epochs) set("epochs", *flags.epochs);
  if (flags.p) set("p", *flags.p);
  if (!flags.p_values.empty()) set("p_values", flags.p_values);
  if (flags.k) set("k", *flags.k);
  if (flags.k_max) set("k_max", *flags.k_max);
  if (flags.z) set("z", *flags.z);
  if (flags.profile_window) set("profile_window", *flags.profile_window);
  if (flags.n_topic) set("n_topic", *flags.n_topic);
  if (flags.pad_random) set("pad_random", true);
  if (flags.p_star_min) set("p_star_min", *flags.p_star_min);
  if (flags.published_thresholds) set("published_thresholds", true);
  if (flags.runs) set("runs", *flags.runs);
  if (flags.seed) set("seed", *flags.seed);
  if (flags.crossover_pool) set("crossover_pool", *flags.crossover_pool);
  if (flags.marginals) set("marginals", *flags.marginals);
  if (flags.trace) set("trace", *flags.trace);
  if (flags.hostmap) set("hostmap", *flags.hostmap);
  if (flags.taxonomy) set("taxonomy", *flags.taxonomy);
  if (flags.population_file) set("population_file", *flags.population_file);
  if (flags.min_pages) set("min_pages", *flags.min_pages);
  if (flags.out) set("out", *flags.out);
  if (flags.debug_draws) set("debug_draws", *flags.debug_draws);
  return j;
}

int RunSimulate(const SimulateFlags& flags) {
  nlohmann::json merged = MergeConfig(flags);
  topicsim::ExperimentConfig cfg =
      topicsim::ParseExperimentConfig(merged.dump());
  if (cfg.out_dir.empty()) cfg.out_dir = "out";

  std::cerr << "topicsim: running " << ExperimentKindName(cfg.experiment)
            << " (model=" << ModelKindName(cfg.model)
            << ", runs=" << cfg.runs << ", seed=" << cfg.seed
            << ", workers=" << topicsim::WorkerCount() << ")" << std::endl;

  std::vector<topicsim::ResultRow> rows = topicsim::RunExperiment(cfg);

  std::filesystem::create_directories(cfg.out_dir);
  std::filesystem::path results_path =
      std::filesystem::path(cfg.out_dir) / "results.csv";
  {
    std::ofstream out(results_path);
    if (!out) {
      throw std::runtime_error("cannot write " + results_path.string());
    }
    topicsim::WriteResultsCsv(rows, out);
  }
  {
    nlohmann::json manifest;
    manifest["tool"] = "topicsim";
    manifest["version"] = kVersion;
    manifest["seed"] = cfg.seed;
    manifest["config"] = merged;
    std::filesystem::path manifest_path =
        std::filesystem::path(cfg.out_dir) / "manifest.json";
    std::ofstream out(manifest_path);
    if (!out) {
      throw std::runtime_error("cannot write " + manifest_path.string());
    }
    out << manifest.dump(2) << "\n";
  }
  std::cerr << "topicsim: wrote " << rows.size() << " rows to "
            << results_path.string() << std::endl;
  return 0;
}

int RunFmin(int n_max, double p, int n_topic, double p_star_min,
            bool published_thresholds, const std::string& out_path) {
  topicsim::DenoiseParams params{p_star_min, p, n_topic,
                                 published_thresholds};
  if (out_path.empty()) {
    topicsim::WriteFminTable(n_max, params, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    topicsim::WriteFminTable(n_max, params, out);
  }
  return 0;
}

int RunIngest(const std::string& trace_path, const std::string& hostmap_path,
              const std::string& taxonomy_path, int n_topic,
              std::int64_t min_pages, const std::string& out_path,
              const std::string& personas_path) {
  if (!taxonomy_path.empty()) {
    n_topic = topicsim::LoadTaxonomyFile(taxonomy_path).n_topic;
  }
  topicsim::HostTopicMap map =
      topicsim::LoadHostTopicMapFile(hostmap_path, n_topic);
  std::ifstream in(trace_path);
  if (!in) throw std::runtime_error("cannot open trace file: " + trace_path);
  topicsim::IngestResult ingest = topicsim::IngestTrace(in, map);
  topicsim::UserHistories active =
      topicsim::ActiveUserFilter(ingest.histories, min_pages);
  if (active.empty()) {
    throw std::runtime_error("no users remain after the activity filter");
  }

  topicsim::Population pool(n_topic,
                            static_cast<Eigen::Index>(active.size()));
  Eigen::Index u = 0;
  for (const auto& [user, epochs] : active) {
    pool.col(u++) = topicsim::UserRates(epochs, n_topic);
  }
  topicsim::EmpiricalMarginals marginals = topicsim::ComputeMarginals(pool);
  topicsim::WriteMarginalsFile(marginals, out_path);

  if (!personas_path.empty()) {
    std::ofstream pout(personas_path);
    if (!pout) throw std::runtime_error("cannot write " + personas_path);
    topicsim::WritePopulationCsv(pool, pout);
  }

  std::cerr << "topicsim: ingested " << ingest.histories.size() << " users ("
            << active.size() << " active, " << ingest.rejected_rows
            << " rows rejected, " << ingest.unmapped_rows
            << " rows unmapped); marginals written to " << out_path
            << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and k-anonymity / re-identification analysis for "
               "browser topic-exposure mechanisms"};
  app.require_subcommand(1);

  SimulateFlags flags;
  CLI::App* simulate =
      app.add_subcommand("simulate", "run a configured experiment");
  simulate->add_option("--config", flags.config_path,
                       "JSON config file; flags override its keys");
  auto opt_str = [&](const char* name, std::optional<std::string>& slot,
                     const char* desc) {
    simulate->add_option_function<std::string>(
        name, [&slot](const std::string& v) { slot = v; }, desc);
  };
  auto opt_int = [&](const char* name, std::optional<int>& slot,
                     const char* desc) {
    simulate->add_option_function<int>(
        name, [&slot](int v) { slot = v; }, desc);
  };
  auto opt_double = [&](const char* name, std::optional<double>& slot,
                        const char* desc) {
    simulate->add_option_function<double>(
        name, [&slot](double v) { slot = v; }, desc);
  };
  opt_str("--experiment", flags.experiment,
          "anon_vs_N | anon_vs_size | k_curve | p_sweep | reident | "
          "reident_nofilter | baseline_no_api");
  opt_str("--model", flags.model, "real | iid | crossover");
  opt_int("--size", flags.size, "population size");
  simulate->add_option("--sizes", flags.sizes,
                       "population sizes for anon_vs_size");
  opt_str("--epochs", flags.epochs, "observation epochs, N or A..B");
  opt_double("--p", flags.p, "random replacement probability");
  simulate->add_option("--p-values", flags.p_values,
                       "replacement probabilities for p_sweep");
  opt_int("--k", flags.k, "anonymity level for prob_anon metrics");
  opt_int("--k-max", flags.k_max, "largest k for k_curve");
  opt_int("--z", flags.z, "profile size (top topics per epoch)");
  opt_int("--profile-window", flags.profile_window,
          "epochs an exposed profile spans");
  opt_int("--n-topic", flags.n_topic, "taxonomy size");
  simulate->add_flag("--pad-random", flags.pad_random,
                     "expose a random topic when the profile is empty");
  opt_double("--p-star-min", flags.p_star_min,
             "residual noise probability target of the denoiser");
  simulate->add_flag("--published-thresholds", flags.published_thresholds,
                     "use the published f_min table instead of computing it");
  opt_int("--runs", flags.runs, "independent runs to average");
  simulate->add_option_function<std::uint64_t>(
      "--seed", [&flags](std::uint64_t v) { flags.seed = v; }, "master seed");
  opt_int("--crossover-pool", flags.crossover_pool,
          "parent pool size when crossover runs from marginals");
  opt_str("--marginals", flags.marginals, "marginals JSON file");
  opt_str("--trace", flags.trace, "browsing trace CSV");
  opt_str("--hostmap", flags.hostmap, "hostname,topic_id CSV");
  opt_str("--taxonomy", flags.taxonomy, "taxonomy file, one label per line");
  opt_str("--population-file", flags.population_file,
          "persona_id,topic_id,rate CSV used as the persona pool");
  simulate->add_option_function<std::int64_t>(
      "--min-pages", [&flags](std::int64_t v) { flags.min_pages = v; },
      "per-epoch activity threshold for trace users");
  opt_str("--out", flags.out, "output directory");
  opt_str("--debug-draws", flags.debug_draws,
          "write the grid-0/run-0 draw log (includes ground-truth noise "
          "flags) to this CSV");

  int fmin_n_max = 60;
  double fmin_p = 0.05;
  int fmin_n_topic = 349;
  double fmin_p_star = 1e-5;
  bool fmin_published = false;
  std::string fmin_out;
  CLI::App* fmin =
      app.add_subcommand("fmin", "print the denoising threshold table");
  fmin->add_option("--n-max", fmin_n_max, "largest N to tabulate")
      ->required();
  fmin->add_option("--p", fmin_p, "random replacement probability");
  fmin->add_option("--n-topic", fmin_n_topic, "taxonomy size");
  fmin->add_option("--p-star-min", fmin_p_star,
                   "residual noise probability target");
  fmin->add_flag("--published-thresholds", fmin_published,
                 "use the published f_min table instead of computing it");
  fmin->add_option("--out", fmin_out, "output file (default: stdout)");

  std::string ingest_trace, ingest_hostmap, ingest_taxonomy, ingest_out,
      ingest_personas;
  int ingest_n_topic = 349;
  std::int64_t ingest_min_pages = 10;
  CLI::App* ingest = app.add_subcommand(
      "ingest", "turn a browsing trace into persona marginals");
  ingest->add_option("--trace", ingest_trace, "browsing trace CSV")
      ->required();
  ingest->add_option("--hostmap", ingest_hostmap, "hostname,topic_id CSV")
      ->required();
  ingest->add_option("--taxonomy", ingest_taxonomy,
                     "taxonomy file, one label per line");
  ingest->add_option("--n-topic", ingest_n_topic,
                     "taxonomy size when no taxonomy file is given");
  ingest->add_option("--min-pages", ingest_min_pages,
                     "per-epoch activity threshold");
  ingest->add_option("--out", ingest_out, "marginals JSON output")
      ->required();
  ingest->add_option("--dump-personas", ingest_personas,
                     "also write the persona pool CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return RunSimulate(flags);
    if (fmin->parsed()) {
      return RunFmin(fmin_n_max, fmin_p, fmin_n_topic, fmin_p_star,
                     fmin_published, fmin_out);
    }
    if (ingest->parsed()) {
      return RunIngest(ingest_trace, ingest_hostmap, ingest_taxonomy,
                       ingest_n_topic, ingest_min_pages, ingest_out,
                       ingest_personas);
    }
  } catch (const std::exception& e) {
    std::cerr << "topicsim: error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
