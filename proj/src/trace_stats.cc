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

#include "topicsim/trace_stats.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "topicsim/csv.h"
#include "topicsim/rng.h"

namespace topicsim {

namespace {

TopicHistory ToHistory(const std::map<TopicId, std::int64_t>& counts) {
  TopicHistory history;
  history.counts.reserve(counts.size());
  for (const auto& [topic, count] : counts) {
    history.counts.push_back({topic, count});
  }
  return history;
}

}  // namespace

IngestResult IngestTrace(std::istream& in, const HostTopicMap& map) {
  // topic -> count maps are built first and frozen into sorted TopicHistory
  // vectors at the end.
  std::map<std::string, std::map<int, std::map<TopicId, std::int64_t>>> acc;
  IngestResult result;

  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = SplitCsvLine(line);
    if (fields.size() != 4 || fields[0].empty()) {
      ++result.rejected_rows;
      continue;
    }
    std::optional<std::int64_t> epoch = ParseInt64(fields[1]);
    std::optional<std::int64_t> visits = ParseInt64(fields[3]);
    if (!epoch || *epoch < 0 || !visits || *visits < 1) {
      ++result.rejected_rows;
      continue;
    }
    std::optional<TopicId> topic = Classify(map, fields[2]);
    if (!topic) {
      ++result.unmapped_rows;
      continue;
    }
    acc[fields[0]][static_cast<int>(*epoch)][*topic] += *visits;
  }

  for (const auto& [user, epochs] : acc) {
    EpochHistories& out = result.histories[user];
    for (const auto& [epoch, counts] : epochs) {
      out[epoch] = ToHistory(counts);
    }
  }
  return result;
}

UserHistories ActiveUserFilter(const UserHistories& histories,
                               std::int64_t min_pages) {
  UserHistories filtered;
  for (const auto& [user, epochs] : histories) {
    EpochHistories kept;
    for (const auto& [epoch, history] : epochs) {
      if (history.TotalVisits() >= min_pages) kept[epoch] = history;
    }
    if (!kept.empty()) filtered[user] = std::move(kept);
  }
  return filtered;
}

RateVector UserRates(const EpochHistories& epochs, int n_topic) {
  if (epochs.empty()) throw std::runtime_error("inactive user");
  RateVector rates = RateVector::Zero(n_topic);
  for (const auto& [epoch, history] : epochs) {
    for (const TopicCount& tc : history.counts) {
      if (tc.topic < 0 || tc.topic >= n_topic) {
        throw std::out_of_range("topic id outside taxonomy");
      }
      rates[tc.topic] += static_cast<double>(tc.count);
    }
  }
  rates /= static_cast<double>(epochs.size());
  return rates;
}

int DiscreteEcdf::Quantile(double u) const {
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  if (it == cum.end()) return values.back();
  return values[static_cast<std::size_t>(it - cum.begin())];
}

double DiscreteEcdf::Cdf(int value) const {
  auto it = std::upper_bound(values.begin(), values.end(), value);
  if (it == values.begin()) return 0.0;
  return cum[static_cast<std::size_t>(it - values.begin()) - 1];
}

EmpiricalMarginals ComputeMarginals(const Population& personas) {
  const Eigen::Index n_topic = personas.rows();
  const Eigen::Index n_users = personas.cols();
  if (n_users == 0) throw std::invalid_argument("no personas");

  EmpiricalMarginals marginals;
  marginals.n_topic = static_cast<int>(n_topic);

  RateVector visitors = RateVector::Zero(n_topic);
  RateVector rate_sum = RateVector::Zero(n_topic);
  std::map<int, int> topic_count_freq;
  for (Eigen::Index u = 0; u < n_users; ++u) {
    int distinct = 0;
    for (Eigen::Index t = 0; t < n_topic; ++t) {
      double rate = personas(t, u);
      if (rate > 0.0) {
        ++distinct;
        visitors[t] += 1.0;
        rate_sum[t] += rate;
      }
    }
    ++topic_count_freq[distinct];
  }

  marginals.popularity = visitors / static_cast<double>(n_users);
  marginals.avg_rate =
      (visitors.array() > 0.0)
          .select(rate_sum.array() / visitors.array().max(1.0), 0.0);

  double cum = 0.0;
  for (const auto& [count, freq] : topic_count_freq) {
    cum += static_cast<double>(freq) / static_cast<double>(n_users);
    marginals.topics_per_user.values.push_back(count);
    marginals.topics_per_user.cum.push_back(cum);
  }
  marginals.topics_per_user.cum.back() = 1.0;
  return marginals;
}

EmpiricalMarginals SynthMarginals(const SynthMarginalConfig& config) {
  if (config.n_topic < 1) {
    throw std::invalid_argument("synth marginals: n_topic must be >= 1");
  }
  if (config.n_active < 1 || config.n_active > config.n_topic) {
    throw std::invalid_argument(
        "synth marginals: n_active must be in [1, n_topic]");
  }
  if (config.popularity_exponent <= 0.0) {
    throw std::invalid_argument(
        "synth marginals: popularity_exponent must be > 0");
  }
  if (config.rate_exponent <= 0.0) {
    throw std::invalid_argument("synth marginals: rate_exponent must be > 0");
  }
  if (!(config.top_popularity > 0.0 && config.top_popularity <= 1.0)) {
    throw std::invalid_argument(
        "synth marginals: top_popularity must be in (0, 1]");
  }

  EmpiricalMarginals marginals;
  marginals.n_topic = config.n_topic;
  marginals.popularity = RateVector::Zero(config.n_topic);
  marginals.avg_rate = RateVector::Zero(config.n_topic);

  Rng rng = MakeRng(config.seed, {streams::kMarginals});
  std::normal_distribution<double> jitter(0.0, config.rate_jitter_sigma);
  for (int r = 0; r < config.n_active; ++r) {
    double rank = static_cast<double>(r + 1);
    marginals.popularity[r] =
        config.top_popularity * std::pow(rank, -config.popularity_exponent);
    double rate = config.rate_top * std::pow(rank, -config.rate_exponent);
    if (config.rate_jitter_sigma > 0.0) rate *= std::exp(jitter(rng));
    marginals.avg_rate[r] = std::max(rate, 1e-3);
  }

  if (!config.topics_per_user_pmf.empty()) {
    std::vector<std::pair<int, double>> pmf = config.topics_per_user_pmf;
    std::sort(pmf.begin(), pmf.end());
    double total = 0.0;
    for (const auto& [value, prob] : pmf) {
      if (value < 1 || value > config.n_active) {
        throw std::invalid_argument(
            "synth marginals: topics_per_user value outside [1, n_active]");
      }
      if (prob <= 0.0) {
        throw std::invalid_argument(
            "synth marginals: topics_per_user probability must be > 0");
      }
      total += prob;
    }
    double cum = 0.0;
    for (const auto& [value, prob] : pmf) {
      cum += prob / total;
      marginals.topics_per_user.values.push_back(value);
      marginals.topics_per_user.cum.push_back(cum);
    }
  } else {
    if (config.topics_log_sigma <= 0.0) {
      throw std::invalid_argument(
          "synth marginals: topics_log_sigma must be > 0");
    }
    // CDF of a log-normal evaluated at integer cell boundaries k + 0.5,
    // truncated to [1, n_active].
    auto lognorm_cdf = [&](double x) {
      return 0.5 * std::erfc(-(std::log(x) - config.topics_log_mean) /
                             (config.topics_log_sigma * std::sqrt(2.0)));
    };
    double lo = lognorm_cdf(0.5);
    double hi = lognorm_cdf(config.n_active + 0.5);
    double span = hi - lo;
    for (int k = 1; k <= config.n_active; ++k) {
      marginals.topics_per_user.values.push_back(k);
      marginals.topics_per_user.cum.push_back(
          (lognorm_cdf(k + 0.5) - lo) / span);
    }
  }
  marginals.topics_per_user.cum.back() = 1.0;
  return marginals;
}

namespace {

nlohmann::json EcdfToJson(const DiscreteEcdf& ecdf) {
  return {{"values", ecdf.values}, {"cum_probs", ecdf.cum}};
}

DiscreteEcdf EcdfFromJson(const nlohmann::json& j) {
  DiscreteEcdf ecdf;
  ecdf.values = j.at("values").get<std::vector<int>>();
  ecdf.cum = j.at("cum_probs").get<std::vector<double>>();
  if (ecdf.values.empty() || ecdf.values.size() != ecdf.cum.size()) {
    throw std::runtime_error("marginals: malformed topics_per_user_ecdf");
  }
  return ecdf;
}

}  // namespace

void WriteMarginals(const EmpiricalMarginals& marginals, std::ostream& out) {
  nlohmann::json j;
  j["n_topic"] = marginals.n_topic;
  j["topics_per_user_ecdf"] = EcdfToJson(marginals.topics_per_user);
  j["topic_popularity"] = std::vector<double>(
      marginals.popularity.data(),
      marginals.popularity.data() + marginals.popularity.size());
  j["topic_avg_rate"] = std::vector<double>(
      marginals.avg_rate.data(),
      marginals.avg_rate.data() + marginals.avg_rate.size());
  out << j.dump(2) << "\n";
}

EmpiricalMarginals ReadMarginals(std::istream& in) {
  nlohmann::json j = nlohmann::json::parse(in);
  EmpiricalMarginals marginals;
  marginals.n_topic = j.at("n_topic").get<int>();
  if (marginals.n_topic < 1) {
    throw std::runtime_error("marginals: n_topic must be >= 1");
  }
  marginals.topics_per_user = EcdfFromJson(j.at("topics_per_user_ecdf"));
  auto popularity = j.at("topic_popularity").get<std::vector<double>>();
  auto avg_rate = j.at("topic_avg_rate").get<std::vector<double>>();
  if (static_cast<int>(popularity.size()) != marginals.n_topic ||
      static_cast<int>(avg_rate.size()) != marginals.n_topic) {
    throw std::runtime_error("marginals: array sizes must equal n_topic");
  }
  marginals.popularity =
      Eigen::Map<const RateVector>(popularity.data(), popularity.size());
  marginals.avg_rate =
      Eigen::Map<const RateVector>(avg_rate.data(), avg_rate.size());
  return marginals;
}

EmpiricalMarginals ReadMarginalsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open marginals file: " + path);
  return ReadMarginals(in);
}

void WriteMarginalsFile(const EmpiricalMarginals& marginals,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write marginals file: " + path);
  WriteMarginals(marginals, out);
}

}  // namespace topicsim
