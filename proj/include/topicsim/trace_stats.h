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

#ifndef TOPICSIM_TRACE_STATS_H_
#define TOPICSIM_TRACE_STATS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "topicsim/taxonomy.h"
#include "topicsim/types.h"

namespace topicsim {

// One trace row: a user visited a hostname some number of times during a
// week-granularity epoch.
struct TraceRecord {
  std::string user_id;
  int epoch = 0;
  std::string hostname;
  std::int64_t visits = 0;
};

using EpochHistories = std::map<int, TopicHistory>;
using UserHistories = std::map<std::string, EpochHistories>;

struct IngestResult {
  UserHistories histories;
  std::size_t rejected_rows = 0;
  std::size_t unmapped_rows = 0;
};

// Reads a `user_id,epoch,hostname,visits` CSV (header row required) and
// folds it into per-user, per-epoch topic histories. Counts of hostnames
// mapping to the same topic are summed; unknown hostnames are dropped;
// malformed rows are rejected and counted, not fatal.
IngestResult IngestTrace(std::istream& in, const HostTopicMap& map);

// Keeps, per user, only epochs with at least min_pages total visits; users
// left with no epochs are dropped.
UserHistories ActiveUserFilter(const UserHistories& histories,
                               std::int64_t min_pages);

// Per-topic visit rates of one user: total count divided by the number of
// active epochs. Throws std::runtime_error("inactive user") when the user
// has no epochs.
RateVector UserRates(const EpochHistories& epochs, int n_topic);

// Discrete CDF over integer values, for inverse transform sampling.
struct DiscreteEcdf {
  std::vector<int> values;      // ascending
  std::vector<double> cum;      // same length, non-decreasing, ends at 1

  // Smallest value whose CDF strictly exceeds u, for u in [0, 1).
  int Quantile(double u) const;
  double Cdf(int value) const;
};

// The three per-population marginals that drive persona generation.
struct EmpiricalMarginals {
  int n_topic = 0;
  DiscreteEcdf topics_per_user;
  // Fraction of users that visited the topic at least once; zero entries
  // mean the topic never occurs.
  RateVector popularity;
  // Mean weekly visits among the users that visit the topic; zero where
  // popularity is zero.
  RateVector avg_rate;
};

// Extracts the marginals from a population of rate personas (columns).
EmpiricalMarginals ComputeMarginals(const Population& personas);

// Generator of stand-in marginals with the same broad shape as measured
// browsing populations: rank-Zipf topic popularity, a log-normal-shaped
// topics-per-user distribution and power-law per-topic rates with seeded
// jitter so rate rank and popularity rank are not perfectly aligned.
struct SynthMarginalConfig {
  int n_topic = 349;
  // Topics with nonzero popularity (the rest are never visited).
  int n_active = 250;
  // popularity(rank r) = top_popularity * r^-popularity_exponent.
  double popularity_exponent = 0.8;
  double top_popularity = 0.99;
  // avg_rate(rank r) = rate_top * r^-rate_exponent * lognormal jitter.
  double rate_top = 40.0;
  double rate_exponent = 0.9;
  double rate_jitter_sigma = 0.5;
  // Discretized log-normal topics-per-user distribution, truncated to
  // [1, n_active]. Defaults put the median at 36 topics.
  double topics_log_mean = 3.5835189384561099;  // ln 36
  double topics_log_sigma = 0.85;
  // Optional explicit override: (value, probability) pairs.
  std::vector<std::pair<int, double>> topics_per_user_pmf;
  std::uint64_t seed = 1;
};

EmpiricalMarginals SynthMarginals(const SynthMarginalConfig& config);

// Marginals persist as JSON so persona generation can run without a trace.
void WriteMarginals(const EmpiricalMarginals& marginals, std::ostream& out);
EmpiricalMarginals ReadMarginals(std::istream& in);
EmpiricalMarginals ReadMarginalsFile(const std::string& path);
void WriteMarginalsFile(const EmpiricalMarginals& marginals,
                        const std::string& path);

}  // namespace topicsim

#endif  // TOPICSIM_TRACE_STATS_H_
