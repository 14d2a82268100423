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

#ifndef TOPICSIM_TYPES_H_
#define TOPICSIM_TYPES_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace topicsim {

// Index of a topic in the taxonomy, in [0, n_topic).
using TopicId = std::int32_t;

// Sentinel for "no topic exposed this epoch".
inline constexpr TopicId kNoTopic = -1;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Per-topic visit rates in visits/week, dense over the taxonomy. A zero
// entry means the persona never visits that topic.
using RateVector = Vector<double>;

// Per-topic counts or per-topic statistics, dense over the taxonomy.
using CountVector = Vector<std::int64_t>;

// Binary crossover mask over the topic universe.
using BoolMask = Eigen::Array<bool, Eigen::Dynamic, 1>;

// A population of personas: column u is persona u's rate vector; the number
// of rows equals the taxonomy size.
using Population = Eigen::MatrixXd;

// A set of topics, kept sorted ascending with no duplicates so that set
// equality is plain vector equality.
using TopicSet = std::vector<TopicId>;

struct TopicCount {
  TopicId topic = kNoTopic;
  std::int64_t count = 0;

  friend bool operator==(const TopicCount&, const TopicCount&) = default;
};

// Visit counts of one persona in one epoch, sorted by topic id. Only topics
// with at least one visit appear.
struct TopicHistory {
  std::vector<TopicCount> counts;

  std::int64_t TotalVisits() const {
    std::int64_t total = 0;
    for (const TopicCount& tc : counts) total += tc.count;
    return total;
  }

  TopicSet Support() const {
    TopicSet support;
    support.reserve(counts.size());
    for (const TopicCount& tc : counts) support.push_back(tc.topic);
    return support;
  }
};

}  // namespace topicsim

#endif  // TOPICSIM_TYPES_H_
