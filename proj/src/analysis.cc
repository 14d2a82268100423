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

#include "topicsim/analysis.h"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "topicsim/parallel.h"

namespace topicsim {

namespace {

struct TopicSetHash {
  std::size_t operator()(const TopicSet& set) const {
    // FNV-1a over the topic words.
    std::uint64_t h = 1469598103934665603ULL;
    for (TopicId t : set) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(t));
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

using ProfileCounts = std::unordered_map<TopicSet, int, TopicSetHash>;

ProfileCounts GroupProfiles(std::span<const TopicSet> profiles) {
  ProfileCounts groups;
  groups.reserve(profiles.size());
  for (const TopicSet& profile : profiles) ++groups[profile];
  return groups;
}

void CheckAscending(std::span<const int> eval_epochs, int n_epochs) {
  int prev = -1;
  for (int n : eval_epochs) {
    if (n < 0 || n > n_epochs) {
      throw std::invalid_argument("eval epoch outside the simulated range");
    }
    if (n <= prev) {
      throw std::invalid_argument("eval epochs must be strictly ascending");
    }
    prev = n;
  }
}

}  // namespace

double KAnonymity(std::span<const TopicSet> profiles, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (profiles.empty()) throw std::invalid_argument("no profiles");
  ProfileCounts groups = GroupProfiles(profiles);
  std::int64_t anonymized = 0;
  for (const auto& [profile, count] : groups) {
    if (count >= k) anonymized += count;
  }
  return static_cast<double>(anonymized) /
         static_cast<double>(profiles.size());
}

std::vector<double> KAnonymityCurve(std::span<const TopicSet> profiles,
                                    int k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  if (profiles.empty()) throw std::invalid_argument("no profiles");
  ProfileCounts groups = GroupProfiles(profiles);
  std::vector<double> curve(static_cast<std::size_t>(k_max), 0.0);
  for (const auto& [profile, count] : groups) {
    int upto = std::min(count, k_max);
    for (int k = 1; k <= upto; ++k) {
      curve[static_cast<std::size_t>(k - 1)] += static_cast<double>(count);
    }
  }
  for (double& v : curve) v /= static_cast<double>(profiles.size());
  return curve;
}

SimulatedDraws SimulatePopulationDraws(const Population& personas,
                                       int n_epochs, int n_sites,
                                       const EngineParams& params,
                                       std::uint64_t seed,
                                       std::uint64_t tag) {
  const std::size_t n_users = static_cast<std::size_t>(personas.cols());
  SimulatedDraws draws;
  draws.n_epochs = n_epochs;
  draws.n_sites = n_sites;
  draws.streams.resize(n_users);
  ParallelFor(n_users, [&](std::size_t u) {
    Rng rng = MakeRng(seed, {streams::kVisits, tag, u});
    draws.streams[u] = RunPersona(personas.col(static_cast<Eigen::Index>(u)),
                                  n_epochs, n_sites, params, rng);
  });
  return draws;
}

std::vector<TopicSet> ProfilesAtEpoch(const SimulatedDraws& draws, int site,
                                      int n_epochs,
                                      const DenoiseParams& params,
                                      bool denoised) {
  if (site < 0 || site >= draws.n_sites) {
    throw std::invalid_argument("site index out of range");
  }
  if (n_epochs < 0 || n_epochs > draws.n_epochs) {
    throw std::invalid_argument("epoch count outside the simulated range");
  }
  std::vector<TopicSet> profiles(draws.streams.size());
  for (std::size_t u = 0; u < draws.streams.size(); ++u) {
    const SiteLog& log = draws.streams[u][static_cast<std::size_t>(site)];
    ReconstructedProfile acc;
    for (int e = 0; e < n_epochs; ++e) {
      acc.Add(log.draws[static_cast<std::size_t>(e)]);
    }
    profiles[u] = denoised ? Denoise(acc, params) : acc.Support();
  }
  return profiles;
}

namespace {

// Walks the requested epoch counts in ascending order while extending each
// persona's accumulated counts, handing per-site profile snapshots to the
// callback. Avoids materializing profiles for every epoch at once.
template <typename Callback>
void ForEachEvalEpoch(const SimulatedDraws& draws,
                      std::span<const int> eval_epochs,
                      const DenoiseParams& params, bool denoised,
                      Callback&& callback) {
  CheckAscending(eval_epochs, draws.n_epochs);
  const std::size_t n_users = draws.streams.size();
  const std::size_t n_sites = static_cast<std::size_t>(draws.n_sites);

  std::vector<std::vector<ReconstructedProfile>> acc(
      n_users, std::vector<ReconstructedProfile>(n_sites));
  std::vector<std::vector<TopicSet>> profiles(
      n_sites, std::vector<TopicSet>(n_users));

  int done = 0;
  for (int n : eval_epochs) {
    for (std::size_t u = 0; u < n_users; ++u) {
      for (std::size_t s = 0; s < n_sites; ++s) {
        const SiteLog& log = draws.streams[u][s];
        ReconstructedProfile& profile = acc[u][s];
        for (int e = done; e < n; ++e) {
          profile.Add(log.draws[static_cast<std::size_t>(e)]);
        }
        profiles[s][u] = denoised ? Denoise(profile, params)
                                  : profile.Support();
      }
    }
    done = n;
    callback(n, profiles);
  }
}

}  // namespace

std::vector<double> AnonSeries(const SimulatedDraws& draws,
                               std::span<const int> eval_epochs,
                               const DenoiseParams& params, int k) {
  std::vector<double> series;
  series.reserve(eval_epochs.size());
  ForEachEvalEpoch(draws, eval_epochs, params, /*denoised=*/true,
                   [&](int, const std::vector<std::vector<TopicSet>>& p) {
                     series.push_back(KAnonymity(p[0], k));
                   });
  return series;
}

ReidentReport MatchCrossSite(std::span<const TopicSet> site_a,
                             std::span<const TopicSet> site_b) {
  if (site_a.size() != site_b.size() || site_a.empty()) {
    throw std::invalid_argument("cross-site profile lists must align");
  }
  const std::size_t n = site_a.size();

  ProfileCounts a_counts = GroupProfiles(site_a);

  // For site B we also need, for profiles occurring exactly once, which
  // persona owns the single occurrence.
  struct BEntry {
    int count = 0;
    std::size_t sole_owner = 0;
  };
  std::unordered_map<TopicSet, BEntry, TopicSetHash> b_counts;
  b_counts.reserve(n);
  for (std::size_t u = 0; u < n; ++u) {
    BEntry& entry = b_counts[site_b[u]];
    ++entry.count;
    entry.sole_owner = u;
  }

  std::size_t tp = 0, fp = 0, unique_a = 0, equal = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const TopicSet& profile = site_a[v];
    if (site_b[v] == profile) ++equal;
    if (a_counts.at(profile) != 1) continue;
    ++unique_a;
    auto it = b_counts.find(profile);
    if (it == b_counts.end() || it->second.count != 1) continue;
    if (it->second.sole_owner == v) {
      ++tp;
    } else {
      ++fp;
    }
  }

  ReidentReport report;
  report.population = static_cast<int>(n);
  report.tp_rate = static_cast<double>(tp) / static_cast<double>(n);
  report.fp_rate = static_cast<double>(fp) / static_cast<double>(n);
  report.p1 = static_cast<double>(unique_a) / static_cast<double>(n);
  report.p2 = static_cast<double>(equal) / static_cast<double>(n);
  return report;
}

std::vector<ReidentReport> ReidentSeries(const SimulatedDraws& draws,
                                         std::span<const int> eval_epochs,
                                         const DenoiseParams& params,
                                         bool denoised) {
  if (draws.n_sites < 2) {
    throw std::invalid_argument("re-identification needs two sites");
  }
  std::vector<ReidentReport> series;
  series.reserve(eval_epochs.size());
  ForEachEvalEpoch(draws, eval_epochs, params, denoised,
                   [&](int n, const std::vector<std::vector<TopicSet>>& p) {
                     ReidentReport report = MatchCrossSite(p[0], p[1]);
                     report.n_epochs = n;
                     series.push_back(report);
                   });
  return series;
}

ReidentReport ReidentExperiment(const Population& personas, int n_epochs,
                                const EngineParams& engine,
                                const DenoiseParams& denoise,
                                std::uint64_t seed, std::uint64_t tag) {
  SimulatedDraws draws =
      SimulatePopulationDraws(personas, n_epochs, 2, engine, seed, tag);
  const int eval[] = {n_epochs};
  return ReidentSeries(draws, eval, denoise, /*denoised=*/true).front();
}

ReidentReport ReidentWithoutDenoise(const Population& personas, int n_epochs,
                                    const EngineParams& engine,
                                    const DenoiseParams& denoise,
                                    std::uint64_t seed, std::uint64_t tag) {
  SimulatedDraws draws =
      SimulatePopulationDraws(personas, n_epochs, 2, engine, seed, tag);
  const int eval[] = {n_epochs};
  return ReidentSeries(draws, eval, denoise, /*denoised=*/false).front();
}

std::vector<double> BaselineAnonSeries(const Population& personas,
                                       std::span<const int> eval_epochs,
                                       const EngineParams& params, int k,
                                       std::uint64_t seed,
                                       std::uint64_t tag) {
  if (eval_epochs.empty()) return {};
  const int n_max = eval_epochs.back();
  CheckAscending(eval_epochs, n_max);
  const std::size_t n_users = static_cast<std::size_t>(personas.cols());

  // Per persona: the visited-topic union after each prefix of epochs.
  std::vector<std::vector<TopicSet>> unions(
      n_users, std::vector<TopicSet>(eval_epochs.size()));
  ParallelFor(n_users, [&](std::size_t u) {
    Rng rng = MakeRng(seed, {streams::kVisits, tag, u});
    std::vector<bool> seen(static_cast<std::size_t>(personas.rows()), false);
    TopicSet support;
    std::size_t next_eval = 0;
    while (next_eval < eval_epochs.size() && eval_epochs[next_eval] == 0) {
      unions[u][next_eval] = {};
      ++next_eval;
    }
    for (int e = 0; e < n_max && next_eval < eval_epochs.size(); ++e) {
      TopicHistory history =
          SampleEpochVisits(personas.col(static_cast<Eigen::Index>(u)),
                            params, rng);
      for (const TopicCount& tc : history.counts) {
        if (!seen[static_cast<std::size_t>(tc.topic)]) {
          seen[static_cast<std::size_t>(tc.topic)] = true;
          support.push_back(tc.topic);
        }
      }
      while (next_eval < eval_epochs.size() &&
             eval_epochs[next_eval] == e + 1) {
        TopicSet snapshot = support;
        std::sort(snapshot.begin(), snapshot.end());
        unions[u][next_eval] = std::move(snapshot);
        ++next_eval;
      }
    }
    while (next_eval < eval_epochs.size()) {
      TopicSet snapshot = support;
      std::sort(snapshot.begin(), snapshot.end());
      unions[u][next_eval] = std::move(snapshot);
      ++next_eval;
    }
  });

  std::vector<double> series;
  series.reserve(eval_epochs.size());
  std::vector<TopicSet> profiles(n_users);
  for (std::size_t i = 0; i < eval_epochs.size(); ++i) {
    for (std::size_t u = 0; u < n_users; ++u) {
      profiles[u] = unions[u][i];
    }
    series.push_back(KAnonymity(profiles, k));
  }
  return series;
}

}  // namespace topicsim
