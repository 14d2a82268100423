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

#ifndef TOPICSIM_TAXONOMY_H_
#define TOPICSIM_TAXONOMY_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "topicsim/types.h"

namespace topicsim {

// The closed universe of topics. Topic ids are line numbers of the source
// document, starting at 0.
struct Taxonomy {
  int n_topic = 0;
  std::vector<std::string> labels;
  // Labels that appeared more than once; duplicates are accepted but worth
  // surfacing to the operator.
  int duplicate_labels = 0;
};

// Loads a taxonomy from a text document with one label per line. Throws
// std::runtime_error("empty taxonomy") if the document has no lines.
Taxonomy LoadTaxonomy(std::istream& in);
Taxonomy LoadTaxonomyFile(const std::string& path);

// Lowercases and strips scheme, path, port and a leading "www." so that
// mapping files stay small and unambiguous.
std::string NormalizeHostname(std::string_view hostname);

// Explicit hostname -> topic lookup table standing in for the browser's
// hostname classifier. Keys are normalized hostnames.
struct HostTopicMap {
  std::unordered_map<std::string, TopicId> entries;
};

// Loads a `hostname,topic_id` CSV (header row required). Topic ids must be
// valid in a taxonomy of n_topic topics; rows violating that throw.
HostTopicMap LoadHostTopicMap(std::istream& in, int n_topic);
HostTopicMap LoadHostTopicMapFile(const std::string& path, int n_topic);

// Maps a hostname to its topic; unknown hostnames yield nullopt, which
// callers drop from topic histories.
std::optional<TopicId> Classify(const HostTopicMap& map,
                                std::string_view hostname);

}  // namespace topicsim

#endif  // TOPICSIM_TAXONOMY_H_
