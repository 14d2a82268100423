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

#include "topicsim/taxonomy.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <unordered_set>

#include "topicsim/csv.h"

namespace topicsim {

Taxonomy LoadTaxonomy(std::istream& in) {
  Taxonomy taxonomy;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!seen.insert(line).second) ++taxonomy.duplicate_labels;
    taxonomy.labels.push_back(line);
  }
  taxonomy.n_topic = static_cast<int>(taxonomy.labels.size());
  if (taxonomy.n_topic == 0) throw std::runtime_error("empty taxonomy");
  return taxonomy;
}

Taxonomy LoadTaxonomyFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open taxonomy file: " + path);
  return LoadTaxonomy(in);
}

std::string NormalizeHostname(std::string_view hostname) {
  std::size_t scheme = hostname.find("://");
  if (scheme != std::string_view::npos) hostname.remove_prefix(scheme + 3);
  std::size_t slash = hostname.find('/');
  if (slash != std::string_view::npos) hostname = hostname.substr(0, slash);
  std::size_t colon = hostname.find(':');
  if (colon != std::string_view::npos) hostname = hostname.substr(0, colon);

  std::string out(hostname);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  if (out.rfind("www.", 0) == 0) out.erase(0, 4);
  return out;
}

HostTopicMap LoadHostTopicMap(std::istream& in, int n_topic) {
  HostTopicMap map;
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
    if (fields.size() != 2) {
      throw std::runtime_error("host map: malformed row at line " +
                               std::to_string(line_no));
    }
    std::optional<std::int64_t> id = ParseInt64(fields[1]);
    if (!id || *id < 0 || *id >= n_topic) {
      throw std::runtime_error("host map: invalid topic_id at line " +
                               std::to_string(line_no));
    }
    map.entries[NormalizeHostname(fields[0])] = static_cast<TopicId>(*id);
  }
  return map;
}

HostTopicMap LoadHostTopicMapFile(const std::string& path, int n_topic) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open host map file: " + path);
  return LoadHostTopicMap(in, n_topic);
}

std::optional<TopicId> Classify(const HostTopicMap& map,
                                std::string_view hostname) {
  auto it = map.entries.find(NormalizeHostname(hostname));
  if (it == map.entries.end()) return std::nullopt;
  return it->second;
}

}  // namespace topicsim
