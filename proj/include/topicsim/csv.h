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

#ifndef TOPICSIM_CSV_H_
#define TOPICSIM_CSV_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace topicsim {

// Splits one CSV line on commas. The formats handled by this tool never
// quote fields, so no quote handling is attempted. Surrounding whitespace
// and a trailing '\r' are trimmed.
std::vector<std::string> SplitCsvLine(std::string_view line);

std::optional<std::int64_t> ParseInt64(std::string_view s);
std::optional<double> ParseDouble(std::string_view s);

// Shortest-ish decimal rendering used in result files; deterministic for a
// given double value.
std::string FormatDouble(double value, int precision = 10);

}  // namespace topicsim

#endif  // TOPICSIM_CSV_H_
