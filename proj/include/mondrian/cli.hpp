/*
 * Copyright 2026 The Mondrian Forest Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace mondrian::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

const std::vector<std::string>& subcommands();

/// Config keys (underscore form) accepted by a subcommand. Each key is also a
/// flag, spelled with dashes: n_grid <-> --n-grid.
std::vector<std::string> fields_for(const std::string& subcommand);

/// Flat key -> value map. Accepts `key = value` lines (# comments) or a flat
/// JSON object. Duplicate keys throw ArgumentError.
std::map<std::string, std::string> load_config(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace mondrian::cli
