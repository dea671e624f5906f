// Copyright 2026 The permcount Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef PERMCOUNT_TESTS_CLI_SUPPORT_HPP
#define PERMCOUNT_TESTS_CLI_SUPPORT_HPP

#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "permcount/cli.hpp"

namespace cli_support {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

inline Result run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = permcount::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

/// Removes every "wall_ms" member, at any depth.
inline void strip_wall_ms(nlohmann::ordered_json& j) {
  if (j.is_object()) {
    j.erase("wall_ms");
    for (auto& [key, value] : j.items()) {
      strip_wall_ms(value);
    }
  } else if (j.is_array()) {
    for (auto& value : j) {
      strip_wall_ms(value);
    }
  }
}

/// Report text with timings removed, for byte comparison.
inline std::string without_timing(const std::string& text) {
  auto j = nlohmann::ordered_json::parse(text);
  strip_wall_ms(j);
  return j.dump();
}

}  // namespace cli_support

#endif  // PERMCOUNT_TESTS_CLI_SUPPORT_HPP
