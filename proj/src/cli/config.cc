// Copyright 2026 The PrivaTree Authors
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

#include "cli/config.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "privatree/errors.h"

namespace privatree::cli {
namespace {

std::string ScalarText(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<uint64_t>());
  if (v.is_number()) {
    std::ostringstream s;
    s.precision(17);
    s << v.get<double>();
    return s.str();
  }
  throw ArgumentError("config field '" + key + "' has an unsupported type");
}

}  // namespace

double ParseEpsilon(const std::string& text, const std::string& field) {
  if (text == "inf" || text == "+inf" || text == "infinity" || text == "Inf") {
    return std::numeric_limits<double>::infinity();
  }
  size_t used = 0;
  double v;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ArgumentError(field + ": not a number: '" + text + "'");
  }
  if (used != text.size()) {
    throw ArgumentError(field + ": not a number: '" + text + "'");
  }
  if (!(v > 0) || !std::isfinite(v)) {
    throw ArgumentError(field + ": must be positive or 'inf', got " + text);
  }
  return v;
}

uint64_t ResolveSeed(const std::optional<uint64_t>& flag) {
  if (flag) return *flag;
  const char* env = std::getenv("PRIVATREE_SEED");
  if (env == nullptr || *env == '\0') return 0;
  const std::string text(env);
  size_t used = 0;
  uint64_t v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text[0] == '-') {
    throw ArgumentError("PRIVATREE_SEED: not a non-negative integer: '" +
                        text + "'");
  }
  return v;
}

void ApplyJsonConfig(CLI::App& app, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("--config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError("--config: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ArgumentError("--config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    CLI::Option* opt = app.get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") {
      throw ArgumentError("config: unknown field '" + key + "'");
    }
    if (opt->count() > 0) continue;
    if (value.is_array()) {
      for (const auto& item : value) opt->add_result(ScalarText(item, key));
    } else {
      opt->add_result(ScalarText(value, key));
    }
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ArgumentError("config field '" + key + "': " + e.what());
    }
  }
}

void RequireFile(const std::string& path, const std::string& flag) {
  if (path.empty()) throw ArgumentError(flag + " is required");
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw ArgumentError(flag + ": file not found: " + path);
  }
}

}  // namespace privatree::cli
