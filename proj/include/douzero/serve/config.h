// Copyright 2026 The DouZero-CPP Authors
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

#ifndef DOUZERO_SERVE_CONFIG_H_
#define DOUZERO_SERVE_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "douzero/training/dmc_trainer.h"

namespace douzero::serve {

struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string help;
};

// Run settings as string key/values. Precedence, lowest first: built-in
// defaults, config file, DOUZERO_<KEY> environment variables, explicit
// Set() calls (command-line flags). Unknown keys throw ConfigError.
class RunConfig {
 public:
  RunConfig();

  static const std::vector<ConfigKey>& Keys();

  // "key = value" lines; '#' starts a comment; blank lines ignored.
  void LoadFile(const std::string& path);
  void LoadText(const std::string& text, const std::string& origin = "<text>");
  // Reads DOUZERO_* variables from `env` (defaults to the process
  // environment).
  void ApplyEnv(char** env = nullptr);
  void Set(const std::string& key, const std::string& value);

  const std::string& Get(const std::string& key) const;
  int GetInt(const std::string& key) const;
  uint64_t GetUint(const std::string& key) const;
  double GetDouble(const std::string& key) const;
  bool GetBool(const std::string& key) const;

  training::TrainConfig ToTrainConfig() const;
  // key = value dump of every setting, in key order.
  std::string Dump() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace douzero::serve

#endif  // DOUZERO_SERVE_CONFIG_H_
