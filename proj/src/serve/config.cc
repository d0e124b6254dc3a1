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

#include "douzero/serve/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "douzero/common/error.h"

extern char** environ;

namespace douzero::serve {

const std::vector<ConfigKey>& RunConfig::Keys() {
  static const std::vector<ConfigKey> keys = {
      {"actors", "0", "self-play actor threads (0: hardware threads - 1)"},
      {"batch_entries", "32", "M, full buffer entries per learner batch"},
      {"bind_host", "127.0.0.1", "service bind address"},
      {"bind_port", "8080", "service port"},
      {"bot_delay_ms", "300", "bot think delay in the game service"},
      {"buffer_entries", "50", "B, entries per position buffer"},
      {"checkpoint", "", "checkpoint file or directory used by serve and eval"},
      {"checkpoint_dir", "checkpoints", "training checkpoint directory"},
      {"checkpoint_every_frames", "0", "extra checkpoint cadence in frames (0: off)"},
      {"checkpoint_every_updates", "0", "extra checkpoint cadence in updates (0: off)"},
      {"checkpoint_interval_s", "1800", "wall-clock checkpoint cadence"},
      {"corpus_path", "", "match-log or bid corpus path"},
      {"entry_size", "100", "S, instances per buffer entry"},
      {"epochs", "20", "supervised training epochs"},
      {"epsilon", "0.01", "exploration rate"},
      {"gamma", "1.0", "discount factor"},
      {"log_dir", "logs", "directory for exported match logs and reports"},
      {"lr", "0.0001", "RMSprop learning rate"},
      {"max_frames", "0", "stop after this many frames (0: unbounded)"},
      {"max_seconds", "0", "stop after this many seconds (0: unbounded)"},
      {"max_updates", "0", "stop after this many learner updates (0: unbounded)"},
      {"objective", "wp", "training objective: wp or adp"},
      {"preset", "full", "network preset: full or desk"},
      {"resume", "false", "resume from the latest checkpoint in checkpoint_dir"},
      {"rms_alpha", "0.99", "RMSprop smoothing constant"},
      {"rms_eps", "0.00001", "RMSprop epsilon"},
      {"seed", "0", "master random seed"},
      {"sl_batch", "8096", "supervised batch size (instances)"},
      {"static_dir", "", "directory served at / by the game service"},
      {"stats_path", "", "training stats CSV (default <checkpoint_dir>/stats.csv)"},
      {"sync_every", "1", "episodes between actor parameter pulls"},
      {"threads", "1", "evaluation worker threads"},
  };
  return keys;
}

RunConfig::RunConfig() {
  for (const auto& k : Keys()) values_[k.name] = k.default_value;
}

namespace {

std::string Trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

}  // namespace

void RunConfig::Set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second = value;
}

void RunConfig::LoadText(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(n) + ": expected key = value");
    }
    const std::string key = Trim(line.substr(0, eq));
    try {
      Set(key, Trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

void RunConfig::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  LoadText(buf.str(), path);
}

void RunConfig::ApplyEnv(char** env) {
  if (!env) env = environ;
  static const std::string kPrefix = "DOUZERO_";
  for (char** e = env; *e; ++e) {
    const std::string entry(*e);
    if (entry.rfind(kPrefix, 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string key = entry.substr(kPrefix.size(), eq - kPrefix.size());
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    try {
      Set(key, entry.substr(eq + 1));
    } catch (const ConfigError&) {
      throw ConfigError("unknown environment setting " + entry.substr(0, eq));
    }
  }
}

const std::string& RunConfig::Get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

namespace {

template <typename T>
T ParseNumber(const std::string& key, const std::string& text) {
  T v{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError("config key '" + key + "' has invalid value '" + text + "'");
  }
  return v;
}

}  // namespace

int RunConfig::GetInt(const std::string& key) const { return ParseNumber<int>(key, Get(key)); }
uint64_t RunConfig::GetUint(const std::string& key) const {
  return ParseNumber<uint64_t>(key, Get(key));
}
double RunConfig::GetDouble(const std::string& key) const {
  return ParseNumber<double>(key, Get(key));
}

bool RunConfig::GetBool(const std::string& key) const {
  const std::string& v = Get(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "' expects a boolean, got '" + v + "'");
}

training::TrainConfig RunConfig::ToTrainConfig() const {
  training::TrainConfig c;
  c.buffer_entries = GetInt("buffer_entries");
  c.entry_size = GetInt("entry_size");
  c.batch_entries = GetInt("batch_entries");
  c.epsilon = GetDouble("epsilon");
  c.gamma = GetDouble("gamma");
  c.optimizer.lr = GetDouble("lr");
  c.optimizer.alpha = GetDouble("rms_alpha");
  c.optimizer.eps = GetDouble("rms_eps");
  c.num_actors = GetInt("actors");
  c.objective = training::ParseObjective(Get("objective"));
  c.sync_every = GetInt("sync_every");
  c.seed = GetUint("seed");
  c.preset = Get("preset");
  c.checkpoint_dir = Get("checkpoint_dir");
  c.stats_path = Get("stats_path");
  c.checkpoint_interval_s = GetDouble("checkpoint_interval_s");
  c.checkpoint_every_frames = GetUint("checkpoint_every_frames");
  c.checkpoint_every_updates = GetUint("checkpoint_every_updates");
  c.max_frames = GetUint("max_frames");
  c.max_updates = GetUint("max_updates");
  c.max_seconds = GetDouble("max_seconds");
  c.resume = GetBool("resume");
  c.Validate();
  return c;
}

std::string RunConfig::Dump() const {
  std::ostringstream s;
  for (const auto& [k, v] : values_) s << k << " = " << v << '\n';
  return s.str();
}

}  // namespace douzero::serve
