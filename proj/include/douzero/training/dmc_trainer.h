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

#ifndef DOUZERO_TRAINING_DMC_TRAINER_H_
#define DOUZERO_TRAINING_DMC_TRAINER_H_

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "douzero/nn/optim.h"
#include "douzero/training/self_play.h"
#include "douzero/training/shared_buffer.h"

namespace douzero::training {

struct TrainConfig {
  int buffer_entries = 50;  // B
  int entry_size = 100;     // S
  int batch_entries = 32;   // M
  double epsilon = 0.01;
  double gamma = 1.0;
  nn::RmsPropConfig optimizer;  // lr 1e-4, alpha 0.99, eps 1e-5
  int num_actors = 0;           // 0: hardware parallelism - 1, at least 1
  Objective objective = Objective::kWp;
  int sync_every = 1;  // episodes between parameter pulls
  uint64_t seed = 0;
  std::string preset = "full";

  std::string checkpoint_dir = "checkpoints";
  std::string stats_path;  // default: <checkpoint_dir>/stats.csv
  double checkpoint_interval_s = 1800.0;
  uint64_t checkpoint_every_frames = 0;   // 0 disables
  uint64_t checkpoint_every_updates = 0;  // 0 disables
  uint64_t max_frames = 0;                // 0 runs until stopped
  uint64_t max_updates = 0;
  double max_seconds = 0.0;
  bool resume = false;

  // Throws ConfigError on out-of-range values.
  void Validate() const;
  int ResolvedActors() const;
};

// One training instance: observation, chosen action and its return.
struct Instance {
  features::ObservationFeatures features;
  float target = 0.0f;
};

struct LoadedModel {
  QNetSet nets;
  uint64_t frames = 0;
};

// Latest "model_<frames>.dzck" in `dir`, if any.
std::optional<std::string> LatestCheckpoint(const std::string& dir);
// Loads the three position networks from a checkpoint file, or from the
// latest checkpoint when `path` is a directory.
LoadedModel LoadQNetSet(const std::string& path);

struct TrainSummary {
  uint64_t frames = 0;
  uint64_t updates = 0;
  uint64_t episodes = 0;
  double seconds = 0.0;
  std::vector<std::string> checkpoints;
};

// Deep Monte-Carlo trainer: actors self-play into per-position shared
// buffers; the learner takes M full entries of a position at a time and
// performs one MSE step on the M*S instances.
class DmcTrainer {
 public:
  explicit DmcTrainer(TrainConfig config);

  // Blocks until a stop condition or Stop(). Rethrows NonFiniteLoss after
  // writing a final checkpoint.
  TrainSummary Run();
  // Thread-safe and async-signal-safe.
  void Stop() { stop_.store(true); }

 private:
  void ActorLoop(int id);
  std::string SaveCheckpoint();

  TrainConfig config_;
  std::atomic<bool> stop_{false};
  std::atomic<uint64_t> episodes_{0};
  std::atomic<uint64_t> fill_sequence_{0};
  std::array<std::unique_ptr<SharedBuffer<Instance>>, 3> buffers_;
  std::unique_ptr<ParameterStore> store_;
  std::array<std::unique_ptr<nn::QNetwork<float>>, 3> nets_;
  std::array<nn::RmsProp<float>, 3> optimizers_;
  std::array<uint64_t, 3> updates_{};
  uint64_t frames_ = 0;
};

}  // namespace douzero::training

#endif  // DOUZERO_TRAINING_DMC_TRAINER_H_
