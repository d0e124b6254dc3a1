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

#ifndef DOUZERO_TRAINING_SELF_PLAY_H_
#define DOUZERO_TRAINING_SELF_PLAY_H_

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "douzero/game/scoring.h"
#include "douzero/nn/qnetwork.h"
#include "douzero/training/returns.h"

namespace douzero::training {

// Immutable network snapshots, indexed by position. Safe to share between
// threads.
using QNetPtr = std::shared_ptr<const nn::QNetwork<float>>;
using QNetSet = std::array<QNetPtr, 3>;

// Network names used inside checkpoints: "L", "D", "U".
std::string NetName(Position p);

// Fresh networks for the three positions from a preset and seed.
QNetSet InitQNetSet(const std::string& preset, uint64_t seed);

// Learner-owned versioned parameters; actors pull at episode start.
class ParameterStore {
 public:
  explicit ParameterStore(QNetSet initial) : nets_(std::move(initial)) {}

  QNetSet Snapshot(uint64_t* version = nullptr) const {
    std::lock_guard lock(mu_);
    if (version) *version = version_;
    return nets_;
  }
  void Publish(Position p, QNetPtr net) {
    std::lock_guard lock(mu_);
    nets_[static_cast<int>(p)] = std::move(net);
    ++version_;
  }

 private:
  mutable std::mutex mu_;
  QNetSet nets_;
  uint64_t version_ = 0;
};

// Argmax of the Q-values with probability 1 - epsilon, otherwise a uniform
// legal move. Ties go to the earliest move. Forced moves skip the network.
int SelectAction(const nn::QNetwork<float>& net, const features::StateFeatures& state,
                 const std::vector<game::Combo>& legal, double epsilon, std::mt19937_64& rng);

struct EpisodeResult {
  EpisodeRecord record;
  std::vector<double> returns;
  game::MatchResult result;
};

// One self-play game on a uniformly shuffled deck with seat 0 as Landlord.
EpisodeResult PlayEpisode(const QNetSet& nets, double epsilon, Objective objective,
                          double gamma, std::mt19937_64& rng);

}  // namespace douzero::training

#endif  // DOUZERO_TRAINING_SELF_PLAY_H_
