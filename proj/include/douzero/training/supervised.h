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


#ifndef DOUZERO_TRAINING_SUPERVISED_H_
#define DOUZERO_TRAINING_SUPERVISED_H_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "douzero/game/match_log.h"
#include "douzero/nn/bid_network.h"
#include "douzero/nn/optim.h"
#include "douzero/training/self_play.h"

namespace douzero::training {

// Card-play imitation. Every decision point contributes the logged move as a
// positive row and every other legal move as a negative row; the three
// position networks are trained independently with class-balanced BCE.
struct SlConfig {
  std::string preset = "desk";
  int epochs = 20;
  int batch_rows = 8096;
  double validation_fraction = 0.1;  // of games, not of rows
  nn::RmsPropConfig optimizer;
  uint64_t seed = 0;
};

struct SlEpoch {
  int epoch = 0;
  std::array<double, 3> train_loss{};
  std::array<double, 3> val_accuracy{};
  double seconds = 0.0;
};

struct SlResult {
  QNetSet nets;  // per position, the epoch with the best validation accuracy
  std::array<double, 3> val_accuracy{};
  std::array<int, 3> best_epoch{};
  std::array<long long, 3> positives{};  // training rows by label
  std::array<long long, 3> negatives{};
  size_t train_games = 0;
  size_t val_games = 0;
  std::vector<SlEpoch> history;
};

using SlProgress = std::function<void(const SlEpoch&)>;

// Throws EmptyCorpus when the corpus has no decision points.
SlResult TrainSl(const std::vector<game::MatchRecord>& corpus, const SlConfig& config,
                 const SlProgress& progress = {});

// Top-1 agreement of greedy network choices with the logged moves.
std::array<double, 3> SlAccuracy(const QNetSet& nets,
                                 const std::vector<game::MatchRecord>& games);

// Bidding examples: "<hand>;<history>;<label>" per line, history as a string
// of 'B'/'N' (may be empty), label 0 or 1. '#' starts a comment.
struct BidExample {
  game::CardSet hand;
  std::vector<game::BidDecision> history;
  bool label = false;
  friend bool operator==(const BidExample&, const BidExample&) = default;
};

std::string FormatBidCorpus(const std::vector<BidExample>& examples);
std::vector<BidExample> ParseBidCorpus(std::string_view text);
std::vector<BidExample> ReadBidCorpus(const std::string& path);
void WriteBidCorpus(const std::string& path, const std::vector<BidExample>& examples);

struct BidTrainConfig {
  int epochs = 20;
  int batch = 256;
  double validation_fraction = 0.1;
  nn::RmsPropConfig optimizer{1e-3, 0.99, 1e-5};
  uint64_t seed = 0;
};

struct BidTrainResult {
  std::shared_ptr<nn::BidNetwork<float>> net;
  double val_accuracy = 0.0;
  int best_epoch = 0;
  std::vector<double> val_history;
};

// Throws EmptyCorpus.
BidTrainResult TrainBidding(const std::vector<BidExample>& corpus, const BidTrainConfig& config);

// Fraction of examples where (probability > 0.5) matches the label.
double BidAccuracy(const nn::BidNetwork<float>& net, const std::vector<BidExample>& examples);

}  // namespace douzero::training

#endif  // DOUZERO_TRAINING_SUPERVISED_H_
