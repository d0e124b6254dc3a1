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


#include "douzero/training/supervised.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include "douzero/common/error.h"
#include "douzero/features/encoding.h"

namespace douzero::training {
namespace {

using game::CardSet;
using game::Combo;
using game::MatchRecord;
using game::Position;

struct Decision {
  features::StateFeatures state;
  std::vector<features::CardVector> actions;  // legal moves, distinct card sets
  int chosen = 0;
};

// Legal moves with duplicate card sets removed (they encode identically),
// plus the index of the logged move.
std::vector<Combo> DistinctLegal(const game::GameState& state, const Combo& logged, int* chosen) {
  std::vector<Combo> out;
  std::unordered_set<CardSet, game::CardSetHash> seen;
  *chosen = -1;
  for (auto& c : state.LegalMoves()) {
    if (!seen.insert(c.cards).second) continue;
    if (c.cards == logged.cards) *chosen = static_cast<int>(out.size());
    out.push_back(std::move(c));
  }
  if (*chosen < 0) throw IllegalReplay("logged move " + logged.ToString() + " is not legal");
  return out;
}

// Calls fn(position, state, legal, chosen) at every decision of a game.
template <typename Fn>
void ForEachDecision(const MatchRecord& match, Fn&& fn) {
  game::GameState state = game::GameState::FromPositionHands(match.hands);
  for (const auto& move : match.moves) {
    if (state.phase() == game::Phase::kFinished || state.current_position() != move.position) {
      throw IllegalReplay("corpus move out of turn");
    }
    int chosen = 0;
    const auto legal = DistinctLegal(state, move.combo, &chosen);
    fn(move.position, state, legal, chosen);
    state.ApplyMove(move.combo);
  }
}

Decision MakeDecision(const game::GameState& state, const std::vector<Combo>& legal, int chosen) {
  Decision d;
  d.state = features::EncodeState(state.CurrentObservation());
  d.actions.reserve(legal.size());
  for (const auto& c : legal) d.actions.push_back(features::EncodeAction(c));
  d.chosen = chosen;
  return d;
}

nn::QInput<float> BuildInput(const std::vector<Decision>& batch) {
  const int g = static_cast<int>(batch.size());
  const int s = static_cast<int>(batch.front().state.state.size());
  int n = 0;
  for (const auto& d : batch) n += static_cast<int>(d.actions.size());
  nn::QInput<float> in;
  in.history.assign(features::kHistoryRows, nn::Matrix<float>(features::kHistoryCols, g));
  in.state.resize(s, g);
  in.action.resize(features::kCardVectorSize, n);
  in.group.resize(n);
  int row = 0;
  for (int k = 0; k < g; ++k) {
    const auto& d = batch[k];
    for (int r = 0; r < features::kHistoryRows; ++r) {
      for (int c = 0; c < features::kHistoryCols; ++c) {
        in.history[r](c, k) = d.state.history[r * features::kHistoryCols + c];
      }
    }
    for (int i = 0; i < s; ++i) in.state(i, k) = d.state.state[i];
    for (const auto& a : d.actions) {
      for (int i = 0; i < features::kCardVectorSize; ++i) in.action(i, row) = a[i];
      in.group[row++] = k;
    }
  }
  return in;
}

// Number of decisions in `batch` whose highest-valued row is the chosen one.
// Ties go to the first row, as in greedy play.
long long CountCorrect(const nn::QNetwork<float>& net, const std::vector<Decision>& batch) {
  const auto in = BuildInput(batch);
  const nn::Matrix<float> q = net.Forward(in, nullptr);
  long long correct = 0;
  int row = 0;
  for (const auto& d : batch) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(d.actions.size()); ++i) {
      if (q(0, row + i) > q(0, row + best)) best = i;
    }
    correct += best == d.chosen;
    row += static_cast<int>(d.actions.size());
  }
  return correct;
}

constexpr int kEvalRows = 4096;

std::array<double, 3> Accuracy(const std::array<const nn::QNetwork<float>*, 3>& nets,
                               const std::vector<MatchRecord>& games) {
  std::array<std::vector<Decision>, 3> pending;
  std::array<int, 3> rows{};
  std::array<long long, 3> total{}, correct{};
  auto flush = [&](int p) {
    if (pending[p].empty()) return;
    correct[p] += CountCorrect(*nets[p], pending[p]);
    pending[p].clear();
    rows[p] = 0;
  };
  for (const auto& match : games) {
    ForEachDecision(match, [&](Position pos, const game::GameState& state,
                               const std::vector<Combo>& legal, int chosen) {
      const int p = static_cast<int>(pos);
      ++total[p];
      if (legal.size() == 1) {
        ++correct[p];
        return;
      }
      pending[p].push_back(MakeDecision(state, legal, chosen));
      rows[p] += static_cast<int>(legal.size());
      if (rows[p] >= kEvalRows) flush(p);
    });
  }
  std::array<double, 3> acc{};
  for (int p = 0; p < 3; ++p) {
    flush(p);
    acc[p] = total[p] ? static_cast<double>(correct[p]) / total[p] : 0.0;
  }
  return acc;
}

}  // namespace

std::array<double, 3> SlAccuracy(const QNetSet& nets, const std::vector<MatchRecord>& games) {
  return Accuracy({nets[0].get(), nets[1].get(), nets[2].get()}, games);
}

SlResult TrainSl(const std::vector<MatchRecord>& corpus, const SlConfig& config,
                 const SlProgress& progress) {
  if (config.epochs < 1 || config.batch_rows < 1) throw ConfigError("sl epochs and batch must be >= 1");
  if (config.validation_fraction < 0.0 || config.validation_fraction >= 1.0) {
    throw ConfigError("validation_fraction must be in [0, 1)");
  }
  std::mt19937_64 rng(config.seed);

  // Split by game so that no validation decision shares a deal with training.
  std::vector<size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const size_t n_val = static_cast<size_t>(config.validation_fraction * corpus.size());
  std::vector<MatchRecord> train, val;
  for (size_t i = 0; i < order.size(); ++i) {
    (i < n_val ? val : train).push_back(corpus[order[i]]);
  }
  // Tiny corpora validate on the training games.
  if (val.empty()) val = train;

  SlResult result;
  result.train_games = train.size();
  result.val_games = n_val;
  for (const auto& match : train) {
    ForEachDecision(match, [&](Position pos, const game::GameState&,
                               const std::vector<Combo>& legal, int) {
      const int p = static_cast<int>(pos);
      ++result.positives[p];
      result.negatives[p] += static_cast<long long>(legal.size()) - 1;
    });
  }
  if (result.positives[0] + result.positives[1] + result.positives[2] == 0) {
    throw EmptyCorpus("sl corpus has no decisions");
  }

  // Class weights n / (2 n_c) per position.
  std::array<float, 3> w_pos{}, w_neg{};
  for (int p = 0; p < 3; ++p) {
    const double n = static_cast<double>(result.positives[p] + result.negatives[p]);
    w_pos[p] = result.positives[p] ? static_cast<float>(n / (2.0 * result.positives[p])) : 0.f;
    w_neg[p] = result.negatives[p] ? static_cast<float>(n / (2.0 * result.negatives[p])) : 0.f;
  }

  const QNetSet init = InitQNetSet(config.preset, config.seed);
  std::array<nn::QNetwork<float>, 3> nets;
  std::array<nn::RmsProp<float>, 3> opts;
  std::array<nn::QNetwork<float>, 3> best;
  for (int p = 0; p < 3; ++p) {
    nets[p] = *init[p];
    opts[p] = nn::RmsProp<float>(nets[p].Params(), config.optimizer);
    best[p] = nets[p];
    result.val_accuracy[p] = -1.0;
  }

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::shuffle(train.begin(), train.end(), rng);
    std::array<std::vector<Decision>, 3> pending;
    std::array<int, 3> rows{};
    std::array<double, 3> loss_sum{};
    std::array<long long, 3> steps{};
    auto step = [&](int p) {
      if (pending[p].empty()) return;
      const auto in = BuildInput(pending[p]);
      nn::Matrix<float> labels = nn::Matrix<float>::Zero(1, in.rows());
      nn::Matrix<float> weights = nn::Matrix<float>::Constant(1, in.rows(), w_neg[p]);
      int row = 0;
      for (const auto& d : pending[p]) {
        labels(0, row + d.chosen) = 1.f;
        weights(0, row + d.chosen) = w_pos[p];
        row += static_cast<int>(d.actions.size());
      }
      loss_sum[p] += nn::TrainStepWeightedBce(nets[p], opts[p], in, labels, weights);
      ++steps[p];
      pending[p].clear();
      rows[p] = 0;
    };
    for (const auto& match : train) {
      ForEachDecision(match, [&](Position pos, const game::GameState& state,
                                 const std::vector<Combo>& legal, int chosen) {
        const int p = static_cast<int>(pos);
        pending[p].push_back(MakeDecision(state, legal, chosen));
        rows[p] += static_cast<int>(legal.size());
        if (rows[p] >= config.batch_rows) step(p);
      });
    }
    for (int p = 0; p < 3; ++p) step(p);

    SlEpoch stats;
    stats.epoch = epoch;
    stats.val_accuracy = Accuracy({&nets[0], &nets[1], &nets[2]}, val);
    for (int p = 0; p < 3; ++p) {
      stats.train_loss[p] = steps[p] ? loss_sum[p] / steps[p] : 0.0;
      if (stats.val_accuracy[p] > result.val_accuracy[p]) {
        result.val_accuracy[p] = stats.val_accuracy[p];
        result.best_epoch[p] = epoch;
        best[p] = nets[p];
      }
    }
    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.history.push_back(stats);
    if (progress) progress(stats);
  }
  for (int p = 0; p < 3; ++p) result.nets[p] = std::make_shared<nn::QNetwork<float>>(best[p]);
  return result;
}

// ------------------------------------------------------------------ bidding

std::string FormatBidCorpus(const std::vector<BidExample>& examples) {
  std::string out;
  for (const auto& e : examples) {
    out += e.hand.ToString();
    out += ';';
    for (auto b : e.history) out += b == game::BidDecision::kBid ? 'B' : 'N';
    out += ';';
    out += e.label ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::vector<BidExample> ParseBidCorpus(std::string_view text) {
  std::vector<BidExample> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto a = line.find(';');
    const auto b = a == std::string::npos ? a : line.find(';', a + 1);
    if (b == std::string::npos || line.find(';', b + 1) != std::string::npos) {
      throw ParseError("bid corpus line " + std::to_string(lineno) + ": expected 3 fields");
    }
    BidExample e;
    e.hand = CardSet::FromString(line.substr(0, a));
    if (e.hand.Size() != game::kHandSize) {
      throw BadHandSize("bid corpus line " + std::to_string(lineno) + ": hand must have 17 cards");
    }
    for (char c : line.substr(a + 1, b - a - 1)) {
      if (c == 'B') {
        e.history.push_back(game::BidDecision::kBid);
      } else if (c == 'N') {
        e.history.push_back(game::BidDecision::kNoBid);
      } else {
        throw ParseError("bid corpus line " + std::to_string(lineno) + ": bad history");
      }
    }
    const std::string label = line.substr(b + 1);
    if (label != "0" && label != "1") {
      throw ParseError("bid corpus line " + std::to_string(lineno) + ": label must be 0 or 1");
    }
    e.label = label == "1";
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<BidExample> ReadBidCorpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return ParseBidCorpus(s.str());
}

void WriteBidCorpus(const std::string& path, const std::vector<BidExample>& examples) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << FormatBidCorpus(examples);
}

namespace {

nn::Matrix<float> BidMatrix(const std::vector<const BidExample*>& batch) {
  nn::Matrix<float> x(features::kBidFeatureSize, static_cast<int>(batch.size()));
  for (int k = 0; k < static_cast<int>(batch.size()); ++k) {
    const auto f = features::EncodeBid(batch[k]->hand, batch[k]->history);
    for (int i = 0; i < features::kBidFeatureSize; ++i) x(i, k) = f[i];
  }
  return x;
}

}  // namespace

double BidAccuracy(const nn::BidNetwork<float>& net, const std::vector<BidExample>& examples) {
  if (examples.empty()) throw EmptyCorpus("no bid examples");
  long long correct = 0;
  for (size_t i = 0; i < examples.size(); i += kEvalRows) {
    std::vector<const BidExample*> batch;
    for (size_t j = i; j < std::min(examples.size(), i + kEvalRows); ++j) {
      batch.push_back(&examples[j]);
    }
    const auto z = net.Logits(BidMatrix(batch), nullptr);
    for (size_t k = 0; k < batch.size(); ++k) correct += (z(0, k) > 0.f) == batch[k]->label;
  }
  return static_cast<double>(correct) / examples.size();
}

BidTrainResult TrainBidding(const std::vector<BidExample>& corpus, const BidTrainConfig& config) {
  if (corpus.empty()) throw EmptyCorpus("bid corpus is empty");
  if (config.epochs < 1 || config.batch < 1) throw ConfigError("bid epochs and batch must be >= 1");
  std::mt19937_64 rng(config.seed);
  std::vector<BidExample> shuffled = corpus;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const size_t n_val = static_cast<size_t>(config.validation_fraction * shuffled.size());
  std::vector<BidExample> val(shuffled.begin(), shuffled.begin() + n_val);
  std::vector<BidExample> train(shuffled.begin() + n_val, shuffled.end());
  if (val.empty()) val = train;

  long long pos = 0;
  for (const auto& e : train) pos += e.label;
  const double n = static_cast<double>(train.size());
  const float w_pos = pos ? static_cast<float>(n / (2.0 * pos)) : 0.f;
  const float w_neg = pos < n ? static_cast<float>(n / (2.0 * (n - pos))) : 0.f;

  nn::BidNetwork<float> net;
  net.Init(config.seed);
  nn::RmsProp<float> opt(net.Params(), config.optimizer);
  BidTrainResult result;
  result.val_accuracy = -1.0;
  std::vector<const BidExample*> order;
  for (const auto& e : train) order.push_back(&e);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t i = 0; i < order.size(); i += config.batch) {
      std::vector<const BidExample*> batch(
          order.begin() + i, order.begin() + std::min(order.size(), i + config.batch));
      nn::Matrix<float> labels(1, static_cast<int>(batch.size()));
      nn::Matrix<float> weights(1, static_cast<int>(batch.size()));
      for (size_t k = 0; k < batch.size(); ++k) {
        labels(0, k) = batch[k]->label ? 1.f : 0.f;
        weights(0, k) = batch[k]->label ? w_pos : w_neg;
      }
      nn::TrainStepWeightedBce(net, opt, BidMatrix(batch), labels, weights);
    }
    const double acc = BidAccuracy(net, val);
    result.val_history.push_back(acc);
    if (acc > result.val_accuracy) {
      result.val_accuracy = acc;
      result.best_epoch = epoch;
      result.net = std::make_shared<nn::BidNetwork<float>>(net);
    }
  }
  return result;
}

}  // namespace douzero::training
