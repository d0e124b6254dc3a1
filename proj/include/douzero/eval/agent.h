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

#ifndef DOUZERO_EVAL_AGENT_H_
#define DOUZERO_EVAL_AGENT_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "douzero/game/state.h"
#include "douzero/nn/bid_network.h"
#include "douzero/training/self_play.h"

namespace douzero::eval {

using game::BidDecision;
using game::CardSet;
using game::Combo;
using game::Observation;

// A card-play policy. Decide must return a member of `legal`. Instances are
// used from one thread at a time.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  virtual Combo Decide(const Observation& obs, const std::vector<Combo>& legal) = 0;

  // Optional per-agent bidding policy.
  virtual bool HasBid() const { return false; }
  virtual BidDecision Bid(const CardSet& hand, std::span<const BidDecision> history);

  // Optional scores, one per legal move. Throws UnsupportedAgent by default.
  virtual bool HasQValues() const { return false; }
  virtual std::vector<float> QValues(const Observation& obs, const std::vector<Combo>& legal);

  // Reseeds any internal randomness.
  virtual void Reset(uint64_t /*seed*/) {}
};

using AgentFactory = std::function<std::unique_ptr<Agent>()>;

// Uniform over legal moves.
class RandomAgent : public Agent {
 public:
  explicit RandomAgent(uint64_t seed = 0) : rng_(seed) {}
  std::string name() const override { return "random"; }
  Combo Decide(const Observation& obs, const std::vector<Combo>& legal) override;
  void Reset(uint64_t seed) override { rng_.seed(seed); }

 private:
  std::mt19937_64 rng_;
};

// Deterministic heuristic player. Leading: the lowest-principal combo of a
// greedy longest-chain-first decomposition of the hand, bombs last.
// Following: the smallest beating combo of the led category; otherwise the
// smallest bomb or rocket if the rest of the hand is then a single play;
// otherwise Pass.
class RuleAgent : public Agent {
 public:
  std::string name() const override { return "rule"; }
  Combo Decide(const Observation& obs, const std::vector<Combo>& legal) override;
  bool HasBid() const override { return true; }
  BidDecision Bid(const CardSet& hand, std::span<const BidDecision> history) override;
};

// Greedy decomposition used by RuleAgent: rocket and bombs, then repeatedly
// the chain covering most cards, then trios (with the lowest single or pair
// as kicker), pairs and singles.
std::vector<Combo> DecomposeHand(const CardSet& hand);

// Heuristic hand strength used for rule bidding: jokers, 2s, aces and bombs.
int HandStrength(const CardSet& hand);

// Greedy argmax over per-position Q-networks (DMC or SL heads).
class QAgent : public Agent {
 public:
  QAgent(std::string label, training::QNetSet nets)
      : label_(std::move(label)), nets_(std::move(nets)) {}
  std::string name() const override { return label_; }
  Combo Decide(const Observation& obs, const std::vector<Combo>& legal) override;
  bool HasQValues() const override { return true; }
  std::vector<float> QValues(const Observation& obs, const std::vector<Combo>& legal) override;

 private:
  std::string label_;
  training::QNetSet nets_;
};

// Bidding policy shared by all seats of a match.
class BidPolicy {
 public:
  virtual ~BidPolicy() = default;
  virtual BidDecision Decide(const CardSet& hand, std::span<const BidDecision> history) = 0;
};

// Bids iff the bid network's probability exceeds 0.5.
class NetworkBidPolicy : public BidPolicy {
 public:
  explicit NetworkBidPolicy(std::shared_ptr<const nn::BidNetwork<float>> net)
      : net_(std::move(net)) {}
  BidDecision Decide(const CardSet& hand, std::span<const BidDecision> history) override;
  float Probability(const CardSet& hand, std::span<const BidDecision> history) const;

 private:
  std::shared_ptr<const nn::BidNetwork<float>> net_;
};

class RuleBidPolicy : public BidPolicy {
 public:
  BidDecision Decide(const CardSet& hand, std::span<const BidDecision> history) override {
    return RuleAgent().Bid(hand, history);
  }
};

// Builds agents from "random", "rule", "dmc:<checkpoint>" or
// "sl:<checkpoint>"; checkpoints may be files or directories. Networks are
// loaded once and shared read-only. Throws IoError or UnsupportedAgent.
AgentFactory MakeAgentFactory(const std::string& spec);

}  // namespace douzero::eval

#endif  // DOUZERO_EVAL_AGENT_H_
