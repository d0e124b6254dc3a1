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


#include "douzero/eval/corpus.h"

#include <random>

#include "douzero/eval/match.h"

namespace douzero::eval {

std::vector<game::MatchRecord> GenerateGameCorpus(const AgentFactory& factory, size_t count,
                                                  uint64_t seed) {
  std::array<std::unique_ptr<Agent>, 3> agents = {factory(), factory(), factory()};
  std::vector<game::MatchRecord> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    const uint64_t deck_seed = DeckSeed(seed, i);
    std::mt19937_64 rng(deck_seed);
    const game::Deal deal = game::RandomDeal(rng);
    for (game::Position p : game::kAllPositions) {
      agents[static_cast<int>(p)]->Reset(RoleSeed(deck_seed, p));
    }
    MatchOutcome m = RunMatch({agents[0].get(), agents[1].get(), agents[2].get()}, deal, rng);
    m.record.seed = deck_seed;
    out.push_back(std::move(m.record));
  }
  return out;
}

std::vector<training::BidExample> GenerateBidCorpus(size_t count, uint64_t seed) {
  RuleAgent rule;
  std::vector<training::BidExample> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    std::mt19937_64 rng(DeckSeed(seed, i));
    const game::Deal deal = game::RandomDeal(rng);
    training::BidExample e;
    e.hand = deal.hands[0];
    const int earlier = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int k = 0; k < earlier; ++k) {
      e.history.push_back(std::bernoulli_distribution(0.5)(rng) ? game::BidDecision::kBid
                                                                : game::BidDecision::kNoBid);
    }
    const MatchOutcome m = RunMatch({&rule, &rule, &rule}, deal, rng);
    e.label = m.result.winner == game::Side::kLandlord;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace douzero::eval
