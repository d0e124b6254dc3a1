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


#ifndef DOUZERO_EVAL_CORPUS_H_
#define DOUZERO_EVAL_CORPUS_H_

#include <cstdint>
#include <vector>

#include "douzero/eval/agent.h"
#include "douzero/game/match_log.h"
#include "douzero/training/supervised.h"

namespace douzero::eval {

// Plays `count` games with the factory's agent in every seat, seat 0 as
// Landlord. Game i uses deck DeckSeed(seed, i), recorded as the log seed.
std::vector<game::MatchRecord> GenerateGameCorpus(const AgentFactory& factory, size_t count,
                                                  uint64_t seed);

// Synthetic bidding data. Each example is one 17-card hand with a random
// earlier bid history; the label is whether that hand, taking the bottom
// cards, wins as Landlord when rule agents play out the deal.
std::vector<training::BidExample> GenerateBidCorpus(size_t count, uint64_t seed);

}  // namespace douzero::eval

#endif  // DOUZERO_EVAL_CORPUS_H_
