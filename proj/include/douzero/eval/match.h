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

#ifndef DOUZERO_EVAL_MATCH_H_
#define DOUZERO_EVAL_MATCH_H_

#include <array>
#include <cstdint>
#include <random>

#include "douzero/eval/agent.h"
#include "douzero/game/match_log.h"
#include "douzero/game/scoring.h"

namespace douzero::eval {

struct MatchOptions {
  bool bidding = false;
  // Shared bidding policy; when null each seat's agent bids itself.
  BidPolicy* bid_policy = nullptr;
  int max_redeals = 1000;
};

struct MatchOutcome {
  game::MatchResult result;
  game::MatchRecord record;
  int landlord_seat = 0;
  int redeals = 0;
  std::array<game::Position, 3> seat_positions{};
};

// Plays one full game. Without bidding seat 0 is the Landlord. With bidding
// the first bidder is drawn from `rng`, and a triple no-bid redeals from
// `rng` as well.
MatchOutcome RunMatch(const std::array<Agent*, 3>& seats, const game::Deal& deal,
                      std::mt19937_64& rng, const MatchOptions& options = {});

// Stable per-(deck, role) seed so that swapping the two sides of a
// tournament reproduces each agent's stream exactly.
uint64_t RoleSeed(uint64_t deck_seed, game::Position position);

// Deal number `index` of a tournament seeded with `seed`.
uint64_t DeckSeed(uint64_t seed, uint64_t index);

}  // namespace douzero::eval

#endif  // DOUZERO_EVAL_MATCH_H_
