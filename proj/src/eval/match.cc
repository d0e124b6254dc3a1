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

#include "douzero/eval/match.h"

#include "douzero/common/error.h"

namespace douzero::eval {
namespace {

// splitmix64 finalizer.
uint64_t Mix(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t RoleSeed(uint64_t deck_seed, game::Position position) {
  return Mix(deck_seed ^ Mix(static_cast<uint64_t>(position) + 1));
}

uint64_t DeckSeed(uint64_t seed, uint64_t index) { return Mix(Mix(seed) + index); }

MatchOutcome RunMatch(const std::array<Agent*, 3>& seats, const game::Deal& deal,
                      std::mt19937_64& rng, const MatchOptions& options) {
  MatchOutcome out;
  game::GameState state;
  if (!options.bidding) {
    state = game::GameState::StartPlaying(deal, 0);
  } else {
    game::Deal current = deal;
    while (true) {
      const int first = std::uniform_int_distribution<int>(0, 2)(rng);
      state = game::GameState::StartBidding(current, first);
      while (state.phase() == game::Phase::kBidding) {
        const int seat = state.current_seat();
        const auto history = state.BidHistory();
        const auto decision = options.bid_policy
                                  ? options.bid_policy->Decide(state.hand(seat), history)
                                  : seats[seat]->Bid(state.hand(seat), history);
        state.ApplyBid(decision);
      }
      if (!state.redeal()) break;
      if (++out.redeals > options.max_redeals) throw Error("too many redeals");
      current = game::RandomDeal(rng);
    }
  }
  out.landlord_seat = state.landlord_seat();
  for (int s = 0; s < 3; ++s) out.seat_positions[s] = state.PositionOfSeat(s);
  while (state.phase() != game::Phase::kFinished) {
    const int seat = state.current_seat();
    const auto legal = state.LegalMoves();
    const game::Combo move = seats[seat]->Decide(state.ObservationFor(seat), legal);
    state.ApplyMove(move);  // throws IllegalMove if an agent misbehaves
  }
  out.result = game::Score(state);
  out.record = game::RecordFromState(state);
  return out;
}

}  // namespace douzero::eval
