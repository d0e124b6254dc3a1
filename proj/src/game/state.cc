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

#include "douzero/game/state.h"

#include <algorithm>
#include <string>

#include "douzero/common/error.h"
#include "douzero/game/move_gen.h"

namespace douzero::game {

char PositionChar(Position p) {
  switch (p) {
    case Position::kLandlord: return 'L';
    case Position::kDown: return 'D';
    case Position::kUp: return 'U';
  }
  return '?';
}

std::optional<Position> PositionFromChar(char c) {
  switch (c) {
    case 'L': return Position::kLandlord;
    case 'D': return Position::kDown;
    case 'U': return Position::kUp;
  }
  return std::nullopt;
}

Side SideOf(Position p) {
  return p == Position::kLandlord ? Side::kLandlord : Side::kPeasants;
}

Deal RandomDeal(std::mt19937_64& rng) {
  std::vector<Rank> deck;
  deck.reserve(kDeckSize);
  for (Rank r = 0; r < kNumRanks; ++r) deck.insert(deck.end(), MaxCopies(r), r);
  std::shuffle(deck.begin(), deck.end(), rng);
  Deal deal;
  for (int i = 0; i < kDeckSize; ++i) {
    if (i < kNumSeats * kHandSize) deal.hands[i / kHandSize].Add(deck[i]);
    else deal.bottom.Add(deck[i]);
  }
  return deal;
}

GameState GameState::StartBidding(const Deal& deal, int first_bidder) {
  GameState s;
  s.phase_ = Phase::kBidding;
  s.hands_ = deal.hands;
  s.initial_hands_ = deal.hands;
  s.bottom_ = deal.bottom;
  s.first_bidder_ = first_bidder;
  s.current_ = first_bidder;
  return s;
}

GameState GameState::StartPlaying(const Deal& deal, int landlord_seat) {
  GameState s = StartBidding(deal, landlord_seat);
  s.BeginPlay(landlord_seat);
  return s;
}

GameState GameState::FromPositionHands(const std::array<CardSet, 3>& hands) {
  GameState s;
  s.hands_ = hands;
  s.initial_hands_ = hands;
  s.landlord_seat_ = 0;
  s.phase_ = Phase::kPlaying;
  s.current_ = 0;
  return s;
}

void GameState::BeginPlay(int landlord_seat) {
  landlord_seat_ = landlord_seat;
  hands_[landlord_seat] += bottom_;
  initial_hands_[landlord_seat] = hands_[landlord_seat];
  phase_ = Phase::kPlaying;
  current_ = landlord_seat;
}

Position GameState::PositionOfSeat(int seat) const {
  return static_cast<Position>((seat - landlord_seat_ + kNumSeats) % kNumSeats);
}

int GameState::SeatOf(Position p) const {
  return (landlord_seat_ + static_cast<int>(p)) % kNumSeats;
}

std::vector<Combo> GameState::LegalMoves() const {
  if (phase_ == Phase::kFinished) throw GameFinished("game is over");
  if (phase_ != Phase::kPlaying) throw PhaseError("legal moves requested during bidding");
  return game::LegalMoves(hands_[current_], to_beat_);
}

void GameState::ApplyMove(const Combo& combo) {
  if (phase_ == Phase::kFinished) throw GameFinished("game is over");
  if (phase_ != Phase::kPlaying) throw PhaseError("card play during bidding");

  const CardSet& hand = hands_[current_];
  bool legal;
  if (combo.IsPass()) {
    legal = to_beat_.has_value();
  } else {
    std::optional<Combo> shape = Classify(combo.cards);
    legal = shape && shape->category == combo.category &&
            shape->principal == combo.principal && shape->length == combo.length &&
            hand.Contains(combo.cards) && (!to_beat_ || Beats(combo, *to_beat_));
  }
  if (!legal) {
    throw IllegalMove(std::string(1, PositionChar(current_position())) + ":" +
                      combo.ToString() + " is not legal here");
  }

  history_.push_back({current_position(), combo});
  if (combo.IsPass()) {
    int next = (current_ + 1) % kNumSeats;
    if (next == trick_leader_) to_beat_.reset();
    current_ = next;
    return;
  }
  hands_[current_] -= combo.cards;
  if (combo.IsBomb()) ++bombs_played_;
  to_beat_ = combo;
  trick_leader_ = current_;
  if (hands_[current_].Empty()) {
    winner_ = SideOf(current_position());
    phase_ = Phase::kFinished;
    return;
  }
  current_ = (current_ + 1) % kNumSeats;
}

void GameState::ApplyBid(BidDecision decision) {
  if (phase_ != Phase::kBidding) throw PhaseError("bid outside the bidding phase");
  bids_.emplace_back(current_, decision);
  if (first_caller_ < 0) {
    // Calling round: seats take turns until someone bids.
    if (decision == BidDecision::kBid) {
      first_caller_ = current_;
      last_bidder_ = current_;
      rob_turns_left_ = kNumSeats - 1;
      current_ = (current_ + 1) % kNumSeats;
    } else if (static_cast<int>(bids_.size()) == kNumSeats) {
      redeal_ = true;
      phase_ = Phase::kFinished;
    } else {
      current_ = (current_ + 1) % kNumSeats;
    }
    return;
  }
  // Each remaining seat may outbid once.
  if (decision == BidDecision::kBid) last_bidder_ = current_;
  if (--rob_turns_left_ == 0) {
    BeginPlay(last_bidder_);
  } else {
    current_ = (current_ + 1) % kNumSeats;
  }
}

std::vector<BidDecision> GameState::BidHistory() const {
  std::vector<BidDecision> out;
  out.reserve(bids_.size());
  for (const auto& [seat, d] : bids_) out.push_back(d);
  return out;
}

Observation GameState::ObservationFor(int seat) const {
  if (landlord_seat_ < 0) throw PhaseError("no observation before the Landlord is known");
  Observation obs;
  obs.position = PositionOfSeat(seat);
  obs.hand = hands_[seat];
  for (Position p : kAllPositions) {
    obs.cards_left[static_cast<int>(p)] = hands_[SeatOf(p)].Size();
  }
  for (const auto& m : history_) obs.played[static_cast<int>(m.position)] += m.combo.cards;
  obs.history = history_;
  obs.to_beat = to_beat_;
  obs.bombs_played = bombs_played_;
  obs.bottom = bottom_;
  return obs;
}

GameState ApplyMove(GameState state, const Combo& combo) {
  state.ApplyMove(combo);
  return state;
}

GameState ApplyBid(GameState state, BidDecision decision) {
  state.ApplyBid(decision);
  return state;
}

}  // namespace douzero::game
