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

#ifndef DOUZERO_GAME_STATE_H_
#define DOUZERO_GAME_STATE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "douzero/game/cards.h"
#include "douzero/game/combo.h"

namespace douzero::game {

inline constexpr int kNumSeats = 3;
inline constexpr int kHandSize = 17;
inline constexpr int kBottomSize = 3;

// Seat role relative to the Landlord. Play order is L -> D -> U -> L, so D
// moves right after the Landlord and U right before.
enum class Position { kLandlord = 0, kDown = 1, kUp = 2 };
inline constexpr std::array<Position, 3> kAllPositions = {
    Position::kLandlord, Position::kDown, Position::kUp};

char PositionChar(Position p);  // 'L', 'D', 'U'
std::optional<Position> PositionFromChar(char c);

enum class Side { kLandlord, kPeasants };
Side SideOf(Position p);

enum class Phase { kBidding, kPlaying, kFinished };

enum class BidDecision { kNoBid, kBid };

struct Deal {
  std::array<CardSet, kNumSeats> hands;  // 17 cards per seat
  CardSet bottom;                        // 3 face-down cards
};

// Uniformly shuffled deal.
Deal RandomDeal(std::mt19937_64& rng);

struct PlayedMove {
  Position position;
  Combo combo;
  friend bool operator==(const PlayedMove&, const PlayedMove&) = default;
};

// Everything one seat may legally know. This is the sole input to the
// feature encoders and to the service's per-seat state.
struct Observation {
  Position position = Position::kLandlord;
  CardSet hand;
  std::array<int, 3> cards_left{};      // by position
  std::array<CardSet, 3> played;        // by position
  std::vector<PlayedMove> history;      // all moves, oldest first
  std::optional<Combo> to_beat;         // last non-pass play of the live trick
  int bombs_played = 0;
  CardSet bottom;                       // public once the Landlord is known

  friend bool operator==(const Observation&, const Observation&) = default;
};

// Full perfect-information game record. Seats are physical (0..2); positions
// are assigned once the Landlord is known.
class GameState {
 public:
  // Starts the bidding phase; `first_bidder` is the seat asked first.
  static GameState StartBidding(const Deal& deal, int first_bidder);
  // Skips bidding: `landlord_seat` receives the bottom cards and leads.
  static GameState StartPlaying(const Deal& deal, int landlord_seat);
  // Starts play from explicit position hands (20/17/17). Landlord is seat 0.
  static GameState FromPositionHands(const std::array<CardSet, 3>& hands);

  Phase phase() const { return phase_; }
  bool redeal() const { return redeal_; }
  int landlord_seat() const { return landlord_seat_; }
  // Seat to act, or -1 when finished.
  int current_seat() const { return phase_ == Phase::kFinished ? -1 : current_; }
  Position PositionOfSeat(int seat) const;
  int SeatOf(Position p) const;
  Position current_position() const { return PositionOfSeat(current_); }

  const CardSet& hand(int seat) const { return hands_[seat]; }
  const CardSet& initial_hand(int seat) const { return initial_hands_[seat]; }
  const CardSet& bottom() const { return bottom_; }
  const std::vector<PlayedMove>& history() const { return history_; }
  const std::vector<std::pair<int, BidDecision>>& bid_record() const { return bids_; }
  const std::optional<Combo>& to_beat() const { return to_beat_; }
  int trick_leader() const { return trick_leader_; }
  int bombs_played() const { return bombs_played_; }
  std::optional<Side> winner() const { return winner_; }

  // Throws GameFinished / PhaseError outside the playing phase.
  std::vector<Combo> LegalMoves() const;
  // Validates legality; throws IllegalMove, GameFinished or PhaseError.
  void ApplyMove(const Combo& combo);
  // Bidding transition. Throws PhaseError outside bidding.
  void ApplyBid(BidDecision decision);

  Observation ObservationFor(int seat) const;
  Observation CurrentObservation() const { return ObservationFor(current_); }

  // The bid history visible to the seat about to decide.
  std::vector<BidDecision> BidHistory() const;

 private:
  void BeginPlay(int landlord_seat);

  Phase phase_ = Phase::kBidding;
  bool redeal_ = false;
  int landlord_seat_ = -1;
  int current_ = 0;
  std::array<CardSet, kNumSeats> hands_;
  std::array<CardSet, kNumSeats> initial_hands_;
  CardSet bottom_;
  std::vector<PlayedMove> history_;
  std::optional<Combo> to_beat_;
  int trick_leader_ = -1;
  int bombs_played_ = 0;
  std::optional<Side> winner_;

  // Bidding bookkeeping.
  int first_bidder_ = 0;
  int first_caller_ = -1;  // seat that bid first, -1 while nobody has
  int rob_turns_left_ = 0;
  int last_bidder_ = -1;
  std::vector<std::pair<int, BidDecision>> bids_;
};

// Pure transition helpers returning a new state.
GameState ApplyMove(GameState state, const Combo& combo);
GameState ApplyBid(GameState state, BidDecision decision);

}  // namespace douzero::game

#endif  // DOUZERO_GAME_STATE_H_
