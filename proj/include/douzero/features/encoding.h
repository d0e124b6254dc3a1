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

#ifndef DOUZERO_FEATURES_ENCODING_H_
#define DOUZERO_FEATURES_ENCODING_H_

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "douzero/game/combo.h"
#include "douzero/game/state.h"

namespace douzero::features {

using game::CardSet;
using game::Position;

// Four thermometer bits per rank 3..2 plus one bit per joker.
inline constexpr int kCardVectorSize = 54;
inline constexpr int kHistoryMoves = 15;
inline constexpr int kHistoryRows = 5;
inline constexpr int kHistoryCols = 3 * kCardVectorSize;  // 162
inline constexpr int kHistorySize = kHistoryRows * kHistoryCols;
inline constexpr int kLandlordStateSize = 5 * kCardVectorSize + 17 + 17 + 15;  // 319
inline constexpr int kPeasantStateSize = 7 * kCardVectorSize + 20 + 17 + 15;   // 430
inline constexpr int kBidFeatureSize = 128;

using CardVector = std::array<float, kCardVectorSize>;

int StateSize(Position p);

// Bit 4*r + i is set iff rank r has more than i copies; jokers use bits 52
// and 53.
CardVector EncodeCards(const CardSet& cards);
void EncodeCardsInto(const CardSet& cards, std::span<float> out);
// Inverse of EncodeCards for well-formed vectors.
CardSet DecodeCards(std::span<const float> bits);

inline CardVector EncodeAction(const game::Combo& combo) { return EncodeCards(combo.cards); }

// Action-independent part of an observation.
struct StateFeatures {
  Position position = Position::kLandlord;
  std::vector<float> state;    // StateSize(position)
  std::vector<float> history;  // kHistoryRows x kHistoryCols, row-major
};

// Landlord state rows: hand, union of the others' hands, move to beat,
// cards played by D, cards played by U, D count (17), U count (17), bombs
// (15). Peasant rows: hand, union of the others' hands, move to beat, last
// Landlord move, last move of the other Peasant, cards played by the
// Landlord, cards played by the other Peasant, Landlord count (20), other
// Peasant count (17), bombs (15).
//
// History holds the last 15 moves oldest to newest, three moves per row,
// zero-padded at the front; a Pass encodes as zeros.
StateFeatures EncodeState(const game::Observation& obs);

struct ObservationFeatures {
  Position position = Position::kLandlord;
  std::vector<float> state;
  CardVector action{};
  std::vector<float> history;

  friend bool operator==(const ObservationFeatures&, const ObservationFeatures&) = default;
};

// Throws PositionMismatch when `position` is not the observer's position.
ObservationFeatures EncodeObservation(const game::Observation& obs, const game::Combo& action,
                                      Position position);

// Bidding input: card bits (54), solo flags 3..A (12), pair flags 3..2
// (13), trio flags 3..2 (13), bomb flags 3..2 plus rocket (14), count of 2s
// one-hot (5), joker count one-hot (3), black/red joker bits (2), and four
// bid steps one-hot over {not yet, bid, no bid} (12). Throws BadHandSize
// unless the hand has 17 cards.
std::array<float, kBidFeatureSize> EncodeBid(const CardSet& hand,
                                             std::span<const game::BidDecision> history);

// Little-endian float32 rows: state, action, history.
void WriteFeatureRow(std::ostream& out, const ObservationFeatures& row);
ObservationFeatures ReadFeatureRow(std::istream& in, Position position);

}  // namespace douzero::features

#endif  // DOUZERO_FEATURES_ENCODING_H_
