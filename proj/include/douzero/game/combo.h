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

#ifndef DOUZERO_GAME_COMBO_H_
#define DOUZERO_GAME_COMBO_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "douzero/game/cards.h"

namespace douzero::game {

// Declaration order is the canonical ordering of legal-move lists.
enum class Category {
  kPass,
  kSolo,
  kPair,
  kTrio,
  kTrioSolo,
  kTrioPair,
  kChainSolo,
  kChainPair,
  kChainTrio,
  kPlaneSolo,
  kPlanePair,
  kQuadSolo,
  kQuadPair,
  kBomb,
  kRocket,
};
inline constexpr int kNumCategories = 15;

std::string_view CategoryName(Category c);

// Largest hand a seat can hold; bounds chains and planes.
inline constexpr int kMaxHandSize = 20;

// A classified play. `principal` is the lowest rank of the main group and
// `length` the number of consecutive ranks in it (1 for non-chains, 0 for
// Pass). `cards` holds the main group plus kickers.
struct Combo {
  Category category = Category::kPass;
  Rank principal = 0;
  int length = 0;
  CardSet cards;

  static Combo Pass() { return Combo{}; }
  bool IsPass() const { return category == Category::kPass; }
  bool IsBomb() const {
    return category == Category::kBomb || category == Category::kRocket;
  }

  // Main group without kickers.
  CardSet MainGroup() const;
  CardSet Kickers() const { return cards - MainGroup(); }

  // Log notation: "P" for Pass, otherwise the ascending card string.
  std::string ToString() const;

  friend bool operator==(const Combo&, const Combo&) = default;
};

// Canonical total order: category, length, principal, then kicker ranks
// ascending.
bool CanonicalLess(const Combo& a, const Combo& b);

// Returns the combo formed by exactly `cards`, or nullopt when the multiset
// is not a legal play. Pass is never returned (empty input yields nullopt).
std::optional<Combo> Classify(const CardSet& cards);

// True if `play` may follow `to_beat` inside a trick.
bool Beats(const Combo& play, const Combo& to_beat);

// Scoring weight of a played category on the Botzone ladder.
int BotzoneWeight(Category c);

}  // namespace douzero::game

#endif  // DOUZERO_GAME_COMBO_H_
