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

#ifndef DOUZERO_GAME_MOVE_GEN_H_
#define DOUZERO_GAME_MOVE_GEN_H_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "douzero/game/cards.h"
#include "douzero/game/combo.h"

namespace douzero::game {

// Every non-Pass combo constructible from `hand`, in canonical order.
std::vector<Combo> GenerateCombos(const CardSet& hand);

// Legal plays for a seat holding `hand`. With no combo to beat the seat leads
// and Pass is excluded; otherwise Pass comes first followed by every beating
// combo in canonical order.
std::vector<Combo> LegalMoves(const CardSet& hand, const std::optional<Combo>& to_beat);

// Per-category counts of every distinct combo drawable from a full deck,
// with Pass counted once.
struct ActionSpaceCounts {
  std::array<std::int64_t, kNumCategories> per_category{};
  std::int64_t total = 0;
};
ActionSpaceCounts EnumerateActionSpace();

// Reference table for the full-deck enumeration.
ActionSpaceCounts ExpectedActionSpace();

}  // namespace douzero::game

#endif  // DOUZERO_GAME_MOVE_GEN_H_
