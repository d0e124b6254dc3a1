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

#ifndef DOUZERO_GAME_SCORING_H_
#define DOUZERO_GAME_SCORING_H_

#include "douzero/game/state.h"

namespace douzero::game {

struct MatchResult {
  Side winner = Side::kLandlord;
  int bombs = 0;
  // Stake is 2^bombs (the rocket counts); the Landlord wins or loses twice
  // the stake and the Peasant team the opposite.
  int landlord_points = 0;
  int peasant_team_points = 0;
  // Botzone game score: 2 for the winning side plus category weights / 100.
  // The Peasant value is the mean of both Peasants' individual scores.
  double botzone_landlord = 0.0;
  double botzone_peasants = 0.0;

  // Per-seat points; each Peasant carries half the team value.
  int PointsFor(Position p) const {
    return p == Position::kLandlord ? landlord_points : peasant_team_points / 2;
  }
  int SidePoints(Side s) const {
    return s == Side::kLandlord ? landlord_points : peasant_team_points;
  }
};

// Throws PhaseError unless the game finished with a winner.
MatchResult Score(const GameState& state);

}  // namespace douzero::game

#endif  // DOUZERO_GAME_SCORING_H_
