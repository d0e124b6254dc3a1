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

#include "douzero/game/scoring.h"

#include <array>

#include "douzero/common/error.h"

namespace douzero::game {

MatchResult Score(const GameState& state) {
  if (state.phase() != Phase::kFinished || !state.winner()) {
    throw PhaseError("score requires a finished game with a winner");
  }
  MatchResult r;
  r.winner = *state.winner();
  r.bombs = state.bombs_played();
  const int stake = 1 << r.bombs;
  r.landlord_points = (r.winner == Side::kLandlord ? 2 : -2) * stake;
  r.peasant_team_points = -r.landlord_points;

  std::array<int, 3> weights{};
  for (const auto& m : state.history()) {
    weights[static_cast<int>(m.position)] += BotzoneWeight(m.combo.category);
  }
  const double landlord_win = r.winner == Side::kLandlord ? 2.0 : 0.0;
  const double peasant_win = 2.0 - landlord_win;
  r.botzone_landlord = landlord_win + weights[0] / 100.0;
  double down = peasant_win + weights[1] / 100.0;
  double up = peasant_win + weights[2] / 100.0;
  r.botzone_peasants = (down + up) / 2.0;
  return r;
}

}  // namespace douzero::game
