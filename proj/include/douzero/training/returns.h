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

#ifndef DOUZERO_TRAINING_RETURNS_H_
#define DOUZERO_TRAINING_RETURNS_H_

#include <span>
#include <string>
#include <vector>

#include "douzero/features/encoding.h"
#include "douzero/game/scoring.h"

namespace douzero::training {

using game::Position;

enum class Objective { kWp, kAdp };

// "wp" or "adp"; throws ConfigError otherwise.
Objective ParseObjective(const std::string& text);
std::string ObjectiveName(Objective o);

// WP: +1 / -1 for the seat's side. ADP: the seat's points, i.e. the Landlord
// gets +-2 * 2^bombs and each Peasant +-2^bombs.
double TerminalReward(const game::MatchResult& result, Objective objective, Position position);

// r_t <- r_t + gamma * r_{t+1}, accumulated from the back.
std::vector<double> DiscountedReturns(std::span<const double> rewards, double gamma);

struct EpisodeStep {
  Position position = Position::kLandlord;
  features::ObservationFeatures features;  // observation plus chosen action
  double reward = 0.0;                     // immediate reward
};

struct EpisodeRecord {
  std::vector<EpisodeStep> steps;
  bool terminal = false;
};

// Places the terminal reward of each position on that position's last step.
void AssignTerminalRewards(EpisodeRecord& episode, const game::MatchResult& result,
                           Objective objective);

// Per-step returns computed separately along each position's own steps.
// Throws NonTerminalEpisode unless the episode is terminal.
std::vector<double> ComputeReturns(const EpisodeRecord& episode, double gamma);

}  // namespace douzero::training

#endif  // DOUZERO_TRAINING_RETURNS_H_
