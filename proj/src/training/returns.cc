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

#include "douzero/training/returns.h"

#include "douzero/common/error.h"

namespace douzero::training {

Objective ParseObjective(const std::string& text) {
  if (text == "wp" || text == "WP") return Objective::kWp;
  if (text == "adp" || text == "ADP") return Objective::kAdp;
  throw ConfigError("objective must be wp or adp, got '" + text + "'");
}

std::string ObjectiveName(Objective o) { return o == Objective::kWp ? "wp" : "adp"; }

double TerminalReward(const game::MatchResult& result, Objective objective, Position position) {
  const bool won = game::SideOf(position) == result.winner;
  if (objective == Objective::kWp) return won ? 1.0 : -1.0;
  return result.PointsFor(position);
}

std::vector<double> DiscountedReturns(std::span<const double> rewards, double gamma) {
  std::vector<double> out(rewards.begin(), rewards.end());
  for (size_t t = out.size(); t-- > 1;) out[t - 1] += gamma * out[t];
  return out;
}

void AssignTerminalRewards(EpisodeRecord& episode, const game::MatchResult& result,
                           Objective objective) {
  std::array<bool, 3> seen{};
  for (size_t t = episode.steps.size(); t-- > 0;) {
    auto& step = episode.steps[t];
    const int p = static_cast<int>(step.position);
    if (!seen[p]) {
      step.reward = TerminalReward(result, objective, step.position);
      seen[p] = true;
    }
  }
  episode.terminal = true;
}

std::vector<double> ComputeReturns(const EpisodeRecord& episode, double gamma) {
  if (!episode.terminal) throw NonTerminalEpisode("returns need a finished episode");
  std::vector<double> out(episode.steps.size());
  for (Position p : game::kAllPositions) {
    std::vector<size_t> idx;
    std::vector<double> rewards;
    for (size_t t = 0; t < episode.steps.size(); ++t) {
      if (episode.steps[t].position == p) {
        idx.push_back(t);
        rewards.push_back(episode.steps[t].reward);
      }
    }
    auto g = DiscountedReturns(rewards, gamma);
    for (size_t k = 0; k < idx.size(); ++k) out[idx[k]] = g[k];
  }
  return out;
}

}  // namespace douzero::training
