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

#include "douzero/training/self_play.h"

#include "douzero/features/encoding.h"

namespace douzero::training {

std::string NetName(Position p) { return std::string(1, game::PositionChar(p)); }

QNetSet InitQNetSet(const std::string& preset, uint64_t seed) {
  QNetSet nets;
  for (Position p : game::kAllPositions) {
    auto net = std::make_shared<nn::QNetwork<float>>(
        nn::QNetPreset(preset, features::StateSize(p)), NetName(p));
    net->Init(seed * 3 + static_cast<uint64_t>(p));
    nets[static_cast<int>(p)] = std::move(net);
  }
  return nets;
}

int SelectAction(const nn::QNetwork<float>& net, const features::StateFeatures& state,
                 const std::vector<game::Combo>& legal, double epsilon, std::mt19937_64& rng) {
  const int n = static_cast<int>(legal.size());
  if (n == 1) return 0;
  if (epsilon > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
  }
  std::vector<features::CardVector> actions;
  actions.reserve(legal.size());
  for (const auto& c : legal) actions.push_back(features::EncodeAction(c));
  const auto q = nn::ForwardQ(net, state, actions);
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (q[i] > q[best]) best = i;
  }
  return best;
}

EpisodeResult PlayEpisode(const QNetSet& nets, double epsilon, Objective objective,
                          double gamma, std::mt19937_64& rng) {
  EpisodeResult out;
  game::GameState state = game::GameState::StartPlaying(game::RandomDeal(rng), 0);
  while (state.phase() != game::Phase::kFinished) {
    const game::Observation obs = state.CurrentObservation();
    const auto legal = state.LegalMoves();
    features::StateFeatures sf = features::EncodeState(obs);
    const int pick =
        SelectAction(*nets[static_cast<int>(obs.position)], sf, legal, epsilon, rng);
    EpisodeStep step;
    step.position = obs.position;
    step.features.position = obs.position;
    step.features.state = std::move(sf.state);
    step.features.history = std::move(sf.history);
    step.features.action = features::EncodeAction(legal[pick]);
    out.record.steps.push_back(std::move(step));
    state.ApplyMove(legal[pick]);
  }
  out.result = game::Score(state);
  AssignTerminalRewards(out.record, out.result, objective);
  out.returns = ComputeReturns(out.record, gamma);
  return out;
}

}  // namespace douzero::training
