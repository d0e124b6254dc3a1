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

#include "douzero/eval/analysis.h"

#include <algorithm>
#include <chrono>
#include <numeric>

#include <json.hpp>

#include "douzero/common/error.h"
#include "douzero/eval/match.h"

namespace douzero::eval {

using game::Position;

double AccuracyReport::Accuracy(Position p) const {
  const int i = static_cast<int>(p);
  return decisions[i] ? static_cast<double>(correct[i]) / decisions[i] : 0.0;
}

double AccuracyReport::NonForcedAccuracy(Position p) const {
  const int i = static_cast<int>(p);
  const long long n = decisions[i] - forced[i];
  return n ? static_cast<double>(correct[i] - forced[i]) / n : 0.0;
}

double AccuracyReport::Average() const {
  double s = 0.0;
  for (Position p : game::kAllPositions) s += Accuracy(p);
  return s / 3.0;
}

AccuracyReport CorpusAccuracy(Agent& agent, const std::vector<game::MatchRecord>& corpus) {
  AccuracyReport r;
  for (const auto& match : corpus) {
    game::GameState state = game::GameState::FromPositionHands(match.hands);
    for (const auto& move : match.moves) {
      if (state.phase() == game::Phase::kFinished || state.current_position() != move.position) {
        throw IllegalReplay("corpus move out of turn");
      }
      const auto legal = state.LegalMoves();
      const int i = static_cast<int>(move.position);
      ++r.decisions[i];
      if (legal.size() == 1) ++r.forced[i];
      const game::Combo choice = agent.Decide(state.CurrentObservation(), legal);
      if (choice.cards == move.combo.cards) ++r.correct[i];
      state.ApplyMove(move.combo);
    }
  }
  if (r.decisions[0] + r.decisions[1] + r.decisions[2] == 0) {
    throw EmptyCorpus("corpus has no decisions");
  }
  return r;
}

BenchmarkReport InferenceBenchmark(const AgentFactory& factory, const std::string& name,
                                   long long min_steps, int warmup, uint64_t seed) {
  using Clock = std::chrono::steady_clock;
  BenchmarkReport rep;
  rep.agent = name;
  std::array<std::unique_ptr<Agent>, 3> agents = {factory(), factory(), factory()};
  std::map<int, double> total_us;
  double all_us = 0.0;
  long long seen = 0;
  for (uint64_t deck = 0; rep.steps < min_steps; ++deck) {
    const uint64_t deck_seed = DeckSeed(seed, deck);
    std::mt19937_64 rng(deck_seed);
    for (int s = 0; s < 3; ++s) agents[s]->Reset(RoleSeed(deck_seed, Position(s)));
    game::GameState state = game::GameState::StartPlaying(game::RandomDeal(rng), 0);
    while (state.phase() != game::Phase::kFinished && rep.steps < min_steps) {
      const int seat = state.current_seat();
      const auto legal = state.LegalMoves();
      const auto obs = state.ObservationFor(seat);
      const auto t0 = Clock::now();
      const game::Combo move = agents[seat]->Decide(obs, legal);
      const double us = std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
      if (seen++ >= warmup) {
        const int n = static_cast<int>(legal.size());
        ++rep.steps;
        ++rep.move_count_histogram[n];
        total_us[n] += us;
        all_us += us;
      }
      state.ApplyMove(move);
    }
  }
  rep.mean_us = rep.steps ? all_us / rep.steps : 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (const auto& [moves, count] : rep.move_count_histogram) {
    rep.mean_us_by_moves[moves] = total_us[moves] / count;
    const double c = static_cast<double>(count);
    const double x = moves, y = total_us[moves] / count;
    n += c;
    sx += c * x;
    sy += c * y;
    sxx += c * x * x;
    sxy += c * x * y;
  }
  const double den = n * sxx - sx * sx;
  if (n > 0 && den != 0) {
    rep.slope_us_per_move = (n * sxy - sx * sy) / den;
    rep.intercept_us = (sy - rep.slope_us_per_move * sx) / n;
  }
  return rep;
}

std::string BenchmarkReport::ToJson() const {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [moves, count] : move_count_histogram) {
    hist[std::to_string(moves)] = {{"steps", count}, {"mean_us", mean_us_by_moves.at(moves)}};
  }
  return nlohmann::json{{"agent", agent},
                        {"steps", steps},
                        {"mean_us", mean_us},
                        {"slope_us_per_move", slope_us_per_move},
                        {"intercept_us", intercept_us},
                        {"move_count_histogram", hist}}
      .dump(2);
}

std::vector<ScoredMove> TopActions(Agent& agent, const game::GameState& state, int k) {
  if (!agent.HasQValues()) throw UnsupportedAgent(agent.name() + " does not expose values");
  const auto legal = state.LegalMoves();
  const auto q = agent.QValues(state.CurrentObservation(), legal);
  std::vector<int> order(legal.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return q[a] > q[b]; });
  std::vector<ScoredMove> out;
  for (int i = 0; i < static_cast<int>(order.size()) && i < k; ++i) {
    out.push_back({legal[order[i]], q[order[i]]});
  }
  return out;
}

std::string CaseStudyJson(Agent& agent, const game::GameState& state, int k) {
  nlohmann::json top = nlohmann::json::array();
  for (const auto& m : TopActions(agent, state, k)) {
    top.push_back({{"move", m.move.ToString()}, {"value", m.value}});
  }
  return nlohmann::json{{"log", game::FormatLog(game::RecordFromState(state))},
                        {"position", std::string(1, game::PositionChar(state.current_position()))},
                        {"top", top}}
      .dump();
}

}  // namespace douzero::eval
