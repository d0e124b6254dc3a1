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

#ifndef DOUZERO_EVAL_ANALYSIS_H_
#define DOUZERO_EVAL_ANALYSIS_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "douzero/eval/agent.h"
#include "douzero/game/match_log.h"

namespace douzero::eval {

struct AccuracyReport {
  std::array<long long, 3> decisions{};  // by position
  std::array<long long, 3> correct{};
  std::array<long long, 3> forced{};     // decisions with a single legal move
  double Accuracy(game::Position p) const;
  double NonForcedAccuracy(game::Position p) const;
  // Mean of the three per-position accuracies.
  double Average() const;
};

// Fraction of logged decisions that the agent's greedy choice reproduces.
// Throws EmptyCorpus when there is no decision to score.
AccuracyReport CorpusAccuracy(Agent& agent, const std::vector<game::MatchRecord>& corpus);

struct BenchmarkReport {
  std::string agent;
  long long steps = 0;
  double mean_us = 0.0;
  std::map<int, long long> move_count_histogram;  // legal-move count -> steps
  std::map<int, double> mean_us_by_moves;
  // Least-squares fit of latency against legal-move count.
  double slope_us_per_move = 0.0;
  double intercept_us = 0.0;
  std::string ToJson() const;
};

// Times Decide over self-play games on seeded decks (all three seats use
// the agent) until `min_steps` timed steps, after `warmup` untimed steps.
BenchmarkReport InferenceBenchmark(const AgentFactory& factory, const std::string& name,
                                   long long min_steps = 10000, int warmup = 100,
                                   uint64_t seed = 0);

struct ScoredMove {
  game::Combo move;
  float value = 0.0f;
};

// Legal moves of the state's current seat sorted by the agent's values,
// best first (stable for ties), truncated to k. Throws UnsupportedAgent.
std::vector<ScoredMove> TopActions(Agent& agent, const game::GameState& state, int k = 3);

// One JSON line: {"log": <match log so far>, "position": "L", "top": [...]}.
std::string CaseStudyJson(Agent& agent, const game::GameState& state, int k = 3);

}  // namespace douzero::eval

#endif  // DOUZERO_EVAL_ANALYSIS_H_
