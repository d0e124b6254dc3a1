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

#ifndef DOUZERO_EVAL_TOURNAMENT_H_
#define DOUZERO_EVAL_TOURNAMENT_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "douzero/eval/agent.h"
#include "douzero/eval/match.h"

namespace douzero::eval {

// Per-deck result from A's point of view: game 1 with A as Landlord, game 2
// with A as the Peasants on the same deal.
struct DeckResult {
  uint64_t deck_seed = 0;
  std::array<bool, 2> a_won{};    // [A landlord game, A peasant game]
  std::array<int, 2> a_points{};  // side points of A in each game
};

struct RoleStats {
  int games = 0;
  int wins = 0;
  long long points = 0;
  double wp() const { return games ? static_cast<double>(wins) / games : 0.0; }
  double adp() const { return games ? static_cast<double>(points) / games : 0.0; }
};

struct PairedReport {
  std::string a, b;
  uint64_t seed = 0;
  int decks = 0;
  RoleStats a_landlord, a_peasants, a_overall;
  std::vector<DeckResult> decks_detail;
};

// Each deal is played twice with sides swapped. Decks are sharded across
// `threads` workers, each with its own agents; results are reduced in deck
// order so reports do not depend on the thread count.
PairedReport PairedDeckTournament(const AgentFactory& a, const AgentFactory& b, int num_decks,
                                  uint64_t seed, int threads = 1, const std::string& a_name = "A",
                                  const std::string& b_name = "B");

// Deck winner for Elo: higher WP over the two games, then higher summed
// points, else a draw. Returns A's score in {0, 0.5, 1}.
double DeckScore(const DeckResult& deck);

struct AlgoStats {
  std::string name;
  RoleStats landlord, peasant, overall;
};

struct BiddingReport {
  uint64_t seed = 0;
  int decks = 0;
  int games = 0;
  std::array<AlgoStats, 3> algos;
  std::vector<std::array<long long, 3>> deck_points;  // per deck, per algorithm
};

// Every deck is played under all 3! seat permutations with bidding; the
// first bidder of each game is random. Points are per seat (Landlord +-2s,
// each Peasant -+s), so each game is zero-sum across the three algorithms.
BiddingReport BiddingTournament(const std::array<AgentFactory, 3>& algos,
                                const std::array<std::string, 3>& names, int num_decks,
                                uint64_t seed, BidPolicy* bid_policy, int threads = 1);

// Logistic Elo with initial rating 1000.
class EloTable {
 public:
  explicit EloTable(double k = 32.0, double initial = 1000.0) : k_(k), initial_(initial) {}
  double Rating(const std::string& name) const;
  // score_a in {0, 0.5, 1}.
  void Update(const std::string& a, const std::string& b, double score_a);
  const std::map<std::string, double>& ratings() const { return ratings_; }
  double Sum() const;

 private:
  double k_;
  double initial_;
  std::map<std::string, double> ratings_;
};

struct DeckOutcome {
  std::string a, b;
  double score_a = 0.5;
};

EloTable ComputeElo(const std::vector<DeckOutcome>& outcomes, double k = 32.0);

// Reports as CSV rows (matchup, role, wp, adp, games, seed) and JSON.
std::string PairedReportCsv(const PairedReport& r, bool header = true);
std::string PairedReportJson(const PairedReport& r);
std::string BiddingReportCsv(const BiddingReport& r, bool header = true);
std::string BiddingReportJson(const BiddingReport& r);
std::string EloJson(const EloTable& elo);

}  // namespace douzero::eval

#endif  // DOUZERO_EVAL_TOURNAMENT_H_
