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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any selected criterion fails. Thresholds are pinned below.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "douzero/common/error.h"
#include "douzero/eval/agent.h"
#include "douzero/eval/analysis.h"
#include "douzero/eval/corpus.h"
#include "douzero/eval/tournament.h"
#include "douzero/features/encoding.h"
#include "douzero/game/match_log.h"
#include "douzero/game/move_gen.h"
#include "douzero/game/scoring.h"
#include "douzero/nn/checkpoint.h"
#include "douzero/nn/grad_check.h"
#include "douzero/training/dmc_trainer.h"
#include "douzero/training/self_play.h"
#include "douzero/training/shared_buffer.h"
#include "douzero/training/supervised.h"
#include "support/legal_oracle.h"
#include "support/nn_fixtures.h"

namespace douzero::acceptance {
namespace {

namespace fs = std::filesystem;
using game::CardSet;
using game::Combo;
using game::Position;

// ------------------------------------------------------------ pinned values

constexpr int kOracleHands = 10000;
constexpr double kGradTolerance = 1e-4;
constexpr int kSoakActors = 8;
constexpr int kSoakB = 50, kSoakS = 100, kSoakM = 32;
constexpr uint64_t kSoakInstances = 1'000'000;
constexpr int kSymmetryDecks = 1000;
constexpr int kEvalDecks = 1000;
constexpr uint64_t kEvalSeed = 7;
constexpr double kMinWpVsRandom = 0.80;
constexpr double kMinWpVsRule = 0.5;  // strict
constexpr uint64_t kMinTrainedFrames = 1'000'000;
constexpr uint64_t kRuleFrames = 10'000'000;
constexpr int kSlGames = 50000;
constexpr uint64_t kSlCorpusSeed = 2026;
constexpr int kSlTestGames = 2000;
constexpr uint64_t kSlTestSeed = 7777;
constexpr double kMinSlAccuracy = 0.60;
constexpr int kEloDecks = 10000;
constexpr double kEloK = 32.0;
constexpr int kReferenceGames = 41;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::string group;  // "fast" or "learning"
  std::function<Outcome()> run;
};

std::string Fmt(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int Threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------- game core

Outcome ActionSpace() {
  const std::map<std::string, int64_t> table = {
      {"Solo", 15},         {"Pair", 13},        {"Trio", 13},       {"TrioSolo", 182},
      {"TrioPair", 156},    {"ChainSolo", 36},   {"ChainPair", 52},  {"ChainTrio", 45},
      {"PlaneSolo", 21822}, {"PlanePair", 2939}, {"QuadSolo", 1326}, {"QuadPair", 858},
      {"Bomb", 13},         {"Rocket", 1},       {"Pass", 1}};
  const auto t0 = std::chrono::steady_clock::now();
  const auto got = game::EnumerateActionSpace();
  const double secs = Seconds(t0);
  std::string diff;
  for (int c = 0; c < game::kNumCategories; ++c) {
    const std::string name(game::CategoryName(static_cast<game::Category>(c)));
    const auto it = table.find(name);
    if (it == table.end() || it->second != got.per_category[c]) {
      diff += " " + name + "=" + std::to_string(got.per_category[c]);
    }
  }
  const bool ok = diff.empty() && got.total == 27472 && secs < 60.0;
  return {ok, "total " + std::to_string(got.total) + " in " + Fmt(secs, 2) + " s" +
                  (diff.empty() ? "" : ", mismatched:" + diff)};
}

Outcome LegalOracle() {
  using namespace game::oracle;  // NOLINT
  std::mt19937_64 rng(20240611);
  int mismatches = 0;
  std::string first;
  const auto t0 = std::chrono::steady_clock::now();
  for (int trial = 0; trial < kOracleHands; ++trial) {
    CardSet deck = CardSet::FullDeck();
    const CardSet hand = DrawCards(deck, std::uniform_int_distribution<int>(1, 8)(rng), rng);
    std::optional<Combo> to_beat;
    if (trial % 4 != 0) {
      const CardSet other = DrawCards(deck, 8, rng);
      const auto keys = OracleLegal(other, std::nullopt);
      auto it = keys.begin();
      std::advance(it, std::uniform_int_distribution<size_t>(0, keys.size() - 1)(rng));
      to_beat = game::Classify(CardSet::FromString(std::get<3>(*it)));
    }
    std::set<Key> got;
    bool dup = false;
    for (const auto& m : game::LegalMoves(hand, to_beat)) dup |= !got.insert(KeyOf(m)).second;
    if (dup || got != OracleLegal(hand, to_beat)) {
      if (mismatches++ == 0) first = hand.ToString();
    }
  }
  const double secs = Seconds(t0);
  return {mismatches == 0 && secs < 300.0,
          std::to_string(kOracleHands) + " hands, " + std::to_string(mismatches) +
              " mismatches" + (first.empty() ? "" : " (first " + first + ")") + ", " +
              Fmt(secs, 1) + " s"};
}

Outcome LogReplay(const std::string& data_dir) {
  const auto games = game::ReadLogFile(data_dir + "/reference_games.txt");
  int ok = 0;
  std::string bad;
  for (size_t i = 0; i < games.size(); ++i) {
    try {
      const game::GameState s = game::Replay(games[i]);
      const Position last = games[i].moves.back().position;
      const bool consistent = s.phase() == game::Phase::kFinished &&
                              s.hand(s.SeatOf(last)).Empty() &&
                              game::Score(s).winner == game::SideOf(last);
      if (consistent) {
        ++ok;
      } else if (bad.empty()) {
        bad = " first inconsistent #" + std::to_string(i + 1);
      }
    } catch (const Error& e) {
      if (bad.empty()) bad = " first error #" + std::to_string(i + 1) + ": " + e.what();
    }
  }
  return {ok == kReferenceGames && static_cast<int>(games.size()) == kReferenceGames,
          std::to_string(ok) + "/" + std::to_string(games.size()) + " logs replay" + bad};
}

// Hand-computed expectations: stake 2^bombs, Botzone weights Solo 1, Pair 2,
// Trio family 4, chains 6, Bomb 10, Rocket 16.
Outcome Scoring() {
  auto play = [](std::array<const char*, 3> hands, const std::vector<std::string>& moves) {
    game::GameState s = game::GameState::FromPositionHands(
        {CardSet::FromString(hands[0]), CardSet::FromString(hands[1]),
         CardSet::FromString(hands[2])});
    for (const auto& m : moves) {
      s.ApplyMove(m == "P" ? Combo::Pass() : *game::Classify(CardSet::FromString(m)));
    }
    return game::Score(s);
  };
  struct Case {
    game::MatchResult r;
    int landlord_points;
    double bz_landlord, bz_peasants;
  };
  const std::vector<Case> cases = {
      {play({"3", "4", "5"}, {"3"}), 2, 2.01, 0.00},
      {play({"33334", "5", "6"}, {"3333", "P", "P", "4"}), 4, 2.11, 0.00},
      {play({"333344445", "6", "7"}, {"3333", "P", "P", "4444", "P", "P", "5"}), 8, 2.21, 0.00},
      {play({"BR3", "4", "5"}, {"BR", "P", "P", "3"}), 4, 2.17, 0.00},
      {play({"345678889", "T", "J"}, {"34567", "P", "P", "8889"}), 2, 2.10, 0.00},
      {play({"333344", "5", "6"}, {"3333", "P", "P", "44"}), 4, 2.12, 0.00},
      // Peasants win: D scores 2 + 3/100, U 2 + 0, averaged.
      {play({"34", "556", "7"}, {"3", "6", "P", "P", "55"}), -2, 0.01, 2.015},
      {play({"3K", "44445555", "6"}, {"3", "4444", "P", "P", "5555"}), -8, 0.01, 2.10},
  };
  int ok = 0;
  for (const auto& c : cases) {
    const auto& r = c.r;
    const bool good = r.landlord_points == c.landlord_points &&
                      r.landlord_points + r.peasant_team_points == 0 &&
                      r.PointsFor(Position::kDown) * 2 == r.peasant_team_points &&
                      std::abs(r.botzone_landlord - c.bz_landlord) < 0.005 + 1e-9 &&
                      std::abs(r.botzone_peasants - c.bz_peasants) < 0.005 + 1e-9;
    ok += good;
  }
  // Zero-sum over random play.
  std::mt19937_64 rng(5);
  int zero_sum = 0;
  for (int g = 0; g < 1000; ++g) {
    game::GameState s = game::GameState::StartPlaying(game::RandomDeal(rng), 0);
    while (s.phase() != game::Phase::kFinished) {
      const auto legal = s.LegalMoves();
      s.ApplyMove(legal[std::uniform_int_distribution<size_t>(0, legal.size() - 1)(rng)]);
    }
    const auto r = game::Score(s);
    zero_sum += r.landlord_points + r.peasant_team_points == 0 &&
                std::abs(r.landlord_points) == (2 << r.bombs);
  }
  return {ok == static_cast<int>(cases.size()) && zero_sum == 1000,
          std::to_string(ok) + "/" + std::to_string(cases.size()) +
              " constructed games, zero-sum " + std::to_string(zero_sum) + "/1000"};
}

// ----------------------------------------------------------------- features

Outcome EncodingWidths() {
  std::mt19937_64 rng(3);
  game::GameState s = game::GameState::StartPlaying(game::RandomDeal(rng), 0);
  std::array<int, 3> widths{}, history{};
  for (int i = 0; i < 3; ++i) {
    const auto obs = s.CurrentObservation();
    const auto legal = s.LegalMoves();
    const auto f = features::EncodeObservation(obs, legal.front(), obs.position);
    widths[i] = static_cast<int>(f.state.size() + f.action.size());
    history[i] = static_cast<int>(f.history.size());
    s.ApplyMove(legal.front());
  }
  const auto card = features::EncodeCards(CardSet::FullDeck());
  const auto bid = features::EncodeBid(CardSet::FromString("3456789TJQKA2BR33"), {});
  const bool ok = card.size() == 54 && history[0] == 5 * 162 && history[1] == 5 * 162 &&
                  history[2] == 5 * 162 && widths[0] == 373 && widths[1] == 484 &&
                  widths[2] == 484 && bid.size() == 128 &&
                  std::count(card.begin(), card.end(), 1.0f) == 54;
  return {ok, "card " + std::to_string(card.size()) + ", history " + std::to_string(history[0]) +
                  ", L " + std::to_string(widths[0]) + ", D " + std::to_string(widths[1]) +
                  ", U " + std::to_string(widths[2]) + ", bid " + std::to_string(bid.size())};
}

// ---------------------------------------------------------------------- nn

Outcome GradientChecks() {
  using namespace nn::fixtures;  // NOLINT
  const auto t0 = std::chrono::steady_clock::now();
  nn::QNetwork<double> q(TinyConfig(), "L");
  q.Init(20);
  const auto mse = nn::GradientCheckQ(q, RandomInput<double>(7, 3, 7, 21), RandomRow(7, 22),
                                      nn::LossKind::kMse, 300, 23);
  nn::QNetwork<double> q2(TinyConfig(), "L");
  q2.Init(24);
  nn::Matrix<double> labels(1, 5);
  labels << 1, 0, 0, 1, 0;
  const auto bce = nn::GradientCheckQ(q2, RandomInput<double>(7, 2, 5, 25), labels,
                                      nn::LossKind::kWeightedBce, 250, 26);
  nn::BidNetwork<double> bid;
  bid.Init(27);
  std::mt19937_64 rng(28);
  std::bernoulli_distribution bit(0.3);
  nn::Matrix<double> x(features::kBidFeatureSize, 6);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = bit(rng);
  nn::Matrix<double> y(1, 6), w(1, 6);
  y << 1, 0, 1, 1, 0, 0;
  w << 0.8, 1.3, 0.8, 0.8, 1.3, 1.3;
  const auto mlp = nn::GradientCheckBid(bid, x, y, w, 250, 29);
  const double secs = Seconds(t0);
  const double worst = std::max({mse.max_rel_error, bce.max_rel_error, mlp.max_rel_error});
  const bool ok = worst < kGradTolerance && mse.lstm_coordinates > 0 &&
                  bce.lstm_coordinates > 0 && secs < 120.0;
  return {ok, "max rel error LSTM+MLP/MSE " + Fmt(mse.max_rel_error * 1e6, 3) +
                  "e-6, LSTM+MLP/BCE " + Fmt(bce.max_rel_error * 1e6, 3) + "e-6, MLP/BCE " +
                  Fmt(mlp.max_rel_error * 1e6, 3) + "e-6, LSTM coords " +
                  std::to_string(mse.lstm_coordinates + bce.lstm_coordinates)};
}

// ---------------------------------------------------------------- training

// Recomputes the terminal reward from the recorded actions alone.
double OracleReward(const training::EpisodeRecord& ep, Position p, bool adp) {
  int bombs = 0;
  for (const auto& step : ep.steps) {
    const auto& a = step.features.action;
    const int n = static_cast<int>(std::count(a.begin(), a.end(), 1.0f));
    if (n == 2 && a[52] == 1.0f && a[53] == 1.0f) ++bombs;
    for (int r = 0; r < 13 && n == 4; ++r) bombs += a[4 * r + 3] == 1.0f;
  }
  const Position winner = ep.steps.back().position;
  const bool landlord_won = winner == Position::kLandlord;
  const bool won = landlord_won == (p == Position::kLandlord);
  if (!adp) return won ? 1.0 : -1.0;
  const double stake = std::ldexp(1.0, bombs);
  return (won ? 1.0 : -1.0) * (p == Position::kLandlord ? 2.0 * stake : stake);
}

Outcome Returns() {
  const auto nets = training::InitQNetSet("desk", 3);
  std::mt19937_64 rng(12);
  int episodes = 0, bad = 0, bomb_episodes = 0;
  for (auto obj : {training::Objective::kWp, training::Objective::kAdp}) {
    for (int g = 0; g < 100; ++g, ++episodes) {
      const auto ep = training::PlayEpisode(nets, 1.0, obj, 1.0, rng);
      bomb_episodes += obj == training::Objective::kAdp && ep.result.bombs > 0;
      for (size_t t = 0; t < ep.returns.size(); ++t) {
        const Position p = ep.record.steps[t].position;
        bad += ep.returns[t] != OracleReward(ep.record, p, obj == training::Objective::kAdp);
      }
    }
  }
  return {bad == 0 && bomb_episodes > 0,
          std::to_string(episodes) + " episodes (" + std::to_string(bomb_episodes) +
              " ADP with bombs), " + std::to_string(bad) + " mismatched returns"};
}

struct Tagged {
  uint64_t id = 0;
};

Outcome BufferSoak() {
  const auto t0 = std::chrono::steady_clock::now();
  training::SharedBuffer<Tagged> buffer(kSoakB, kSoakS);
  std::vector<std::thread> actors;
  for (int a = 0; a < kSoakActors; ++a) {
    actors.emplace_back([&, a] {
      for (uint64_t n = 0;; ++n) {
        auto entry = buffer.AcquireFree();
        if (!entry) return;
        std::vector<Tagged> items(kSoakS);
        for (int i = 0; i < kSoakS; ++i) {
          items[i].id = (static_cast<uint64_t>(a) << 40) | (n * kSoakS + i);
        }
        buffer.Fill(*entry, std::move(items));
      }
    });
  }
  std::vector<std::vector<uint64_t>> seen(kSoakActors);
  uint64_t consumed = 0;
  int bad_entries = 0, bad_batches = 0, batches = 0;
  while (consumed < kSoakInstances) {
    auto taken = buffer.TryTakeFull(kSoakM);
    if (!taken) {
      buffer.WaitForFull(std::chrono::milliseconds(10));
      continue;
    }
    size_t size = 0;
    for (int e : *taken) {
      const auto& items = buffer.Entry(e);
      bad_entries += static_cast<int>(items.size()) != kSoakS;
      size += items.size();
      for (const auto& t : items) seen[t.id >> 40].push_back(t.id & ((1ull << 40) - 1));
    }
    bad_batches += size != static_cast<size_t>(kSoakM * kSoakS);
    ++batches;
    consumed += size;
    buffer.Release(*taken);
  }
  buffer.Close();
  for (auto& t : actors) t.join();
  // Each actor's ids are 0, 1, 2, ... so the consumed set must be a union of
  // whole, non-repeating entries.
  uint64_t dups = 0, lost = 0;
  for (auto& ids : seen) {
    std::sort(ids.begin(), ids.end());
    uint64_t repeats = 0;
    for (size_t i = 1; i < ids.size(); ++i) repeats += ids[i] == ids[i - 1];
    std::vector<uint64_t> entries;
    for (uint64_t id : ids) entries.push_back(id / kSoakS);
    entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
    lost += entries.size() * kSoakS - (ids.size() - repeats);
    dups += repeats;
  }
  // Entries still in the buffer at shutdown are the only ones not consumed.
  uint64_t pending = 0;
  for (auto st : buffer.States()) pending += st == training::SharedBuffer<Tagged>::EntryState::kFull;
  const double secs = Seconds(t0);
  const bool ok = consumed >= kSoakInstances && dups == 0 && lost == 0 && bad_entries == 0 &&
                  bad_batches == 0 && secs < 600.0;
  return {ok, std::to_string(consumed) + " instances in " + std::to_string(batches) +
                  " batches of " + std::to_string(kSoakM * kSoakS) + ", " +
                  std::to_string(dups) + " duplicated, " + std::to_string(lost) + " lost, " +
                  std::to_string(pending) + " entries pending, " + Fmt(secs, 1) + " s"};
}

// -------------------------------------------------------------- evaluation

Outcome TournamentSymmetry() {
  const auto r = eval::PairedDeckTournament(eval::MakeAgentFactory("rule"),
                                            eval::MakeAgentFactory("rule"), kSymmetryDecks, 1,
                                            Threads());
  const bool ok = r.a_overall.games == 2 * kSymmetryDecks && 2 * r.a_overall.wins ==
                  r.a_overall.games && r.a_overall.points == 0;
  return {ok, "rule vs rule over " + std::to_string(kSymmetryDecks) + " paired decks: WP " +
                  Fmt(r.a_overall.wp()) + ", ADP " + Fmt(r.a_overall.adp())};
}

Outcome Elo() {
  eval::EloTable single(kEloK);
  single.Update("a", "b", 1.0);
  const bool transfer = single.Rating("a") - 1000.0 == kEloK / 2 &&
                        1000.0 - single.Rating("b") == kEloK / 2;
  std::mt19937_64 rng(1);
  const std::vector<std::string> names = {"dmc", "rule", "random", "sl"};
  std::vector<eval::DeckOutcome> outcomes;
  for (int i = 0; i < kEloDecks; ++i) {
    const int a = static_cast<int>(rng() % 4);
    const int b = (a + 1 + static_cast<int>(rng() % 3)) % 4;
    outcomes.push_back({names[a], names[b], 0.5 * static_cast<double>(rng() % 3)});
  }
  const auto t = eval::ComputeElo(outcomes, kEloK);
  const double drift = std::abs(t.Sum() - 1000.0 * names.size());
  return {transfer && drift < 1e-6,
          "single win moves " + Fmt(single.Rating("a") - 1000.0, 2) + " points; sum drift " +
              Fmt(drift, 9) + " over " + std::to_string(kEloDecks) + " decks"};
}

// ---------------------------------------------------------------- learning

training::TrainConfig LearningConfig(const std::string& dir) {
  training::TrainConfig c;
  c.preset = "desk";
  c.num_actors = 1;
  c.seed = 1;
  c.objective = training::Objective::kWp;
  c.checkpoint_dir = dir;
  c.checkpoint_every_frames = 1'000'000;
  c.max_frames = kRuleFrames;
  c.resume = true;
  return c;
}

std::map<uint64_t, std::string> Checkpoints(const std::string& dir) {
  std::map<uint64_t, std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("model_", 0) == 0 && e.path().extension() == ".dzck") {
      out[std::stoull(name.substr(6, name.size() - 11))] = e.path().string();
    }
  }
  return out;
}

Outcome Learning(const std::string& artifacts) {
  const std::string dir = artifacts + "/desk_wp";
  auto ckpts = Checkpoints(dir);
  if (ckpts.empty() || ckpts.rbegin()->first < kRuleFrames) {
    std::cerr << "training desk preset to " << kRuleFrames << " frames in " << dir << '\n';
    training::DmcTrainer(LearningConfig(dir)).Run();
    ckpts = Checkpoints(dir);
  }
  const auto& [frames, path] = *ckpts.rbegin();
  auto dmc = eval::MakeAgentFactory("dmc:" + path);
  const auto vs_random = eval::PairedDeckTournament(dmc, eval::MakeAgentFactory("random"),
                                                    kEvalDecks, kEvalSeed, Threads());
  const auto vs_rule = eval::PairedDeckTournament(dmc, eval::MakeAgentFactory("rule"),
                                                  kEvalDecks, kEvalSeed, Threads());
  const double wp_random = vs_random.a_overall.wp(), wp_rule = vs_rule.a_overall.wp();
  const bool ok = frames >= kMinTrainedFrames && frames >= kRuleFrames &&
                  wp_random >= kMinWpVsRandom && wp_rule > kMinWpVsRule;
  return {ok, "checkpoint at " + std::to_string(frames) + " frames: WP vs random " +
                  Fmt(wp_random) + " (>= " + Fmt(kMinWpVsRandom, 2) + "), vs rule " +
                  Fmt(wp_rule) + " (> " + Fmt(kMinWpVsRule, 2) + ") over " +
                  std::to_string(kEvalDecks) + " paired decks"};
}

Outcome SlPipeline(const std::string& artifacts) {
  const std::string dir = artifacts + "/sl";
  const std::string corpus_path = dir + "/games50k.txt";
  const std::string model_path = dir + "/sl_desk.dzck";
  fs::create_directories(dir);
  if (!fs::exists(corpus_path)) {
    std::cerr << "generating " << kSlGames << " rule-agent games\n";
    game::WriteLogFile(corpus_path, eval::GenerateGameCorpus(eval::MakeAgentFactory("rule"),
                                                             kSlGames, kSlCorpusSeed));
  }
  const auto corpus = game::ReadLogFile(corpus_path);
  if (!fs::exists(model_path)) {
    std::cerr << "supervised training on " << corpus.size() << " games\n";
    training::SlConfig c;
    c.preset = "desk";
    c.epochs = 20;
    c.seed = 1;
    c.optimizer.lr = 1e-3;
    const auto r = training::TrainSl(corpus, c);
    std::vector<nn::Tensor> tensors;
    for (const auto& net : r.nets) nn::ExportQNetwork(*net, tensors);
    nn::WriteCheckpoint(model_path, tensors);
  }
  // Fresh games never seen in training or model selection.
  const auto test = eval::GenerateGameCorpus(eval::MakeAgentFactory("rule"), kSlTestGames,
                                             kSlTestSeed);
  eval::QAgent sl("sl", training::LoadQNetSet(model_path).nets);
  const auto acc = eval::CorpusAccuracy(sl, test);
  eval::RuleAgent rule;
  const auto own = eval::CorpusAccuracy(rule, test);
  const auto own_train = eval::CorpusAccuracy(
      rule, std::vector<game::MatchRecord>(corpus.begin(), corpus.begin() + 5000));
  bool ok = static_cast<int>(corpus.size()) == kSlGames && own.Average() == 1.0 &&
            own_train.Average() == 1.0;
  std::string detail = "held-out top-1 (non-forced)";
  for (Position p : game::kAllPositions) {
    const double a = acc.NonForcedAccuracy(p);
    ok = ok && a >= kMinSlAccuracy;
    detail += std::string(" ") + game::PositionChar(p) + " " + Fmt(a);
  }
  detail += ", all decisions " + Fmt(acc.Average()) + "; rule agent on own logs " +
            Fmt(own.Average(), 6);
  return {ok, detail};
}

}  // namespace
}  // namespace douzero::acceptance

int main(int argc, char** argv) {
  using namespace douzero::acceptance;  // NOLINT
  CLI::App app("DouZero acceptance suite");
  std::string group = "all";
  std::string artifacts = DOUZERO_DEFAULT_ARTIFACTS;
  if (const char* env = std::getenv("DOUZERO_ARTIFACT_DIR")) artifacts = env;
  std::string data_dir = DOUZERO_TEST_DATA;
  std::vector<std::string> only;
  app.add_option("--group", group, "fast, learning or all")
      ->check(CLI::IsMember({"fast", "learning", "all"}));
  app.add_option("--artifacts", artifacts, "training artifact directory");
  app.add_option("--data", data_dir, "test data directory");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {"action_space", "fast", ActionSpace},
      {"legal_move_oracle", "fast", LegalOracle},
      {"log_replay", "fast", [&] { return LogReplay(data_dir); }},
      {"encoding_widths", "fast", EncodingWidths},
      {"gradient_checks", "fast", GradientChecks},
      {"returns", "fast", Returns},
      {"buffer_soak", "fast", BufferSoak},
      {"tournament_symmetry", "fast", TournamentSymmetry},
      {"learning", "learning", [&] { return Learning(artifacts); }},
      {"sl_pipeline", "learning", [&] { return SlPipeline(artifacts); }},
      {"scoring", "fast", Scoring},
      {"elo", "fast", Elo},
  };
  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (group != "all" && c.group != group) continue;
    if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end()) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    ++ran;
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << " [" << Fmt(Seconds(t0), 1)
              << " s] " << o.detail << std::endl;
  }
  std::cout << ran - failed << "/" << ran << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
