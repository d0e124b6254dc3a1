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


#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <unistd.h>

#include <gtest/gtest.h>

#include "douzero/common/error.h"
#include "douzero/features/encoding.h"
#include "douzero/game/match_log.h"
#include "douzero/game/scoring.h"
#include "douzero/nn/checkpoint.h"
#include "douzero/training/dmc_trainer.h"
#include "douzero/training/returns.h"
#include "douzero/training/self_play.h"
#include "douzero/training/shared_buffer.h"
#include "douzero/training/supervised.h"

namespace douzero::training {
namespace {

namespace fs = std::filesystem;
using game::CardSet;
using game::Position;

std::string TempDir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("douzero_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string ReadBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ------------------------------------------------------------------ returns

TEST(ReturnsTest, Examples) {
  const std::vector<double> a = {0, 0, 0, 1};
  EXPECT_EQ(DiscountedReturns(a, 1.0), (std::vector<double>{1, 1, 1, 1}));
  const std::vector<double> b = {0, 0, 1};
  const auto r = DiscountedReturns(b, 0.9);
  EXPECT_NEAR(r[0], 0.81, 1e-12);
  EXPECT_NEAR(r[1], 0.9, 1e-12);
  EXPECT_NEAR(r[2], 1.0, 1e-12);
}

TEST(ReturnsTest, TerminalRewards) {
  game::MatchResult peasants_win;
  peasants_win.winner = game::Side::kPeasants;
  peasants_win.landlord_points = -2;
  peasants_win.peasant_team_points = 2;
  EXPECT_EQ(TerminalReward(peasants_win, Objective::kWp, Position::kDown), 1.0);
  EXPECT_EQ(TerminalReward(peasants_win, Objective::kWp, Position::kLandlord), -1.0);

  game::MatchResult one_bomb;
  one_bomb.winner = game::Side::kLandlord;
  one_bomb.bombs = 1;
  one_bomb.landlord_points = 4;
  one_bomb.peasant_team_points = -4;
  EXPECT_EQ(TerminalReward(one_bomb, Objective::kAdp, Position::kLandlord), 4.0);

  game::MatchResult plain;
  plain.winner = game::Side::kLandlord;
  plain.landlord_points = 2;
  plain.peasant_team_points = -2;
  EXPECT_EQ(TerminalReward(plain, Objective::kAdp, Position::kUp), -1.0);
  EXPECT_EQ(TerminalReward(plain, Objective::kAdp, Position::kDown), -1.0);
  EXPECT_THROW(ParseObjective("elo"), ConfigError);
}

TEST(ReturnsTest, GammaOneEpisodesHaveConstantReturns) {
  const QNetSet nets = InitQNetSet("desk", 3);
  std::mt19937_64 rng(12);
  for (Objective obj : {Objective::kWp, Objective::kAdp}) {
    for (int g = 0; g < 20; ++g) {
      const auto ep = PlayEpisode(nets, 0.5, obj, 1.0, rng);
      ASSERT_EQ(ep.returns.size(), ep.record.steps.size());
      for (size_t t = 0; t < ep.returns.size(); ++t) {
        const Position p = ep.record.steps[t].position;
        EXPECT_EQ(ep.returns[t], TerminalReward(ep.result, obj, p));
      }
      // Only each position's last step carries a reward.
      std::array<int, 3> last{-1, -1, -1};
      for (size_t t = 0; t < ep.record.steps.size(); ++t) {
        last[static_cast<int>(ep.record.steps[t].position)] = static_cast<int>(t);
      }
      for (size_t t = 0; t < ep.record.steps.size(); ++t) {
        const int p = static_cast<int>(ep.record.steps[t].position);
        if (static_cast<int>(t) != last[p]) EXPECT_EQ(ep.record.steps[t].reward, 0.0);
      }
    }
  }
}

TEST(ReturnsTest, NonTerminalEpisodeThrows) {
  EpisodeRecord ep;
  ep.steps.resize(2);
  EXPECT_THROW(ComputeReturns(ep, 1.0), NonTerminalEpisode);
}

// ------------------------------------------------------------------- buffer

struct Tagged {
  uint64_t id = 0;
};

TEST(SharedBufferTest, SoakEightActors) {
  constexpr int kB = 50, kS = 100, kM = 32, kActors = 8;
  constexpr uint64_t kTarget = 1'000'000;
  SharedBuffer<Tagged> buffer(kB, kS);
  std::atomic<uint64_t> sequence{0};
  buffer.ShareSequence(&sequence);
  std::atomic<uint64_t> written{0};
  std::vector<std::thread> actors;
  for (int a = 0; a < kActors; ++a) {
    actors.emplace_back([&, a] {
      for (uint64_t batch = 0;; ++batch) {
        auto entry = buffer.AcquireFree();
        if (!entry) return;
        std::vector<Tagged> items(kS);
        for (int i = 0; i < kS; ++i) {
          items[i].id = (static_cast<uint64_t>(a) << 40) | (batch * kS + i);
        }
        buffer.Fill(*entry, std::move(items));
        written += kS;
      }
    });
  }
  std::vector<std::vector<uint64_t>> seen(kActors);
  uint64_t consumed = 0;
  int bad_batches = 0, bad_entries = 0;
  while (consumed < kTarget) {
    auto taken = buffer.TryTakeFull(kM);
    if (!taken) {
      buffer.WaitForFull(std::chrono::milliseconds(10));
      continue;
    }
    size_t batch = 0;
    for (int e : *taken) {
      const auto& items = buffer.Entry(e);
      bad_entries += static_cast<int>(items.size()) != kS;
      batch += items.size();
      for (const auto& t : items) seen[t.id >> 40].push_back(t.id & ((1ull << 40) - 1));
    }
    bad_batches += batch != static_cast<size_t>(kM * kS);
    consumed += batch;
    buffer.Release(*taken);
    const auto states = buffer.States();
    ASSERT_EQ(static_cast<int>(states.size()), kB);
  }
  buffer.Close();
  for (auto& t : actors) t.join();

  EXPECT_EQ(bad_entries, 0);
  EXPECT_EQ(bad_batches, 0);
  EXPECT_GE(consumed, kTarget);
  uint64_t in_buffer = 0;
  for (auto s : buffer.States()) in_buffer += (s == SharedBuffer<Tagged>::EntryState::kFull) * kS;
  EXPECT_EQ(written.load(), consumed + in_buffer);
  // Each actor's stream is consumed without gaps or repeats, up to what is
  // still sitting in the buffer.
  uint64_t unique = 0;
  for (auto& ids : seen) {
    std::sort(ids.begin(), ids.end());
    EXPECT_EQ(std::adjacent_find(ids.begin(), ids.end()), ids.end());
    unique += ids.size();
  }
  EXPECT_EQ(unique, consumed);
}

TEST(SharedBufferTest, FillRequiresExactlyS) {
  SharedBuffer<Tagged> buffer(2, 3);
  auto e = buffer.AcquireFree();
  EXPECT_THROW(buffer.Fill(*e, std::vector<Tagged>(2)), ShapeMismatch);
  EXPECT_THROW(SharedBuffer<Tagged>(0, 3), ConfigError);
}

TEST(SharedBufferTest, FewerThanMFullMeansNoBatch) {
  SharedBuffer<Tagged> buffer(4, 1);
  for (int i = 0; i < 2; ++i) buffer.Fill(*buffer.AcquireFree(), std::vector<Tagged>(1));
  EXPECT_FALSE(buffer.TryTakeFull(3).has_value());
  EXPECT_TRUE(buffer.TryTakeFull(2).has_value());
}

// ---------------------------------------------------------------- self-play

TEST(SelfPlayTest, EpsilonOneIsUniform) {
  const QNetSet nets = InitQNetSet("desk", 1);
  std::mt19937_64 deal_rng(5);
  game::GameState s = game::GameState::StartPlaying(game::RandomDeal(deal_rng), 0);
  const auto legal = s.LegalMoves();
  const int k = static_cast<int>(legal.size());
  ASSERT_GT(k, 10);
  const auto state = features::EncodeState(s.CurrentObservation());
  std::vector<int> counts(k, 0);
  std::mt19937_64 rng(99);
  const int n = 200 * k;
  for (int i = 0; i < n; ++i) ++counts[SelectAction(*nets[0], state, legal, 1.0, rng)];
  const double expected = static_cast<double>(n) / k;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // Wilson-Hilferty 0.999 quantile of chi-square with k-1 degrees of freedom.
  const double df = k - 1;
  const double z = 3.090;
  const double crit = df * std::pow(1 - 2 / (9 * df) + z * std::sqrt(2 / (9 * df)), 3);
  EXPECT_LT(chi2, crit);
}

TEST(SelfPlayTest, EpsilonZeroIsDeterministic) {
  const QNetSet nets = InitQNetSet("desk", 2);
  std::mt19937_64 a(77), b(77);
  const auto x = PlayEpisode(nets, 0.0, Objective::kWp, 1.0, a);
  const auto y = PlayEpisode(nets, 0.0, Objective::kWp, 1.0, b);
  ASSERT_EQ(x.record.steps.size(), y.record.steps.size());
  for (size_t t = 0; t < x.record.steps.size(); ++t) {
    EXPECT_EQ(x.record.steps[t].features, y.record.steps[t].features);
  }
  EXPECT_EQ(x.returns, y.returns);
}

// ------------------------------------------------------------------ trainer

TrainConfig SmallConfig(const std::string& dir) {
  TrainConfig c;
  c.preset = "desk";
  c.buffer_entries = 4;
  c.entry_size = 20;
  c.batch_entries = 2;
  c.num_actors = 1;
  c.epsilon = 0.0;
  c.seed = 5;
  c.checkpoint_dir = dir;
  c.max_updates = 3;
  return c;
}

TEST(TrainConfigTest, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.Validate());
  auto bad = [](auto mutate) {
    TrainConfig c;
    mutate(c);
    EXPECT_THROW(c.Validate(), ConfigError);
  };
  bad([](TrainConfig& c) { c.buffer_entries = 10; });  // B < M
  bad([](TrainConfig& c) { c.entry_size = 0; });
  bad([](TrainConfig& c) { c.epsilon = 1.5; });
  bad([](TrainConfig& c) { c.gamma = -0.1; });
  bad([](TrainConfig& c) { c.preset = "huge"; });
  EXPECT_EQ(c.batch_entries * c.entry_size, 3200);
}

TEST(DmcTrainerTest, BatchesAreMTimesSAndCheckpointOnHalt) {
  const auto dir = TempDir("halt");
  DmcTrainer trainer(SmallConfig(dir));
  const auto s = trainer.Run();
  EXPECT_GE(s.updates, 3u);
  EXPECT_EQ(s.frames, s.updates * 2 * 20);
  ASSERT_FALSE(s.checkpoints.empty());
  EXPECT_EQ(LatestCheckpoint(dir), s.checkpoints.back());
  const auto loaded = LoadQNetSet(dir);
  EXPECT_EQ(loaded.frames, s.frames);
  std::ifstream stats(dir + "/stats.csv");
  std::string header;
  std::getline(stats, header);
  EXPECT_EQ(header, "wall_clock_s,frames,position,loss,mean_target");
  std::string row;
  int rows = 0;
  while (std::getline(stats, row)) {
    ++rows;
    // With gamma 1 and WP rewards every target is +-1, so the mean is in range.
    const double mean = std::stod(row.substr(row.rfind(',') + 1));
    EXPECT_LE(std::abs(mean), 1.0);
  }
  EXPECT_EQ(rows, static_cast<int>(s.updates));
  fs::remove_all(dir);
}

TEST(DmcTrainerTest, FirstCheckpointIsBitIdentical) {
  std::vector<std::string> bytes;
  for (int run = 0; run < 2; ++run) {
    const auto dir = TempDir("det" + std::to_string(run));
    const auto s = DmcTrainer(SmallConfig(dir)).Run();
    bytes.push_back(ReadBytes(s.checkpoints.front()));
    fs::remove_all(dir);
  }
  EXPECT_FALSE(bytes[0].empty());
  EXPECT_EQ(bytes[0], bytes[1]);
}

TEST(DmcTrainerTest, ResumeContinuesCounters) {
  const auto dir = TempDir("resume");
  const auto first = DmcTrainer(SmallConfig(dir)).Run();
  auto c = SmallConfig(dir);
  c.resume = true;
  const auto second = DmcTrainer(c).Run();
  EXPECT_EQ(second.frames, first.frames + second.updates * 2 * 20);
  fs::remove_all(dir);
}

TEST(DmcTrainerTest, StopWritesFinalCheckpoint) {
  const auto dir = TempDir("stop");
  auto c = SmallConfig(dir);
  c.max_updates = 0;
  DmcTrainer trainer(c);
  TrainSummary summary;
  std::thread run([&] { summary = trainer.Run(); });
  while (!fs::exists(dir + "/stats.csv") || fs::file_size(dir + "/stats.csv") < 200) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  trainer.Stop();
  run.join();
  ASSERT_FALSE(summary.checkpoints.empty());
  EXPECT_EQ(LatestCheckpoint(dir), summary.checkpoints.back());
  EXPECT_EQ(LoadQNetSet(dir).frames, summary.frames);
  EXPECT_GT(summary.frames, 0u);
  fs::remove_all(dir);
}

TEST(DmcTrainerTest, NonFiniteLossCheckpointsAndRethrows) {
  const auto dir = TempDir("nan");
  auto c = SmallConfig(dir);
  c.optimizer.lr = 1e30;
  c.max_updates = 50;
  DmcTrainer trainer(c);
  EXPECT_THROW(trainer.Run(), NonFiniteLoss);
  EXPECT_TRUE(LatestCheckpoint(dir).has_value());
  fs::remove_all(dir);
}

TEST(DmcTrainerTest, MoreActorsScaleThroughput) {
  if (std::thread::hardware_concurrency() < 4) {
    GTEST_SKIP() << "needs at least 4 cores";
  }
  auto rate = [](int actors) {
    const auto dir = TempDir("scale" + std::to_string(actors));
    auto c = SmallConfig(dir);
    c.num_actors = actors;
    c.max_updates = 0;
    c.max_seconds = 8;
    c.buffer_entries = 50;
    const auto s = DmcTrainer(c).Run();
    fs::remove_all(dir);
    return s.episodes / s.seconds;
  };
  EXPECT_GE(rate(4), 2.0 * rate(1));
}

// --------------------------------------------------------------- supervised

TEST(SupervisedTest, ForcedMoveCorpusIsFullyAccurate) {
  game::MatchRecord m;
  m.hands = {CardSet::FromString("3"), CardSet::FromString("4"), CardSet::FromString("5")};
  m.moves = {{Position::kLandlord, game::Combo{game::Category::kSolo, 0, 1, m.hands[0]}}};
  SlConfig c;
  c.epochs = 1;
  const auto r = TrainSl({m}, c);
  EXPECT_EQ(r.val_accuracy[0], 1.0);
  EXPECT_EQ(SlAccuracy(r.nets, {m})[0], 1.0);
}

TEST(SupervisedTest, EmptyCorpus) {
  EXPECT_THROW(TrainSl({}, SlConfig()), EmptyCorpus);
  EXPECT_THROW(TrainBidding({}, BidTrainConfig()), EmptyCorpus);
}

TEST(SupervisedTest, KeepsBestValidationEpoch) {
  std::mt19937_64 rng(4);
  std::vector<game::MatchRecord> games;
  const QNetSet nets = InitQNetSet("desk", 9);
  for (int g = 0; g < 40; ++g) {
    game::GameState s = game::GameState::StartPlaying(game::RandomDeal(rng), 0);
    while (s.phase() != game::Phase::kFinished) {
      const auto legal = s.LegalMoves();
      s.ApplyMove(legal.front());  // a simple deterministic policy to imitate
    }
    games.push_back(game::RecordFromState(s));
  }
  SlConfig c;
  c.epochs = 3;
  c.batch_rows = 512;
  c.optimizer.lr = 1e-3;
  c.validation_fraction = 0.25;
  const auto r = TrainSl(games, c);
  ASSERT_EQ(r.history.size(), 3u);
  EXPECT_EQ(r.val_games, 10u);
  EXPECT_EQ(r.train_games, 30u);
  for (int p = 0; p < 3; ++p) {
    double best = 0.0;
    for (const auto& e : r.history) best = std::max(best, e.val_accuracy[p]);
    EXPECT_EQ(r.val_accuracy[p], best);
    EXPECT_GT(r.negatives[p], r.positives[p]);
  }
}

TEST(BidTrainingTest, CorpusFormatRoundTrip) {
  std::vector<BidExample> ex = {
      {CardSet::FromString("33344455566677788"), {}, true},
      {CardSet::FromString("3456789TJQKA2BR33"), {game::BidDecision::kBid,
                                                   game::BidDecision::kNoBid}, false}};
  EXPECT_EQ(ParseBidCorpus(FormatBidCorpus(ex)), ex);
  EXPECT_THROW(ParseBidCorpus("333;;1\n"), BadHandSize);
  EXPECT_THROW(ParseBidCorpus("33344455566677788;X;1\n"), ParseError);
  EXPECT_THROW(ParseBidCorpus("33344455566677788;;2\n"), ParseError);
  EXPECT_THROW(ParseBidCorpus("33344455566677788;1\n"), ParseError);
}

TEST(BidTrainingTest, MonotoneFixture) {
  const CardSet bombs = CardSet::FromString("333344445555666BR");
  const CardSet junk = CardSet::FromString("34567899TJJQKA568");
  std::vector<BidExample> corpus;
  for (int i = 0; i < 200; ++i) {
    corpus.push_back({bombs, {}, true});
    corpus.push_back({junk, {}, false});
  }
  BidTrainConfig c;
  c.epochs = 5;
  c.batch = 32;
  const auto r = TrainBidding(corpus, c);
  ASSERT_TRUE(r.net);
  const float hi = nn::BidProbability(*r.net, features::EncodeBid(bombs, {}));
  const float lo = nn::BidProbability(*r.net, features::EncodeBid(junk, {}));
  EXPECT_GT(hi, lo);
  EXPECT_GT(hi, 0.5f);
  EXPECT_LT(lo, 0.5f);
  EXPECT_EQ(BidAccuracy(*r.net, corpus), 1.0);
}

}  // namespace
}  // namespace douzero::training
