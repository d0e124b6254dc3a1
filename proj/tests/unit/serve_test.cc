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


#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>
#include <json.hpp>

#include "douzero/common/error.h"
#include "douzero/eval/agent.h"
#include "douzero/features/encoding.h"
#include "douzero/game/match_log.h"
#include "douzero/serve/cli.h"
#include "douzero/serve/config.h"
#include "douzero/serve/service.h"
#include "douzero/training/self_play.h"

// After Eigen: resolv.h, pulled in by httplib, defines _res.
#include <httplib.h>

namespace douzero::serve {
namespace {

namespace fs = std::filesystem;
using game::CardSet;
using game::Position;
using nlohmann::json;

std::string TempDir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("douzero_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

int Cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "douzero");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

// ------------------------------------------------------------------- config

TEST(ConfigTest, PrecedenceDefaultsFileEnvSet) {
  RunConfig c;
  EXPECT_EQ(c.Get("lr"), "0.0001");
  c.LoadText("lr = 0.5\nseed = 3  # comment\n\nepsilon = 0.2\n");
  EXPECT_DOUBLE_EQ(c.GetDouble("lr"), 0.5);
  std::string e1 = "DOUZERO_LR=0.25", e2 = "DOUZERO_SEED=9", e3 = "PATH=/bin";
  char* env[] = {e1.data(), e2.data(), e3.data(), nullptr};
  c.ApplyEnv(env);
  EXPECT_DOUBLE_EQ(c.GetDouble("lr"), 0.25);
  EXPECT_EQ(c.GetUint("seed"), 9u);
  EXPECT_DOUBLE_EQ(c.GetDouble("epsilon"), 0.2);
  c.Set("lr", "0.125");
  EXPECT_DOUBLE_EQ(c.ToTrainConfig().optimizer.lr, 0.125);
}

TEST(ConfigTest, RejectsUnknownKeysAndBadValues) {
  RunConfig c;
  EXPECT_THROW(c.Set("learning_rate", "1"), ConfigError);
  EXPECT_THROW(c.LoadText("lr 0.1\n"), ConfigError);
  std::string bogus = "DOUZERO_WARP_SPEED=9";
  char* env[] = {bogus.data(), nullptr};
  EXPECT_THROW(c.ApplyEnv(env), ConfigError);
  c.Set("seed", "abc");
  EXPECT_THROW(c.GetUint("seed"), ConfigError);
  c.Set("seed", "1");
  c.Set("epsilon", "2");
  EXPECT_THROW(c.ToTrainConfig(), ConfigError);
  EXPECT_THROW(c.LoadFile("/nonexistent/douzero.cfg"), Error);
}

// ---------------------------------------------------------------------- cli

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(Cli({"--help"}), kExitOk);
  EXPECT_EQ(Cli({"train", "--set", "nonsense=1"}), kExitConfig);
  EXPECT_EQ(Cli({"train", "--no-such-flag"}), kExitConfig);
  EXPECT_EQ(Cli({"eval", "--a", "rule", "--b", "alphago", "--decks", "1"}), kExitFailure);

  const auto dir = TempDir("cli");
  const std::string table = dir + "/table.txt";
  std::ofstream(table) << "Total 1\n";
  std::string text;
  EXPECT_EQ(Cli({"enumerate", "--expected-table", table}, &text), kExitCountMismatch);
  EXPECT_NE(text.find("expected 1"), std::string::npos);
  EXPECT_EQ(Cli({"enumerate"}), kExitOk);

  EXPECT_EQ(Cli({"train", "--preset", "desk", "--actors", "1", "--checkpoint-dir", dir + "/ck",
                 "--set", "lr=1e30", "--set", "buffer_entries=4", "--set", "entry_size=20",
                 "--set", "batch_entries=2", "--set", "max_updates=50"}),
            kExitNonFinite);
  EXPECT_TRUE(training::LatestCheckpoint(dir + "/ck").has_value());
  fs::remove_all(dir);
}

TEST(CliTest, EnvOverridesFileAndFlagsOverrideEnv) {
  const auto dir = TempDir("cli_env");
  std::ofstream(dir + "/run.cfg") << "preset = huge\nmax_updates = 1\n";
  // The file alone is invalid; the environment fixes it, then a flag breaks it again.
  EXPECT_EQ(Cli({"train", "--config", dir + "/run.cfg"}), kExitConfig);
  ::setenv("DOUZERO_PRESET", "desk", 1);
  EXPECT_EQ(Cli({"train", "--config", dir + "/run.cfg", "--actors", "1", "--checkpoint-dir",
                 dir + "/ck", "--set", "buffer_entries=4", "--set", "entry_size=20", "--set",
                 "batch_entries=2"}),
            kExitOk);
  EXPECT_EQ(Cli({"train", "--config", dir + "/run.cfg", "--preset", "huge"}), kExitConfig);
  ::setenv("DOUZERO_NOT_A_KEY", "1", 1);
  EXPECT_EQ(Cli({"train", "--config", dir + "/run.cfg"}), kExitConfig);
  ::unsetenv("DOUZERO_NOT_A_KEY");
  ::unsetenv("DOUZERO_PRESET");
  fs::remove_all(dir);
}

TEST(CliTest, SameSeedSameOutputs) {
  const auto dir = TempDir("cli_repro");
  for (const char* run : {"a", "b"}) {
    ASSERT_EQ(Cli({"eval", "--a", "rule", "--b", "random", "--decks", "50", "--seed", "3",
                   "--threads", "2", "--elo", "--out", dir + "/" + run}),
              kExitOk);
  }
  auto read = [](const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  EXPECT_FALSE(read(dir + "/a.csv").empty());
  EXPECT_EQ(read(dir + "/a.csv"), read(dir + "/b.csv"));
  EXPECT_EQ(read(dir + "/a.json"), read(dir + "/b.json"));
  EXPECT_EQ(Cli({"eval", "--a", "dmc:" + dir + "/missing", "--b", "rule", "--decks", "1"}),
            kExitConfig);
  fs::remove_all(dir);
}

TEST(CliTest, CorpusAndReplay) {
  const auto dir = TempDir("cli_corpus");
  EXPECT_EQ(Cli({"gen-corpus", "--count", "5", "--seed", "2", "--out", dir + "/g.txt"}), kExitOk);
  std::string text;
  EXPECT_EQ(Cli({"replay", dir + "/g.txt"}, &text), kExitOk);
  EXPECT_EQ(Cli({"replay", dir + "/missing.txt"}), kExitConfig);
  EXPECT_EQ(Cli({"gen-corpus", "--kind", "bids", "--count", "5", "--out", dir + "/b.txt"}),
            kExitOk);
  EXPECT_EQ(game::ReadLogFile(dir + "/g.txt").size(), 5u);
  fs::remove_all(dir);
}

// --------------------------------------------------------------------- http

class ServiceTest : public ::testing::Test {
 protected:
  void Start(eval::AgentFactory bots, const std::string& label) {
    ServiceOptions o;
    o.port = 0;
    o.bot_delay_ms = 0;
    o.seed = 100;
    service_ = std::make_unique<Service>(o, std::move(bots), label);
    port_ = service_->Bind();
    thread_ = std::thread([this] { service_->Listen(); });
  }
  void SetUp() override { Start(eval::MakeAgentFactory("rule"), "rule"); }
  void TearDown() override {
    service_->Stop();
    thread_.join();
  }
  httplib::Client Client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(10, 0);
    return c;
  }
  json NewSession(const json& body) {
    auto res = Client().Post("/sessions", body.dump(), "application/json");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 201);
    return json::parse(res->body);
  }
  // Plays the human's first legal move until the game ends.
  json PlayOut(const std::string& id) {
    auto c = Client();
    for (;;) {
      const auto state = json::parse(c.Get("/sessions/" + id + "/state")->body);
      if (state["finished"]) return state;
      EXPECT_TRUE(state["your_turn"]);
      const auto legal = json::parse(c.Get("/sessions/" + id + "/legal")->body);
      const json move = {{"move", legal["moves"][0]}};
      EXPECT_EQ(c.Post("/sessions/" + id + "/move", move.dump(), "application/json")->status,
                200);
    }
  }

  std::unique_ptr<Service> service_;
  int port_ = 0;
  std::thread thread_;
};

TEST_F(ServiceTest, FullGameAndLogExport) {
  const json s = NewSession({{"human", "D"}, {"seed", 42}});
  const std::string id = s["session"];
  EXPECT_EQ(s["human"], "D");
  EXPECT_TRUE(s["your_turn"]);  // the landlord bot has already led
  auto c = Client();
  EXPECT_EQ(c.Get("/sessions/" + id + "/log")->status, 409);

  const json end = PlayOut(id);
  EXPECT_TRUE(end["result"].contains("winner"));
  const auto& pts = end["result"]["points"];
  EXPECT_EQ(pts["L"].get<int>() + pts["D"].get<int>() + pts["U"].get<int>(), 0);

  const auto log = c.Get("/sessions/" + id + "/log");
  ASSERT_EQ(log->status, 200);
  const auto records = game::ParseLogCorpus(log->body);
  ASSERT_EQ(records.size(), 1u);
  const auto& record = records.front();
  EXPECT_EQ(record.seed, 42u);
  std::mt19937_64 rng(42);
  const auto deal_state = game::GameState::StartPlaying(game::RandomDeal(rng), 0);
  for (Position p : game::kAllPositions) {
    EXPECT_EQ(record.hands[static_cast<int>(p)], deal_state.hand(deal_state.SeatOf(p)));
  }
  EXPECT_EQ(c.Post("/sessions/" + id + "/move", R"({"move":"P"})", "application/json")->status,
            409);
}

TEST_F(ServiceTest, ErrorStatuses) {
  auto c = Client();
  EXPECT_EQ(c.Get("/sessions/nope/state")->status, 404);
  EXPECT_EQ(c.Post("/sessions/nope/move", "{}", "application/json")->status, 404);
  EXPECT_EQ(c.Post("/sessions", "not json", "application/json")->status, 400);
  EXPECT_EQ(c.Post("/sessions", R"({"human":"X"})", "application/json")->status, 400);
  EXPECT_EQ(c.Post("/sessions", R"({"bot":"alphago"})", "application/json")->status, 400);

  const json s = NewSession({{"human", "L"}, {"seed", 5}});
  const std::string id = s["session"];
  auto bad = c.Post("/sessions/" + id + "/move", R"({"move":"XYZ"})", "application/json");
  EXPECT_EQ(bad->status, 422);
  EXPECT_FALSE(json::parse(bad->body)["legal"].empty());
  // A pass is never legal on the opening lead.
  EXPECT_EQ(c.Post("/sessions/" + id + "/move", R"({"move":"P"})", "application/json")->status,
            422);
  EXPECT_EQ(c.Post("/sessions/" + id + "/move", "[]", "application/json")->status, 422);
  // Rule bots expose no values.
  EXPECT_EQ(c.Get("/sessions/" + id + "/hints")->status, 501);
  EXPECT_EQ(c.Get("/sessions/" + id + "/hints?k=zero")->status, 400);
  EXPECT_EQ(c.Options("/sessions")->status, 204);
}

TEST_F(ServiceTest, EventStreamResumesFromLastEventId) {
  const json s = NewSession({{"human", "U"}, {"seed", 8}});
  const std::string id = s["session"];
  PlayOut(id);
  auto c = Client();
  std::string all;
  auto res = c.Get("/sessions/" + id + "/events", [&](const char* d, size_t n) {
    all.append(d, n);
    return true;
  });
  ASSERT_TRUE(res);
  EXPECT_EQ(res->get_header_value("Content-Type"), "text/event-stream");
  std::vector<int> ids;
  std::vector<std::string> types;
  std::istringstream in(all);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("id: ", 0) == 0) ids.push_back(std::stoi(line.substr(4)));
    if (line.rfind("event: ", 0) == 0) types.push_back(line.substr(7));
  }
  ASSERT_GE(ids.size(), 3u);
  for (size_t i = 0; i < ids.size(); ++i) EXPECT_EQ(ids[i], static_cast<int>(i) + 1);
  EXPECT_EQ(types.front(), "start");
  EXPECT_EQ(types.back(), "terminal");
  const json final_state = json::parse(c.Get("/sessions/" + id + "/state")->body);
  EXPECT_EQ(static_cast<int>(ids.size()), final_state["last_event_id"].get<int>());

  std::string tail;
  httplib::Headers h = {{"Last-Event-ID", std::to_string(ids.size() - 2)}};
  c.Get("/sessions/" + id + "/events", h, [&](const char* d, size_t n) {
    tail.append(d, n);
    return true;
  });
  EXPECT_EQ(tail, all.substr(all.find("id: " + std::to_string(ids.size() - 1) + "\n")));
}

TEST_F(ServiceTest, ReplayEndpoint) {
  const auto logs = game::ReadLogFile(DOUZERO_TEST_DATA "/reference_games.txt");
  auto c = Client();
  const auto res = c.Post("/replay", game::FormatLog(logs.front()), "text/plain");
  ASSERT_EQ(res->status, 200);
  const json j = json::parse(res->body);
  EXPECT_TRUE(j["finished"]);
  EXPECT_EQ(j["steps"].size(), logs.front().moves.size() + 1);
  EXPECT_EQ(j["steps"][0]["hands"]["L"], logs.front().hands[0].ToString());
  const auto& last = j["steps"].back();
  const std::string winner = last["position"] == "L" ? "landlord" : "peasants";
  EXPECT_EQ(j["result"]["winner"], winner);
  EXPECT_EQ(last["hands"][last["position"].get<std::string>()], "");
  EXPECT_EQ(c.Post("/replay", "garbage", "text/plain")->status, 422);
}

TEST_F(ServiceTest, HundredConcurrentSessions) {
  std::atomic<int> finished{0};
  std::vector<std::thread> clients;
  for (int i = 0; i < 100; ++i) {
    clients.emplace_back([&, i] {
      const char* seats[] = {"L", "D", "U"};
      const json s = NewSession({{"human", seats[i % 3]}, {"seed", 1000 + i}});
      const std::string id = s["session"];
      if (!PlayOut(id)["finished"]) return;
      // The exported game must be exactly this session's own deal.
      const auto log = Client().Get("/sessions/" + id + "/log");
      const auto record = game::ParseLogCorpus(log->body).at(0);
      std::mt19937_64 rng(1000 + i);
      const auto dealt = game::GameState::StartPlaying(game::RandomDeal(rng), 0);
      for (Position p : game::kAllPositions) {
        if (record.hands[static_cast<int>(p)] != dealt.hand(dealt.SeatOf(p))) return;
      }
      ++finished;
    });
  }
  for (auto& t : clients) t.join();
  EXPECT_EQ(finished.load(), 100);
  EXPECT_EQ(service_->NumSessions(), 100u);
}

class ValueServiceTest : public ServiceTest {
 protected:
  void SetUp() override {
    auto nets = training::InitQNetSet("desk", 4);
    Start([nets] { return std::make_unique<eval::QAgent>("dmc", nets); }, "dmc");
  }
};

TEST_F(ValueServiceTest, HintsRankLegalMoves) {
  const json s = NewSession({{"human", "L"}, {"seed", 6}});
  const std::string id = s["session"];
  auto c = Client();
  const json hints = json::parse(c.Get("/sessions/" + id + "/hints?k=3")->body);
  ASSERT_EQ(hints["hints"].size(), 3u);
  EXPECT_GE(hints["hints"][0]["value"].get<double>(), hints["hints"][1]["value"].get<double>());
  const json legal = json::parse(c.Get("/sessions/" + id + "/legal")->body);
  for (const auto& h : hints["hints"]) {
    EXPECT_NE(std::find(legal["moves"].begin(), legal["moves"].end(), h["move"]),
              legal["moves"].end());
  }
}

// The human sees exactly what their seat would observe and nothing more.
TEST_F(ServiceTest, ObservationFirewall) {
  for (int i = 0; i < 12; ++i) {
    const char* seats[] = {"L", "D", "U"};
    const uint64_t seed = 500 + i;
    const json s = NewSession({{"human", seats[i % 3]}, {"seed", seed}});
    const std::string id = s["session"];
    auto c = Client();
    // Advance a few human moves so the history is non-trivial.
    json state = s;
    for (int k = 0; k < i % 4 && !state["finished"]; ++k) {
      const auto legal = json::parse(c.Get("/sessions/" + id + "/legal")->body);
      state = json::parse(c.Post("/sessions/" + id + "/move",
                                 json{{"move", legal["moves"].back()}}.dump(), "application/json")
                              ->body);
    }
    if (state["finished"]) continue;
    const game::Observation seen = ObservationFromJson(state["observation"]);

    // Rebuild the true game from the seed and the public history.
    std::mt19937_64 rng(seed);
    game::GameState truth = game::GameState::StartPlaying(game::RandomDeal(rng), 0);
    for (const auto& m : seen.history) truth.ApplyMove(m.combo);
    ASSERT_EQ(game::PositionChar(truth.current_position()), seats[i % 3][0]);
    const game::Observation real = truth.CurrentObservation();
    EXPECT_EQ(seen, real);
    const auto a = features::EncodeState(seen), b = features::EncodeState(real);
    EXPECT_EQ(a.state, b.state);
    EXPECT_EQ(a.history, b.history);

    // No other seat's hand is present anywhere in the payload.
    const std::string body = c.Get("/sessions/" + id + "/state")->body;
    for (Position p : game::kAllPositions) {
      if (p == real.position) continue;
      const std::string other = truth.hand(truth.SeatOf(p)).ToString();
      EXPECT_EQ(body.find("\"" + other + "\""), std::string::npos);
    }
    const json top = json::parse(body);
    EXPECT_FALSE(top.contains("hands"));
    EXPECT_FALSE(top["observation"].contains("hands"));
  }
}

TEST(ObservationJsonTest, RoundTripAndErrors) {
  std::mt19937_64 rng(3);
  game::GameState g = game::GameState::StartPlaying(game::RandomDeal(rng), 0);
  for (int i = 0; i < 7; ++i) g.ApplyMove(g.LegalMoves().front());
  const auto obs = g.CurrentObservation();
  EXPECT_EQ(ObservationFromJson(ObservationToJson(obs)), obs);
  EXPECT_THROW(ObservationFromJson(json{{"hand", "33"}}), ParseError);
}

}  // namespace
}  // namespace douzero::serve
