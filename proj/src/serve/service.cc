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


#include "douzero/serve/service.h"

#include <chrono>
#include <condition_variable>
#include <random>
#include <thread>

// The default backlog of 5 refuses bursts of browser connections.
#define CPPHTTPLIB_LISTEN_BACKLOG 256
#include <httplib.h>

#include "douzero/common/error.h"
#include "douzero/eval/analysis.h"
#include "douzero/game/match_log.h"
#include "douzero/game/scoring.h"

namespace douzero::serve {

using nlohmann::json;
using game::CardSet;
using game::Combo;
using game::Position;

namespace {

constexpr int kServerThreads = 64;

std::string PosName(Position p) { return std::string(1, game::PositionChar(p)); }

Position ParsePosition(const std::string& s) {
  if (s.size() == 1) {
    if (auto p = game::PositionFromChar(s[0])) return *p;
  }
  throw ParseError("position must be L, D or U, got '" + s + "'");
}

Combo ParseCombo(const std::string& text) {
  if (text == "P") return Combo::Pass();
  auto c = game::Classify(CardSet::FromString(text));
  if (!c) throw ParseError("'" + text + "' is not a valid combination");
  return *c;
}

json ByPosition(const std::array<int, 3>& v) {
  json j = json::object();
  for (Position p : game::kAllPositions) j[PosName(p)] = v[static_cast<int>(p)];
  return j;
}

json ResultJson(const game::MatchResult& r) {
  std::array<int, 3> points{};
  for (Position p : game::kAllPositions) points[static_cast<int>(p)] = r.PointsFor(p);
  return {{"winner", r.winner == game::Side::kLandlord ? "landlord" : "peasants"},
          {"bombs", r.bombs},
          {"points", ByPosition(points)},
          {"botzone", {{"landlord", r.botzone_landlord}, {"peasants", r.botzone_peasants}}}};
}

json MoveList(const std::vector<Combo>& moves) {
  json j = json::array();
  for (const auto& m : moves) j.push_back(m.ToString());
  return j;
}

void SendJson(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, int status, const std::string& message,
               json extra = json::object()) {
  extra["error"] = message;
  SendJson(res, status, extra);
}

}  // namespace

json ObservationToJson(const game::Observation& obs) {
  json played = json::object();
  for (Position p : game::kAllPositions) {
    played[PosName(p)] = obs.played[static_cast<int>(p)].ToString();
  }
  json history = json::array();
  for (const auto& m : obs.history) {
    history.push_back({{"position", PosName(m.position)}, {"move", m.combo.ToString()}});
  }
  return {{"position", PosName(obs.position)},
          {"hand", obs.hand.ToString()},
          {"cards_left", ByPosition(obs.cards_left)},
          {"played", played},
          {"history", history},
          {"to_beat", obs.to_beat ? json(obs.to_beat->ToString()) : json(nullptr)},
          {"bombs_played", obs.bombs_played},
          {"bottom", obs.bottom.ToString()}};
}

game::Observation ObservationFromJson(const json& j) {
  try {
    game::Observation obs;
    obs.position = ParsePosition(j.at("position").get<std::string>());
    obs.hand = CardSet::FromString(j.at("hand").get<std::string>());
    for (Position p : game::kAllPositions) {
      const int i = static_cast<int>(p);
      obs.cards_left[i] = j.at("cards_left").at(PosName(p)).get<int>();
      obs.played[i] = CardSet::FromString(j.at("played").at(PosName(p)).get<std::string>());
    }
    for (const auto& m : j.at("history")) {
      obs.history.push_back({ParsePosition(m.at("position").get<std::string>()),
                             ParseCombo(m.at("move").get<std::string>())});
    }
    if (!j.at("to_beat").is_null()) obs.to_beat = ParseCombo(j.at("to_beat").get<std::string>());
    obs.bombs_played = j.at("bombs_played").get<int>();
    obs.bottom = CardSet::FromString(j.at("bottom").get<std::string>());
    return obs;
  } catch (const json::exception& e) {
    throw ParseError(std::string("observation json: ") + e.what());
  }
}

// One human-vs-bots game. All members are guarded by `mu`.
class Session {
 public:
  std::mutex mu;
  std::condition_variable cv;
  std::string id;
  Position human = Position::kLandlord;
  uint64_t seed = 0;
  std::string bot_label;
  game::GameState state;
  std::array<std::unique_ptr<eval::Agent>, 3> bots;  // null at the human position
  std::unique_ptr<eval::Agent> advisor;             // hint source
  std::vector<std::string> events;                  // event i has id i + 1
  bool bot_running = false;

  bool Finished() const { return state.phase() == game::Phase::kFinished; }
  bool HumanTurn() const { return !Finished() && state.current_position() == human; }

  void Emit(const std::string& type, json data) {
    const size_t event_id = events.size() + 1;
    data["type"] = type;
    data["event_id"] = event_id;
    events.push_back("id: " + std::to_string(event_id) + "\nevent: " + type +
                     "\ndata: " + data.dump() + "\n\n");
    cv.notify_all();
  }

  void Apply(const Combo& move) {
    const Position mover = state.current_position();
    state.ApplyMove(move);
    std::array<int, 3> left{};
    for (Position p : game::kAllPositions) {
      left[static_cast<int>(p)] = state.hand(state.SeatOf(p)).Size();
    }
    json data = {{"position", PosName(mover)},
                 {"move", move.ToString()},
                 {"cards_left", ByPosition(left)},
                 {"turn", Finished() ? json(nullptr) : json(PosName(state.current_position()))}};
    Emit("move", std::move(data));
    if (Finished()) Emit("terminal", ResultJson(game::Score(state)));
  }

  // Plays one bot move. Returns false when the bots have nothing to do.
  bool BotStep() {
    if (Finished() || HumanTurn()) return false;
    const int seat = state.current_seat();
    const auto legal = state.LegalMoves();
    Apply(bots[static_cast<int>(state.current_position())]->Decide(state.ObservationFor(seat),
                                                                    legal));
    return true;
  }

  json StateJson() const {
    json j = {{"session", id},
              {"human", PosName(human)},
              {"bot", bot_label},
              {"seed", seed},
              {"turn", Finished() ? json(nullptr) : json(PosName(state.current_position()))},
              {"your_turn", HumanTurn()},
              {"finished", Finished()},
              {"last_event_id", events.size()},
              {"observation", ObservationToJson(state.ObservationFor(state.SeatOf(human)))}};
    j["result"] = Finished() ? ResultJson(game::Score(state)) : json(nullptr);
    return j;
  }
};

Service::Service(ServiceOptions options, eval::AgentFactory bots, std::string label)
    : options_(std::move(options)),
      bots_(std::move(bots)),
      label_(std::move(label)),
      server_(std::make_unique<httplib::Server>()) {
  server_->new_task_queue = [] { return new httplib::ThreadPool(kServerThreads); };
  Routes();
}

Service::~Service() { Stop(); }

int Service::Bind() {
  if (bound_) return options_.port;
  if (options_.port == 0) {
    const int port = server_->bind_to_any_port(options_.host);
    if (port < 0) throw IoError("cannot bind " + options_.host);
    options_.port = port;
  } else if (!server_->bind_to_port(options_.host, options_.port)) {
    throw IoError("cannot bind " + options_.host + ":" + std::to_string(options_.port));
  }
  bound_ = true;
  return options_.port;
}

void Service::Listen() {
  Bind();
  server_->listen_after_bind();
}

void Service::Stop() {
  stopping_ = true;
  {
    std::shared_lock lock(mu_);
    for (auto& [id, s] : sessions_) s->cv.notify_all();
  }
  server_->stop();
  while (bot_workers_.load() > 0) std::this_thread::sleep_for(std::chrono::milliseconds(5));
}

size_t Service::NumSessions() const {
  std::shared_lock lock(mu_);
  return sessions_.size();
}

std::shared_ptr<Session> Service::Find(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void Service::Routes() {
  auto& srv = *server_;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type, Last-Event-ID"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  srv.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                               std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      SendError(res, 500, e.what());
    } catch (...) {
      SendError(res, 500, "internal error");
    }
  });
  if (!options_.static_dir.empty() && !srv.set_mount_point("/", options_.static_dir)) {
    throw IoError("static dir not found: " + options_.static_dir);
  }

  // Bot turns run inline when there is no delay, otherwise on a worker so
  // the human's request returns immediately.
  auto drive_bots = [this](const std::shared_ptr<Session>& s) {
    if (options_.bot_delay_ms <= 0) {
      while (s->BotStep()) {
      }
      return;
    }
    if (s->bot_running || s->Finished() || s->HumanTurn()) return;
    s->bot_running = true;
    ++bot_workers_;
    std::thread([this, s] {
      std::unique_lock lock(s->mu);
      while (!stopping_) {
        s->cv.wait_for(lock, std::chrono::milliseconds(options_.bot_delay_ms),
                       [this] { return stopping_.load(); });
        if (stopping_ || !s->BotStep()) break;
      }
      s->bot_running = false;
      lock.unlock();
      --bot_workers_;
    }).detach();
  };

  srv.Post("/sessions", [this, drive_bots](const httplib::Request& req, httplib::Response& res) {
    json body = json::object();
    if (!req.body.empty()) {
      body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object()) return SendError(res, 400, "bad json");
    }
    auto s = std::make_shared<Session>();
    const uint64_t n = created_++;
    try {
      s->human = ParsePosition(body.value("human", std::string("L")));
    } catch (const ParseError& e) {
      return SendError(res, 400, e.what());
    }
    s->seed = body.contains("seed") ? body["seed"].get<uint64_t>() : options_.seed + n;
    eval::AgentFactory factory = bots_;
    s->bot_label = label_;
    if (body.contains("bot")) {
      const std::string bot = body["bot"].get<std::string>();
      if (bot == "rule" || bot == "random") {
        factory = eval::MakeAgentFactory(bot);
        s->bot_label = bot;
      } else if (bot != "default") {
        return SendError(res, 400, "bot must be default, rule or random");
      }
    }
    std::mt19937_64 rng(s->seed);
    s->state = game::GameState::StartPlaying(game::RandomDeal(rng), 0);
    for (Position p : game::kAllPositions) {
      if (p == s->human) continue;
      auto& bot = s->bots[static_cast<int>(p)];
      bot = factory();
      bot->Reset(s->seed ^ (static_cast<uint64_t>(p) + 1));
    }
    s->advisor = factory();
    std::mt19937_64 ids(s->seed ^ (n * 0x9E3779B97F4A7C15ull));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(ids()));
    s->id = std::string(buf) + std::to_string(n);
    {
      std::unique_lock lock(mu_);
      sessions_[s->id] = s;
    }
    std::lock_guard lock(s->mu);
    s->Emit("start", {{"human", PosName(s->human)},
                      {"turn", PosName(s->state.current_position())}});
    drive_bots(s);
    SendJson(res, 201, s->StateJson());
  });

  srv.Get(R"(/sessions/([^/]+)/state)", [this](const httplib::Request& req,
                                               httplib::Response& res) {
    auto s = Find(req.matches[1]);
    if (!s) return SendError(res, 404, "unknown session");
    std::lock_guard lock(s->mu);
    SendJson(res, 200, s->StateJson());
  });

  srv.Get(R"(/sessions/([^/]+)/legal)", [this](const httplib::Request& req,
                                               httplib::Response& res) {
    auto s = Find(req.matches[1]);
    if (!s) return SendError(res, 404, "unknown session");
    std::lock_guard lock(s->mu);
    const bool mine = s->HumanTurn();
    SendJson(res, 200, {{"your_turn", mine},
                        {"moves", mine ? MoveList(s->state.LegalMoves()) : json::array()}});
  });

  srv.Post(R"(/sessions/([^/]+)/move)", [this, drive_bots](const httplib::Request& req,
                                                          httplib::Response& res) {
    auto s = Find(req.matches[1]);
    if (!s) return SendError(res, 404, "unknown session");
    std::lock_guard lock(s->mu);
    if (!s->HumanTurn()) {
      return SendError(res, 409, s->Finished() ? "game is over" : "not your turn");
    }
    const auto legal = s->state.LegalMoves();
    const json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("move") ||
        !body["move"].is_string()) {
      return SendError(res, 422, "expected {\"move\": \"...\"}", {{"legal", MoveList(legal)}});
    }
    const std::string text = body["move"].get<std::string>();
    std::optional<Combo> chosen;
    try {
      const CardSet cards = text == "P" ? CardSet() : CardSet::FromString(text);
      for (const auto& m : legal) {
        if (m.cards == cards) {
          chosen = m;
          break;
        }
      }
    } catch (const ParseError&) {
    }
    if (!chosen) {
      return SendError(res, 422, "illegal move '" + text + "'", {{"legal", MoveList(legal)}});
    }
    s->Apply(*chosen);
    drive_bots(s);
    SendJson(res, 200, s->StateJson());
  });

  srv.Get(R"(/sessions/([^/]+)/hints)", [this](const httplib::Request& req,
                                               httplib::Response& res) {
    auto s = Find(req.matches[1]);
    if (!s) return SendError(res, 404, "unknown session");
    int k = 3;
    if (req.has_param("k")) {
      try {
        k = std::stoi(req.get_param_value("k"));
      } catch (const std::exception&) {
        return SendError(res, 400, "k must be an integer");
      }
      if (k < 1) return SendError(res, 400, "k must be >= 1");
    }
    std::lock_guard lock(s->mu);
    if (!s->advisor->HasQValues()) return SendError(res, 501, "hints need a value-based bot");
    if (!s->HumanTurn()) return SendError(res, 409, "not your turn");
    json top = json::array();
    for (const auto& m : eval::TopActions(*s->advisor, s->state, k)) {
      top.push_back({{"move", m.move.ToString()}, {"value", m.value}});
    }
    SendJson(res, 200, {{"k", k}, {"hints", top}});
  });

  srv.Get(R"(/sessions/([^/]+)/log)", [this](const httplib::Request& req,
                                             httplib::Response& res) {
    auto s = Find(req.matches[1]);
    if (!s) return SendError(res, 404, "unknown session");
    std::lock_guard lock(s->mu);
    // The log reveals every hand, so it waits for the end of the game.
    if (!s->Finished()) return SendError(res, 409, "game in progress");
    game::MatchRecord record = game::RecordFromState(s->state);
    record.seed = s->seed;
    res.set_content(game::FormatLogCorpus({record}), "text/plain");
  });

  srv.Get(R"(/sessions/([^/]+)/events)", [this](const httplib::Request& req,
                                                httplib::Response& res) {
    auto s = Find(req.matches[1]);
    if (!s) return SendError(res, 404, "unknown session");
    size_t next = 1;
    try {
      if (req.has_header("Last-Event-ID")) {
        next = std::stoull(req.get_header_value("Last-Event-ID")) + 1;
      } else if (req.has_param("last_event_id")) {
        next = std::stoull(req.get_param_value("last_event_id")) + 1;
      }
    } catch (const std::exception&) {
      return SendError(res, 400, "bad Last-Event-ID");
    }
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream", [this, s, next](size_t, httplib::DataSink& sink) mutable {
          std::unique_lock lock(s->mu);
          s->cv.wait_for(lock, std::chrono::seconds(1),
                         [&] { return stopping_.load() || next <= s->events.size(); });
          if (stopping_) {
            sink.done();
            return true;
          }
          std::string out;
          for (; next <= s->events.size(); ++next) out += s->events[next - 1];
          const bool drained = s->Finished() && next > s->events.size();
          lock.unlock();
          if (!out.empty() && !sink.write(out.data(), out.size())) return false;
          if (out.empty() && !sink.is_writable()) return false;
          if (drained) sink.done();
          return true;
        });
  });

  srv.Post("/replay", [](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto records = game::ParseLogCorpus(req.body);
      if (records.size() != 1) return SendError(res, 422, "expected exactly one match log");
      const auto& record = records.front();
      game::GameState state = game::GameState::FromPositionHands(record.hands);
      auto hands = [&] {
        json j = json::object();
        for (Position p : game::kAllPositions) {
          j[PosName(p)] = state.hand(state.SeatOf(p)).ToString();
        }
        return j;
      };
      json steps = json::array();
      steps.push_back({{"index", 0}, {"hands", hands()}, {"to_beat", nullptr}});
      for (size_t i = 0; i < record.moves.size(); ++i) {
        const auto& m = record.moves[i];
        if (state.phase() == game::Phase::kFinished || state.current_position() != m.position) {
          throw IllegalReplay("move " + std::to_string(i + 1) + " is out of turn");
        }
        state.ApplyMove(m.combo);
        steps.push_back({{"index", i + 1},
                         {"position", PosName(m.position)},
                         {"move", m.combo.ToString()},
                         {"hands", hands()},
                         {"to_beat", state.to_beat() ? json(state.to_beat()->ToString())
                                                     : json(nullptr)}});
      }
      const bool done = state.phase() == game::Phase::kFinished;
      SendJson(res, 200, {{"steps", steps},
                          {"finished", done},
                          {"result", done ? ResultJson(game::Score(state)) : json(nullptr)}});
    } catch (const Error& e) {
      SendError(res, 422, e.what());
    }
  });
}

}  // namespace douzero::serve
