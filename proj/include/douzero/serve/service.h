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


#ifndef DOUZERO_SERVE_SERVICE_H_
#define DOUZERO_SERVE_SERVICE_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "douzero/eval/agent.h"
#include "douzero/game/state.h"

namespace httplib {
class Server;
}

namespace douzero::serve {

// Wire form of a seat's observation. Only the seat's own hand is present;
// other seats appear as card counts and public plays.
nlohmann::json ObservationToJson(const game::Observation& obs);
// Inverse of ObservationToJson. Throws ParseError.
game::Observation ObservationFromJson(const nlohmann::json& j);

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  int bot_delay_ms = 300;
  std::string static_dir;
  uint64_t seed = 0;  // base for sessions created without a seed
};

class Session;

// HTTP game service. Endpoints (JSON unless noted):
//   POST /sessions                  {"human": "L"|"D"|"U", "seed": n, "bot": "rule"|"random"}
//   GET  /sessions/{id}/state       the human seat's observation
//   GET  /sessions/{id}/legal       legal moves when it is the human's turn
//   POST /sessions/{id}/move        {"move": "3336"} or {"move": "P"}
//   GET  /sessions/{id}/hints?k=3   bot action values for the human's options
//   GET  /sessions/{id}/log         match log (text/plain), finished games only
//   GET  /sessions/{id}/events      server-sent events, resumable by Last-Event-ID
//   POST /replay                    match-log text -> every intermediate position
// Errors: 404 unknown session, 409 not the human's turn, 422 illegal move.
class Service {
 public:
  // `bots` builds the default bot; `label` names it in session metadata.
  Service(ServiceOptions options, eval::AgentFactory bots, std::string label);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds the socket and returns the bound port. Throws IoError.
  int Bind();
  // Serves until Stop(). Calls Bind() first if needed.
  void Listen();
  void Stop();

  size_t NumSessions() const;

 private:
  void Routes();
  std::shared_ptr<Session> Find(const std::string& id) const;

  ServiceOptions options_;
  eval::AgentFactory bots_;
  std::string label_;
  std::unique_ptr<httplib::Server> server_;
  std::atomic<bool> stopping_{false};
  std::atomic<uint64_t> created_{0};
  std::atomic<int> bot_workers_{0};
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  bool bound_ = false;
};

}  // namespace douzero::serve

#endif  // DOUZERO_SERVE_SERVICE_H_
