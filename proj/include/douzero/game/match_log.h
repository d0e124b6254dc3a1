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

#ifndef DOUZERO_GAME_MATCH_LOG_H_
#define DOUZERO_GAME_MATCH_LOG_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "douzero/game/state.h"

namespace douzero::game {

// One game in the textual match-log notation:
//   H:<L hand>;<D hand>;<U hand>, L:<move>, D:<move>, ...
// with T for 10, B/R for the jokers and P for Pass. Hands are the positions'
// hands when card play begins (the Landlord's includes the bottom cards).
struct MatchRecord {
  std::array<CardSet, 3> hands;  // by position
  std::vector<PlayedMove> moves;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

// Builds the record of a game that skipped or completed bidding.
MatchRecord RecordFromState(const GameState& state);

std::string FormatLog(const MatchRecord& match);

// Parses one log line and replays it. Throws ParseError for malformed text
// and IllegalReplay when a move is out of turn, illegal, or follows the end
// of the game. Incomplete games are accepted.
MatchRecord ParseLog(std::string_view line);

// Replays a record, returning the resulting state. Throws IllegalReplay.
GameState Replay(const MatchRecord& match);

// Multi-line corpus: one match per line, blank lines ignored, `#seed:<n>`
// comment lines attach a seed to the following match, other `#` lines are
// comments.
std::vector<MatchRecord> ParseLogCorpus(std::string_view text);
std::string FormatLogCorpus(const std::vector<MatchRecord>& matches);

std::vector<MatchRecord> ReadLogFile(const std::string& path);
void WriteLogFile(const std::string& path, const std::vector<MatchRecord>& matches);

}  // namespace douzero::game

#endif  // DOUZERO_GAME_MATCH_LOG_H_
