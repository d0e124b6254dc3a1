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

#include "douzero/game/match_log.h"

#include <cctype>
#include <fstream>
#include <sstream>

#include "douzero/common/error.h"

namespace douzero::game {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Combo ParseMoveCards(std::string_view text, size_t index) {
  if (text == "P") return Combo::Pass();
  if (text.empty()) throw ParseError("empty move at token " + std::to_string(index));
  CardSet cards = CardSet::FromString(text);
  std::optional<Combo> combo = Classify(cards);
  if (!combo) {
    throw IllegalReplay("move " + std::to_string(index) + " \"" + std::string(text) +
                        "\" is not a valid combination");
  }
  return *combo;
}

}  // namespace

MatchRecord RecordFromState(const GameState& state) {
  MatchRecord m;
  for (Position p : kAllPositions) {
    m.hands[static_cast<int>(p)] = state.initial_hand(state.SeatOf(p));
  }
  m.moves = state.history();
  return m;
}

std::string FormatLog(const MatchRecord& match) {
  std::string out = "H:" + match.hands[0].ToString() + ";" + match.hands[1].ToString() +
                    ";" + match.hands[2].ToString();
  for (const auto& m : match.moves) {
    out += ", ";
    out += PositionChar(m.position);
    out += ':';
    out += m.combo.ToString();
  }
  return out;
}

GameState Replay(const MatchRecord& match) {
  GameState state = GameState::FromPositionHands(match.hands);
  for (size_t i = 0; i < match.moves.size(); ++i) {
    const PlayedMove& m = match.moves[i];
    const std::string where = "move " + std::to_string(i + 1) + " (" +
                              PositionChar(m.position) + ":" + m.combo.ToString() + ")";
    if (state.phase() == Phase::kFinished) {
      throw IllegalReplay(where + " comes after the game ended");
    }
    if (m.position != state.current_position()) {
      throw IllegalReplay(where + " is out of turn; " +
                          PositionChar(state.current_position()) + " is to move");
    }
    try {
      state.ApplyMove(m.combo);
    } catch (const IllegalMove& e) {
      throw IllegalReplay(where + ": " + e.what());
    }
  }
  return state;
}

MatchRecord ParseLog(std::string_view line) {
  std::vector<std::string_view> tokens = Split(Trim(line), ',');
  std::string_view head = Trim(tokens[0]);
  if (head.substr(0, 2) != "H:") throw ParseError("log must start with \"H:\"");
  std::vector<std::string_view> hands = Split(head.substr(2), ';');
  if (hands.size() != 3) throw ParseError("expected three hands separated by ';'");

  MatchRecord match;
  CardSet total;
  for (int i = 0; i < 3; ++i) {
    match.hands[i] = CardSet::FromString(Trim(hands[i]));
    total += match.hands[i];
  }
  if (match.hands[0].Size() != kHandSize + kBottomSize || match.hands[1].Size() != kHandSize ||
      match.hands[2].Size() != kHandSize || total != CardSet::FullDeck()) {
    throw ParseError("hands must be 20/17/17 cards forming one deck");
  }

  for (size_t i = 1; i < tokens.size(); ++i) {
    std::string_view tok = Trim(tokens[i]);
    if (tok.size() < 3 || tok[1] != ':') {
      throw ParseError("bad move token \"" + std::string(tok) + "\"");
    }
    std::optional<Position> pos = PositionFromChar(tok[0]);
    if (!pos) throw ParseError("bad seat in token \"" + std::string(tok) + "\"");
    match.moves.push_back({*pos, ParseMoveCards(Trim(tok.substr(2)), i)});
  }
  Replay(match);
  return match;
}

std::vector<MatchRecord> ParseLogCorpus(std::string_view text) {
  std::vector<MatchRecord> out;
  std::optional<std::uint64_t> seed;
  for (std::string_view raw : Split(text, '\n')) {
    std::string_view line = Trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.substr(0, 6) == "#seed:") {
        try {
          seed = std::stoull(std::string(line.substr(6)));
        } catch (const std::exception&) {
          throw ParseError("bad seed comment \"" + std::string(line) + "\"");
        }
      }
      continue;
    }
    out.push_back(ParseLog(line));
    out.back().seed = seed;
    seed.reset();
  }
  return out;
}

std::string FormatLogCorpus(const std::vector<MatchRecord>& matches) {
  std::string out;
  for (const auto& m : matches) {
    if (m.seed) out += "#seed:" + std::to_string(*m.seed) + "\n";
    out += FormatLog(m);
    out += '\n';
  }
  return out;
}

std::vector<MatchRecord> ReadLogFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open log file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseLogCorpus(ss.str());
}

void WriteLogFile(const std::string& path, const std::vector<MatchRecord>& matches) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write log file " + path);
  out << FormatLogCorpus(matches);
}

}  // namespace douzero::game
