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

#include "douzero/game/cards.h"

#include "douzero/common/error.h"

namespace douzero::game {
namespace {

constexpr char kRankChars[kNumRanks + 1] = "3456789TJQKA2BR";

}  // namespace

char RankChar(Rank r) { return kRankChars[r]; }

std::optional<Rank> RankFromChar(char c) {
  for (Rank r = 0; r < kNumRanks; ++r) {
    if (kRankChars[r] == c) return r;
  }
  return std::nullopt;
}

CardSet CardSet::FullDeck() {
  CardSet deck;
  for (Rank r = 0; r < kNumRanks; ++r) deck.Set(r, MaxCopies(r));
  return deck;
}

CardSet CardSet::FromString(std::string_view text) {
  CardSet cards;
  for (char c : text) {
    std::optional<Rank> r = RankFromChar(c);
    if (!r) throw ParseError(std::string("unknown card character '") + c + "'");
    cards.Add(*r);
    if (cards.Count(*r) > MaxCopies(*r)) {
      throw ParseError("too many copies of '" + std::string(1, c) + "' in \"" +
                       std::string(text) + "\"");
    }
  }
  return cards;
}

int CardSet::Size() const {
  int n = 0;
  for (auto c : counts_) n += c;
  return n;
}

int CardSet::NumDistinctRanks() const {
  int n = 0;
  for (auto c : counts_) n += c > 0;
  return n;
}

bool CardSet::Contains(const CardSet& other) const {
  for (Rank r = 0; r < kNumRanks; ++r) {
    if (other.counts_[r] > counts_[r]) return false;
  }
  return true;
}

bool CardSet::IsValid() const {
  for (Rank r = 0; r < kNumRanks; ++r) {
    if (counts_[r] > MaxCopies(r)) return false;
  }
  return true;
}

CardSet& CardSet::operator+=(const CardSet& o) {
  for (Rank r = 0; r < kNumRanks; ++r) counts_[r] += o.counts_[r];
  return *this;
}

CardSet& CardSet::operator-=(const CardSet& o) {
  for (Rank r = 0; r < kNumRanks; ++r) counts_[r] -= o.counts_[r];
  return *this;
}

std::string CardSet::ToString() const {
  std::string out;
  for (Rank r = 0; r < kNumRanks; ++r) out.append(counts_[r], kRankChars[r]);
  return out;
}

std::size_t CardSetHash::operator()(const CardSet& c) const noexcept {
  // Counts fit in 3 bits each.
  std::size_t h = 0;
  for (Rank r = 0; r < kNumRanks; ++r) h = (h << 3) | c.Count(r);
  return h;
}

}  // namespace douzero::game
