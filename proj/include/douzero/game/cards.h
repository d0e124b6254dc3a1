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

#ifndef DOUZERO_GAME_CARDS_H_
#define DOUZERO_GAME_CARDS_H_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace douzero::game {

// Ranks ordered from weakest to strongest. Suits do not exist in DouDizhu.
using Rank = int;

inline constexpr Rank kRank3 = 0;
inline constexpr Rank kRankT = 7;
inline constexpr Rank kRankA = 11;
inline constexpr Rank kRank2 = 12;
inline constexpr Rank kBlackJoker = 13;
inline constexpr Rank kRedJoker = 14;
inline constexpr int kNumRanks = 15;
// Ranks 3..2 carry four copies; each joker carries one.
inline constexpr int kNumSuitedRanks = 13;
inline constexpr int kDeckSize = 54;
// Chains may only use 3..A.
inline constexpr Rank kMaxChainRank = kRankA;

constexpr int MaxCopies(Rank r) { return r >= kBlackJoker ? 1 : 4; }

// Log-notation character: 3..9, T, J, Q, K, A, 2, B, R.
char RankChar(Rank r);
std::optional<Rank> RankFromChar(char c);

// Multiset of cards keyed by rank.
class CardSet {
 public:
  constexpr CardSet() = default;

  static CardSet FullDeck();
  // Parses "333456T2BR"-style text. Throws ParseError on an unknown
  // character or on more copies than a deck holds.
  static CardSet FromString(std::string_view text);

  int Count(Rank r) const { return counts_[r]; }
  void Set(Rank r, int n) { counts_[r] = static_cast<std::uint8_t>(n); }
  void Add(Rank r, int n = 1) { counts_[r] = static_cast<std::uint8_t>(counts_[r] + n); }
  void Remove(Rank r, int n = 1) { counts_[r] = static_cast<std::uint8_t>(counts_[r] - n); }

  int Size() const;
  bool Empty() const { return Size() == 0; }
  int NumDistinctRanks() const;
  bool Contains(const CardSet& other) const;
  // True when every rank respects its deck multiplicity.
  bool IsValid() const;

  CardSet& operator+=(const CardSet& o);
  CardSet& operator-=(const CardSet& o);
  friend CardSet operator+(CardSet a, const CardSet& b) { return a += b; }
  friend CardSet operator-(CardSet a, const CardSet& b) { return a -= b; }

  friend bool operator==(const CardSet&, const CardSet&) = default;
  friend auto operator<=>(const CardSet&, const CardSet&) = default;

  // Ascending rank order; the empty set renders as "".
  std::string ToString() const;

  const std::array<std::uint8_t, kNumRanks>& counts() const { return counts_; }

 private:
  std::array<std::uint8_t, kNumRanks> counts_{};
};

struct CardSetHash {
  std::size_t operator()(const CardSet& c) const noexcept;
};

}  // namespace douzero::game

#endif  // DOUZERO_GAME_CARDS_H_
