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

#include "douzero/game/combo.h"

#include <algorithm>
#include <functional>

namespace douzero::game {
namespace {

constexpr std::array<std::string_view, kNumCategories> kCategoryNames = {
    "Pass",      "Solo",      "Pair",      "Trio",     "TrioSolo",
    "TrioPair",  "ChainSolo", "ChainPair", "ChainTrio", "PlaneSolo",
    "PlanePair", "QuadSolo",  "QuadPair",  "Bomb",     "Rocket"};

// Minimum chain length for runs of 1, 2 and 3 copies.
constexpr int MinChain(int copies) { return copies == 1 ? 5 : copies == 2 ? 3 : 2; }

CardSet Repeat(Rank first, int length, int copies) {
  CardSet c;
  for (Rank r = first; r < first + length; ++r) c.Set(r, copies);
  return c;
}

// If every held rank has exactly `copies` cards and the held ranks form one
// run inside 3..A, returns the run start.
std::optional<Rank> UniformRun(const CardSet& cards, int copies, int* length) {
  Rank lo = -1, hi = -1;
  for (Rank r = 0; r < kNumRanks; ++r) {
    int n = cards.Count(r);
    if (n == 0) continue;
    if (n != copies) return std::nullopt;
    if (lo < 0) lo = r;
    else if (r != hi + 1) return std::nullopt;
    hi = r;
  }
  if (lo < 0 || hi > kMaxChainRank) return std::nullopt;
  *length = hi - lo + 1;
  return lo;
}

// Kicker rules for a plane body [start, start+length).
bool ValidPlaneSoloKickers(const CardSet& kickers, Rank start, int length) {
  if (kickers.Count(kBlackJoker) && kickers.Count(kRedJoker)) return false;
  for (Rank r = 0; r < kNumRanks; ++r) {
    int n = kickers.Count(r);
    if (n == 0) continue;
    if (r >= start && r < start + length) return false;
    if (n > 3) return false;
    // A trio touching the body would read as a longer plane.
    if (n == 3 && r <= kMaxChainRank && (r == start - 1 || r == start + length)) {
      return false;
    }
  }
  return true;
}

bool ValidPlanePairKickers(const CardSet& kickers, Rank start, int length) {
  for (Rank r = 0; r < kNumRanks; ++r) {
    int n = kickers.Count(r);
    if (n == 0) continue;
    if (n != 2 || r >= kBlackJoker) return false;
    if (r >= start && r < start + length) return false;
  }
  return true;
}

std::optional<Combo> ClassifyPlane(const CardSet& cards, int size) {
  for (int per_trio : {4, 5}) {
    if (size % per_trio != 0) continue;
    int length = size / per_trio;
    if (length < 2) continue;
    for (Rank start = 0; start + length - 1 <= kMaxChainRank; ++start) {
      bool body = true;
      for (Rank r = start; r < start + length && body; ++r) body = cards.Count(r) >= 3;
      if (!body) continue;
      CardSet main = Repeat(start, length, 3);
      CardSet kickers = cards - main;
      if (per_trio == 4 && ValidPlaneSoloKickers(kickers, start, length)) {
        return Combo{Category::kPlaneSolo, start, length, cards};
      }
      if (per_trio == 5 && ValidPlanePairKickers(kickers, start, length)) {
        return Combo{Category::kPlanePair, start, length, cards};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::string_view CategoryName(Category c) { return kCategoryNames[static_cast<int>(c)]; }

CardSet Combo::MainGroup() const {
  switch (category) {
    case Category::kPass:
      return {};
    case Category::kSolo:
      return Repeat(principal, 1, 1);
    case Category::kPair:
      return Repeat(principal, 1, 2);
    case Category::kTrio:
    case Category::kTrioSolo:
    case Category::kTrioPair:
      return Repeat(principal, 1, 3);
    case Category::kChainSolo:
      return Repeat(principal, length, 1);
    case Category::kChainPair:
      return Repeat(principal, length, 2);
    case Category::kChainTrio:
    case Category::kPlaneSolo:
    case Category::kPlanePair:
      return Repeat(principal, length, 3);
    case Category::kQuadSolo:
    case Category::kQuadPair:
    case Category::kBomb:
      return Repeat(principal, 1, 4);
    case Category::kRocket:
      return Repeat(kBlackJoker, 2, 1);
  }
  return {};
}

std::string Combo::ToString() const { return IsPass() ? "P" : cards.ToString(); }

bool CanonicalLess(const Combo& a, const Combo& b) {
  if (a.category != b.category) return a.category < b.category;
  if (a.length != b.length) return a.length < b.length;
  if (a.principal != b.principal) return a.principal < b.principal;
  // Ascending rank lists compare like counts read low-to-high, larger first.
  const auto& ca = a.cards.counts();
  const auto& cb = b.cards.counts();
  return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end(),
                                      std::greater<>());
}

std::optional<Combo> Classify(const CardSet& cards) {
  const int size = cards.Size();
  if (size == 0 || size > kMaxHandSize || !cards.IsValid()) return std::nullopt;

  if (size == 2 && cards.Count(kBlackJoker) == 1 && cards.Count(kRedJoker) == 1) {
    return Combo{Category::kRocket, kBlackJoker, 1, cards};
  }

  // Ranks by multiplicity.
  std::array<int, 5> num_with{};
  Rank any_with[5] = {-1, -1, -1, -1, -1};
  for (Rank r = 0; r < kNumRanks; ++r) {
    int n = cards.Count(r);
    if (n == 0) continue;
    ++num_with[n];
    if (any_with[n] < 0) any_with[n] = r;
  }
  const int distinct = cards.NumDistinctRanks();

  if (distinct == 1) {
    Rank r = any_with[size];
    switch (size) {
      case 1: return Combo{Category::kSolo, r, 1, cards};
      case 2: return Combo{Category::kPair, r, 1, cards};
      case 3: return Combo{Category::kTrio, r, 1, cards};
      case 4: return Combo{Category::kBomb, r, 1, cards};
    }
  }

  int run_length = 0;
  for (int copies = 1; copies <= 3; ++copies) {
    if (num_with[copies] != distinct) continue;
    if (auto start = UniformRun(cards, copies, &run_length);
        start && run_length >= MinChain(copies)) {
      static constexpr Category kChain[] = {Category::kChainSolo, Category::kChainPair,
                                            Category::kChainTrio};
      return Combo{kChain[copies - 1], *start, run_length, cards};
    }
  }

  if (size == 4 && num_with[3] == 1 && distinct == 2) {
    return Combo{Category::kTrioSolo, any_with[3], 1, cards};
  }
  if (size == 5 && num_with[3] == 1 && num_with[2] == 1) {
    return Combo{Category::kTrioPair, any_with[3], 1, cards};
  }
  if (size == 6 && num_with[4] == 1) {
    CardSet kickers = cards;
    kickers.Set(any_with[4], 0);
    bool rocket = kickers.Count(kBlackJoker) && kickers.Count(kRedJoker);
    if (!rocket) return Combo{Category::kQuadSolo, any_with[4], 1, cards};
  }
  if (size == 8 && num_with[4] == 1 && num_with[2] == 2) {
    return Combo{Category::kQuadPair, any_with[4], 1, cards};
  }
  if (size >= 8) return ClassifyPlane(cards, size);
  return std::nullopt;
}

bool Beats(const Combo& play, const Combo& to_beat) {
  if (play.IsPass() || to_beat.IsPass()) return false;
  if (to_beat.category == Category::kRocket) return false;
  if (play.category == Category::kRocket) return true;
  if (play.category == Category::kBomb) {
    return to_beat.category != Category::kBomb || play.principal > to_beat.principal;
  }
  return play.category == to_beat.category && play.length == to_beat.length &&
         play.principal > to_beat.principal;
}

int BotzoneWeight(Category c) {
  switch (c) {
    case Category::kPass: return 0;
    case Category::kSolo: return 1;
    case Category::kPair: return 2;
    case Category::kTrio:
    case Category::kTrioSolo:
    case Category::kTrioPair: return 4;
    case Category::kChainSolo:
    case Category::kChainPair: return 6;
    case Category::kChainTrio:
    case Category::kPlaneSolo:
    case Category::kPlanePair:
    case Category::kQuadSolo:
    case Category::kQuadPair: return 8;
    case Category::kBomb: return 10;
    case Category::kRocket: return 16;
  }
  return 0;
}

}  // namespace douzero::game
