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

#include "douzero/game/move_gen.h"

#include <algorithm>
#include <functional>

namespace douzero::game {
namespace {

using Emit = std::function<void(Combo)>;

CardSet Repeat(Rank first, int length, int copies) {
  CardSet c;
  for (Rank r = first; r < first + length; ++r) c.Set(r, copies);
  return c;
}

// Visits every multiset of `size` cards drawn from `avail`, where rank r
// contributes at most `cap(r)` copies.
template <typename Cap, typename Visit>
void ForEachMultiset(const CardSet& avail, int size, Rank from, CardSet& acc,
                     const Cap& cap, const Visit& visit) {
  if (size == 0) {
    visit(acc);
    return;
  }
  for (Rank r = from; r < kNumRanks; ++r) {
    int limit = std::min({avail.Count(r), cap(r), size});
    for (int n = 1; n <= limit; ++n) {
      acc.Set(r, n);
      ForEachMultiset(avail, size - n, r + 1, acc, cap, visit);
    }
    acc.Set(r, 0);
  }
}

void SinglesAndGroups(const CardSet& hand, const Emit& emit) {
  for (Rank r = 0; r < kNumRanks; ++r) {
    int n = hand.Count(r);
    if (n >= 1) emit({Category::kSolo, r, 1, Repeat(r, 1, 1)});
    if (n >= 2) emit({Category::kPair, r, 1, Repeat(r, 1, 2)});
    if (n >= 3) emit({Category::kTrio, r, 1, Repeat(r, 1, 3)});
    if (n == 4) emit({Category::kBomb, r, 1, Repeat(r, 1, 4)});
  }
  if (hand.Count(kBlackJoker) && hand.Count(kRedJoker)) {
    emit({Category::kRocket, kBlackJoker, 1, Repeat(kBlackJoker, 2, 1)});
  }
}

void TrioWithKickers(const CardSet& hand, const Emit& emit) {
  for (Rank t = 0; t < kNumRanks; ++t) {
    if (hand.Count(t) < 3) continue;
    for (Rank k = 0; k < kNumRanks; ++k) {
      if (k == t) continue;
      if (hand.Count(k) >= 1) {
        CardSet c = Repeat(t, 1, 3);
        c.Add(k, 1);
        emit({Category::kTrioSolo, t, 1, c});
      }
      if (hand.Count(k) >= 2) {
        CardSet c = Repeat(t, 1, 3);
        c.Add(k, 2);
        emit({Category::kTrioPair, t, 1, c});
      }
    }
  }
}

void Chains(const CardSet& hand, const Emit& emit) {
  static constexpr Category kChain[] = {Category::kChainSolo, Category::kChainPair,
                                        Category::kChainTrio};
  for (int copies = 1; copies <= 3; ++copies) {
    const int min_len = copies == 1 ? 5 : copies == 2 ? 3 : 2;
    for (Rank start = 0; start <= kMaxChainRank; ++start) {
      for (int len = 1; start + len - 1 <= kMaxChainRank; ++len) {
        if (hand.Count(start + len - 1) < copies) break;
        if (len * copies > kMaxHandSize) break;
        if (len >= min_len) emit({kChain[copies - 1], start, len, Repeat(start, len, copies)});
      }
    }
  }
}

void Planes(const CardSet& hand, const Emit& emit) {
  for (Rank start = 0; start <= kMaxChainRank; ++start) {
    if (hand.Count(start) < 3) continue;
    for (int len = 2; start + len - 1 <= kMaxChainRank; ++len) {
      if (hand.Count(start + len - 1) < 3) break;
      const CardSet body = Repeat(start, len, 3);
      CardSet rest = hand - body;
      for (Rank r = start; r < start + len; ++r) rest.Set(r, 0);

      if (len * 4 <= kMaxHandSize) {
        auto cap = [&](Rank r) {
          bool touches = r <= kMaxChainRank && (r == start - 1 || r == start + len);
          return touches ? 2 : 3;
        };
        CardSet acc;
        ForEachMultiset(rest, len, 0, acc, cap, [&](const CardSet& kickers) {
          if (kickers.Count(kBlackJoker) && kickers.Count(kRedJoker)) return;
          emit({Category::kPlaneSolo, start, len, body + kickers});
        });
      }
      if (len * 5 <= kMaxHandSize) {
        CardSet pairs;
        for (Rank r = 0; r < kBlackJoker; ++r) {
          if (rest.Count(r) >= 2) pairs.Set(r, 1);
        }
        auto cap = [](Rank) { return 1; };
        CardSet acc;
        ForEachMultiset(pairs, len, 0, acc, cap, [&](const CardSet& chosen) {
          CardSet kickers = chosen + chosen;
          emit({Category::kPlanePair, start, len, body + kickers});
        });
      }
    }
  }
}

void QuadWithKickers(const CardSet& hand, const Emit& emit) {
  for (Rank q = 0; q < kNumSuitedRanks; ++q) {
    if (hand.Count(q) != 4) continue;
    const CardSet quad = Repeat(q, 1, 4);
    CardSet rest = hand;
    rest.Set(q, 0);
    CardSet acc;
    ForEachMultiset(rest, 2, 0, acc, [](Rank) { return 2; }, [&](const CardSet& kickers) {
      if (kickers.Count(kBlackJoker) && kickers.Count(kRedJoker)) return;
      emit({Category::kQuadSolo, q, 1, quad + kickers});
    });
    for (Rank a = 0; a < kBlackJoker; ++a) {
      if (a == q || rest.Count(a) < 2) continue;
      for (Rank b = a + 1; b < kBlackJoker; ++b) {
        if (b == q || rest.Count(b) < 2) continue;
        CardSet c = quad;
        c.Add(a, 2);
        c.Add(b, 2);
        emit({Category::kQuadPair, q, 1, c});
      }
    }
  }
}

void GenerateInto(const CardSet& hand, const Emit& emit) {
  SinglesAndGroups(hand, emit);
  TrioWithKickers(hand, emit);
  Chains(hand, emit);
  Planes(hand, emit);
  QuadWithKickers(hand, emit);
}

}  // namespace

std::vector<Combo> GenerateCombos(const CardSet& hand) {
  std::vector<Combo> out;
  GenerateInto(hand, [&](Combo c) { out.push_back(std::move(c)); });
  std::sort(out.begin(), out.end(), CanonicalLess);
  return out;
}

std::vector<Combo> LegalMoves(const CardSet& hand, const std::optional<Combo>& to_beat) {
  std::vector<Combo> out;
  if (!to_beat || to_beat->IsPass()) {
    out = GenerateCombos(hand);
    return out;
  }
  out.push_back(Combo::Pass());
  Emit keep = [&](Combo c) {
    if (Beats(c, *to_beat)) out.push_back(std::move(c));
  };
  // Bombs and the rocket come from SinglesAndGroups; only the generator for
  // the led category is needed beyond that.
  SinglesAndGroups(hand, keep);
  switch (to_beat->category) {
    case Category::kTrioSolo:
    case Category::kTrioPair:
      TrioWithKickers(hand, keep);
      break;
    case Category::kChainSolo:
    case Category::kChainPair:
    case Category::kChainTrio:
      Chains(hand, keep);
      break;
    case Category::kPlaneSolo:
    case Category::kPlanePair:
      Planes(hand, keep);
      break;
    case Category::kQuadSolo:
    case Category::kQuadPair:
      QuadWithKickers(hand, keep);
      break;
    default:
      break;
  }
  std::sort(out.begin() + 1, out.end(), CanonicalLess);
  return out;
}

ActionSpaceCounts EnumerateActionSpace() {
  ActionSpaceCounts counts;
  GenerateInto(CardSet::FullDeck(), [&](const Combo& c) {
    ++counts.per_category[static_cast<int>(c.category)];
  });
  counts.per_category[static_cast<int>(Category::kPass)] = 1;
  for (auto n : counts.per_category) counts.total += n;
  return counts;
}

ActionSpaceCounts ExpectedActionSpace() {
  ActionSpaceCounts e;
  e.per_category = {1, 15, 13, 13, 182, 156, 36, 52, 45, 21822, 2939, 1326, 858, 13, 1};
  e.total = 27472;
  return e;
}

}  // namespace douzero::game
