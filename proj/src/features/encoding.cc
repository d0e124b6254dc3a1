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

#include "douzero/features/encoding.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "douzero/common/error.h"

namespace douzero::features {
namespace {

using game::BidDecision;
using game::Combo;
using game::kBlackJoker;
using game::kNumRanks;
using game::kRedJoker;
using game::Observation;
using game::Rank;

class Writer {
 public:
  explicit Writer(std::vector<float>& out) : out_(out) {}
  void Cards(const CardSet& c) {
    std::span<float> dst(out_.data() + pos_, kCardVectorSize);
    EncodeCardsInto(c, dst);
    pos_ += kCardVectorSize;
  }
  void OneHot(int index, int width) {
    out_[pos_ + std::clamp(index, 0, width - 1)] = 1.0f;
    pos_ += width;
  }
  int pos() const { return pos_; }

 private:
  std::vector<float>& out_;
  int pos_ = 0;
};

CardSet LastMoveBy(const Observation& obs, Position p) {
  for (auto it = obs.history.rbegin(); it != obs.history.rend(); ++it) {
    if (it->position == p) return it->combo.cards;
  }
  return {};
}

int Idx(Position p) { return static_cast<int>(p); }

}  // namespace

int StateSize(Position p) {
  return p == Position::kLandlord ? kLandlordStateSize : kPeasantStateSize;
}

void EncodeCardsInto(const CardSet& cards, std::span<float> out) {
  std::fill(out.begin(), out.end(), 0.0f);
  for (Rank r = 0; r < game::kNumSuitedRanks; ++r) {
    for (int i = 0; i < cards.Count(r); ++i) out[4 * r + i] = 1.0f;
  }
  out[52] = cards.Count(kBlackJoker) ? 1.0f : 0.0f;
  out[53] = cards.Count(kRedJoker) ? 1.0f : 0.0f;
}

CardVector EncodeCards(const CardSet& cards) {
  CardVector v;
  EncodeCardsInto(cards, v);
  return v;
}

CardSet DecodeCards(std::span<const float> bits) {
  CardSet c;
  for (Rank r = 0; r < game::kNumSuitedRanks; ++r) {
    int n = 0;
    for (int i = 0; i < 4; ++i) n += bits[4 * r + i] > 0.5f;
    c.Set(r, n);
  }
  c.Set(kBlackJoker, bits[52] > 0.5f);
  c.Set(kRedJoker, bits[53] > 0.5f);
  return c;
}

StateFeatures EncodeState(const Observation& obs) {
  StateFeatures f;
  f.position = obs.position;
  f.state.assign(StateSize(obs.position), 0.0f);

  CardSet all_played;
  for (const auto& p : obs.played) all_played += p;
  const CardSet others = CardSet::FullDeck() - obs.hand - all_played;
  const CardSet to_beat = obs.to_beat ? obs.to_beat->cards : CardSet{};
  const int bombs = obs.bombs_played;

  Writer w(f.state);
  w.Cards(obs.hand);
  w.Cards(others);
  w.Cards(to_beat);
  if (obs.position == Position::kLandlord) {
    w.Cards(obs.played[Idx(Position::kDown)]);
    w.Cards(obs.played[Idx(Position::kUp)]);
    w.OneHot(obs.cards_left[Idx(Position::kDown)] - 1, 17);
    w.OneHot(obs.cards_left[Idx(Position::kUp)] - 1, 17);
  } else {
    const Position mate =
        obs.position == Position::kDown ? Position::kUp : Position::kDown;
    w.Cards(LastMoveBy(obs, Position::kLandlord));
    w.Cards(LastMoveBy(obs, mate));
    w.Cards(obs.played[Idx(Position::kLandlord)]);
    w.Cards(obs.played[Idx(mate)]);
    w.OneHot(obs.cards_left[Idx(Position::kLandlord)] - 1, 20);
    w.OneHot(obs.cards_left[Idx(mate)] - 1, 17);
  }
  w.OneHot(bombs, 15);

  f.history.assign(kHistorySize, 0.0f);
  const int n = static_cast<int>(obs.history.size());
  const int take = std::min(n, kHistoryMoves);
  for (int i = 0; i < take; ++i) {
    // Slot kHistoryMoves - 1 holds the newest move.
    const auto& m = obs.history[n - take + i];
    int slot = kHistoryMoves - take + i;
    EncodeCardsInto(m.combo.cards,
                    std::span<float>(f.history.data() + slot * kCardVectorSize, kCardVectorSize));
  }
  return f;
}

ObservationFeatures EncodeObservation(const Observation& obs, const Combo& action,
                                      Position position) {
  if (position != obs.position) {
    throw PositionMismatch("observation belongs to a different position");
  }
  StateFeatures s = EncodeState(obs);
  return {s.position, std::move(s.state), EncodeAction(action), std::move(s.history)};
}

std::array<float, kBidFeatureSize> EncodeBid(const CardSet& hand,
                                             std::span<const BidDecision> history) {
  if (hand.Size() != game::kHandSize) {
    throw BadHandSize("bid features need a 17-card hand, got " + std::to_string(hand.Size()));
  }
  std::array<float, kBidFeatureSize> f{};
  int pos = 0;
  EncodeCardsInto(hand, std::span<float>(f.data(), kCardVectorSize));
  pos += kCardVectorSize;
  for (Rank r = 0; r <= game::kRankA; ++r) f[pos++] = hand.Count(r) >= 1;
  for (Rank r = 0; r <= game::kRank2; ++r) f[pos++] = hand.Count(r) >= 2;
  for (Rank r = 0; r <= game::kRank2; ++r) f[pos++] = hand.Count(r) >= 3;
  for (Rank r = 0; r <= game::kRank2; ++r) f[pos++] = hand.Count(r) == 4;
  f[pos++] = hand.Count(kBlackJoker) && hand.Count(kRedJoker);
  f[pos + hand.Count(game::kRank2)] = 1.0f;
  pos += 5;
  f[pos + hand.Count(kBlackJoker) + hand.Count(kRedJoker)] = 1.0f;
  pos += 3;
  f[pos++] = hand.Count(kBlackJoker);
  f[pos++] = hand.Count(kRedJoker);
  for (int step = 0; step < 4; ++step) {
    int slot = 0;
    if (step < static_cast<int>(history.size())) {
      slot = history[step] == BidDecision::kBid ? 1 : 2;
    }
    f[pos + slot] = 1.0f;
    pos += 3;
  }
  return f;
}

void WriteFeatureRow(std::ostream& out, const ObservationFeatures& row) {
  auto put = [&](std::span<const float> values) {
    for (float v : values) {
      std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
      unsigned char b[4] = {static_cast<unsigned char>(bits), static_cast<unsigned char>(bits >> 8),
                            static_cast<unsigned char>(bits >> 16),
                            static_cast<unsigned char>(bits >> 24)};
      out.write(reinterpret_cast<const char*>(b), 4);
    }
  };
  put(row.state);
  put(row.action);
  put(row.history);
}

ObservationFeatures ReadFeatureRow(std::istream& in, Position position) {
  auto get = [&](std::span<float> values) {
    for (float& v : values) {
      unsigned char b[4];
      if (!in.read(reinterpret_cast<char*>(b), 4)) throw IoError("truncated feature row");
      std::uint32_t bits = b[0] | (b[1] << 8) | (b[2] << 16) | (std::uint32_t{b[3]} << 24);
      v = std::bit_cast<float>(bits);
    }
  };
  ObservationFeatures row;
  row.position = position;
  row.state.resize(StateSize(position));
  row.history.resize(kHistorySize);
  get(row.state);
  get(row.action);
  get(row.history);
  return row;
}

}  // namespace douzero::features
