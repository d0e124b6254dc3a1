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

#include "douzero/eval/agent.h"

#include <algorithm>

#include "douzero/common/error.h"
#include "douzero/features/encoding.h"
#include "douzero/training/dmc_trainer.h"

namespace douzero::eval {

using game::Category;
using game::Rank;

BidDecision Agent::Bid(const CardSet&, std::span<const BidDecision>) {
  throw UnsupportedAgent(name() + " has no bidding policy");
}

std::vector<float> Agent::QValues(const Observation&, const std::vector<Combo>&) {
  throw UnsupportedAgent(name() + " does not expose action values");
}

Combo RandomAgent::Decide(const Observation&, const std::vector<Combo>& legal) {
  return legal[std::uniform_int_distribution<size_t>(0, legal.size() - 1)(rng_)];
}

namespace {

CardSet Run(Rank start, int len, int copies) {
  CardSet c;
  for (Rank r = start; r < start + len; ++r) c.Set(r, copies);
  return c;
}

// Returns the legal move whose cards equal `cards`, preferring `category`.
const Combo* FindLegal(const std::vector<Combo>& legal, const CardSet& cards) {
  for (const auto& m : legal) {
    if (!m.IsPass() && m.cards == cards) return &m;
  }
  return nullptr;
}

}  // namespace

std::vector<Combo> DecomposeHand(const CardSet& hand) {
  CardSet h = hand;
  std::vector<Combo> out;
  if (h.Count(game::kBlackJoker) && h.Count(game::kRedJoker)) {
    CardSet rocket;
    rocket.Set(game::kBlackJoker, 1);
    rocket.Set(game::kRedJoker, 1);
    out.push_back(*game::Classify(rocket));
    h -= rocket;
  }
  for (Rank r = 0; r < game::kNumSuitedRanks; ++r) {
    if (h.Count(r) == 4) {
      out.push_back(*game::Classify(Run(r, 1, 4)));
      h.Set(r, 0);
    }
  }
  // Chains, most cards first.
  while (true) {
    int best_cards = 0;
    CardSet best;
    for (int copies = 3; copies >= 1; --copies) {
      const int min_len = copies == 1 ? 5 : copies == 2 ? 3 : 2;
      for (Rank start = 0; start <= game::kMaxChainRank; ++start) {
        int len = 0;
        while (start + len <= game::kMaxChainRank && h.Count(start + len) >= copies) ++len;
        if (len >= min_len && len * copies > best_cards) {
          best_cards = len * copies;
          best = Run(start, len, copies);
        }
      }
    }
    if (best_cards == 0) break;
    out.push_back(*game::Classify(best));
    h -= best;
  }
  std::vector<Rank> trios, pairs, solos;
  for (Rank r = 0; r < game::kNumRanks; ++r) {
    if (h.Count(r) == 3) trios.push_back(r);
    if (h.Count(r) == 2) pairs.push_back(r);
    if (h.Count(r) == 1) solos.push_back(r);
  }
  size_t next_solo = 0, next_pair = 0;
  for (Rank t : trios) {
    CardSet c = Run(t, 1, 3);
    if (next_solo < solos.size()) {
      c.Add(solos[next_solo++]);
    } else if (next_pair < pairs.size()) {
      c.Add(pairs[next_pair++], 2);
    }
    out.push_back(*game::Classify(c));
  }
  for (size_t i = next_pair; i < pairs.size(); ++i) out.push_back(*game::Classify(Run(pairs[i], 1, 2)));
  for (size_t i = next_solo; i < solos.size(); ++i) out.push_back(*game::Classify(Run(solos[i], 1, 1)));
  return out;
}

int HandStrength(const CardSet& hand) {
  int s = 0;
  s += 4 * hand.Count(game::kRedJoker) + 3 * hand.Count(game::kBlackJoker);
  s += 2 * hand.Count(game::kRank2) + hand.Count(game::kRankA);
  for (Rank r = 0; r < game::kNumSuitedRanks; ++r) {
    if (hand.Count(r) == 4) s += 4;
  }
  return s;
}

Combo RuleAgent::Decide(const Observation& obs, const std::vector<Combo>& legal) {
  if (legal.size() == 1) return legal.front();
  if (!obs.to_beat) {
    const auto parts = DecomposeHand(obs.hand);
    const Combo* pick = nullptr;
    for (const auto& c : parts) {
      if (c.IsBomb()) continue;
      if (!pick || c.principal < pick->principal ||
          (c.principal == pick->principal && c.cards.Size() > pick->cards.Size())) {
        pick = &c;
      }
    }
    if (!pick) {
      for (const auto& c : parts) {
        if (!pick || game::CanonicalLess(c, *pick)) pick = &c;
      }
    }
    if (const Combo* m = FindLegal(legal, pick->cards)) return *m;
    return legal.front();
  }
  const Combo& target = *obs.to_beat;
  for (const auto& m : legal) {
    if (m.category == target.category && m.length == target.length) return m;
  }
  for (const auto& m : legal) {
    if (!m.IsBomb()) continue;
    const CardSet rest = obs.hand - m.cards;
    if (rest.Empty() || game::Classify(rest)) return m;
  }
  return legal.front();  // Pass
}

BidDecision RuleAgent::Bid(const CardSet& hand, std::span<const BidDecision>) {
  return HandStrength(hand) >= 7 ? BidDecision::kBid : BidDecision::kNoBid;
}

std::vector<float> QAgent::QValues(const Observation& obs, const std::vector<Combo>& legal) {
  const auto state = features::EncodeState(obs);
  std::vector<features::CardVector> actions;
  actions.reserve(legal.size());
  for (const auto& c : legal) actions.push_back(features::EncodeAction(c));
  return nn::ForwardQ(*nets_[static_cast<int>(obs.position)], state, actions);
}

Combo QAgent::Decide(const Observation& obs, const std::vector<Combo>& legal) {
  if (legal.size() == 1) return legal.front();
  const auto q = QValues(obs, legal);
  return legal[std::max_element(q.begin(), q.end()) - q.begin()];
}

float NetworkBidPolicy::Probability(const CardSet& hand,
                                    std::span<const BidDecision> history) const {
  return nn::BidProbability(*net_, features::EncodeBid(hand, history));
}

BidDecision NetworkBidPolicy::Decide(const CardSet& hand, std::span<const BidDecision> history) {
  return Probability(hand, history) > 0.5f ? BidDecision::kBid : BidDecision::kNoBid;
}

AgentFactory MakeAgentFactory(const std::string& spec) {
  if (spec == "random") return [] { return std::make_unique<RandomAgent>(); };
  if (spec == "rule") return [] { return std::make_unique<RuleAgent>(); };
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string kind = spec.substr(0, colon);
    const std::string path = spec.substr(colon + 1);
    if (kind == "dmc" || kind == "sl") {
      auto nets = training::LoadQNetSet(path).nets;
      return [kind, nets] { return std::make_unique<QAgent>(kind, nets); };
    }
  }
  throw UnsupportedAgent("unknown agent spec '" + spec + "'");
}

}  // namespace douzero::eval
