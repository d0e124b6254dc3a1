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

#include "douzero/eval/tournament.h"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "douzero/common/error.h"

namespace douzero::eval {

using game::Position;
using game::Side;

namespace {

// Runs fn(worker, index) for index in [0, n) over `threads` workers.
template <typename Fn>
void Shard(int n, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(0, i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += threads) fn(w, i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void Add(RoleStats& s, bool won, int points) {
  ++s.games;
  s.wins += won ? 1 : 0;
  s.points += points;
}

}  // namespace

PairedReport PairedDeckTournament(const AgentFactory& a, const AgentFactory& b, int num_decks,
                                  uint64_t seed, int threads, const std::string& a_name,
                                  const std::string& b_name) {
  if (num_decks < 1) throw ConfigError("tournament needs at least one deck");
  threads = std::max(1, std::min(threads, num_decks));
  struct Worker {
    std::array<std::unique_ptr<Agent>, 3> a, b;
  };
  std::vector<Worker> workers(threads);
  for (auto& w : workers) {
    for (int s = 0; s < 3; ++s) {
      w.a[s] = a();
      w.b[s] = b();
    }
  }
  std::vector<DeckResult> results(num_decks);
  Shard(num_decks, threads, [&](int w, int i) {
    Worker& wk = workers[w];
    DeckResult& r = results[i];
    r.deck_seed = DeckSeed(seed, static_cast<uint64_t>(i));
    std::mt19937_64 deck_rng(r.deck_seed);
    const game::Deal deal = game::RandomDeal(deck_rng);
    for (int g = 0; g < 2; ++g) {
      // g = 0: A is Landlord; g = 1: B is Landlord.
      std::array<Agent*, 3> seats = g == 0
                                        ? std::array<Agent*, 3>{wk.a[0].get(), wk.b[1].get(), wk.b[2].get()}
                                        : std::array<Agent*, 3>{wk.b[0].get(), wk.a[1].get(), wk.a[2].get()};
      for (int s = 0; s < 3; ++s) seats[s]->Reset(RoleSeed(r.deck_seed, Position(s)));
      std::mt19937_64 match_rng(r.deck_seed);
      const MatchOutcome out = RunMatch(seats, deal, match_rng);
      const Side a_side = g == 0 ? Side::kLandlord : Side::kPeasants;
      r.a_won[g] = out.result.winner == a_side;
      r.a_points[g] = out.result.SidePoints(a_side);
    }
  });

  PairedReport rep;
  rep.a = a_name;
  rep.b = b_name;
  rep.seed = seed;
  rep.decks = num_decks;
  for (const auto& r : results) {
    Add(rep.a_landlord, r.a_won[0], r.a_points[0]);
    Add(rep.a_peasants, r.a_won[1], r.a_points[1]);
    Add(rep.a_overall, r.a_won[0], r.a_points[0]);
    Add(rep.a_overall, r.a_won[1], r.a_points[1]);
  }
  rep.decks_detail = std::move(results);
  return rep;
}

double DeckScore(const DeckResult& d) {
  const int a_wins = d.a_won[0] + d.a_won[1];
  if (a_wins != 1) return a_wins > 1 ? 1.0 : 0.0;
  const int points = d.a_points[0] + d.a_points[1];
  if (points != 0) return points > 0 ? 1.0 : 0.0;
  return 0.5;
}

BiddingReport BiddingTournament(const std::array<AgentFactory, 3>& algos,
                                const std::array<std::string, 3>& names, int num_decks,
                                uint64_t seed, BidPolicy* bid_policy, int threads) {
  if (num_decks < 1) throw ConfigError("tournament needs at least one deck");
  static constexpr std::array<std::array<int, 3>, 6> kPerms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  threads = std::max(1, std::min(threads, num_decks));
  // agents[worker][algo][seat]
  std::vector<std::array<std::array<std::unique_ptr<Agent>, 3>, 3>> agents(threads);
  for (auto& w : agents) {
    for (int k = 0; k < 3; ++k) {
      for (int s = 0; s < 3; ++s) w[k][s] = algos[k]();
    }
  }
  struct Game {
    std::array<bool, 3> won;
    std::array<int, 3> points;
    std::array<bool, 3> landlord;
  };
  std::vector<std::array<Game, 6>> games(num_decks);
  Shard(num_decks, threads, [&](int w, int i) {
    const uint64_t deck_seed = DeckSeed(seed, static_cast<uint64_t>(i));
    std::mt19937_64 deck_rng(deck_seed);
    const game::Deal deal = game::RandomDeal(deck_rng);
    for (int p = 0; p < 6; ++p) {
      std::array<Agent*, 3> seats;
      for (int s = 0; s < 3; ++s) {
        seats[s] = agents[w][kPerms[p][s]][s].get();
        seats[s]->Reset(RoleSeed(deck_seed + static_cast<uint64_t>(p), Position(s)));
      }
      std::mt19937_64 match_rng(DeckSeed(deck_seed, static_cast<uint64_t>(p)));
      MatchOptions opt;
      opt.bidding = true;
      opt.bid_policy = bid_policy;
      const MatchOutcome out = RunMatch(seats, deal, match_rng, opt);
      Game& g = games[i][p];
      for (int s = 0; s < 3; ++s) {
        const int algo = kPerms[p][s];
        const Position pos = out.seat_positions[s];
        g.won[algo] = game::SideOf(pos) == out.result.winner;
        g.points[algo] = out.result.PointsFor(pos);
        g.landlord[algo] = pos == Position::kLandlord;
      }
    }
  });

  BiddingReport rep;
  rep.seed = seed;
  rep.decks = num_decks;
  for (int k = 0; k < 3; ++k) rep.algos[k].name = names[k];
  for (const auto& deck : games) {
    std::array<long long, 3> pts{};
    for (const auto& g : deck) {
      ++rep.games;
      for (int k = 0; k < 3; ++k) {
        Add(g.landlord[k] ? rep.algos[k].landlord : rep.algos[k].peasant, g.won[k], g.points[k]);
        Add(rep.algos[k].overall, g.won[k], g.points[k]);
        pts[k] += g.points[k];
      }
    }
    rep.deck_points.push_back(pts);
  }
  return rep;
}

double EloTable::Rating(const std::string& name) const {
  auto it = ratings_.find(name);
  return it == ratings_.end() ? initial_ : it->second;
}

void EloTable::Update(const std::string& a, const std::string& b, double score_a) {
  const double ra = Rating(a), rb = Rating(b);
  const double expect_a = 1.0 / (1.0 + std::pow(10.0, (rb - ra) / 400.0));
  const double delta = k_ * (score_a - expect_a);
  ratings_[a] = ra + delta;
  ratings_[b] = rb - delta;
}

double EloTable::Sum() const {
  double s = 0.0;
  for (const auto& [name, r] : ratings_) s += r;
  return s;
}

EloTable ComputeElo(const std::vector<DeckOutcome>& outcomes, double k) {
  EloTable t(k);
  for (const auto& o : outcomes) t.Update(o.a, o.b, o.score_a);
  return t;
}

namespace {

std::string Fixed(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << v;
  return s.str();
}

nlohmann::json RoleJson(const RoleStats& r) {
  return {{"wp", r.wp()}, {"adp", r.adp()}, {"games", r.games}, {"wins", r.wins}};
}

}  // namespace

std::string PairedReportCsv(const PairedReport& r, bool header) {
  std::ostringstream s;
  if (header) s << "matchup,role,wp,adp,games,seed\n";
  const std::string m = r.a + " vs " + r.b;
  auto row = [&](const char* role, const RoleStats& st) {
    s << m << ',' << role << ',' << Fixed(st.wp()) << ',' << Fixed(st.adp()) << ',' << st.games
      << ',' << r.seed << '\n';
  };
  row("L", r.a_landlord);
  row("P", r.a_peasants);
  row("all", r.a_overall);
  return s.str();
}

std::string PairedReportJson(const PairedReport& r) {
  nlohmann::json j = {{"matchup", r.a + " vs " + r.b},
                      {"a", r.a},
                      {"b", r.b},
                      {"seed", r.seed},
                      {"decks", r.decks},
                      {"L", RoleJson(r.a_landlord)},
                      {"P", RoleJson(r.a_peasants)},
                      {"all", RoleJson(r.a_overall)}};
  return j.dump(2);
}

std::string BiddingReportCsv(const BiddingReport& r, bool header) {
  std::ostringstream s;
  if (header) s << "matchup,role,wp,adp,games,seed\n";
  for (const auto& a : r.algos) {
    auto row = [&](const char* role, const RoleStats& st) {
      s << a.name << ',' << role << ',' << Fixed(st.wp()) << ',' << Fixed(st.adp()) << ','
        << st.games << ',' << r.seed << '\n';
    };
    row("L", a.landlord);
    row("P", a.peasant);
    row("all", a.overall);
  }
  return s.str();
}

std::string BiddingReportJson(const BiddingReport& r) {
  nlohmann::json algos = nlohmann::json::array();
  for (const auto& a : r.algos) {
    algos.push_back({{"name", a.name},
                     {"L", RoleJson(a.landlord)},
                     {"P", RoleJson(a.peasant)},
                     {"all", RoleJson(a.overall)}});
  }
  nlohmann::json j = {
      {"seed", r.seed}, {"decks", r.decks}, {"games", r.games}, {"algorithms", algos}};
  return j.dump(2);
}

std::string EloJson(const EloTable& elo) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, rating] : elo.ratings()) j[name] = rating;
  return j.dump(2);
}

}  // namespace douzero::eval
