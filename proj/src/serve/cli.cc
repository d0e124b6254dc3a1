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

#include "douzero/serve/cli.h"

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "douzero/common/error.h"
#include "douzero/eval/analysis.h"
#include "douzero/eval/corpus.h"
#include "douzero/eval/tournament.h"
#include "douzero/game/match_log.h"
#include "douzero/game/move_gen.h"
#include "douzero/nn/checkpoint.h"
#include "douzero/serve/config.h"
#include "douzero/serve/service.h"
#include "douzero/training/dmc_trainer.h"
#include "douzero/training/supervised.h"

namespace douzero::serve {
namespace {

std::atomic<training::DmcTrainer*> g_trainer{nullptr};
std::atomic<Service*> g_service{nullptr};

extern "C" void HandleInterrupt(int) {
  if (auto* t = g_trainer.load()) t->Stop();
  if (auto* s = g_service.load()) s->Stop();
}

// Config sources shared by every config-aware subcommand.
struct ConfigFlags {
  std::string file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;  // key -> value from dedicated flags

  void Attach(CLI::App* cmd) {
    cmd->add_option("--config", file, "key = value config file");
    cmd->add_option("--set", sets, "override a config key (key=value), repeatable");
  }
  // Registers a dedicated flag that writes `key` when given.
  void Flag(CLI::App* cmd, const std::string& name, const std::string& key,
            const std::string& help) {
    cmd->add_option_function<std::string>(
        name, [this, key](const std::string& v) { flags[key] = v; }, help);
  }
  RunConfig Resolve() const {
    RunConfig c;
    if (!file.empty()) c.LoadFile(file);
    c.ApplyEnv();
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + s);
      c.Set(s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& [k, v] : flags) c.Set(k, v);
    return c;
  }
};

void WriteFile(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

std::vector<std::string> SplitComma(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------- train

int CmdTrain(const RunConfig& cfg, std::ostream& out) {
  const training::TrainConfig tc = cfg.ToTrainConfig();
  training::DmcTrainer trainer(tc);
  g_trainer.store(&trainer);
  auto prev_int = std::signal(SIGINT, HandleInterrupt);
  auto prev_term = std::signal(SIGTERM, HandleInterrupt);
  struct Restore {
    decltype(prev_int) a, b;
    ~Restore() {
      std::signal(SIGINT, a);
      std::signal(SIGTERM, b);
      g_trainer.store(nullptr);
    }
  } restore{prev_int, prev_term};
  out << "training: preset=" << tc.preset << " objective=" << ObjectiveName(tc.objective)
      << " actors=" << tc.ResolvedActors() << " B=" << tc.buffer_entries
      << " S=" << tc.entry_size << " M=" << tc.batch_entries << '\n';
  const auto s = trainer.Run();
  out << "frames " << s.frames << " updates " << s.updates << " episodes " << s.episodes
      << " seconds " << s.seconds << '\n';
  for (const auto& c : s.checkpoints) out << "checkpoint " << c << '\n';
  return kExitOk;
}

// ----------------------------------------------------------------- eval

struct EvalArgs {
  std::string a = "dmc", b = "random";
  std::string agents;
  std::string bid_net;
  std::string out;
  int decks = 1000;
  uint64_t seed = 0;
  int threads = 0;
  bool bidding = false;
  bool elo = false;
};

int CmdEval(const EvalArgs& args, const RunConfig& cfg, std::ostream& out) {
  const int threads = args.threads > 0 ? args.threads : cfg.GetInt("threads");
  std::string csv, json;
  if (args.bidding) {
    const auto names = SplitComma(args.agents);
    if (names.size() != 3) throw ConfigError("--bidding needs --agents with exactly 3 specs");
    std::array<eval::AgentFactory, 3> fs;
    std::array<std::string, 3> labels;
    for (int i = 0; i < 3; ++i) {
      fs[i] = eval::MakeAgentFactory(names[i]);
      labels[i] = names[i];
    }
    std::unique_ptr<eval::BidPolicy> policy;
    if (!args.bid_net.empty()) {
      auto net = std::make_shared<nn::BidNetwork<float>>(
          nn::ImportBidNetwork(nn::ReadCheckpoint(args.bid_net)));
      policy = std::make_unique<eval::NetworkBidPolicy>(net);
    } else {
      policy = std::make_unique<eval::RuleBidPolicy>();
    }
    const auto rep =
        eval::BiddingTournament(fs, labels, args.decks, args.seed, policy.get(), threads);
    csv = eval::BiddingReportCsv(rep);
    json = eval::BiddingReportJson(rep);
    if (args.elo) {
      std::vector<eval::DeckOutcome> outcomes;
      for (const auto& pts : rep.deck_points) {
        for (int i = 0; i < 3; ++i) {
          for (int j = i + 1; j < 3; ++j) {
            const double s = pts[i] > pts[j] ? 1.0 : pts[i] < pts[j] ? 0.0 : 0.5;
            outcomes.push_back({labels[i], labels[j], s});
          }
        }
      }
      json += "\n" + eval::EloJson(eval::ComputeElo(outcomes));
    }
  } else {
    const std::string a = args.a == "dmc" ? "dmc:" + cfg.Get("checkpoint") : args.a;
    const auto fa = eval::MakeAgentFactory(a);
    const auto fb = eval::MakeAgentFactory(args.b);
    const auto rep = eval::PairedDeckTournament(fa, fb, args.decks, args.seed, threads, a, args.b);
    csv = eval::PairedReportCsv(rep);
    json = eval::PairedReportJson(rep);
    if (args.elo) {
      std::vector<eval::DeckOutcome> outcomes;
      for (const auto& d : rep.decks_detail) outcomes.push_back({a, args.b, eval::DeckScore(d)});
      json += "\n" + eval::EloJson(eval::ComputeElo(outcomes));
    }
  }
  out << csv;
  if (!args.out.empty()) {
    WriteFile(args.out + ".csv", csv);
    WriteFile(args.out + ".json", json + "\n");
  } else if (args.elo) {
    out << json << '\n';
  }
  return kExitOk;
}

// ------------------------------------------------------------ enumerate

game::ActionSpaceCounts ReadExpectedTable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read expected table " + path);
  game::ActionSpaceCounts t = game::ExpectedActionSpace();
  std::string name;
  long long count;
  while (in >> name >> count) {
    bool found = name == "Total";
    if (found) t.total = count;
    for (int c = 0; c < game::kNumCategories; ++c) {
      if (game::CategoryName(static_cast<game::Category>(c)) == name) {
        t.per_category[c] = count;
        found = true;
      }
    }
    if (!found) throw ConfigError("unknown category in expected table: " + name);
  }
  return t;
}

int CmdEnumerate(const std::string& hand, const std::string& expected_path, std::ostream& out,
                 std::ostream& err) {
  if (!hand.empty()) {
    const auto cards = game::CardSet::FromString(hand);
    out << "Hand " << cards.ToString() << " legal combos " << game::GenerateCombos(cards).size()
        << '\n';
    return kExitOk;
  }
  const auto got = game::EnumerateActionSpace();
  const auto want = expected_path.empty() ? game::ExpectedActionSpace()
                                          : ReadExpectedTable(expected_path);
  bool ok = got.total == want.total;
  for (int c = 0; c < game::kNumCategories; ++c) {
    const bool match = got.per_category[c] == want.per_category[c];
    ok = ok && match;
    out << game::CategoryName(static_cast<game::Category>(c)) << ' ' << got.per_category[c];
    if (!match) out << " (expected " << want.per_category[c] << ')';
    out << '\n';
  }
  out << "Total " << got.total;
  if (got.total != want.total) out << " (expected " << want.total << ')';
  out << '\n';
  if (!ok) {
    err << "action-space counts differ from the expected table\n";
    return kExitCountMismatch;
  }
  return kExitOk;
}

// --------------------------------------------------------------- replay

int CmdReplay(const std::string& path, std::ostream& out) {
  const auto matches = game::ReadLogFile(path);
  int n = 0;
  for (const auto& m : matches) {
    const auto state = game::Replay(m);
    out << "game " << ++n << ": moves " << m.moves.size();
    if (state.phase() == game::Phase::kFinished) {
      const auto r = game::Score(state);
      out << " winner " << (r.winner == game::Side::kLandlord ? "Landlord" : "Peasants")
          << " bombs " << r.bombs << " landlord_points " << r.landlord_points;
    } else {
      out << " unfinished";
    }
    out << '\n';
  }
  out << "replayed " << n << " games\n";
  return kExitOk;
}

// ---------------------------------------------------------------- bench

int CmdBench(const std::string& agents, long long steps, int warmup, uint64_t seed,
             const std::string& out_path, std::ostream& out) {
  std::string all = "[\n";
  bool first = true;
  for (const auto& spec : SplitComma(agents)) {
    const auto rep = eval::InferenceBenchmark(eval::MakeAgentFactory(spec), spec, steps, warmup,
                                              seed);
    out << spec << ": " << rep.steps << " steps, mean " << rep.mean_us << " us/step, slope "
        << rep.slope_us_per_move << " us per legal move\n";
    all += (first ? "" : ",\n") + rep.ToJson();
    first = false;
  }
  all += "\n]\n";
  if (!out_path.empty()) WriteFile(out_path, all);
  return kExitOk;
}

// ---------------------------------------------------------------- serve

int CmdServe(const RunConfig& cfg, std::ostream& out) {
  ServiceOptions opts;
  opts.host = cfg.Get("bind_host");
  opts.port = cfg.GetInt("bind_port");
  opts.bot_delay_ms = cfg.GetInt("bot_delay_ms");
  opts.static_dir = cfg.Get("static_dir");
  opts.seed = cfg.GetUint("seed");
  const std::string ckpt = cfg.Get("checkpoint");
  const std::string spec = ckpt.empty() ? "rule" : "dmc:" + ckpt;
  Service service(opts, eval::MakeAgentFactory(spec), spec);
  const int port = service.Bind();
  out << "serving on http://" << opts.host << ':' << port << " with " << spec << " bots"
      << std::endl;
  g_service.store(&service);
  auto prev_int = std::signal(SIGINT, HandleInterrupt);
  auto prev_term = std::signal(SIGTERM, HandleInterrupt);
  service.Listen();
  std::signal(SIGINT, prev_int);
  std::signal(SIGTERM, prev_term);
  g_service.store(nullptr);
  return kExitOk;
}

// ------------------------------------------------------- supervised

struct SlArgs {
  std::string out;
};

nn::RmsPropConfig OptimizerFrom(const RunConfig& cfg) {
  return {cfg.GetDouble("lr"), cfg.GetDouble("rms_alpha"), cfg.GetDouble("rms_eps")};
}

int CmdSlTrain(const SlArgs& args, const RunConfig& cfg, std::ostream& out) {
  const std::string path = cfg.Get("corpus_path");
  if (path.empty()) throw ConfigError("sl-train needs --corpus");
  const auto corpus = game::ReadLogFile(path);
  training::SlConfig sc;
  sc.preset = cfg.Get("preset");
  sc.epochs = cfg.GetInt("epochs");
  sc.batch_rows = cfg.GetInt("sl_batch");
  sc.optimizer = OptimizerFrom(cfg);
  sc.seed = cfg.GetUint("seed");
  out << "sl-train: " << corpus.size() << " games, preset " << sc.preset << '\n';
  const auto r = training::TrainSl(corpus, sc, [&out](const training::SlEpoch& e) {
    out << "epoch " << e.epoch << " val_acc L " << e.val_accuracy[0] << " D "
        << e.val_accuracy[1] << " U " << e.val_accuracy[2] << " (" << e.seconds << " s)"
        << std::endl;
  });
  std::vector<nn::Tensor> tensors;
  for (const auto& net : r.nets) nn::ExportQNetwork(*net, tensors);
  nn::WriteCheckpoint(args.out, tensors);
  out << "best val_acc L " << r.val_accuracy[0] << " D " << r.val_accuracy[1] << " U "
      << r.val_accuracy[2] << "\nwrote " << args.out << '\n';
  return kExitOk;
}

int CmdBidTrain(const SlArgs& args, const RunConfig& cfg, std::ostream& out) {
  const std::string path = cfg.Get("corpus_path");
  if (path.empty()) throw ConfigError("bid-train needs --corpus");
  const auto corpus = training::ReadBidCorpus(path);
  training::BidTrainConfig bc;
  bc.epochs = cfg.GetInt("epochs");
  bc.seed = cfg.GetUint("seed");
  const auto r = training::TrainBidding(corpus, bc);
  std::vector<nn::Tensor> tensors;
  nn::ExportBidNetwork(*r.net, tensors);
  nn::WriteCheckpoint(args.out, tensors);
  out << "bid-train: " << corpus.size() << " examples, best val_acc " << r.val_accuracy
      << " at epoch " << r.best_epoch << "\nwrote " << args.out << '\n';
  return kExitOk;
}

struct CorpusArgs {
  std::string kind = "games";
  std::string agent = "rule";
  long long count = 1000;
  uint64_t seed = 0;
  std::string out;
};

int CmdGenCorpus(const CorpusArgs& args, std::ostream& out) {
  if (args.kind == "games") {
    const auto games =
        eval::GenerateGameCorpus(eval::MakeAgentFactory(args.agent), args.count, args.seed);
    game::WriteLogFile(args.out, games);
  } else {
    training::WriteBidCorpus(args.out, eval::GenerateBidCorpus(args.count, args.seed));
  }
  out << "wrote " << args.count << ' ' << args.kind << " to " << args.out << '\n';
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"DouZero: DouDizhu engine, Deep Monte-Carlo training and evaluation"};
  app.require_subcommand(1);

  ConfigFlags train_cfg;
  auto* train = app.add_subcommand("train", "run Deep Monte-Carlo self-play training");
  train_cfg.Attach(train);
  train_cfg.Flag(train, "--objective", "objective", "wp or adp");
  train_cfg.Flag(train, "--actors", "actors", "actor threads");
  train_cfg.Flag(train, "--preset", "preset", "full or desk");
  train_cfg.Flag(train, "--checkpoint-dir", "checkpoint_dir", "checkpoint directory");
  train_cfg.Flag(train, "--max-frames", "max_frames", "stop after this many frames");
  train_cfg.Flag(train, "--max-seconds", "max_seconds", "stop after this many seconds");
  train_cfg.Flag(train, "--seed", "seed", "random seed");
  train_cfg.Flag(train, "--resume", "resume", "resume from latest checkpoint (true/false)");

  ConfigFlags eval_cfg;
  EvalArgs eval_args;
  auto* ev = app.add_subcommand("eval", "paired-deck or bidding tournament");
  eval_cfg.Attach(ev);
  ev->add_option("--a", eval_args.a, "agent A spec (random, rule, dmc:<ckpt>, sl:<ckpt>)");
  ev->add_option("--b", eval_args.b, "agent B spec");
  ev->add_option("--agents", eval_args.agents, "three comma-separated specs for --bidding");
  ev->add_option("--bid-net", eval_args.bid_net, "bid network checkpoint (default: rule bids)");
  ev->add_option("--decks", eval_args.decks, "number of decks")->check(CLI::PositiveNumber);
  ev->add_option("--seed", eval_args.seed, "tournament seed");
  ev->add_option("--threads", eval_args.threads, "worker threads");
  ev->add_option("--out", eval_args.out, "write <out>.csv and <out>.json");
  ev->add_flag("--bidding", eval_args.bidding, "bidding tournament over 3! seatings");
  ev->add_flag("--elo", eval_args.elo, "append an Elo table");

  std::string hand, expected_table;
  auto* en = app.add_subcommand("enumerate", "count every distinct combo of a full deck");
  en->add_option("--hand", hand, "count lead combos of one hand instead");
  en->add_option("--expected-table", expected_table, "override the reference table");

  std::string replay_path;
  auto* rp = app.add_subcommand("replay", "replay a match-log file");
  rp->add_option("log", replay_path, "match-log file")->required();

  std::string bench_agents = "random,rule", bench_out;
  long long bench_steps = 10000;
  int bench_warmup = 100;
  uint64_t bench_seed = 0;
  auto* bn = app.add_subcommand("bench", "per-step inference latency");
  bn->add_option("--agents", bench_agents, "comma-separated agent specs");
  bn->add_option("--steps", bench_steps, "timed steps per agent");
  bn->add_option("--warmup", bench_warmup, "untimed warmup steps");
  bn->add_option("--seed", bench_seed, "deck seed");
  bn->add_option("--out", bench_out, "JSON report path");

  ConfigFlags serve_cfg;
  auto* sv = app.add_subcommand("serve", "HTTP game service");
  serve_cfg.Attach(sv);
  serve_cfg.Flag(sv, "--checkpoint", "checkpoint", "bot checkpoint file or directory");
  serve_cfg.Flag(sv, "--host", "bind_host", "bind address");
  serve_cfg.Flag(sv, "--port", "bind_port", "port");
  serve_cfg.Flag(sv, "--static-dir", "static_dir", "static files served at /");
  serve_cfg.Flag(sv, "--bot-delay-ms", "bot_delay_ms", "bot think delay");

  ConfigFlags sl_cfg;
  SlArgs sl_args;
  auto* sl = app.add_subcommand("sl-train", "supervised training on a match-log corpus");
  sl_cfg.Attach(sl);
  sl_cfg.Flag(sl, "--corpus", "corpus_path", "match-log corpus");
  sl_cfg.Flag(sl, "--epochs", "epochs", "epochs");
  sl_cfg.Flag(sl, "--preset", "preset", "network preset");
  sl_cfg.Flag(sl, "--seed", "seed", "seed");
  sl->add_option("--out", sl_args.out, "output checkpoint")->required();

  ConfigFlags bid_cfg;
  SlArgs bid_args;
  auto* bd = app.add_subcommand("bid-train", "train the bidding network");
  bid_cfg.Attach(bd);
  bid_cfg.Flag(bd, "--corpus", "corpus_path", "bid corpus");
  bid_cfg.Flag(bd, "--epochs", "epochs", "epochs");
  bid_cfg.Flag(bd, "--seed", "seed", "seed");
  bd->add_option("--out", bid_args.out, "output checkpoint")->required();

  CorpusArgs corpus_args;
  auto* gc = app.add_subcommand("gen-corpus", "generate synthetic training corpora");
  gc->add_option("--kind", corpus_args.kind, "games or bids")
      ->check(CLI::IsMember({"games", "bids"}));
  gc->add_option("--agent", corpus_args.agent, "agent spec used in all seats");
  gc->add_option("--count", corpus_args.count, "games or hands")->check(CLI::PositiveNumber);
  gc->add_option("--seed", corpus_args.seed, "seed");
  gc->add_option("--out", corpus_args.out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*train) return CmdTrain(train_cfg.Resolve(), out);
    if (*ev) return CmdEval(eval_args, eval_cfg.Resolve(), out);
    if (*en) return CmdEnumerate(hand, expected_table, out, err);
    if (*rp) return CmdReplay(replay_path, out);
    if (*bn) return CmdBench(bench_agents, bench_steps, bench_warmup, bench_seed, bench_out, out);
    if (*sv) return CmdServe(serve_cfg.Resolve(), out);
    if (*sl) return CmdSlTrain(sl_args, sl_cfg.Resolve(), out);
    if (*bd) return CmdBidTrain(bid_args, bid_cfg.Resolve(), out);
    if (*gc) return CmdGenCorpus(corpus_args, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NonFiniteLoss& e) {
    err << "training halted: " << e.what() << '\n';
    return kExitNonFinite;
  } catch (const CountMismatch& e) {
    err << e.what() << '\n';
    return kExitCountMismatch;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace douzero::serve
