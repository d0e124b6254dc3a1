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

#include "douzero/training/dmc_trainer.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "douzero/common/error.h"
#include "douzero/nn/checkpoint.h"

namespace douzero::training {
namespace fs = std::filesystem;

void TrainConfig::Validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (entry_size < 1) fail("S must be >= 1");
  if (batch_entries < 1) fail("M must be >= 1");
  if (buffer_entries < batch_entries) fail("B must be >= M");
  if (epsilon < 0.0 || epsilon > 1.0) fail("epsilon must lie in [0, 1]");
  if (gamma < 0.0 || gamma > 1.0) fail("gamma must lie in [0, 1]");
  if (optimizer.lr <= 0.0) fail("learning rate must be positive");
  if (num_actors < 0) fail("actors must be >= 0");
  if (sync_every < 1) fail("sync_every must be >= 1");
  if (checkpoint_dir.empty()) fail("checkpoint_dir must be set");
  nn::QNetPreset(preset, features::kLandlordStateSize);
}

int TrainConfig::ResolvedActors() const {
  if (num_actors > 0) return num_actors;
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()) - 1);
}

namespace {

std::optional<uint64_t> FramesFromName(const fs::path& p) {
  const std::string name = p.filename().string();
  if (name.rfind("model_", 0) != 0 || p.extension() != ".dzck") return std::nullopt;
  const std::string digits = name.substr(6, name.size() - 6 - 5);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) return std::nullopt;
  return std::stoull(digits);
}

std::string CheckpointName(uint64_t frames) {
  std::ostringstream s;
  s << "model_" << std::setw(12) << std::setfill('0') << frames << ".dzck";
  return s.str();
}

}  // namespace

std::optional<std::string> LatestCheckpoint(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return std::nullopt;
  std::optional<std::pair<uint64_t, std::string>> best;
  for (const auto& e : fs::directory_iterator(dir, ec)) {
    auto frames = FramesFromName(e.path());
    if (frames && (!best || *frames > best->first)) best = {{*frames, e.path().string()}};
  }
  if (!best) return std::nullopt;
  return best->second;
}

LoadedModel LoadQNetSet(const std::string& path) {
  std::string file = path;
  if (fs::is_directory(path)) {
    auto latest = LatestCheckpoint(path);
    if (!latest) throw IoError("no checkpoint in " + path);
    file = *latest;
  }
  const auto tensors = nn::ReadCheckpoint(file);
  LoadedModel m;
  for (Position p : game::kAllPositions) {
    m.nets[static_cast<int>(p)] =
        std::make_shared<nn::QNetwork<float>>(nn::ImportQNetwork(tensors, NetName(p)));
  }
  m.frames = nn::ImportCounter(tensors, "meta/frames");
  return m;
}

DmcTrainer::DmcTrainer(TrainConfig config) : config_(std::move(config)) {
  config_.Validate();
  if (config_.stats_path.empty()) config_.stats_path = config_.checkpoint_dir + "/stats.csv";
  fs::create_directories(config_.checkpoint_dir);

  QNetSet initial = InitQNetSet(config_.preset, config_.seed);
  std::vector<nn::Tensor> resume_tensors;
  if (config_.resume) {
    if (auto latest = LatestCheckpoint(config_.checkpoint_dir)) {
      resume_tensors = nn::ReadCheckpoint(*latest);
      for (Position p : game::kAllPositions) {
        initial[static_cast<int>(p)] = std::make_shared<nn::QNetwork<float>>(
            nn::ImportQNetwork(resume_tensors, NetName(p)));
      }
      frames_ = nn::ImportCounter(resume_tensors, "meta/frames");
    }
  }
  for (int p = 0; p < 3; ++p) {
    nets_[p] = std::make_unique<nn::QNetwork<float>>(*initial[p]);
    optimizers_[p] = nn::RmsProp<float>(nets_[p]->Params(), config_.optimizer);
    if (!resume_tensors.empty()) {
      nn::ImportOptimizer(resume_tensors, nets_[p]->Params(), optimizers_[p]);
      updates_[p] = nn::ImportCounter(resume_tensors, "meta/updates_" + NetName(Position(p)));
    }
    buffers_[p] =
        std::make_unique<SharedBuffer<Instance>>(config_.buffer_entries, config_.entry_size);
    buffers_[p]->ShareSequence(&fill_sequence_);
  }
  store_ = std::make_unique<ParameterStore>(initial);
}

std::string DmcTrainer::SaveCheckpoint() {
  std::vector<nn::Tensor> tensors;
  for (int p = 0; p < 3; ++p) {
    nn::ExportQNetwork(*nets_[p], tensors);
    nn::ExportOptimizer(optimizers_[p], nets_[p]->Params(), tensors);
    nn::ExportCounter("meta/updates_" + NetName(Position(p)), updates_[p], tensors);
  }
  nn::ExportCounter("meta/frames", frames_, tensors);
  const std::string path = (fs::path(config_.checkpoint_dir) / CheckpointName(frames_)).string();
  nn::WriteCheckpoint(path, tensors);
  return path;
}

void DmcTrainer::ActorLoop(int id) {
  std::mt19937_64 rng(config_.seed * 1000003ull + static_cast<uint64_t>(id) + 1);
  std::array<std::vector<Instance>, 3> local;
  QNetSet nets;
  const int s = config_.entry_size;
  for (uint64_t episode = 0; !stop_.load(); ++episode) {
    if (episode % static_cast<uint64_t>(config_.sync_every) == 0) nets = store_->Snapshot();
    EpisodeResult ep = PlayEpisode(nets, config_.epsilon, config_.objective, config_.gamma, rng);
    episodes_.fetch_add(1);
    for (size_t t = 0; t < ep.record.steps.size(); ++t) {
      auto& step = ep.record.steps[t];
      local[static_cast<int>(step.position)].push_back(
          Instance{std::move(step.features), static_cast<float>(ep.returns[t])});
    }
    for (int p = 0; p < 3; ++p) {
      while (static_cast<int>(local[p].size()) >= s) {
        auto entry = buffers_[p]->AcquireFree();
        if (!entry) return;
        std::vector<Instance> chunk(std::make_move_iterator(local[p].begin()),
                                    std::make_move_iterator(local[p].begin() + s));
        local[p].erase(local[p].begin(), local[p].begin() + s);
        buffers_[p]->Fill(*entry, std::move(chunk));
      }
    }
  }
}

TrainSummary DmcTrainer::Run() {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  const bool new_stats = !fs::exists(config_.stats_path);
  std::ofstream stats(config_.stats_path, std::ios::app);
  if (!stats) throw IoError("cannot open stats file " + config_.stats_path);
  if (new_stats) stats << "wall_clock_s,frames,position,loss,mean_target\n";

  TrainSummary summary;
  std::vector<std::thread> actors;
  const int num_actors = config_.ResolvedActors();
  for (int i = 0; i < num_actors; ++i) actors.emplace_back([this, i] { ActorLoop(i); });

  auto shutdown_actors = [&] {
    stop_.store(true);
    for (auto& b : buffers_) b->Close();
    for (auto& t : actors) t.join();
    actors.clear();
  };

  const int m = config_.batch_entries;
  double last_ckpt = 0.0;
  uint64_t last_ckpt_frames = frames_;
  uint64_t run_updates = 0;
  std::string last_path;
  try {
    while (!stop_.load()) {
      if (config_.max_seconds > 0 && elapsed() >= config_.max_seconds) break;
      // The position whose M-th entry was filled first goes next, which keeps
      // single-actor runs reproducible regardless of learner timing.
      int pick = -1;
      uint64_t best = 0;
      for (int p = 0; p < 3; ++p) {
        auto seq = buffers_[p]->ReadySequence(m);
        if (seq && (pick < 0 || *seq < best)) {
          pick = p;
          best = *seq;
        }
      }
      if (pick < 0) {
        buffers_[0]->WaitForFull(std::chrono::milliseconds(5));
        continue;
      }
      auto taken = buffers_[pick]->TryTakeFull(m);
      std::vector<const features::ObservationFeatures*> rows;
      nn::Matrix<float> targets(1, static_cast<Eigen::Index>(m) * config_.entry_size);
      double target_sum = 0.0;
      for (int e : *taken) {
        for (const auto& inst : buffers_[pick]->Entry(e)) {
          targets(static_cast<Eigen::Index>(rows.size())) = inst.target;
          target_sum += inst.target;
          rows.push_back(&inst.features);
        }
      }
      const auto input = nn::MakeRowInput<float>(rows);
      const float loss = nn::TrainStepMse(*nets_[pick], optimizers_[pick], input, targets);
      buffers_[pick]->Release(*taken);
      store_->Publish(Position(pick), std::make_shared<nn::QNetwork<float>>(*nets_[pick]));

      ++updates_[pick];
      ++run_updates;
      frames_ += rows.size();
      stats << std::fixed << std::setprecision(3) << elapsed() << ',' << frames_ << ','
            << NetName(Position(pick)) << ',' << std::setprecision(6) << loss << ','
            << target_sum / static_cast<double>(rows.size()) << '\n';

      const bool by_time = elapsed() - last_ckpt >= config_.checkpoint_interval_s;
      const bool by_frames = config_.checkpoint_every_frames > 0 &&
                             frames_ - last_ckpt_frames >= config_.checkpoint_every_frames;
      const bool by_updates = config_.checkpoint_every_updates > 0 &&
                              run_updates % config_.checkpoint_every_updates == 0;
      if (by_time || by_frames || by_updates) {
        stats.flush();
        last_path = SaveCheckpoint();
        summary.checkpoints.push_back(last_path);
        last_ckpt = elapsed();
        last_ckpt_frames = frames_;
      }
      if (config_.max_frames > 0 && frames_ >= config_.max_frames) break;
      if (config_.max_updates > 0 && run_updates >= config_.max_updates) break;
    }
  } catch (const NonFiniteLoss&) {
    shutdown_actors();
    summary.checkpoints.push_back(SaveCheckpoint());
    throw;
  }
  shutdown_actors();
  stats.flush();
  if (summary.checkpoints.empty() || last_ckpt_frames != frames_) {
    summary.checkpoints.push_back(SaveCheckpoint());
  }
  summary.frames = frames_;
  summary.updates = run_updates;
  summary.episodes = episodes_.load();
  summary.seconds = elapsed();
  return summary;
}

}  // namespace douzero::training
