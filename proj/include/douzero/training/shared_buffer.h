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

#ifndef DOUZERO_TRAINING_SHARED_BUFFER_H_
#define DOUZERO_TRAINING_SHARED_BUFFER_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <vector>

#include "douzero/common/error.h"

namespace douzero::training {

// Fixed pool of B entries, each holding exactly S instances. An entry cycles
// Free -> Writing (one actor) -> Full -> Reading (learner) -> Free. The
// queues hand entries out in FIFO order, and every full entry carries a
// global fill sequence number.
template <typename Instance>
class SharedBuffer {
 public:
  enum class EntryState { kFree, kWriting, kFull, kReading };

  SharedBuffer(int num_entries, int entry_size)
      : entry_size_(entry_size),
        entries_(num_entries),
        states_(num_entries, EntryState::kFree),
        fill_seq_(num_entries, 0) {
    if (num_entries < 1 || entry_size < 1) throw ConfigError("buffer needs B >= 1 and S >= 1");
    for (int i = 0; i < num_entries; ++i) free_.push_back(i);
  }

  int num_entries() const { return static_cast<int>(entries_.size()); }
  int entry_size() const { return entry_size_; }

  // Blocks until an entry is free. Returns nullopt once closed.
  std::optional<int> AcquireFree() {
    std::unique_lock lock(mu_);
    free_cv_.wait(lock, [&] { return closed_ || !free_.empty(); });
    if (closed_) return std::nullopt;
    const int e = free_.front();
    free_.pop_front();
    states_[e] = EntryState::kWriting;
    return e;
  }

  // Moves exactly S instances into an acquired entry and marks it full.
  void Fill(int entry, std::vector<Instance>&& instances) {
    if (static_cast<int>(instances.size()) != entry_size_) {
      throw ShapeMismatch("entry must receive exactly S instances");
    }
    std::lock_guard lock(mu_);
    if (states_[entry] != EntryState::kWriting) throw Error("fill of an entry not being written");
    entries_[entry] = std::move(instances);
    states_[entry] = EntryState::kFull;
    fill_seq_[entry] = sequence_->fetch_add(1);
    full_.push_back(entry);
    full_cv_.notify_all();
  }

  int NumFull() const {
    std::lock_guard lock(mu_);
    return static_cast<int>(full_.size());
  }

  // Fill sequence of the m-th oldest full entry, if at least m are full.
  std::optional<uint64_t> ReadySequence(int m) const {
    std::lock_guard lock(mu_);
    if (static_cast<int>(full_.size()) < m) return std::nullopt;
    return fill_seq_[full_[m - 1]];
  }

  // Takes the m oldest full entries when at least m are full.
  std::optional<std::vector<int>> TryTakeFull(int m) {
    std::lock_guard lock(mu_);
    if (static_cast<int>(full_.size()) < m) return std::nullopt;
    std::vector<int> out(full_.begin(), full_.begin() + m);
    full_.erase(full_.begin(), full_.begin() + m);
    for (int e : out) states_[e] = EntryState::kReading;
    return out;
  }

  // Entries being read are owned by the learner; no lock is needed to read.
  const std::vector<Instance>& Entry(int e) const { return entries_[e]; }

  void Release(const std::vector<int>& taken) {
    std::lock_guard lock(mu_);
    for (int e : taken) {
      if (states_[e] != EntryState::kReading) throw Error("release of an entry not being read");
      entries_[e].clear();
      states_[e] = EntryState::kFree;
      free_.push_back(e);
    }
    free_cv_.notify_all();
  }

  // Waits until some full entry exists or the timeout passes.
  void WaitForFull(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mu_);
    full_cv_.wait_for(lock, timeout, [&] { return closed_ || !full_.empty(); });
  }

  void Close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    free_cv_.notify_all();
    full_cv_.notify_all();
  }

  // Several buffers may share one fill counter so sequences are comparable.
  void ShareSequence(std::atomic<uint64_t>* counter) {
    std::lock_guard lock(mu_);
    sequence_ = counter;
  }

  std::vector<EntryState> States() const {
    std::lock_guard lock(mu_);
    return states_;
  }

 private:
  const int entry_size_;
  mutable std::mutex mu_;
  std::condition_variable free_cv_;
  std::condition_variable full_cv_;
  std::vector<std::vector<Instance>> entries_;
  std::vector<EntryState> states_;
  std::vector<uint64_t> fill_seq_;
  std::deque<int> free_;
  std::deque<int> full_;
  std::atomic<uint64_t> own_sequence_{0};
  std::atomic<uint64_t>* sequence_ = &own_sequence_;
  bool closed_ = false;
};

}  // namespace douzero::training

#endif  // DOUZERO_TRAINING_SHARED_BUFFER_H_
