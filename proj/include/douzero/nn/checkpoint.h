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

#ifndef DOUZERO_NN_CHECKPOINT_H_
#define DOUZERO_NN_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "douzero/nn/bid_network.h"
#include "douzero/nn/optim.h"
#include "douzero/nn/qnetwork.h"

namespace douzero::nn {

// File layout (little-endian): "DZCK", u32 version, u32 tensor count, then
// per tensor u32 name length, UTF-8 name, u32 rank, u64 dims[rank], f32
// data (column-major for matrices); finally CRC32 of all preceding bytes.
inline constexpr uint32_t kCheckpointVersion = 1;

struct Tensor {
  std::string name;
  std::vector<uint64_t> dims;
  std::vector<float> data;

  friend bool operator==(const Tensor&, const Tensor&) = default;
};

// Writes through a temporary file and renames. Throws IoError.
void WriteCheckpoint(const std::string& path, const std::vector<Tensor>& tensors);
// Throws IoError (unreadable or malformed), VersionMismatch (unknown magic
// or version), ChecksumMismatch (CRC failure, including truncation).
std::vector<Tensor> ReadCheckpoint(const std::string& path);

// nullptr when absent.
const Tensor* FindTensor(const std::vector<Tensor>& tensors, const std::string& name);

template <typename T>
void ExportParams(const ParamRefs<T>& params, const std::string& prefix,
                  std::vector<Tensor>& out);
// Throws IoError for a missing tensor and ShapeMismatch for wrong dims.
template <typename T>
void ImportParams(const std::vector<Tensor>& tensors, const std::string& prefix,
                  const ParamRefs<T>& params);

// A network is stored as its parameters plus "<name>/config" holding
// [state_size, lstm_hidden, mlp_hidden...].
void ExportQNetwork(const QNetwork<float>& net, std::vector<Tensor>& out);
QNetwork<float> ImportQNetwork(const std::vector<Tensor>& tensors, const std::string& name);
bool HasQNetwork(const std::vector<Tensor>& tensors, const std::string& name);

void ExportBidNetwork(const BidNetwork<float>& net, std::vector<Tensor>& out);
BidNetwork<float> ImportBidNetwork(const std::vector<Tensor>& tensors,
                                   const std::string& name = "bid");

// Optimizer accumulators are stored as "opt/<parameter name>".
void ExportOptimizer(const RmsProp<float>& opt, const ParamRefs<float>& params,
                     std::vector<Tensor>& out);
void ImportOptimizer(const std::vector<Tensor>& tensors, const ParamRefs<float>& params,
                     RmsProp<float>& opt);

// Scalars that may exceed float precision are split into 16-bit limbs.
void ExportCounter(const std::string& name, uint64_t value, std::vector<Tensor>& out);
uint64_t ImportCounter(const std::vector<Tensor>& tensors, const std::string& name,
                       uint64_t fallback = 0);

}  // namespace douzero::nn

#endif  // DOUZERO_NN_CHECKPOINT_H_
