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

#ifndef DOUZERO_NN_BID_NETWORK_H_
#define DOUZERO_NN_BID_NETWORK_H_

#include <array>
#include <string>

#include "douzero/features/encoding.h"
#include "douzero/nn/layers.h"

namespace douzero::nn {

inline const std::vector<int> kBidHidden = {512, 256, 128, 64, 32, 16};

// MLP over bid features with a logistic output. Forward returns logits.
template <typename T>
class BidNetwork {
 public:
  using Cache = typename Mlp<T>::Cache;

  explicit BidNetwork(const std::string& name = "bid")
      : name_(name), mlp_(features::kBidFeatureSize, kBidHidden, name + "/mlp") {}

  const std::string& name() const { return name_; }
  void Init(uint64_t seed) {
    std::mt19937_64 rng(seed);
    mlp_.Init(rng);
  }

  // x is kBidFeatureSize x N; returns 1 x N logits. Throws ShapeMismatch.
  Matrix<T> Logits(const Matrix<T>& x, Cache* cache) const;
  void Backward(const Cache& cache, const Matrix<T>& dlogits) {
    mlp_.Backward(cache, dlogits, /*skip_first=*/false, nullptr);
  }

  ParamRefs<T> Params() {
    ParamRefs<T> out;
    mlp_.CollectParams(out);
    return out;
  }
  void ZeroGrad() {
    for (auto* p : Params()) p->ZeroGrad();
  }

 private:
  std::string name_;
  Mlp<T> mlp_;
};

// Probability that the holder should bid, in (0, 1).
float BidProbability(const BidNetwork<float>& net,
                     const std::array<float, features::kBidFeatureSize>& x);

}  // namespace douzero::nn

#endif  // DOUZERO_NN_BID_NETWORK_H_
