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

#include "douzero/nn/bid_network.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "douzero/common/error.h"

namespace douzero::nn {

template <typename T>
Matrix<T> BidNetwork<T>::Logits(const Matrix<T>& x, Cache* cache) const {
  if (x.rows() != features::kBidFeatureSize || x.cols() == 0) {
    throw ShapeMismatch("bid input must be " + std::to_string(features::kBidFeatureSize) +
                        " x N");
  }
  return mlp_.Forward(x, cache);
}

float BidProbability(const BidNetwork<float>& net,
                     const std::array<float, features::kBidFeatureSize>& x) {
  Matrix<float> in = Eigen::Map<const Matrix<float>>(x.data(), features::kBidFeatureSize, 1);
  const float z = net.Logits(in, nullptr)(0, 0);
  // Keep the result strictly inside (0, 1) despite float saturation.
  const float p = 1.0f / (1.0f + std::exp(-z));
  return std::clamp(p, std::numeric_limits<float>::min(), std::nextafter(1.0f, 0.0f));
}

template class BidNetwork<float>;
template class BidNetwork<double>;

}  // namespace douzero::nn
