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

#ifndef DOUZERO_NN_OPTIM_H_
#define DOUZERO_NN_OPTIM_H_

#include <vector>

#include "douzero/nn/bid_network.h"
#include "douzero/nn/layers.h"
#include "douzero/nn/qnetwork.h"

namespace douzero::nn {

// Mean of squared errors over a 1 x N row. Writes dL/dy when `dy` is set.
template <typename T>
T MseLoss(const Matrix<T>& y, const Matrix<T>& target, Matrix<T>* dy);

// sum_i w_i * BCE(sigmoid(z_i), y_i) / N, computed stably from logits.
template <typename T>
T WeightedBceLoss(const Matrix<T>& logits, const Matrix<T>& labels, const Matrix<T>& weights,
                  Matrix<T>* dlogits);

struct RmsPropConfig {
  double lr = 1e-4;
  double alpha = 0.99;
  double eps = 1e-5;
};

// v <- alpha v + (1 - alpha) g^2;  p <- p - lr g / (sqrt(v) + eps).
template <typename T>
class RmsProp {
 public:
  RmsProp() = default;
  RmsProp(const ParamRefs<T>& params, const RmsPropConfig& config);

  const RmsPropConfig& config() const { return config_; }
  void Step(const ParamRefs<T>& params);

  // Squared-gradient accumulators, one per parameter in Params() order.
  std::vector<Matrix<T>>& square_avg() { return square_avg_; }
  const std::vector<Matrix<T>>& square_avg() const { return square_avg_; }

 private:
  RmsPropConfig config_;
  std::vector<Matrix<T>> square_avg_;
};

// Throws NonFiniteLoss naming the offending tensor if a loss or gradient is
// NaN or infinite.
template <typename T>
void CheckFinite(const std::string& what, T loss, const ParamRefs<T>& params);

// One optimizer step each; the returned loss is computed before the update.
// On NonFiniteLoss the parameters are left untouched.
template <typename T>
T TrainStepMse(QNetwork<T>& net, RmsProp<T>& opt, const QInput<T>& in,
               const Matrix<T>& targets);
template <typename T>
T TrainStepWeightedBce(QNetwork<T>& net, RmsProp<T>& opt, const QInput<T>& in,
                       const Matrix<T>& labels, const Matrix<T>& weights);
template <typename T>
T TrainStepWeightedBce(BidNetwork<T>& net, RmsProp<T>& opt, const Matrix<T>& x,
                       const Matrix<T>& labels, const Matrix<T>& weights);

}  // namespace douzero::nn

#endif  // DOUZERO_NN_OPTIM_H_
