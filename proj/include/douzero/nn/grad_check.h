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

#ifndef DOUZERO_NN_GRAD_CHECK_H_
#define DOUZERO_NN_GRAD_CHECK_H_

#include <cstdint>
#include <functional>
#include <string>

#include "douzero/nn/bid_network.h"
#include "douzero/nn/qnetwork.h"

namespace douzero::nn {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  int coordinates = 0;       // coordinates compared
  int lstm_coordinates = 0;  // of which inside LSTM tensors
  double max_abs_analytic = 0.0;
  double max_abs_numeric = 0.0;
};

enum class LossKind { kMse, kWeightedBce };

// Compares analytic gradients with central differences (step 1e-5) over
// `coordinates` randomly chosen parameter entries. Relative error is
// |a - n| / max(|a|, |n|, 1e-7).
GradCheckResult GradientCheck(ParamRefs<double> params, const std::function<double()>& loss,
                              const std::function<void()>& backward, int coordinates,
                              uint64_t seed);

GradCheckResult GradientCheckQ(QNetwork<double>& net, const QInput<double>& in,
                               const Matrix<double>& targets, LossKind kind,
                               int coordinates, uint64_t seed);

GradCheckResult GradientCheckBid(BidNetwork<double>& net, const Matrix<double>& x,
                                 const Matrix<double>& labels, const Matrix<double>& weights,
                                 int coordinates, uint64_t seed);

}  // namespace douzero::nn

#endif  // DOUZERO_NN_GRAD_CHECK_H_
