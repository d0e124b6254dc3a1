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

#include "douzero/nn/optim.h"

#include <cmath>
#include <sstream>

#include "douzero/common/error.h"

namespace douzero::nn {

template <typename T>
T MseLoss(const Matrix<T>& y, const Matrix<T>& target, Matrix<T>* dy) {
  if (y.rows() != target.rows() || y.cols() != target.cols() || y.size() == 0) {
    throw ShapeMismatch("mse: output and target shapes differ");
  }
  const T n = static_cast<T>(y.size());
  Matrix<T> diff = y - target;
  if (dy) *dy = diff * (T(2) / n);
  return diff.squaredNorm() / n;
}

template <typename T>
T WeightedBceLoss(const Matrix<T>& logits, const Matrix<T>& labels, const Matrix<T>& weights,
                  Matrix<T>* dlogits) {
  if (logits.size() == 0 || labels.size() != logits.size() ||
      weights.size() != logits.size()) {
    throw ShapeMismatch("bce: logits, labels and weights must have equal sizes");
  }
  const Eigen::Index n = logits.size();
  if (dlogits) dlogits->resize(logits.rows(), logits.cols());
  T total = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const T z = logits(i);
    const T y = labels(i);
    const T w = weights(i);
    total += w * (std::max(z, T(0)) - z * y + std::log1p(std::exp(-std::abs(z))));
    if (dlogits) {
      const T p = T(1) / (T(1) + std::exp(-z));
      (*dlogits)(i) = w * (p - y) / static_cast<T>(n);
    }
  }
  return total / static_cast<T>(n);
}

template <typename T>
RmsProp<T>::RmsProp(const ParamRefs<T>& params, const RmsPropConfig& config) : config_(config) {
  for (const auto* p : params) {
    square_avg_.push_back(Matrix<T>::Zero(p->value.rows(), p->value.cols()));
  }
}

template <typename T>
void RmsProp<T>::Step(const ParamRefs<T>& params) {
  if (params.size() != square_avg_.size()) throw ShapeMismatch("optimizer/parameter mismatch");
  const T alpha = static_cast<T>(config_.alpha);
  const T lr = static_cast<T>(config_.lr);
  const T eps = static_cast<T>(config_.eps);
  for (size_t k = 0; k < params.size(); ++k) {
    auto& v = square_avg_[k];
    const auto& g = params[k]->grad;
    v = alpha * v + (T(1) - alpha) * g.cwiseProduct(g);
    params[k]->value.array() -= lr * g.array() / (v.array().sqrt() + eps);
  }
}

template <typename T>
void CheckFinite(const std::string& what, T loss, const ParamRefs<T>& params) {
  auto fail = [&](const std::string& detail) {
    std::ostringstream msg;
    msg << what << ": non-finite value (" << detail << "), loss=" << loss;
    throw NonFiniteLoss(msg.str());
  };
  if (!std::isfinite(loss)) fail("loss");
  for (const auto* p : params) {
    if (!p->grad.allFinite()) fail("gradient of " + p->name);
    if (!p->value.allFinite()) fail("value of " + p->name);
  }
}

template <typename T>
T TrainStepMse(QNetwork<T>& net, RmsProp<T>& opt, const QInput<T>& in,
               const Matrix<T>& targets) {
  typename QNetwork<T>::Cache cache;
  Matrix<T> y = net.Forward(in, &cache);
  Matrix<T> dy;
  const T loss = MseLoss(y, targets, &dy);
  auto params = net.Params();
  net.ZeroGrad();
  if (std::isfinite(loss)) net.Backward(in, cache, dy);
  CheckFinite(net.name(), loss, params);
  opt.Step(params);
  return loss;
}

template <typename T>
T TrainStepWeightedBce(QNetwork<T>& net, RmsProp<T>& opt, const QInput<T>& in,
                       const Matrix<T>& labels, const Matrix<T>& weights) {
  typename QNetwork<T>::Cache cache;
  Matrix<T> z = net.Forward(in, &cache);
  Matrix<T> dz;
  const T loss = WeightedBceLoss(z, labels, weights, &dz);
  auto params = net.Params();
  net.ZeroGrad();
  if (std::isfinite(loss)) net.Backward(in, cache, dz);
  CheckFinite(net.name(), loss, params);
  opt.Step(params);
  return loss;
}

template <typename T>
T TrainStepWeightedBce(BidNetwork<T>& net, RmsProp<T>& opt, const Matrix<T>& x,
                       const Matrix<T>& labels, const Matrix<T>& weights) {
  typename BidNetwork<T>::Cache cache;
  Matrix<T> z = net.Logits(x, &cache);
  Matrix<T> dz;
  const T loss = WeightedBceLoss(z, labels, weights, &dz);
  auto params = net.Params();
  net.ZeroGrad();
  if (std::isfinite(loss)) net.Backward(cache, dz);
  CheckFinite(net.name(), loss, params);
  opt.Step(params);
  return loss;
}

#define DZ_INSTANTIATE(T)                                                                  \
  template T MseLoss<T>(const Matrix<T>&, const Matrix<T>&, Matrix<T>*);                   \
  template T WeightedBceLoss<T>(const Matrix<T>&, const Matrix<T>&, const Matrix<T>&,      \
                                Matrix<T>*);                                               \
  template class RmsProp<T>;                                                               \
  template void CheckFinite<T>(const std::string&, T, const ParamRefs<T>&);                \
  template T TrainStepMse<T>(QNetwork<T>&, RmsProp<T>&, const QInput<T>&,                  \
                             const Matrix<T>&);                                            \
  template T TrainStepWeightedBce<T>(QNetwork<T>&, RmsProp<T>&, const QInput<T>&,          \
                                     const Matrix<T>&, const Matrix<T>&);                  \
  template T TrainStepWeightedBce<T>(BidNetwork<T>&, RmsProp<T>&, const Matrix<T>&,        \
                                     const Matrix<T>&, const Matrix<T>&);

DZ_INSTANTIATE(float)
DZ_INSTANTIATE(double)

#undef DZ_INSTANTIATE

}  // namespace douzero::nn
