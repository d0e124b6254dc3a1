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

#include "douzero/nn/grad_check.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "douzero/nn/optim.h"

namespace douzero::nn {

GradCheckResult GradientCheck(ParamRefs<double> params, const std::function<double()>& loss,
                              const std::function<void()>& backward, int coordinates,
                              uint64_t seed) {
  constexpr double kStep = 1e-5;
  for (auto* p : params) p->ZeroGrad();
  backward();

  // Sample tensors proportionally to size so large layers are not starved,
  // but guarantee every tensor gets at least one probe.
  std::mt19937_64 rng(seed);
  std::vector<std::pair<size_t, Eigen::Index>> probes;
  Eigen::Index total = 0;
  for (auto* p : params) total += p->value.size();
  for (size_t k = 0; k < params.size(); ++k) {
    std::uniform_int_distribution<Eigen::Index> pick(0, params[k]->value.size() - 1);
    probes.emplace_back(k, pick(rng));
  }
  std::uniform_int_distribution<Eigen::Index> global(0, total - 1);
  while (static_cast<int>(probes.size()) < coordinates) {
    Eigen::Index at = global(rng);
    size_t k = 0;
    while (at >= params[k]->value.size()) at -= params[k++]->value.size();
    probes.emplace_back(k, at);
  }

  GradCheckResult r;
  for (auto [k, i] : probes) {
    Param<double>& p = *params[k];
    const double orig = p.value(i);
    p.value(i) = orig + kStep;
    const double up = loss();
    p.value(i) = orig - kStep;
    const double down = loss();
    p.value(i) = orig;
    const double numeric = (up - down) / (2 * kStep);
    const double analytic = p.grad(i);
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-7});
    const double rel = std::abs(analytic - numeric) / denom;
    ++r.coordinates;
    if (p.name.find("/lstm/") != std::string::npos) ++r.lstm_coordinates;
    r.max_abs_analytic = std::max(r.max_abs_analytic, std::abs(analytic));
    r.max_abs_numeric = std::max(r.max_abs_numeric, std::abs(numeric));
    if (rel > r.max_rel_error) {
      r.max_rel_error = rel;
      r.worst_param = p.name;
    }
  }
  return r;
}

GradCheckResult GradientCheckQ(QNetwork<double>& net, const QInput<double>& in,
                               const Matrix<double>& targets, LossKind kind,
                               int coordinates, uint64_t seed) {
  const Matrix<double> weights = Matrix<double>::Ones(1, in.rows());
  auto eval = [&](Matrix<double>* d, QNetwork<double>::Cache* cache) {
    Matrix<double> y = net.Forward(in, cache);
    return kind == LossKind::kMse ? MseLoss(y, targets, d)
                                  : WeightedBceLoss(y, targets, weights, d);
  };
  return GradientCheck(
      net.Params(), [&] { return eval(nullptr, nullptr); },
      [&] {
        QNetwork<double>::Cache cache;
        Matrix<double> d;
        eval(&d, &cache);
        net.Backward(in, cache, d);
      },
      coordinates, seed);
}

GradCheckResult GradientCheckBid(BidNetwork<double>& net, const Matrix<double>& x,
                                 const Matrix<double>& labels, const Matrix<double>& weights,
                                 int coordinates, uint64_t seed) {
  return GradientCheck(
      net.Params(),
      [&] { return WeightedBceLoss<double>(net.Logits(x, nullptr), labels, weights, nullptr); },
      [&] {
        BidNetwork<double>::Cache cache;
        Matrix<double> d;
        WeightedBceLoss(net.Logits(x, &cache), labels, weights, &d);
        net.Backward(cache, d);
      },
      coordinates, seed);
}

}  // namespace douzero::nn
