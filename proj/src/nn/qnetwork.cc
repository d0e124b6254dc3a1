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

#include "douzero/nn/qnetwork.h"

#include <algorithm>

#include "douzero/common/error.h"

namespace douzero::nn {

using features::kCardVectorSize;
using features::kHistoryCols;
using features::kHistoryRows;

QNetConfig QNetPreset(const std::string& preset, int state_size) {
  QNetConfig c;
  c.state_size = state_size;
  if (preset == "full") {
    c.lstm_hidden = 128;
    c.mlp_hidden = {512, 512, 512, 512, 512};
  } else if (preset == "desk") {
    c.lstm_hidden = 64;
    c.mlp_hidden = {128, 128, 128, 128};
  } else {
    throw ConfigError("unknown network preset: " + preset);
  }
  return c;
}

QInput<float> MakeQInput(const features::StateFeatures& state,
                         const std::vector<features::CardVector>& actions) {
  QInput<float> in;
  in.history.resize(kHistoryRows);
  for (int r = 0; r < kHistoryRows; ++r) {
    in.history[r] = Eigen::Map<const Matrix<float>>(state.history.data() + r * kHistoryCols,
                                                    kHistoryCols, 1);
  }
  in.state = Eigen::Map<const Matrix<float>>(state.state.data(),
                                             static_cast<Eigen::Index>(state.state.size()), 1);
  in.action.resize(kCardVectorSize, static_cast<Eigen::Index>(actions.size()));
  for (size_t n = 0; n < actions.size(); ++n) {
    for (int i = 0; i < kCardVectorSize; ++i) in.action(i, n) = actions[n][i];
  }
  in.group.assign(actions.size(), 0);
  return in;
}

template <typename T>
QInput<T> MakeRowInput(const std::vector<const features::ObservationFeatures*>& rows) {
  if (rows.empty()) throw ShapeMismatch("empty batch");
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto s = static_cast<Eigen::Index>(rows.front()->state.size());
  QInput<T> in;
  in.history.assign(kHistoryRows, Matrix<T>(kHistoryCols, n));
  in.state.resize(s, n);
  in.action.resize(kCardVectorSize, n);
  in.group.resize(rows.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& row = *rows[j];
    if (static_cast<Eigen::Index>(row.state.size()) != s ||
        row.history.size() != static_cast<size_t>(features::kHistorySize)) {
      throw ShapeMismatch("inconsistent row widths in batch");
    }
    for (int r = 0; r < kHistoryRows; ++r) {
      for (int i = 0; i < kHistoryCols; ++i) {
        in.history[r](i, j) = static_cast<T>(row.history[r * kHistoryCols + i]);
      }
    }
    for (Eigen::Index i = 0; i < s; ++i) in.state(i, j) = static_cast<T>(row.state[i]);
    for (int i = 0; i < kCardVectorSize; ++i) in.action(i, j) = static_cast<T>(row.action[i]);
    in.group[j] = static_cast<int>(j);
  }
  return in;
}

template <typename T>
QNetwork<T>::QNetwork(const QNetConfig& config, const std::string& name)
    : config_(config),
      name_(name),
      lstm_(kHistoryCols, config.lstm_hidden, name + "/lstm"),
      mlp_(config.lstm_hidden + config.state_size + kCardVectorSize, config.mlp_hidden,
           name + "/mlp") {}

template <typename T>
void QNetwork<T>::Init(uint64_t seed) {
  std::mt19937_64 rng(seed);
  lstm_.Init(rng);
  mlp_.Init(rng);
}

template <typename T>
void QNetwork<T>::CheckShapes(const QInput<T>& in) const {
  const int g = in.groups();
  if (in.rows() == 0) throw ShapeMismatch("no action rows");
  if (static_cast<int>(in.history.size()) != kHistoryRows) {
    throw ShapeMismatch("history must have " + std::to_string(kHistoryRows) + " steps");
  }
  for (const auto& h : in.history) {
    if (h.rows() != kHistoryCols || h.cols() != g) throw ShapeMismatch("bad history step shape");
  }
  if (in.state.rows() != config_.state_size) {
    throw ShapeMismatch("state width " + std::to_string(in.state.rows()) + ", expected " +
                        std::to_string(config_.state_size));
  }
  if (in.action.rows() != kCardVectorSize) throw ShapeMismatch("bad action width");
  if (static_cast<int>(in.group.size()) != in.rows()) throw ShapeMismatch("bad group index");
  for (int k : in.group) {
    if (k < 0 || k >= g) throw ShapeMismatch("group index out of range");
  }
}

template <typename T>
Matrix<T> QNetwork<T>::Forward(const QInput<T>& in, Cache* cache) const {
  CheckShapes(in);
  const int hs_rows = config_.lstm_hidden + config_.state_size;
  Matrix<T> h = lstm_.Forward(in.history, cache ? &cache->lstm : nullptr);
  Matrix<T> hs(hs_rows, in.groups());
  hs.topRows(config_.lstm_hidden) = h;
  hs.bottomRows(config_.state_size) = in.state;

  const auto& first = mlp_.layers().front();
  const Matrix<T>& w = first.weight().value;
  Matrix<T> pre_g = w.leftCols(hs_rows) * hs;
  Matrix<T> pre = w.rightCols(kCardVectorSize) * in.action;
  for (int n = 0; n < in.rows(); ++n) pre.col(n) += pre_g.col(in.group[n]);
  pre.colwise() += first.bias().value.col(0);
  if (cache) cache->hs = std::move(hs);
  return mlp_.ForwardFromFirstPre(pre, cache ? &cache->mlp : nullptr);
}

template <typename T>
void QNetwork<T>::Backward(const QInput<T>& in, const Cache& cache, const Matrix<T>& dout) {
  const int hs_rows = config_.lstm_hidden + config_.state_size;
  Matrix<T> d_pre = mlp_.Backward(cache.mlp, dout, /*skip_first=*/true, nullptr);
  auto& first = mlp_.layers().front();
  Matrix<T> d_pre_g = Matrix<T>::Zero(d_pre.rows(), in.groups());
  for (int n = 0; n < in.rows(); ++n) d_pre_g.col(in.group[n]) += d_pre.col(n);
  first.weight().grad.rightCols(kCardVectorSize).noalias() += d_pre * in.action.transpose();
  first.weight().grad.leftCols(hs_rows).noalias() += d_pre_g * cache.hs.transpose();
  first.bias().grad.col(0) += d_pre.rowwise().sum();
  Matrix<T> d_hs = first.weight().value.leftCols(hs_rows).transpose() * d_pre_g;
  lstm_.Backward(cache.lstm, d_hs.topRows(config_.lstm_hidden));
}

template <typename T>
ParamRefs<T> QNetwork<T>::Params() {
  ParamRefs<T> out;
  lstm_.CollectParams(out);
  mlp_.CollectParams(out);
  return out;
}

template <typename T>
void QNetwork<T>::ZeroGrad() {
  for (auto* p : Params()) p->ZeroGrad();
}

template <typename T>
template <typename U>
QNetwork<U> QNetwork<T>::Cast() const {
  QNetwork<U> out(config_, name_);
  auto src = const_cast<QNetwork<T>*>(this)->Params();
  auto dst = out.Params();
  for (size_t i = 0; i < src.size(); ++i) dst[i]->value = src[i]->value.template cast<U>();
  return out;
}

std::vector<float> ForwardQ(const QNetwork<float>& net, const features::StateFeatures& state,
                            const std::vector<features::CardVector>& actions) {
  Matrix<float> out = net.Forward(MakeQInput(state, actions), nullptr);
  return std::vector<float>(out.data(), out.data() + out.size());
}

template class QNetwork<float>;
template class QNetwork<double>;
template QNetwork<double> QNetwork<float>::Cast<double>() const;
template QNetwork<float> QNetwork<double>::Cast<float>() const;
template QInput<float> MakeRowInput<float>(const std::vector<const features::ObservationFeatures*>&);
template QInput<double> MakeRowInput<double>(
    const std::vector<const features::ObservationFeatures*>&);

}  // namespace douzero::nn
