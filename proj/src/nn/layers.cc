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

#include "douzero/nn/layers.h"

#include <cmath>

namespace douzero::nn {
namespace {

template <typename T>
void FillUniform(Matrix<T>& m, T bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-static_cast<double>(bound),
                                              static_cast<double>(bound));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = static_cast<T>(dist(rng));
  }
}

template <typename T>
Matrix<T> Sigmoid(const Matrix<T>& z) {
  return (T(1) / (T(1) + (-z.array()).exp())).matrix();
}

}  // namespace

// ---------------------------------------------------------------- Linear

template <typename T>
Linear<T>::Linear(int in, int out, const std::string& name) {
  w_.name = name + "/w";
  b_.name = name + "/b";
  w_.Resize(out, in);
  b_.Resize(out, 1);
}

template <typename T>
void Linear<T>::Init(std::mt19937_64& rng) {
  const T bound = T(1) / std::sqrt(static_cast<T>(in()));
  FillUniform(w_.value, bound, rng);
  FillUniform(b_.value, bound, rng);
}

template <typename T>
Matrix<T> Linear<T>::Forward(const Matrix<T>& x) const {
  Matrix<T> y = w_.value * x;
  y.colwise() += b_.value.col(0);
  return y;
}

template <typename T>
void Linear<T>::AccumulateGrad(const Matrix<T>& x, const Matrix<T>& dy) {
  w_.grad.noalias() += dy * x.transpose();
  b_.grad.col(0) += dy.rowwise().sum();
}

template <typename T>
Matrix<T> Linear<T>::Backward(const Matrix<T>& x, const Matrix<T>& dy) {
  AccumulateGrad(x, dy);
  return w_.value.transpose() * dy;
}

// ------------------------------------------------------------------- Mlp

template <typename T>
Mlp<T>::Mlp(int in, const std::vector<int>& hidden, const std::string& name) {
  int prev = in;
  for (size_t i = 0; i < hidden.size(); ++i) {
    layers_.emplace_back(prev, hidden[i], name + "/" + std::to_string(i));
    prev = hidden[i];
  }
  layers_.emplace_back(prev, 1, name + "/" + std::to_string(hidden.size()));
}

template <typename T>
void Mlp<T>::Init(std::mt19937_64& rng) {
  for (auto& l : layers_) l.Init(rng);
}

template <typename T>
std::vector<int> Mlp<T>::hidden() const {
  std::vector<int> h;
  for (size_t i = 0; i + 1 < layers_.size(); ++i) h.push_back(layers_[i].out());
  return h;
}

template <typename T>
Matrix<T> Mlp<T>::Forward(const Matrix<T>& x, Cache* cache) const {
  Matrix<T> pre = layers_[0].Forward(x);
  Matrix<T> out = ForwardFromFirstPre(pre, cache);
  if (cache) cache->inputs[0] = x;
  return out;
}

template <typename T>
Matrix<T> Mlp<T>::ForwardFromFirstPre(const Matrix<T>& first_pre, Cache* cache) const {
  if (cache) {
    cache->inputs.clear();
    cache->inputs.emplace_back();
  }
  Matrix<T> pre = first_pre;
  for (size_t k = 1; k < layers_.size(); ++k) {
    Matrix<T> act = pre.cwiseMax(T(0));
    pre = layers_[k].Forward(act);
    if (cache) cache->inputs.push_back(std::move(act));
  }
  return pre;
}

template <typename T>
Matrix<T> Mlp<T>::Backward(const Cache& cache, const Matrix<T>& dout, bool skip_first,
                           Matrix<T>* dx) {
  Matrix<T> d = dout;
  for (size_t k = layers_.size() - 1; k >= 1; --k) {
    const Matrix<T>& in = cache.inputs[k];
    layers_[k].AccumulateGrad(in, d);
    Matrix<T> back = layers_[k].weight().value.transpose() * d;
    d = (in.array() > T(0)).select(back, T(0));
  }
  if (!skip_first) layers_[0].AccumulateGrad(cache.inputs[0], d);
  if (dx) *dx = layers_[0].weight().value.transpose() * d;
  return d;
}

// ------------------------------------------------------------------ Lstm

template <typename T>
Lstm<T>::Lstm(int input, int hidden, const std::string& name) {
  w_ih_.name = name + "/w_ih";
  w_hh_.name = name + "/w_hh";
  b_.name = name + "/b";
  w_ih_.Resize(4 * hidden, input);
  w_hh_.Resize(4 * hidden, hidden);
  b_.Resize(4 * hidden, 1);
}

template <typename T>
void Lstm<T>::Init(std::mt19937_64& rng) {
  const int h = hidden_size();
  FillUniform(w_ih_.value, T(1) / std::sqrt(static_cast<T>(input_size())), rng);
  FillUniform(w_hh_.value, T(1) / std::sqrt(static_cast<T>(h)), rng);
  FillUniform(b_.value, T(1) / std::sqrt(static_cast<T>(h)), rng);
  b_.value.block(h, 0, h, 1).setOnes();
}

template <typename T>
Matrix<T> Lstm<T>::Forward(const std::vector<Matrix<T>>& steps, Cache* cache) const {
  const int H = hidden_size();
  const Eigen::Index batch = steps.front().cols();
  const int n = static_cast<int>(steps.size());
  // One GEMM for the input projection of all steps.
  Matrix<T> stacked(input_size(), batch * n);
  for (int t = 0; t < n; ++t) stacked.middleCols(t * batch, batch) = steps[t];
  Matrix<T> proj = w_ih_.value * stacked;

  Matrix<T> h = Matrix<T>::Zero(H, batch);
  Matrix<T> c = Matrix<T>::Zero(H, batch);
  if (cache) {
    cache->x = steps;
    cache->gates.resize(n);
    cache->c.resize(n);
    cache->h.resize(n);
  }
  for (int t = 0; t < n; ++t) {
    Matrix<T> z = proj.middleCols(t * batch, batch);
    z.noalias() += w_hh_.value * h;
    z.colwise() += b_.value.col(0);
    Matrix<T> gates(4 * H, batch);
    gates.topRows(2 * H) = Sigmoid<T>(z.topRows(2 * H));
    gates.middleRows(2 * H, H) = z.middleRows(2 * H, H).array().tanh().matrix();
    gates.bottomRows(H) = Sigmoid<T>(z.bottomRows(H));
    c = (gates.middleRows(H, H).array() * c.array() +
         gates.topRows(H).array() * gates.middleRows(2 * H, H).array())
            .matrix();
    h = (gates.bottomRows(H).array() * c.array().tanh()).matrix();
    if (cache) {
      cache->gates[t] = std::move(gates);
      cache->c[t] = c;
      cache->h[t] = h;
    }
  }
  return h;
}

template <typename T>
void Lstm<T>::Backward(const Cache& cache, const Matrix<T>& dh_last) {
  const int H = hidden_size();
  const int n = static_cast<int>(cache.x.size());
  const Eigen::Index batch = dh_last.cols();
  Matrix<T> dh = dh_last;
  Matrix<T> dc = Matrix<T>::Zero(H, batch);
  Matrix<T> dz(4 * H, batch);
  Matrix<T> zero = Matrix<T>::Zero(H, batch);
  Matrix<T> dz_all(4 * H, batch * n);
  Matrix<T> h_prev_all(H, batch * n);
  for (int t = n - 1; t >= 0; --t) {
    const Matrix<T>& g = cache.gates[t];
    const Matrix<T>& c_prev = t > 0 ? cache.c[t - 1] : zero;
    auto i = g.topRows(H).array();
    auto f = g.middleRows(H, H).array();
    auto gg = g.middleRows(2 * H, H).array();
    auto o = g.bottomRows(H).array();
    Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic> tc = cache.c[t].array().tanh();
    Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic> dca =
        dc.array() + dh.array() * o * (T(1) - tc * tc);
    dz.topRows(H) = (dca * gg * i * (T(1) - i)).matrix();
    dz.middleRows(H, H) = (dca * c_prev.array() * f * (T(1) - f)).matrix();
    dz.middleRows(2 * H, H) = (dca * i * (T(1) - gg * gg)).matrix();
    dz.bottomRows(H) = (dh.array() * tc * o * (T(1) - o)).matrix();
    dc = (dca * f).matrix();
    dz_all.middleCols(t * batch, batch) = dz;
    h_prev_all.middleCols(t * batch, batch) = t > 0 ? cache.h[t - 1] : zero;
    dh = w_hh_.value.transpose() * dz;
  }
  Matrix<T> x_all(input_size(), batch * n);
  for (int t = 0; t < n; ++t) x_all.middleCols(t * batch, batch) = cache.x[t];
  w_ih_.grad.noalias() += dz_all * x_all.transpose();
  w_hh_.grad.noalias() += dz_all * h_prev_all.transpose();
  b_.grad.col(0) += dz_all.rowwise().sum();
}

template class Linear<float>;
template class Linear<double>;
template class Mlp<float>;
template class Mlp<double>;
template class Lstm<float>;
template class Lstm<double>;

}  // namespace douzero::nn
