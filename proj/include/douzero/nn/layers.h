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

#ifndef DOUZERO_NN_LAYERS_H_
#define DOUZERO_NN_LAYERS_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace douzero::nn {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

// A trainable tensor and its gradient accumulator (same shape).
template <typename T>
struct Param {
  std::string name;
  Matrix<T> value;
  Matrix<T> grad;

  void Resize(Eigen::Index rows, Eigen::Index cols) {
    value = Matrix<T>::Zero(rows, cols);
    grad = Matrix<T>::Zero(rows, cols);
  }
  void ZeroGrad() { grad.setZero(); }
};

template <typename T>
using ParamRefs = std::vector<Param<T>*>;

// Fully connected layer y = W x + b over column batches.
template <typename T>
class Linear {
 public:
  Linear() = default;
  Linear(int in, int out, const std::string& name);

  int in() const { return static_cast<int>(w_.value.cols()); }
  int out() const { return static_cast<int>(w_.value.rows()); }

  // Uniform(-1/sqrt(in), 1/sqrt(in)) weights and biases.
  void Init(std::mt19937_64& rng);

  Matrix<T> Forward(const Matrix<T>& x) const;
  // Accumulates parameter gradients and returns dL/dx.
  Matrix<T> Backward(const Matrix<T>& x, const Matrix<T>& dy);
  void AccumulateGrad(const Matrix<T>& x, const Matrix<T>& dy);

  Param<T>& weight() { return w_; }
  Param<T>& bias() { return b_; }
  const Param<T>& weight() const { return w_; }
  const Param<T>& bias() const { return b_; }
  void CollectParams(ParamRefs<T>& out) { out.push_back(&w_); out.push_back(&b_); }

 private:
  Param<T> w_;
  Param<T> b_;
};

// ReLU hidden layers followed by a linear scalar output.
template <typename T>
class Mlp {
 public:
  struct Cache {
    std::vector<Matrix<T>> inputs;  // input of each layer (post-activation)
  };

  Mlp() = default;
  Mlp(int in, const std::vector<int>& hidden, const std::string& name);

  void Init(std::mt19937_64& rng);
  int in() const { return layers_.front().in(); }
  std::vector<int> hidden() const;

  // `first_pre` optionally supplies a precomputed first-layer pre-activation
  // (used by the Q-network, which assembles layer 1 from shared parts).
  Matrix<T> Forward(const Matrix<T>& x, Cache* cache) const;
  Matrix<T> ForwardFromFirstPre(const Matrix<T>& first_pre, Cache* cache) const;
  // Returns dL/d(first layer pre-activation); parameter gradients of layers
  // 2..n are accumulated, layer 1 is left to the caller when `skip_first`.
  Matrix<T> Backward(const Cache& cache, const Matrix<T>& dout, bool skip_first,
                     Matrix<T>* dx);

  std::vector<Linear<T>>& layers() { return layers_; }
  const std::vector<Linear<T>>& layers() const { return layers_; }
  void CollectParams(ParamRefs<T>& out) {
    for (auto& l : layers_) l.CollectParams(out);
  }

 private:
  std::vector<Linear<T>> layers_;
};

// Single-layer LSTM returning the last hidden state. Gate order: input,
// forget, cell, output.
template <typename T>
class Lstm {
 public:
  struct Cache {
    std::vector<Matrix<T>> x;       // per step, input x batch
    std::vector<Matrix<T>> gates;   // per step, activated gates (4H x batch)
    std::vector<Matrix<T>> c;       // per step cell state
    std::vector<Matrix<T>> h;       // per step hidden state
  };

  Lstm() = default;
  Lstm(int input, int hidden, const std::string& name);

  int input_size() const { return static_cast<int>(w_ih_.value.cols()); }
  int hidden_size() const { return static_cast<int>(w_hh_.value.cols()); }

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)); forget-gate bias set to 1.
  void Init(std::mt19937_64& rng);

  // `steps[t]` is input_size x batch. Returns hidden_size x batch.
  Matrix<T> Forward(const std::vector<Matrix<T>>& steps, Cache* cache) const;
  // Backpropagates dL/dh_last through time, accumulating parameter grads.
  void Backward(const Cache& cache, const Matrix<T>& dh_last);

  void CollectParams(ParamRefs<T>& out) {
    out.push_back(&w_ih_);
    out.push_back(&w_hh_);
    out.push_back(&b_);
  }

 private:
  Param<T> w_ih_;
  Param<T> w_hh_;
  Param<T> b_;
};

}  // namespace douzero::nn

#endif  // DOUZERO_NN_LAYERS_H_
