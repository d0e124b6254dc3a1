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

#ifndef DOUZERO_NN_QNETWORK_H_
#define DOUZERO_NN_QNETWORK_H_

#include <random>
#include <string>
#include <vector>

#include "douzero/features/encoding.h"
#include "douzero/nn/layers.h"

namespace douzero::nn {

struct QNetConfig {
  int state_size = features::kLandlordStateSize;
  int lstm_hidden = 128;
  std::vector<int> mlp_hidden = {512, 512, 512, 512, 512};

  friend bool operator==(const QNetConfig&, const QNetConfig&) = default;
};

// "full": LSTM 128, five hidden layers of 512. "desk": LSTM 64, four hidden
// layers of 128. Throws ConfigError for other names.
QNetConfig QNetPreset(const std::string& preset, int state_size);

// A batch of N action rows drawn from G states. Row n belongs to state
// group[n]; the history LSTM and the state half of layer 1 run once per
// group.
template <typename T>
struct QInput {
  std::vector<Matrix<T>> history;  // kHistoryRows matrices, kHistoryCols x G
  Matrix<T> state;                 // state_size x G
  Matrix<T> action;                // kCardVectorSize x N
  std::vector<int> group;          // N entries in [0, G)

  int groups() const { return static_cast<int>(state.cols()); }
  int rows() const { return static_cast<int>(action.cols()); }
};

// One state, many candidate actions.
QInput<float> MakeQInput(const features::StateFeatures& state,
                         const std::vector<features::CardVector>& actions);

// One group per row; used for learner batches.
template <typename T>
QInput<T> MakeRowInput(const std::vector<const features::ObservationFeatures*>& rows);

// LSTM over the move history, concatenated with state and action features,
// then an MLP to a scalar.
template <typename T>
class QNetwork {
 public:
  struct Cache {
    typename Lstm<T>::Cache lstm;
    typename Mlp<T>::Cache mlp;
    Matrix<T> hs;  // [h; state] per group
  };

  QNetwork() = default;
  QNetwork(const QNetConfig& config, const std::string& name);

  const QNetConfig& config() const { return config_; }
  const std::string& name() const { return name_; }

  void Init(uint64_t seed);

  // Returns a 1 x N row of values. Throws ShapeMismatch on bad input shapes.
  Matrix<T> Forward(const QInput<T>& in, Cache* cache) const;
  // Accumulates parameter gradients given dL/d(output).
  void Backward(const QInput<T>& in, const Cache& cache, const Matrix<T>& dout);

  ParamRefs<T> Params();
  void ZeroGrad();

  // Parameter-wise conversion, e.g. float <-> double for gradient checks.
  template <typename U>
  QNetwork<U> Cast() const;

 private:
  template <typename U>
  friend class QNetwork;

  void CheckShapes(const QInput<T>& in) const;

  QNetConfig config_;
  std::string name_;
  Lstm<T> lstm_;
  Mlp<T> mlp_;
};

// Convenience: values for each candidate action of one state.
std::vector<float> ForwardQ(const QNetwork<float>& net, const features::StateFeatures& state,
                            const std::vector<features::CardVector>& actions);

}  // namespace douzero::nn

#endif  // DOUZERO_NN_QNETWORK_H_
