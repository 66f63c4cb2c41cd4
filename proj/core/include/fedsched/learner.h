// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDSCHED_LEARNER_H_
#define FEDSCHED_LEARNER_H_

#include <cstddef>
#include <span>
#include <vector>

#include "fedsched/config.h"
#include "fedsched/rng.h"
#include "fedsched/streaming.h"

namespace fedsched {

// Shape of the shared classifier. Parameters are one flat vector:
//   softmax: W[C x D] row-major, then b[C].
//   mlp:     W1[H x D], b1[H], W2[C x H], b2[C]; tanh hidden units.
struct ModelArch {
  LearnerArch kind = LearnerArch::kSoftmax;
  int input_dim = 0;
  int num_classes = 0;
  int hidden = 0;

  std::size_t param_count() const;

  static ModelArch Softmax(int input_dim, int num_classes) {
    return {LearnerArch::kSoftmax, input_dim, num_classes, 0};
  }
  static ModelArch Mlp(int input_dim, int hidden, int num_classes) {
    return {LearnerArch::kMlp, input_dim, num_classes, hidden};
  }
};

struct GlobalModel {
  ModelArch arch;
  std::vector<double> params;

  std::size_t dim() const { return params.size(); }
};

struct LocalUpdate {
  std::vector<double> delta;
  std::size_t data_size = 0;
};

struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;
};

// Softmax starts at zero; the MLP gets Glorot-uniform weights and zero
// biases.
GlobalModel init_model(const ModelArch& arch, Rng& rng);

// Class scores for one sample.
std::vector<double> logits(const ModelArch& arch,
                           std::span<const double> params,
                           std::span<const float> features);

// Mean cross-entropy over the batch; writes its gradient into grad (same
// length as params, overwritten).
double loss_and_gradient(const ModelArch& arch, std::span<const double> params,
                         std::span<const Sample* const> batch,
                         std::span<double> grad);

// local_steps SGD steps on mini-batches drawn uniformly with replacement
// from data. Returns theta_after - theta_before; the model is untouched.
// Throws EmptyDatasetError on empty data.
LocalUpdate local_train(const GlobalModel& model, std::span<const Sample> data,
                        const SgdConfig& sgd, Rng& rng);

// theta + sum_k w_k * delta_k with w_k = data_size_k / sum_j data_size_j.
// An empty update list returns the model unchanged. Throws
// DimensionMismatchError on a length mismatch.
GlobalModel aggregate(const GlobalModel& model,
                      std::span<const LocalUpdate> updates);

// Mean cross-entropy and top-1 accuracy. Throws EmptyDatasetError.
Evaluation evaluate(const GlobalModel& model, std::span<const Sample> data);

}  // namespace fedsched

#endif  // FEDSCHED_LEARNER_H_
