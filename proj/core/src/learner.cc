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

#include "fedsched/learner.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fedsched/errors.h"

namespace fedsched {
namespace {

struct Dims {
  std::size_t d, c, h;
};

Dims dims_of(const ModelArch& a) {
  return {static_cast<std::size_t>(a.input_dim),
          static_cast<std::size_t>(a.num_classes),
          static_cast<std::size_t>(a.hidden)};
}

void check_params(const ModelArch& arch, std::span<const double> params) {
  if (params.size() != arch.param_count()) {
    throw DimensionMismatchError("parameter vector does not match model arch");
  }
}

void check_features(const ModelArch& arch, std::span<const float> x) {
  if (x.size() != static_cast<std::size_t>(arch.input_dim)) {
    throw DimensionMismatchError("sample feature length does not match model");
  }
}

// Numerically stable log-softmax in place; returns log-sum-exp.
double log_softmax(std::vector<double>& z) {
  const double mx = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - mx);
  const double lse = mx + std::log(sum);
  for (double& v : z) v -= lse;
  return lse;
}

// Affine layer out = W x + b, W[rows x cols] row-major at w, b at w + rows*cols.
template <typename In>
void affine(const double* w, std::size_t rows, std::size_t cols,
            std::span<const In> x, std::vector<double>& out) {
  out.assign(rows, 0.0);
  const double* b = w + rows * cols;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = w + r * cols;
    double acc = b[r];
    for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
    out[r] = acc;
  }
}

}  // namespace

std::size_t ModelArch::param_count() const {
  const auto [d, c, h] = dims_of(*this);
  if (kind == LearnerArch::kSoftmax) return c * d + c;
  return h * d + h + c * h + c;
}

GlobalModel init_model(const ModelArch& arch, Rng& rng) {
  if (arch.input_dim < 1 || arch.num_classes < 2 ||
      (arch.kind == LearnerArch::kMlp && arch.hidden < 1)) {
    throw std::invalid_argument("init_model: bad architecture");
  }
  GlobalModel m{arch, std::vector<double>(arch.param_count(), 0.0)};
  if (arch.kind == LearnerArch::kMlp) {
    const auto [d, c, h] = dims_of(arch);
    const double a1 = std::sqrt(6.0 / static_cast<double>(d + h));
    for (std::size_t i = 0; i < h * d; ++i) m.params[i] = rng.uniform(-a1, a1);
    const std::size_t w2 = h * d + h;
    const double a2 = std::sqrt(6.0 / static_cast<double>(h + c));
    for (std::size_t i = 0; i < c * h; ++i) {
      m.params[w2 + i] = rng.uniform(-a2, a2);
    }
  }
  return m;
}

std::vector<double> logits(const ModelArch& arch,
                           std::span<const double> params,
                           std::span<const float> features) {
  check_params(arch, params);
  check_features(arch, features);
  const auto [d, c, h] = dims_of(arch);
  std::vector<double> z;
  if (arch.kind == LearnerArch::kSoftmax) {
    affine(params.data(), c, d, features, z);
    return z;
  }
  std::vector<double> hidden;
  affine(params.data(), h, d, features, hidden);
  for (double& v : hidden) v = std::tanh(v);
  affine<double>(params.data() + h * d + h, c, h, hidden, z);
  return z;
}

double loss_and_gradient(const ModelArch& arch, std::span<const double> params,
                         std::span<const Sample* const> batch,
                         std::span<double> grad) {
  check_params(arch, params);
  if (grad.size() != params.size()) {
    throw DimensionMismatchError("gradient buffer does not match params");
  }
  if (batch.empty()) throw EmptyDatasetError("loss_and_gradient: empty batch");
  std::fill(grad.begin(), grad.end(), 0.0);
  const auto [d, c, h] = dims_of(arch);
  const double scale = 1.0 / static_cast<double>(batch.size());

  double loss = 0.0;
  std::vector<double> z, hidden, dz(c), dh(h);
  for (const Sample* s : batch) {
    const std::span<const float> x = s->features;
    check_features(arch, x);
    if (arch.kind == LearnerArch::kSoftmax) {
      affine(params.data(), c, d, x, z);
    } else {
      affine(params.data(), h, d, x, hidden);
      for (double& v : hidden) v = std::tanh(v);
      affine<double>(params.data() + h * d + h, c, h, hidden, z);
    }
    log_softmax(z);
    const auto y = static_cast<std::size_t>(s->label);
    loss -= z[y];
    for (std::size_t k = 0; k < c; ++k) {
      dz[k] = (std::exp(z[k]) - (k == y ? 1.0 : 0.0)) * scale;
    }

    if (arch.kind == LearnerArch::kSoftmax) {
      double* gw = grad.data();
      double* gb = gw + c * d;
      for (std::size_t k = 0; k < c; ++k) {
        double* row = gw + k * d;
        for (std::size_t j = 0; j < d; ++j) row[j] += dz[k] * x[j];
        gb[k] += dz[k];
      }
      continue;
    }

    const double* w2 = params.data() + h * d + h;
    double* gw1 = grad.data();
    double* gb1 = gw1 + h * d;
    double* gw2 = gb1 + h;
    double* gb2 = gw2 + c * h;
    std::fill(dh.begin(), dh.end(), 0.0);
    for (std::size_t k = 0; k < c; ++k) {
      for (std::size_t j = 0; j < h; ++j) {
        gw2[k * h + j] += dz[k] * hidden[j];
        dh[j] += dz[k] * w2[k * h + j];
      }
      gb2[k] += dz[k];
    }
    for (std::size_t j = 0; j < h; ++j) {
      const double da = dh[j] * (1.0 - hidden[j] * hidden[j]);
      double* row = gw1 + j * d;
      for (std::size_t i = 0; i < d; ++i) row[i] += da * x[i];
      gb1[j] += da;
    }
  }
  return loss * scale;
}

LocalUpdate local_train(const GlobalModel& model, std::span<const Sample> data,
                        const SgdConfig& sgd, Rng& rng) {
  if (data.empty()) throw EmptyDatasetError("local_train: no local data");
  std::vector<double> params = model.params;
  std::vector<double> grad(params.size());
  std::vector<const Sample*> batch(static_cast<std::size_t>(sgd.batch_size));
  for (int step = 0; step < sgd.local_steps; ++step) {
    for (auto& p : batch) p = &data[rng.uniform_index(data.size())];
    loss_and_gradient(model.arch, params, batch, grad);
    for (std::size_t i = 0; i < params.size(); ++i) {
      params[i] -= sgd.learning_rate * grad[i];
    }
  }
  LocalUpdate u;
  u.data_size = data.size();
  u.delta.resize(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    u.delta[i] = params[i] - model.params[i];
  }
  return u;
}

GlobalModel aggregate(const GlobalModel& model,
                      std::span<const LocalUpdate> updates) {
  GlobalModel out = model;
  double total = 0.0;
  for (const auto& u : updates) {
    if (u.delta.size() != model.params.size()) {
      throw DimensionMismatchError("aggregate: update length mismatch");
    }
    if (u.data_size == 0) {
      throw std::invalid_argument("aggregate: update with empty dataset");
    }
    total += static_cast<double>(u.data_size);
  }
  for (const auto& u : updates) {
    const double w = static_cast<double>(u.data_size) / total;
    for (std::size_t i = 0; i < out.params.size(); ++i) {
      out.params[i] += w * u.delta[i];
    }
  }
  return out;
}

Evaluation evaluate(const GlobalModel& model, std::span<const Sample> data) {
  if (data.empty()) throw EmptyDatasetError("evaluate: empty evaluation set");
  double loss = 0.0;
  std::size_t correct = 0;
  for (const auto& s : data) {
    auto z = logits(model.arch, model.params, s.features);
    log_softmax(z);
    const auto best = static_cast<std::size_t>(
        std::max_element(z.begin(), z.end()) - z.begin());
    if (best == static_cast<std::size_t>(s.label)) ++correct;
    loss -= z[static_cast<std::size_t>(s.label)];
  }
  const double n = static_cast<double>(data.size());
  return {loss / n, static_cast<double>(correct) / n};
}

}  // namespace fedsched
