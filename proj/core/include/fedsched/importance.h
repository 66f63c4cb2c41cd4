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

#ifndef FEDSCHED_IMPORTANCE_H_
#define FEDSCHED_IMPORTANCE_H_

#include <span>
#include <string>
#include <vector>

namespace fedsched {

// Mean-centred, mean-normalised label histogram: v_i = (l_i - mean) / mean.
// Entries sum to zero.
struct FeatureVector {
  std::vector<double> values;
};

// Throws EmptySetError when the histogram has zero mass.
FeatureVector feature_vector(std::span<const double> hist);

// ||x - y||^2 / (||x||^2 + ||y||^2), in [0, 2]. Zero when both vectors are
// zero. Throws DimensionMismatchError on length mismatch.
double dissimilarity(const FeatureVector& x, const FeatureVector& y);

enum class ImportanceVariant { kCombined, kAmountOnly, kDistributionOnly };

std::string to_string(ImportanceVariant v);

// Everything needed to score the candidate (feasible) devices of a round.
// Per-candidate vectors are aligned with `candidates`.
struct ImportanceInputs {
  int round = 1;
  std::vector<int> candidates;
  std::vector<double> new_counts;
  std::vector<std::vector<double>> new_histograms;
  // Label histogram of the data already folded into the global model; all
  // zeros (or empty) when nothing has been utilised yet.
  std::vector<double> utilized_histogram;
};

struct ImportanceTerms {
  // |candidates| * |B_k| / sum_j |B_j|; zero for everyone when no candidate
  // has new data.
  double amount = 0.0;
  // 1{round > 1} * dissimilarity(x, y_k); zero when either the utilised set
  // or the device's new data is empty.
  double distribution = 0.0;
};

std::vector<ImportanceTerms> importance_terms(const ImportanceInputs& in);

// Per-candidate importance for the chosen variant, aligned with
// in.candidates.
std::vector<double> importance(const ImportanceInputs& in,
                               ImportanceVariant variant);

}  // namespace fedsched

#endif  // FEDSCHED_IMPORTANCE_H_
