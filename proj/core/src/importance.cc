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

#include "fedsched/importance.h"

#include <numeric>

#include "fedsched/errors.h"

namespace fedsched {

FeatureVector feature_vector(std::span<const double> hist) {
  const double total = std::accumulate(hist.begin(), hist.end(), 0.0);
  if (hist.empty() || !(total > 0.0)) {
    throw EmptySetError("feature_vector: histogram has no mass");
  }
  const double mean = total / static_cast<double>(hist.size());
  FeatureVector v;
  v.values.reserve(hist.size());
  for (double l : hist) v.values.push_back((l - mean) / mean);
  return v;
}

double dissimilarity(const FeatureVector& x, const FeatureVector& y) {
  if (x.values.size() != y.values.size()) {
    throw DimensionMismatchError("dissimilarity: feature lengths differ");
  }
  double diff = 0.0;
  double norms = 0.0;
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    const double d = x.values[i] - y.values[i];
    diff += d * d;
    norms += x.values[i] * x.values[i] + y.values[i] * y.values[i];
  }
  if (norms == 0.0) return 0.0;
  return diff / norms;
}

std::string to_string(ImportanceVariant v) {
  switch (v) {
    case ImportanceVariant::kAmountOnly:
      return "amount_only";
    case ImportanceVariant::kDistributionOnly:
      return "distribution_only";
    case ImportanceVariant::kCombined:
      break;
  }
  return "combined";
}

std::vector<ImportanceTerms> importance_terms(const ImportanceInputs& in) {
  const std::size_t n = in.candidates.size();
  if (in.new_counts.size() != n || in.new_histograms.size() != n) {
    throw DimensionMismatchError(
        "importance: per-candidate inputs must align with candidates");
  }
  std::vector<ImportanceTerms> out(n);

  const double total_new =
      std::accumulate(in.new_counts.begin(), in.new_counts.end(), 0.0);
  if (total_new > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i].amount = static_cast<double>(n) * in.new_counts[i] / total_new;
    }
  }

  const double utilized_mass = std::accumulate(
      in.utilized_histogram.begin(), in.utilized_histogram.end(), 0.0);
  if (in.round > 1 && utilized_mass > 0.0) {
    const FeatureVector x = feature_vector(in.utilized_histogram);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& h = in.new_histograms[i];
      if (std::accumulate(h.begin(), h.end(), 0.0) > 0.0) {
        out[i].distribution = dissimilarity(x, feature_vector(h));
      }
    }
  }
  return out;
}

std::vector<double> importance(const ImportanceInputs& in,
                               ImportanceVariant variant) {
  const auto terms = importance_terms(in);
  std::vector<double> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    switch (variant) {
      case ImportanceVariant::kCombined:
        out.push_back(t.amount + t.distribution);
        break;
      case ImportanceVariant::kAmountOnly:
        out.push_back(t.amount);
        break;
      case ImportanceVariant::kDistributionOnly:
        out.push_back(t.distribution);
        break;
    }
  }
  return out;
}

}  // namespace fedsched
