/*
 * Copyright 2026 The fald Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Gaussian 2-Wasserstein distance, replication summaries and the
// classification metric suite.

#include <cstddef>
#include <span>
#include <vector>

#include "fald/linalg.hpp"
#include "fald/model.hpp"

namespace fald {

// samples is R x d row-major. Covariance uses the R - 1 divisor.
GaussianSummary EmpiricalSummary(std::span<const double> samples, std::size_t R, std::size_t d);

// Principal square root of a symmetric PSD matrix; negative eigenvalues are
// clamped to zero. Throws on asymmetry beyond 1e-10 (relative).
Matrix SymSqrt(const Matrix& m);

struct W2Breakdown {
  double total = 0.0;
  double mean = 0.0;  // |mu_a - mu_b|
  double cov = 0.0;   // sqrt of the Bures trace term
};

// W2^2 = |mu_a - mu_b|^2 + tr(A + B - 2 (B^1/2 A B^1/2)^1/2).
W2Breakdown W2GaussianBreakdown(const GaussianSummary& a, const GaussianSummary& b);
double W2Gaussian(const GaussianSummary& a, const GaussianSummary& b);

struct PredictiveRecord {
  Vector prob;
  int label = 0;
};

struct ClassificationScores {
  double accuracy = 0.0;
  double brier = 0.0;  // multiclass sum of squares, in [0, 2]
  double ece = 0.0;
};

ClassificationScores ClassificationMetrics(std::span<const PredictiveRecord> records,
                                           std::size_t ece_bins = 10);

// Running mean of per-sample probability matrices (test points x classes).
class PredictiveAverager {
 public:
  void Add(const Matrix& probs);
  std::size_t count() const { return count_; }
  const Matrix& mean() const { return mean_; }
  std::vector<PredictiveRecord> Records(std::span<const int> labels) const;

 private:
  Matrix mean_;
  std::size_t count_ = 0;
};

}  // namespace fald
