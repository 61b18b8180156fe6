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

#include "fald/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fald/error.hpp"

namespace fald {

GaussianSummary EmpiricalSummary(std::span<const double> samples, std::size_t R, std::size_t d) {
  if (R < 2) Fail(ErrorCode::kInvalidArgument, "empirical summary needs R >= 2 samples");
  if (d == 0 || samples.size() != R * d) {
    Fail(ErrorCode::kInvalidArgument, "sample block does not match R x d");
  }
  GaussianSummary s{Vector(d, 0.0), Matrix(d, d)};
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += samples[r * d + j];
  for (double& v : s.mean) v /= static_cast<double>(R);
  Vector diff(d);
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t j = 0; j < d; ++j) diff[j] = samples[r * d + j] - s.mean[j];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) s.cov(i, j) += diff[i] * diff[j];
  }
  const double denom = static_cast<double>(R - 1);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      s.cov(i, j) /= denom;
      s.cov(j, i) = s.cov(i, j);
    }
  return s;
}

Matrix SymSqrt(const Matrix& m) {
  if (!m.square()) Fail(ErrorCode::kInvalidArgument, "square root needs a square matrix");
  if (Asymmetry(m) > 1e-10 * std::max(1.0, MaxAbs(m.data()))) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("matrix is not symmetric (max |a_ij - a_ji| = {})", Asymmetry(m)));
  }
  Matrix sym = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j) sym(i, j) = sym(j, i) = 0.5 * (m(i, j) + m(j, i));
  const EigenDecomposition eig = SymmetricEigen(sym);
  const std::size_t n = m.rows();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::sqrt(std::max(0.0, eig.values[k]));
    if (s == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += s * eig.vectors(i, k) * eig.vectors(j, k);
  }
  return out;
}

W2Breakdown W2GaussianBreakdown(const GaussianSummary& a, const GaussianSummary& b) {
  const std::size_t d = a.mean.size();
  if (b.mean.size() != d || a.cov.rows() != d || a.cov.cols() != d || b.cov.rows() != d ||
      b.cov.cols() != d) {
    Fail(ErrorCode::kInvalidArgument, "W2: dimension mismatch between the two Gaussians");
  }
  W2Breakdown out;
  double mean2 = 0.0;
  for (std::size_t j = 0; j < d; ++j) mean2 += (a.mean[j] - b.mean[j]) * (a.mean[j] - b.mean[j]);
  const Matrix rb = SymSqrt(b.cov);
  Matrix inner = rb * a.cov * rb;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < i; ++j) inner(i, j) = inner(j, i) = 0.5 * (inner(i, j) + inner(j, i));
  const double cross = SymSqrt(inner).trace();
  const double cov2 = std::max(0.0, a.cov.trace() + b.cov.trace() - 2.0 * cross);
  out.mean = std::sqrt(mean2);
  out.cov = std::sqrt(cov2);
  out.total = std::sqrt(mean2 + cov2);
  return out;
}

double W2Gaussian(const GaussianSummary& a, const GaussianSummary& b) {
  return W2GaussianBreakdown(a, b).total;
}

ClassificationScores ClassificationMetrics(std::span<const PredictiveRecord> records,
                                           std::size_t ece_bins) {
  if (records.empty()) Fail(ErrorCode::kInvalidArgument, "no predictive records");
  if (ece_bins < 1) Fail(ErrorCode::kInvalidArgument, "ece_bins must be >= 1");
  std::vector<double> bin_conf(ece_bins, 0.0), bin_hit(ece_bins, 0.0);
  std::vector<std::size_t> bin_n(ece_bins, 0);
  ClassificationScores s;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const PredictiveRecord& rec = records[r];
    const std::size_t C = rec.prob.size();
    if (C == 0 || rec.label < 0 || static_cast<std::size_t>(rec.label) >= C) {
      Fail(ErrorCode::kInvalidArgument, fmt::format("record {} has an invalid label", r));
    }
    double total = 0.0;
    for (double p : rec.prob) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        Fail(ErrorCode::kInvalidArgument, fmt::format("record {} has an invalid probability", r));
      }
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      Fail(ErrorCode::kInvalidArgument,
           fmt::format("record {} probabilities sum to {}, not 1", r, total));
    }
    // First maximum wins, so ties go to the lowest class index.
    const std::size_t pred = static_cast<std::size_t>(
        std::max_element(rec.prob.begin(), rec.prob.end()) - rec.prob.begin());
    const double conf = rec.prob[pred];
    const bool hit = pred == static_cast<std::size_t>(rec.label);
    s.accuracy += hit ? 1.0 : 0.0;
    for (std::size_t k = 0; k < C; ++k) {
      const double e = rec.prob[k] - (k == static_cast<std::size_t>(rec.label) ? 1.0 : 0.0);
      s.brier += e * e;
    }
    const std::size_t bin =
        std::min(ece_bins - 1, static_cast<std::size_t>(conf * static_cast<double>(ece_bins)));
    bin_conf[bin] += conf;
    bin_hit[bin] += hit ? 1.0 : 0.0;
    ++bin_n[bin];
  }
  const double n = static_cast<double>(records.size());
  s.accuracy /= n;
  s.brier /= n;
  for (std::size_t b = 0; b < ece_bins; ++b) {
    if (bin_n[b] == 0) continue;
    const double nb = static_cast<double>(bin_n[b]);
    s.ece += (nb / n) * std::abs(bin_conf[b] / nb - bin_hit[b] / nb);
  }
  return s;
}

void PredictiveAverager::Add(const Matrix& probs) {
  if (count_ == 0) {
    mean_ = probs;
  } else {
    if (probs.rows() != mean_.rows() || probs.cols() != mean_.cols()) {
      Fail(ErrorCode::kInvalidArgument,
           fmt::format("probability matrix shape changed from {}x{} to {}x{}", mean_.rows(),
                       mean_.cols(), probs.rows(), probs.cols()));
    }
    const double w = 1.0 / static_cast<double>(count_ + 1);
    auto dst = mean_.data();
    const auto src = probs.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += w * (src[i] - dst[i]);
  }
  ++count_;
}

std::vector<PredictiveRecord> PredictiveAverager::Records(std::span<const int> labels) const {
  if (count_ == 0) Fail(ErrorCode::kInvalidArgument, "no samples collected");
  if (labels.size() != mean_.rows()) {
    Fail(ErrorCode::kInvalidArgument, "label count does not match the probability rows");
  }
  std::vector<PredictiveRecord> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto row = mean_.row(i);
    out[i].prob.assign(row.begin(), row.end());
    out[i].label = labels[i];
  }
  return out;
}

}  // namespace fald
