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

// Federated target distributions pi(theta) ~ exp(-f(theta) / tau) with
// f = sum_c p_c f^c and f^c = (1 / p_c) * sum_i l(theta; x_{c,i}).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fald/linalg.hpp"
#include "fald/rng.hpp"

namespace fald {

struct DataPoint {
  Vector x;
  int label = -1;  // class index for labelled data, -1 otherwise

  friend bool operator==(const DataPoint&, const DataPoint&) = default;
};

// Per-client point sets. Weights are always n_c / n.
class FederatedDataset {
 public:
  // Validates that every client is non-empty and every point has the same
  // dimension; labelled must agree with the presence of labels.
  explicit FederatedDataset(std::vector<std::vector<DataPoint>> clients);

  std::size_t n_clients() const { return clients_.size(); }
  std::size_t dim() const { return dim_; }
  std::size_t total_points() const { return total_; }
  bool labeled() const { return labeled_; }
  bool balanced() const;

  std::span<const DataPoint> client(std::size_t c) const { return clients_.at(c); }
  const Vector& weights() const { return weights_; }
  double weight(std::size_t c) const { return weights_.at(c); }
  double min_weight() const;

  friend bool operator==(const FederatedDataset& a, const FederatedDataset& b) {
    return a.clients_ == b.clients_;
  }

 private:
  std::vector<std::vector<DataPoint>> clients_;
  Vector weights_;
  std::size_t dim_ = 0;
  std::size_t total_ = 0;
  bool labeled_ = false;
};

// Columns client_id,x_1..x_d[,label]; header row mandatory.
void WriteDatasetCsv(const FederatedDataset& data, std::ostream& out);
FederatedDataset ReadDatasetCsv(std::istream& in);

struct EnergyConstants {
  double L = 0.0;
  double m = 0.0;
  double kappa = 1.0;
  Vector theta_star;
  double gamma_het = 0.0;
  double sigma_sg = 0.0;
  double D = 0.0;
};

struct ConstantsOptions {
  double subsample_ratio = 1.0;  // q used by the stochastic gradients
  std::size_t probes = 20;
  std::size_t draws_per_probe = 400;
  double safety_factor = 1.5;
  std::uint64_t seed = 0x5eed;
};

class EnergyModel {
 public:
  virtual ~EnergyModel() = default;

  const FederatedDataset& data() const { return data_; }
  std::size_t n_clients() const { return data_.n_clients(); }
  double weight(std::size_t c) const { return data_.weight(c); }
  double tau() const { return tau_; }
  // Dimension of theta (equals the data dimension for the Gaussian model).
  virtual std::size_t dim() const = 0;

  // f^c(theta) up to an additive constant.
  virtual double ClientEnergy(std::size_t c, std::span<const double> theta) const = 0;
  double Energy(std::span<const double> theta) const;

  // grad f^c(theta) = (1 / p_c) * sum_i grad l(theta; x_{c,i}) (+ regularizer).
  void ClientGrad(std::size_t c, std::span<const double> theta,
                  std::span<double> out) const;
  Vector ClientGrad(std::size_t c, std::span<const double> theta) const;
  // sum_c p_c grad f^c(theta).
  Vector Grad(std::span<const double> theta) const;

  // Minibatch estimate from a uniform subset of floor(q * n_c) points
  // (at least one), scaled by n_c / (|S| p_c) so it stays unbiased.
  void ClientGradStochastic(std::size_t c, std::span<const double> theta,
                            double q, Stream& stream, std::span<double> out) const;

  virtual EnergyConstants Constants(double theta0_radius,
                                    const ConstantsOptions& opts) const = 0;

 protected:
  EnergyModel(FederatedDataset data, double tau);

  // out = sum_{i in idx} grad l(theta; x_{c,i}) (data term only).
  virtual void SumPointGrads(std::size_t c, std::span<const double> theta,
                             std::span<const std::size_t> idx,
                             std::span<double> out) const = 0;
  // out = sum over all of client c's points.
  virtual void SumAllPointGrads(std::size_t c, std::span<const double> theta,
                                std::span<double> out) const;
  // Adds the regularizer's gradient (per client); default none.
  virtual void AddRegularizerGrad(std::span<const double> theta,
                                  std::span<double> out) const;

  double EstimateSigma(const Vector& theta_star, double scale,
                       const ConstantsOptions& opts) const;

  FederatedDataset data_;
  double tau_;
};

class GaussianModel final : public EnergyModel {
 public:
  // l(theta; x) = 0.5 (theta - x)^T sigma^{-1} (theta - x).
  GaussianModel(FederatedDataset data, Matrix sigma, double tau);

  std::size_t dim() const override { return data_.dim(); }
  const Matrix& sigma() const { return sigma_; }
  const Matrix& precision() const { return precision_; }
  // Mean of all points.
  const Vector& pooled_mean() const { return pooled_mean_; }

  double ClientEnergy(std::size_t c, std::span<const double> theta) const override;
  EnergyConstants Constants(double theta0_radius,
                            const ConstantsOptions& opts) const override;

 protected:
  void SumPointGrads(std::size_t c, std::span<const double> theta,
                     std::span<const std::size_t> idx,
                     std::span<double> out) const override;
  void SumAllPointGrads(std::size_t c, std::span<const double> theta,
                        std::span<double> out) const override;

 private:
  Matrix sigma_;
  Matrix precision_;
  std::vector<Vector> client_sums_;
  Vector pooled_mean_;
};

// Multinomial logistic regression. theta is the row-major C x F weight matrix;
// f^c = (1 / p_c) * sum_i CE_i(theta) + (ridge / 2) ||theta||^2.
class LogisticModel final : public EnergyModel {
 public:
  LogisticModel(FederatedDataset data, std::size_t n_classes, double ridge,
                double tau, std::vector<DataPoint> test_set = {});

  std::size_t dim() const override { return n_classes_ * data_.dim(); }
  std::size_t n_classes() const { return n_classes_; }
  double ridge() const { return ridge_; }
  const std::vector<DataPoint>& test_set() const { return test_set_; }

  // Softmax class probabilities for features x.
  Vector PredictProba(std::span<const double> theta, std::span<const double> x) const;

  double ClientEnergy(std::size_t c, std::span<const double> theta) const override;
  // theta_star by damped Newton; throws kNumeric after 200 iterations.
  Vector Minimizer() const;
  EnergyConstants Constants(double theta0_radius,
                            const ConstantsOptions& opts) const override;

 protected:
  void SumPointGrads(std::size_t c, std::span<const double> theta,
                     std::span<const std::size_t> idx,
                     std::span<double> out) const override;
  void AddRegularizerGrad(std::span<const double> theta,
                          std::span<double> out) const override;

 private:
  void AccumulatePoint(const DataPoint& p, std::span<const double> theta,
                       std::span<double> out) const;

  std::size_t n_classes_;
  double ridge_;
  std::vector<DataPoint> test_set_;
};

struct GaussianSummary {
  Vector mean;
  Matrix cov;
};

// N(u, (tau / n) sigma). Throws kUnsupported for non-Gaussian models.
GaussianSummary TargetPosterior(const EnergyModel& model);

// Client centers ~ N(0, alpha I), points ~ N(center, sigma). Deterministic in
// seed. client_sizes, when given, overrides points_per_client per client.
std::unique_ptr<GaussianModel> GenerateGaussianFederation(
    std::size_t n_clients, double alpha, std::size_t points_per_client,
    const Matrix& sigma, double tau, std::uint64_t seed,
    std::span<const std::size_t> client_sizes = {});

struct LogisticDataOptions {
  std::size_t n_clients = 10;
  std::size_t points_per_client = 50;
  std::size_t features = 4;  // before the appended intercept column
  std::size_t classes = 3;
  double alpha = 0.0;        // variance of the per-client feature shift
  double class_separation = 2.0;
  std::size_t test_points = 500;
  double ridge = 1.0;
  double tau = 1.0;
  std::uint64_t seed = 0;
};

// Synthetic classification federation: class means ~ N(0, sep^2 I), client
// shift ~ N(0, alpha I), features ~ N(mean_y + shift_c, I), plus a constant
// intercept feature. The test set uses no client shift.
std::unique_ptr<LogisticModel> GenerateLogisticFederation(const LogisticDataOptions& opts);

// Rejects a covariance that is asymmetric or not positive definite; the
// message names the offending eigenvalue.
void ValidateSpd(const Matrix& sigma, const char* what);

}  // namespace fald
