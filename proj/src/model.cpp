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

#include "fald/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "fald/csv.hpp"
#include "fald/error.hpp"

namespace fald {

// ---------------------------------------------------------------------------
// FederatedDataset

FederatedDataset::FederatedDataset(std::vector<std::vector<DataPoint>> clients)
    : clients_(std::move(clients)) {
  if (clients_.empty()) Fail(ErrorCode::kInvalidArgument, "dataset has no clients");
  bool first = true;
  for (std::size_t c = 0; c < clients_.size(); ++c) {
    if (clients_[c].empty()) {
      Fail(ErrorCode::kInvalidArgument, fmt::format("client {} has no points", c));
    }
    for (const DataPoint& p : clients_[c]) {
      if (first) {
        dim_ = p.x.size();
        labeled_ = p.label >= 0;
        first = false;
        if (dim_ == 0) Fail(ErrorCode::kInvalidArgument, "points have dimension 0");
      }
      if (p.x.size() != dim_) {
        Fail(ErrorCode::kInvalidArgument,
             fmt::format("client {} has a point of dimension {}, expected {}", c,
                         p.x.size(), dim_));
      }
      if ((p.label >= 0) != labeled_) {
        Fail(ErrorCode::kInvalidArgument, "dataset mixes labelled and unlabelled points");
      }
      if (!AllFinite(p.x)) {
        Fail(ErrorCode::kInvalidArgument, fmt::format("client {} has a non-finite point", c));
      }
    }
    total_ += clients_[c].size();
  }
  weights_.resize(clients_.size());
  for (std::size_t c = 0; c < clients_.size(); ++c) {
    weights_[c] = static_cast<double>(clients_[c].size()) / static_cast<double>(total_);
  }
}

bool FederatedDataset::balanced() const {
  return std::all_of(clients_.begin(), clients_.end(), [&](const auto& cl) {
    return cl.size() == clients_.front().size();
  });
}

double FederatedDataset::min_weight() const {
  return *std::min_element(weights_.begin(), weights_.end());
}

void WriteDatasetCsv(const FederatedDataset& data, std::ostream& out) {
  out << "client_id";
  for (std::size_t j = 0; j < data.dim(); ++j) out << ",x_" << (j + 1);
  if (data.labeled()) out << ",label";
  out << '\n';
  for (std::size_t c = 0; c < data.n_clients(); ++c) {
    for (const DataPoint& p : data.client(c)) {
      out << c;
      for (double v : p.x) out << ',' << FormatDouble(v);
      if (data.labeled()) out << ',' << p.label;
      out << '\n';
    }
  }
}

FederatedDataset ReadDatasetCsv(std::istream& in) {
  const CsvTable table = ReadCsv(in);
  const auto& h = table.header;
  if (h.size() < 2 || h[0] != "client_id") {
    Fail(ErrorCode::kInvalidArgument, "dataset csv must start with a client_id column");
  }
  const bool labeled = h.back() == "label";
  const std::size_t dim = h.size() - 1 - (labeled ? 1 : 0);
  for (std::size_t j = 0; j < dim; ++j) {
    if (h[j + 1] != fmt::format("x_{}", j + 1)) {
      Fail(ErrorCode::kInvalidArgument,
           fmt::format("dataset csv column {} is '{}', expected x_{}", j + 2, h[j + 1], j + 1));
    }
  }
  std::map<long long, std::vector<DataPoint>> by_client;
  for (const auto& row : table.rows) {
    const long long id = ParseInteger(row[0]);
    if (id < 0) Fail(ErrorCode::kInvalidArgument, "negative client_id in dataset csv");
    DataPoint p;
    p.x.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) p.x[j] = ParseDouble(row[j + 1]);
    if (labeled) {
      const long long label = ParseInteger(row.back());
      if (label < 0) Fail(ErrorCode::kInvalidArgument, "negative label in dataset csv");
      p.label = static_cast<int>(label);
    }
    by_client[id].push_back(std::move(p));
  }
  if (by_client.empty()) Fail(ErrorCode::kInvalidArgument, "dataset csv has no rows");
  const auto n_clients = static_cast<std::size_t>(by_client.rbegin()->first + 1);
  if (by_client.size() != n_clients) {
    Fail(ErrorCode::kInvalidArgument, "dataset csv client ids are not contiguous from 0");
  }
  std::vector<std::vector<DataPoint>> clients;
  clients.reserve(n_clients);
  for (auto& [id, pts] : by_client) clients.push_back(std::move(pts));
  return FederatedDataset(std::move(clients));
}

// ---------------------------------------------------------------------------
// EnergyModel

EnergyModel::EnergyModel(FederatedDataset data, double tau)
    : data_(std::move(data)), tau_(tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    Fail(ErrorCode::kInvalidArgument, fmt::format("temperature must be > 0, got {}", tau));
  }
}

double EnergyModel::Energy(std::span<const double> theta) const {
  double f = 0.0;
  for (std::size_t c = 0; c < n_clients(); ++c) f += weight(c) * ClientEnergy(c, theta);
  return f;
}

void EnergyModel::SumAllPointGrads(std::size_t c, std::span<const double> theta,
                                   std::span<double> out) const {
  std::vector<std::size_t> idx(data_.client(c).size());
  std::iota(idx.begin(), idx.end(), 0);
  SumPointGrads(c, theta, idx, out);
}

void EnergyModel::AddRegularizerGrad(std::span<const double>, std::span<double>) const {}

void EnergyModel::ClientGrad(std::size_t c, std::span<const double> theta,
                             std::span<double> out) const {
  if (c >= n_clients()) {
    Fail(ErrorCode::kInvalidArgument, fmt::format("client index {} out of range", c));
  }
  if (theta.size() != dim() || out.size() != dim()) {
    Fail(ErrorCode::kInvalidArgument, "gradient dimension mismatch");
  }
  if (!AllFinite(theta)) Fail(ErrorCode::kNumeric, "non-finite theta passed to client gradient");
  SumAllPointGrads(c, theta, out);
  const double scale = 1.0 / weight(c);
  for (double& v : out) v *= scale;
  AddRegularizerGrad(theta, out);
}

Vector EnergyModel::ClientGrad(std::size_t c, std::span<const double> theta) const {
  Vector g(dim());
  ClientGrad(c, theta, g);
  return g;
}

Vector EnergyModel::Grad(std::span<const double> theta) const {
  Vector total(dim(), 0.0), g(dim());
  for (std::size_t c = 0; c < n_clients(); ++c) {
    ClientGrad(c, theta, g);
    for (std::size_t j = 0; j < g.size(); ++j) total[j] += weight(c) * g[j];
  }
  return total;
}

void EnergyModel::ClientGradStochastic(std::size_t c, std::span<const double> theta,
                                       double q, Stream& stream,
                                       std::span<double> out) const {
  if (!(q > 0.0 && q <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, fmt::format("subsample ratio must be in (0, 1], got {}", q));
  }
  if (q == 1.0) {
    ClientGrad(c, theta, out);
    return;
  }
  if (c >= n_clients()) {
    Fail(ErrorCode::kInvalidArgument, fmt::format("client index {} out of range", c));
  }
  if (!AllFinite(theta)) Fail(ErrorCode::kNumeric, "non-finite theta passed to client gradient");
  const std::size_t n_c = data_.client(c).size();
  const std::size_t batch =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(q * static_cast<double>(n_c))));
  // Partial Fisher-Yates: the first `batch` entries form a uniform subset.
  thread_local std::vector<std::size_t> idx;
  idx.resize(n_c);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < batch; ++i) {
    const std::size_t j = i + stream.NextBelow(n_c - i);
    std::swap(idx[i], idx[j]);
  }
  SumPointGrads(c, theta, std::span<const std::size_t>(idx.data(), batch), out);
  const double scale =
      static_cast<double>(n_c) / (static_cast<double>(batch) * weight(c));
  for (double& v : out) v *= scale;
  AddRegularizerGrad(theta, out);
}

double EnergyModel::EstimateSigma(const Vector& theta_star, double scale,
                                  const ConstantsOptions& opts) const {
  if (opts.subsample_ratio >= 1.0) return 0.0;
  const std::size_t d = dim();
  double worst = 0.0;
  Vector theta(d), exact(d), noisy(d);
  for (std::size_t probe = 0; probe < opts.probes; ++probe) {
    Stream where = DeriveStream(opts.seed, probe, 0, kSharedClient, Purpose::kProbe);
    for (std::size_t j = 0; j < d; ++j) {
      theta[j] = theta_star[j] + (probe == 0 ? 0.0 : scale * where.NextNormal());
    }
    for (std::size_t c = 0; c < n_clients(); ++c) {
      ClientGrad(c, theta, exact);
      double acc = 0.0;
      for (std::size_t draw = 0; draw < opts.draws_per_probe; ++draw) {
        Stream s = DeriveStream(opts.seed, probe, draw, static_cast<std::uint32_t>(c),
                                Purpose::kGradient);
        ClientGradStochastic(c, theta, opts.subsample_ratio, s, noisy);
        for (std::size_t j = 0; j < d; ++j) {
          const double e = noisy[j] - exact[j];
          acc += e * e;
        }
      }
      worst = std::max(worst, acc / static_cast<double>(opts.draws_per_probe) /
                                  static_cast<double>(d));
    }
  }
  return std::sqrt(opts.safety_factor * worst);
}

// ---------------------------------------------------------------------------
// GaussianModel

void ValidateSpd(const Matrix& sigma, const char* what) {
  if (!sigma.square() || sigma.rows() == 0) {
    Fail(ErrorCode::kInvalidArgument, fmt::format("{} must be a non-empty square matrix", what));
  }
  if (!AllFinite(sigma.data())) {
    Fail(ErrorCode::kInvalidArgument, fmt::format("{} has non-finite entries", what));
  }
  if (Asymmetry(sigma) > 1e-12 * std::max(1.0, MaxAbs(sigma.data()))) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("{} is not symmetric (max |a_ij - a_ji| = {})", what, Asymmetry(sigma)));
  }
  const EigenDecomposition eig = SymmetricEigen(sigma);
  const double top = std::abs(eig.values.back());
  for (std::size_t j = 0; j < eig.values.size(); ++j) {
    if (!(eig.values[j] > 1e-12 * std::max(1.0, top))) {
      Fail(ErrorCode::kInvalidArgument,
           fmt::format("{} is not positive definite: eigenvalue {} = {}", what, j,
                       FormatDouble(eig.values[j])));
    }
  }
}

GaussianModel::GaussianModel(FederatedDataset data, Matrix sigma, double tau)
    : EnergyModel(std::move(data), tau), sigma_(std::move(sigma)) {
  if (sigma_.rows() != data_.dim()) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("sigma is {}x{} but data has dimension {}", sigma_.rows(),
                     sigma_.cols(), data_.dim()));
  }
  ValidateSpd(sigma_, "sigma");
  precision_ = InverseSpd(sigma_);
  const std::size_t d = data_.dim();
  pooled_mean_.assign(d, 0.0);
  client_sums_.assign(n_clients(), Vector(d, 0.0));
  for (std::size_t c = 0; c < n_clients(); ++c) {
    for (const DataPoint& p : data_.client(c))
      for (std::size_t j = 0; j < d; ++j) client_sums_[c][j] += p.x[j];
    for (std::size_t j = 0; j < d; ++j) pooled_mean_[j] += client_sums_[c][j];
  }
  for (double& v : pooled_mean_) v /= static_cast<double>(data_.total_points());
}

double GaussianModel::ClientEnergy(std::size_t c, std::span<const double> theta) const {
  const std::size_t d = dim();
  Vector diff(d);
  double sum = 0.0;
  for (const DataPoint& p : data_.client(c)) {
    for (std::size_t j = 0; j < d; ++j) diff[j] = theta[j] - p.x[j];
    sum += 0.5 * Dot(diff, precision_ * std::span<const double>(diff));
  }
  return sum / weight(c);
}

void GaussianModel::SumPointGrads(std::size_t c, std::span<const double> theta,
                                  std::span<const std::size_t> idx,
                                  std::span<double> out) const {
  const std::size_t d = dim();
  const auto pts = data_.client(c);
  thread_local Vector resid;
  resid.assign(d, 0.0);
  for (std::size_t i : idx)
    for (std::size_t j = 0; j < d; ++j) resid[j] += theta[j] - pts[i].x[j];
  for (std::size_t i = 0; i < d; ++i) out[i] = Dot(precision_.row(i), resid);
}

void GaussianModel::SumAllPointGrads(std::size_t c, std::span<const double> theta,
                                     std::span<double> out) const {
  const std::size_t d = dim();
  const double n_c = static_cast<double>(data_.client(c).size());
  const Vector& sum = client_sums_[c];
  if (d == 2) {
    const double r0 = n_c * theta[0] - sum[0];
    const double r1 = n_c * theta[1] - sum[1];
    out[0] = precision_(0, 0) * r0 + precision_(0, 1) * r1;
    out[1] = precision_(1, 0) * r0 + precision_(1, 1) * r1;
    return;
  }
  thread_local Vector resid;
  resid.resize(d);
  for (std::size_t j = 0; j < d; ++j) resid[j] = n_c * theta[j] - sum[j];
  for (std::size_t i = 0; i < d; ++i) out[i] = Dot(precision_.row(i), resid);
}

EnergyConstants GaussianModel::Constants(double theta0_radius,
                                         const ConstantsOptions& opts) const {
  if (!(theta0_radius >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "initialization radius must be >= 0");
  }
  const EigenDecomposition eig = SymmetricEigen(precision_);
  if (!(eig.values.front() > 1e-12 * eig.values.back())) {
    Fail(ErrorCode::kNumeric, "data covariance is singular");
  }
  const double n = static_cast<double>(data_.total_points());
  EnergyConstants k;
  k.L = n * eig.values.back();
  k.m = n * eig.values.front();
  k.kappa = k.L / k.m;
  k.theta_star = pooled_mean_;
  Vector g(dim());
  for (std::size_t c = 0; c < n_clients(); ++c) {
    ClientGrad(c, k.theta_star, g);
    k.gamma_het = std::max(k.gamma_het, Norm2(g));
  }
  // Probe spread: one posterior standard deviation along the widest axis.
  const double spread = std::sqrt(tau_ / k.m);
  k.sigma_sg = EstimateSigma(k.theta_star, spread, opts);
  k.D = theta0_radius / std::sqrt(static_cast<double>(dim()));
  return k;
}

// ---------------------------------------------------------------------------
// LogisticModel

LogisticModel::LogisticModel(FederatedDataset data, std::size_t n_classes,
                             double ridge, double tau, std::vector<DataPoint> test_set)
    : EnergyModel(std::move(data), tau),
      n_classes_(n_classes),
      ridge_(ridge),
      test_set_(std::move(test_set)) {
  if (n_classes_ < 2) Fail(ErrorCode::kInvalidArgument, "logistic model needs >= 2 classes");
  if (!(ridge_ > 0.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "logistic model needs ridge > 0 for strong convexity");
  }
  if (!data_.labeled()) Fail(ErrorCode::kInvalidArgument, "logistic model needs labelled data");
  auto check = [&](const DataPoint& p) {
    if (p.label < 0 || static_cast<std::size_t>(p.label) >= n_classes_) {
      Fail(ErrorCode::kInvalidArgument, fmt::format("label {} out of range", p.label));
    }
  };
  for (std::size_t c = 0; c < n_clients(); ++c)
    for (const DataPoint& p : data_.client(c)) check(p);
  for (const DataPoint& p : test_set_) {
    check(p);
    if (p.x.size() != data_.dim()) Fail(ErrorCode::kInvalidArgument, "test point dimension mismatch");
  }
}

Vector LogisticModel::PredictProba(std::span<const double> theta,
                                   std::span<const double> x) const {
  const std::size_t f = data_.dim();
  Vector z(n_classes_);
  for (std::size_t k = 0; k < n_classes_; ++k) z[k] = Dot(theta.subspan(k * f, f), x);
  const double top = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double& v : z) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : z) v /= total;
  return z;
}

void LogisticModel::AccumulatePoint(const DataPoint& p, std::span<const double> theta,
                                    std::span<double> out) const {
  const std::size_t f = data_.dim();
  const Vector prob = PredictProba(theta, p.x);
  for (std::size_t k = 0; k < n_classes_; ++k) {
    const double r = prob[k] - (static_cast<int>(k) == p.label ? 1.0 : 0.0);
    for (std::size_t j = 0; j < f; ++j) out[k * f + j] += r * p.x[j];
  }
}

void LogisticModel::SumPointGrads(std::size_t c, std::span<const double> theta,
                                  std::span<const std::size_t> idx,
                                  std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const auto pts = data_.client(c);
  for (std::size_t i : idx) AccumulatePoint(pts[i], theta, out);
}

void LogisticModel::AddRegularizerGrad(std::span<const double> theta,
                                       std::span<double> out) const {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += ridge_ * theta[j];
}

double LogisticModel::ClientEnergy(std::size_t c, std::span<const double> theta) const {
  const std::size_t f = data_.dim();
  double ce = 0.0;
  for (const DataPoint& p : data_.client(c)) {
    Vector z(n_classes_);
    for (std::size_t k = 0; k < n_classes_; ++k) z[k] = Dot(theta.subspan(k * f, f), p.x);
    const double top = *std::max_element(z.begin(), z.end());
    double lse = 0.0;
    for (double v : z) lse += std::exp(v - top);
    ce += top + std::log(lse) - z[static_cast<std::size_t>(p.label)];
  }
  return ce / weight(c) + 0.5 * ridge_ * Dot(theta, theta);
}

Vector LogisticModel::Minimizer() const {
  const std::size_t f = data_.dim();
  const std::size_t dd = dim();
  const double tol = 1e-10 * std::max(1.0, static_cast<double>(data_.total_points()));
  Vector theta(dd, 0.0);
  for (int iter = 0; iter < 200; ++iter) {
    const Vector g = Grad(theta);
    if (Norm2(g) < tol) return theta;
    // Hessian of sum_i CE_i + (ridge / 2) ||theta||^2.
    Matrix h = Matrix::Identity(dd) * ridge_;
    for (std::size_t c = 0; c < n_clients(); ++c) {
      for (const DataPoint& p : data_.client(c)) {
        const Vector prob = PredictProba(theta, p.x);
        for (std::size_t a = 0; a < n_classes_; ++a)
          for (std::size_t b = 0; b < n_classes_; ++b) {
            const double w = (a == b ? prob[a] : 0.0) - prob[a] * prob[b];
            if (w == 0.0) continue;
            for (std::size_t i = 0; i < f; ++i)
              for (std::size_t j = 0; j < f; ++j) h(a * f + i, b * f + j) += w * p.x[i] * p.x[j];
          }
      }
    }
    const Vector step = SolveSpd(h, g);
    const double f0 = Energy(theta);
    const double slope = Dot(g, step);
    double t = 1.0;
    Vector trial(dd);
    for (int back = 0; back < 60; ++back) {
      for (std::size_t j = 0; j < dd; ++j) trial[j] = theta[j] - t * step[j];
      if (Energy(trial) <= f0 - 1e-4 * t * slope) break;
      t *= 0.5;
    }
    theta = trial;
  }
  if (Norm2(Grad(theta)) < tol) return theta;
  Fail(ErrorCode::kNumeric, "Newton solve for the logistic minimizer did not converge in 200 iterations");
}

EnergyConstants LogisticModel::Constants(double theta0_radius,
                                         const ConstantsOptions& opts) const {
  if (!(theta0_radius >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "initialization radius must be >= 0");
  }
  const std::size_t f = data_.dim();
  EnergyConstants k;
  // The softmax Hessian block diag(p) - p p^T has spectral norm <= 1/2.
  double top = 0.0;
  for (std::size_t c = 0; c < n_clients(); ++c) {
    Matrix gram(f, f);
    for (const DataPoint& p : data_.client(c))
      for (std::size_t i = 0; i < f; ++i)
        for (std::size_t j = 0; j < f; ++j) gram(i, j) += p.x[i] * p.x[j];
    top = std::max(top, 0.5 * SymmetricEigen(gram).values.back() / weight(c));
  }
  k.L = top + ridge_;
  k.m = ridge_;
  k.kappa = k.L / k.m;
  k.theta_star = Minimizer();
  Vector g(dim());
  for (std::size_t c = 0; c < n_clients(); ++c) {
    ClientGrad(c, k.theta_star, g);
    k.gamma_het = std::max(k.gamma_het, Norm2(g));
  }
  k.sigma_sg = EstimateSigma(k.theta_star, std::sqrt(tau_ / k.m), opts);
  k.D = theta0_radius / std::sqrt(static_cast<double>(dim()));
  return k;
}

// ---------------------------------------------------------------------------

GaussianSummary TargetPosterior(const EnergyModel& model) {
  const auto* g = dynamic_cast<const GaussianModel*>(&model);
  if (g == nullptr) {
    Fail(ErrorCode::kUnsupported, "closed-form target posterior is only available for the Gaussian model");
  }
  const double n = static_cast<double>(g->data().total_points());
  return {g->pooled_mean(), g->sigma() * (g->tau() / n)};
}

std::unique_ptr<GaussianModel> GenerateGaussianFederation(
    std::size_t n_clients, double alpha, std::size_t points_per_client,
    const Matrix& sigma, double tau, std::uint64_t seed,
    std::span<const std::size_t> client_sizes) {
  if (n_clients == 0) Fail(ErrorCode::kInvalidArgument, "n_clients must be >= 1");
  if (!(alpha >= 0.0)) Fail(ErrorCode::kInvalidArgument, "alpha must be >= 0");
  if (!client_sizes.empty() && client_sizes.size() != n_clients) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("client_sizes has {} entries for {} clients", client_sizes.size(), n_clients));
  }
  ValidateSpd(sigma, "sigma");
  const std::size_t d = sigma.rows();
  const Matrix chol = Cholesky(sigma);
  const double center_sd = std::sqrt(alpha);
  std::vector<std::vector<DataPoint>> clients(n_clients);
  Vector z(d);
  for (std::size_t c = 0; c < n_clients; ++c) {
    const std::size_t n_c = client_sizes.empty() ? points_per_client : client_sizes[c];
    if (n_c == 0) Fail(ErrorCode::kInvalidArgument, "every client needs at least one point");
    Stream s = DeriveStream(seed, 0, 0, static_cast<std::uint32_t>(c), Purpose::kData);
    Vector center(d);
    for (double& v : center) v = center_sd * s.NextNormal();
    clients[c].reserve(n_c);
    for (std::size_t i = 0; i < n_c; ++i) {
      s.FillNormal(z);
      DataPoint p;
      p.x = center;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t k = 0; k <= r; ++k) p.x[r] += chol(r, k) * z[k];
      clients[c].push_back(std::move(p));
    }
  }
  return std::make_unique<GaussianModel>(FederatedDataset(std::move(clients)), sigma, tau);
}

std::unique_ptr<LogisticModel> GenerateLogisticFederation(const LogisticDataOptions& o) {
  if (o.n_clients == 0 || o.points_per_client == 0 || o.features == 0) {
    Fail(ErrorCode::kInvalidArgument, "logistic data needs clients, points and features");
  }
  if (o.classes < 2) Fail(ErrorCode::kInvalidArgument, "logistic data needs >= 2 classes");
  if (!(o.alpha >= 0.0)) Fail(ErrorCode::kInvalidArgument, "alpha must be >= 0");
  const std::size_t f = o.features;
  Stream global = DeriveStream(o.seed, 0, 0, kSharedClient, Purpose::kData);
  std::vector<Vector> means(o.classes, Vector(f));
  for (auto& m : means)
    for (double& v : m) v = o.class_separation * global.NextNormal();

  auto draw = [&](Stream& s, std::span<const double> shift) {
    DataPoint p;
    p.label = static_cast<int>(s.NextBelow(o.classes));
    p.x.resize(f + 1);
    for (std::size_t j = 0; j < f; ++j)
      p.x[j] = means[static_cast<std::size_t>(p.label)][j] + shift[j] + s.NextNormal();
    p.x[f] = 1.0;
    return p;
  };

  std::vector<std::vector<DataPoint>> clients(o.n_clients);
  for (std::size_t c = 0; c < o.n_clients; ++c) {
    Stream s = DeriveStream(o.seed, 0, 0, static_cast<std::uint32_t>(c), Purpose::kData);
    Vector shift(f);
    for (double& v : shift) v = std::sqrt(o.alpha) * s.NextNormal();
    for (std::size_t i = 0; i < o.points_per_client; ++i) clients[c].push_back(draw(s, shift));
  }
  Stream test_stream = DeriveStream(o.seed, 1, 0, kSharedClient, Purpose::kData);
  const Vector no_shift(f, 0.0);
  std::vector<DataPoint> test;
  test.reserve(o.test_points);
  for (std::size_t i = 0; i < o.test_points; ++i) test.push_back(draw(test_stream, no_shift));
  return std::make_unique<LogisticModel>(FederatedDataset(std::move(clients)), o.classes,
                                         o.ridge, o.tau, std::move(test));
}

}  // namespace fald
