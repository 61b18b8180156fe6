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

// Small dense linear algebra for the low-dimensional problems the simulator
// deals with (d is at most a few dozen). Row-major storage.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fald {

using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix Identity(std::size_t n);
  static Matrix Diagonal(std::span<const double> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  Matrix transpose() const;
  double trace() const;
  double frobenius() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

double Dot(std::span<const double> a, std::span<const double> b);
double Norm2(std::span<const double> a);
double MaxAbs(std::span<const double> a);
bool AllFinite(std::span<const double> a);

// Largest |a_ij - a_ji|.
double Asymmetry(const Matrix& a);

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // column j pairs with values[j]
};

// Cyclic Jacobi rotations. Stops when the off-diagonal Frobenius norm falls
// below 1e-12 (relative to max(1, ||A||_F)); throws kNumeric after 100 sweeps.
EigenDecomposition SymmetricEigen(const Matrix& a);

// Lower-triangular L with L L^T = a. Throws kNumeric when a is not positive
// definite.
Matrix Cholesky(const Matrix& a);

// Solves a x = b for symmetric positive-definite a.
Vector SolveSpd(const Matrix& a, std::span<const double> b);

Matrix InverseSpd(const Matrix& a);

}  // namespace fald
