// Copyright 2026 The Zenosim Authors
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

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

/**
 * @brief Dense complex linear algebra for dimension 2 and 3.
 *
 * Everything the simulator needs from linear algebra lives here: small
 * fixed-capacity vectors and matrices, a non-Hermitian eigensolver that also
 * returns the reciprocal (left) basis, and the propagator exponential
 * exp(-i M t). All types are plain values.
 */
namespace zenosim {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

/// Raised when the eigen solver cannot produce a converged root.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a matrix exponential overflows.
class NumericOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CVector {
 public:
  CVector() = default;
  explicit CVector(int dim);
  CVector(std::initializer_list<cplx> values);

  static CVector basis(int dim, int index);

  int dim() const { return dim_; }
  cplx& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  const cplx& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

  double norm2() const;
  double norm() const;
  CVector normalized() const;

  CVector& operator+=(const CVector& o);
  CVector& operator-=(const CVector& o);
  CVector& operator*=(cplx s);

 private:
  int dim_ = 3;
  std::array<cplx, 3> c_{};
};

CVector operator+(CVector a, const CVector& b);
CVector operator-(CVector a, const CVector& b);
CVector operator*(cplx s, CVector a);

/// <a|b> with the first argument conjugated.
cplx inner(const CVector& a, const CVector& b);

class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(int dim);
  /// Row-major initializer; the size must be dim*dim.
  CMatrix(int dim, std::initializer_list<cplx> row_major);

  static CMatrix identity(int dim);
  static CMatrix diagonal(const std::vector<cplx>& d);
  /// |a><b|
  static CMatrix outer(const CVector& a, const CVector& b);

  int dim() const { return dim_; }
  cplx& operator()(int r, int c) { return a_[static_cast<std::size_t>(r * 3 + c)]; }
  const cplx& operator()(int r, int c) const {
    return a_[static_cast<std::size_t>(r * 3 + c)];
  }

  CMatrix adjoint() const;
  cplx trace() const;
  double frobenius_norm() const;
  double one_norm() const;
  double max_abs() const;
  bool all_finite() const;

  /// Upper-left k-by-k block.
  CMatrix block(int k) const;
  /// Embeds this matrix into the upper-left block of a larger zero matrix.
  CMatrix embedded(int dim) const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);

 private:
  int dim_ = 3;
  std::array<cplx, 9> a_{};
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CVector operator*(const CMatrix& m, const CVector& v);

double determinant_abs(const CMatrix& m);
cplx determinant(const CMatrix& m);

/// Inverse through the adjugate. Throws std::domain_error on a zero determinant.
CMatrix inverse(const CMatrix& m);

/// Maximum entrywise modulus of a - b.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

/**
 * @brief Spectral data of a (generally non-normal) matrix.
 *
 * `right_vectors[i]` is |λ_i> with unit norm. `reciprocal_vectors[i]` is the
 * ket |λ^i> whose bra satisfies <λ^j|λ_i> = δ_ij, so the spectral expansion
 * reads M = Σ λ_i |λ_i><λ^i|. Eigenvalues are ordered by descending
 * imaginary part, so index 0 is the least damped mode of a conditional
 * Hamiltonian.
 */
struct EigSystem {
  std::vector<cplx> eigenvalues;
  std::vector<CVector> right_vectors;
  std::vector<CVector> reciprocal_vectors;
  bool is_degenerate = false;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  CMatrix reconstruct() const;
};

inline constexpr double kDefaultDegeneracyGap = 1e-8;

/**
 * @brief Eigendecomposition with reciprocal vectors.
 *
 * Roots of the characteristic polynomial are found in closed form and
 * polished by Newton steps; each right vector is the null vector of
 * (M - λI) refined by one inverse-iteration step, and the reciprocal basis is
 * the conjugated rows of the inverse eigenvector matrix. When two eigenvalues
 * lie within degeneracy_gap * ||M||_F of each other (or the eigenvector
 * matrix is singular) `is_degenerate` is set and callers must fall back to
 * mat_exp. Throws NonConvergence if a root does not polish below the
 * residual bound within the iteration cap.
 */
EigSystem eig_with_reciprocal(const CMatrix& m,
                              double degeneracy_gap = kDefaultDegeneracyGap);

/// Newton polishing iterations used by eig_with_reciprocal.
inline constexpr int kEigPolishIterations = 8;

/// exp(-i m t) by scaling and squaring of a Taylor series. Requires t >= 0.
CMatrix mat_exp(const CMatrix& m, double t);

/// exp(-i m t) from a non-degenerate spectral decomposition.
CMatrix spectral_exp(const EigSystem& eig, double t);

/// Eigenvalues of a Hermitian matrix in ascending order (closed form).
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

// Density-matrix helpers.
using DensityMatrix = CMatrix;

DensityMatrix pure_state(const CVector& psi);
DensityMatrix hermitize(const DensityMatrix& rho);
/// Hermitizes and divides by the (real) trace.
DensityMatrix normalize_density(const DensityMatrix& rho);
double hermiticity_error(const CMatrix& m);
double min_eigenvalue(const DensityMatrix& rho);

std::string to_string(const CMatrix& m);

}  // namespace zenosim
