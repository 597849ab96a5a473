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

#include "zenosim/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace zenosim {

namespace {

void check_dim(int dim) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("dimension must be 2 or 3, got " + std::to_string(dim));
  }
}

void check_same(int a, int b) {
  if (a != b) throw std::invalid_argument("dimension mismatch");
}

}  // namespace

// ---------------------------------------------------------------- CVector

CVector::CVector(int dim) : dim_(dim) { check_dim(dim); }

CVector::CVector(std::initializer_list<cplx> values) : dim_(static_cast<int>(values.size())) {
  check_dim(dim_);
  std::copy(values.begin(), values.end(), c_.begin());
}

CVector CVector::basis(int dim, int index) {
  CVector v(dim);
  v[index] = 1.0;
  return v;
}

double CVector::norm2() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += std::norm((*this)[i]);
  return s;
}

double CVector::norm() const { return std::sqrt(norm2()); }

CVector CVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("cannot normalize a zero vector");
  CVector out = *this;
  out *= 1.0 / n;
  return out;
}

CVector& CVector::operator+=(const CVector& o) {
  check_same(dim_, o.dim_);
  for (int i = 0; i < dim_; ++i) (*this)[i] += o[i];
  return *this;
}

CVector& CVector::operator-=(const CVector& o) {
  check_same(dim_, o.dim_);
  for (int i = 0; i < dim_; ++i) (*this)[i] -= o[i];
  return *this;
}

CVector& CVector::operator*=(cplx s) {
  for (int i = 0; i < dim_; ++i) (*this)[i] *= s;
  return *this;
}

CVector operator+(CVector a, const CVector& b) { return a += b; }
CVector operator-(CVector a, const CVector& b) { return a -= b; }
CVector operator*(cplx s, CVector a) { return a *= s; }

cplx inner(const CVector& a, const CVector& b) {
  check_same(a.dim(), b.dim());
  cplx s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// ---------------------------------------------------------------- CMatrix

CMatrix::CMatrix(int dim) : dim_(dim) { check_dim(dim); }

CMatrix::CMatrix(int dim, std::initializer_list<cplx> row_major) : dim_(dim) {
  check_dim(dim);
  if (row_major.size() != static_cast<std::size_t>(dim * dim)) {
    throw std::invalid_argument("initializer size does not match dim*dim");
  }
  auto it = row_major.begin();
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) (*this)(r, c) = *it++;
}

CMatrix CMatrix::identity(int dim) {
  CMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(const std::vector<cplx>& d) {
  CMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.dim(); ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  return m;
}

CMatrix CMatrix::outer(const CVector& a, const CVector& b) {
  check_same(a.dim(), b.dim());
  CMatrix m(a.dim());
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c) m(r, c) = a[r] * std::conj(b[c]);
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m(r, c) = std::conj((*this)(c, r));
  return m;
}

cplx CMatrix::trace() const {
  cplx s = 0.0;
  for (int i = 0; i < dim_; ++i) s += (*this)(i, i);
  return s;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) s += std::norm((*this)(r, c));
  return std::sqrt(s);
}

double CMatrix::one_norm() const {
  double best = 0.0;
  for (int c = 0; c < dim_; ++c) {
    double s = 0.0;
    for (int r = 0; r < dim_; ++r) s += std::abs((*this)(r, c));
    best = std::max(best, s);
  }
  return best;
}

double CMatrix::max_abs() const {
  double best = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) best = std::max(best, std::abs((*this)(r, c)));
  return best;
}

bool CMatrix::all_finite() const {
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) {
      const cplx z = (*this)(r, c);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  return true;
}

CMatrix CMatrix::block(int k) const {
  if (k > dim_) throw std::invalid_argument("block larger than matrix");
  CMatrix m(k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) m(r, c) = (*this)(r, c);
  return m;
}

CMatrix CMatrix::embedded(int dim) const {
  if (dim < dim_) throw std::invalid_argument("cannot embed into a smaller matrix");
  CMatrix m(dim);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m(r, c) = (*this)(r, c);
  return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  check_same(dim_, o.dim_);
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  check_same(dim_, o.dim_);
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& x : a_) x *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  check_same(a.dim(), b.dim());
  const int n = a.dim();
  CMatrix m(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k) s += a(r, k) * b(k, c);
      m(r, c) = s;
    }
  return m;
}

CVector operator*(const CMatrix& m, const CVector& v) {
  check_same(m.dim(), v.dim());
  CVector out(v.dim());
  for (int r = 0; r < m.dim(); ++r) {
    cplx s = 0.0;
    for (int k = 0; k < m.dim(); ++k) s += m(r, k) * v[k];
    out[r] = s;
  }
  return out;
}

cplx determinant(const CMatrix& m) {
  if (m.dim() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double determinant_abs(const CMatrix& m) { return std::abs(determinant(m)); }

CMatrix inverse(const CMatrix& m) {
  const cplx det = determinant(m);
  if (det == 0.0) throw std::domain_error("singular matrix");
  CMatrix inv(m.dim());
  if (m.dim() == 2) {
    inv(0, 0) = m(1, 1);
    inv(0, 1) = -m(0, 1);
    inv(1, 0) = -m(1, 0);
    inv(1, 1) = m(0, 0);
  } else {
    // Adjugate: inv(r, c) is the cofactor of (c, r).
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        const int r0 = (c + 1) % 3, r1 = (c + 2) % 3;
        const int c0 = (r + 1) % 3, c1 = (r + 2) % 3;
        inv(r, c) = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
      }
  }
  return (1.0 / det) * inv;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).max_abs(); }

// ------------------------------------------------------------ eigensystem

namespace {

/// Roots of the monic polynomial with coefficients (highest power omitted).
std::vector<cplx> quadratic_roots(cplx b, cplx c) {
  // x^2 + b x + c
  const cplx disc = std::sqrt(b * b - 4.0 * c);
  // Pick the sign that avoids cancellation.
  const cplx q = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc) : -0.5 * (b - disc);
  if (q == 0.0) return {0.0, 0.0};
  return {q, c / q};
}

std::vector<cplx> cubic_roots(cplx a, cplx b, cplx c) {
  // x^3 + a x^2 + b x + c, depressed with x = y - a/3.
  const cplx p = b - a * a / 3.0;
  const cplx q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const cplx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  cplx u3 = -q / 2.0 + disc;
  const cplx alt = -q / 2.0 - disc;
  if (std::abs(alt) > std::abs(u3)) u3 = alt;
  const cplx shift = -a / 3.0;
  if (std::abs(u3) == 0.0) {
    // p == q == 0: a triple root.
    return {shift, shift, shift};
  }
  const cplx u = std::pow(u3, 1.0 / 3.0);
  const cplx omega{-0.5, std::sqrt(3.0) / 2.0};
  std::vector<cplx> roots;
  cplx w = 1.0;
  for (int k = 0; k < 3; ++k) {
    const cplx uk = u * w;
    roots.push_back(uk - p / (3.0 * uk) + shift);
    w *= omega;
  }
  return roots;
}

cplx poly_eval(const std::vector<cplx>& coeffs, cplx x, cplx* deriv) {
  // coeffs are monic lower terms: x^n + coeffs[0] x^{n-1} + ...
  cplx p = 1.0, d = 0.0;
  for (const cplx& c : coeffs) {
    d = d * x + p;
    p = p * x + c;
  }
  if (deriv) *deriv = d;
  return p;
}

CVector cross(const CVector& a, const CVector& b) {
  return CVector{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

CVector row(const CMatrix& m, int r) {
  CVector v(m.dim());
  for (int c = 0; c < m.dim(); ++c) v[c] = m(r, c);
  return v;
}

/// Rotates the phase so the largest-modulus component is real and positive.
CVector fix_phase(CVector v) {
  int best = 0;
  for (int i = 1; i < v.dim(); ++i)
    if (std::abs(v[i]) > std::abs(v[best]) * (1.0 + 1e-12)) best = i;
  if (std::abs(v[best]) > 0.0) v *= std::conj(v[best]) / std::abs(v[best]);
  return v;
}

/// Null vector of (a - lambda I), unit norm. Returns a zero vector when the
/// rank of the shifted matrix is below n-1.
CVector null_vector(const CMatrix& a, cplx lambda) {
  const int n = a.dim();
  CMatrix s = a - lambda * CMatrix::identity(n);
  CVector best(n);
  double best_norm = 0.0;
  if (n == 2) {
    const CVector c0{-s(0, 1), s(0, 0)};
    const CVector c1{s(1, 1), -s(1, 0)};
    best = c0.norm2() >= c1.norm2() ? c0 : c1;
    best_norm = best.norm();
  } else {
    const CVector r0 = row(s, 0), r1 = row(s, 1), r2 = row(s, 2);
    for (const CVector& c : {cross(r0, r1), cross(r0, r2), cross(r1, r2)}) {
      const double nc = c.norm();
      if (nc > best_norm) {
        best_norm = nc;
        best = c;
      }
    }
  }
  if (best_norm < 1e-13) return CVector(n);
  best *= 1.0 / best_norm;

  // One inverse-iteration step with a tiny shift off the root.
  const double eta = 1e-10 * (1.0 + std::abs(lambda));
  const CMatrix shifted = s - cplx(eta, eta) * CMatrix::identity(n);
  if (determinant_abs(shifted) > 0.0) {
    const CVector x = inverse(shifted) * best;
    const double nx = x.norm();
    if (std::isfinite(nx) && nx > 0.0) best = (1.0 / nx) * x;
  }
  return fix_phase(best);
}

}  // namespace

CMatrix EigSystem::reconstruct() const {
  const int n = dim();
  CMatrix m(n);
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    m += eigenvalues[k] * CMatrix::outer(right_vectors[k], reciprocal_vectors[k]);
  }
  return m;
}

EigSystem eig_with_reciprocal(const CMatrix& m, double degeneracy_gap) {
  const int n = m.dim();
  EigSystem out;
  const double scale = m.frobenius_norm();
  if (scale == 0.0) {
    out.eigenvalues.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      out.right_vectors.push_back(CVector::basis(n, i));
      out.reciprocal_vectors.push_back(CVector::basis(n, i));
    }
    out.is_degenerate = true;
    return out;
  }
  const CMatrix a = (1.0 / scale) * m;

  std::vector<cplx> coeffs;
  std::vector<cplx> roots;
  if (n == 2) {
    coeffs = {-a.trace(), determinant(a)};
    roots = quadratic_roots(coeffs[0], coeffs[1]);
  } else {
    const cplx minors = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) -
                        a(0, 2) * a(2, 0) + a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    coeffs = {-a.trace(), minors, -determinant(a)};
    roots = cubic_roots(coeffs[0], coeffs[1], coeffs[2]);
  }

  for (cplx& r : roots) {
    for (int it = 0; it < kEigPolishIterations; ++it) {
      cplx d;
      const cplx p = poly_eval(coeffs, r, &d);
      if (std::abs(d) < 1e-14) break;
      const cplx step = p / d;
      r -= step;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(r))) break;
    }
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()) ||
        std::abs(poly_eval(coeffs, r, nullptr)) > 1e-8) {
      throw NonConvergence("characteristic root did not converge");
    }
  }

  // snap imaginary parts that differ only by rounding so ties order by real part
  double big = 1.0;
  for (const cplx& r : roots) big = std::max(big, std::abs(r));
  const double tie = 1e-12 * big;
  for (cplx& r : roots)
    if (std::abs(r.imag()) < tie) r.imag(0.0);
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i].imag() - roots[j].imag()) < tie) roots[j].imag(roots[i].imag());
  std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) {
    if (x.imag() != y.imag()) return x.imag() > y.imag();
    return x.real() > y.real();
  });

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)]) <
          degeneracy_gap)
        out.is_degenerate = true;

  CMatrix v(n);
  for (int i = 0; i < n; ++i) {
    CVector col = null_vector(a, roots[static_cast<std::size_t>(i)]);
    if (col.norm2() == 0.0) {
      out.is_degenerate = true;
      col = CVector::basis(n, i);
    }
    out.right_vectors.push_back(col);
    for (int r = 0; r < n; ++r) v(r, i) = col[r];
  }

  if (determinant_abs(v) < 1e-10) {
    out.is_degenerate = true;
  }
  if (determinant_abs(v) > 0.0) {
    const CMatrix w = inverse(v);
    for (int i = 0; i < n; ++i) {
      CVector ket(n);
      for (int c = 0; c < n; ++c) ket[c] = std::conj(w(i, c));
      out.reciprocal_vectors.push_back(ket);
    }
    // Two-sided Rayleigh quotient removes the residual root error.
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      roots[k] = inner(out.reciprocal_vectors[k], a * out.right_vectors[k]);
    }
  } else {
    for (int i = 0; i < n; ++i) out.reciprocal_vectors.push_back(CVector(n));
  }

  for (cplx& r : roots) out.eigenvalues.push_back(r * scale);
  return out;
}

CMatrix spectral_exp(const EigSystem& eig, double t) {
  const int n = eig.dim();
  CMatrix u(n);
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    u += std::exp(-kI * eig.eigenvalues[k] * t) *
         CMatrix::outer(eig.right_vectors[k], eig.reciprocal_vectors[k]);
  }
  return u;
}

CMatrix mat_exp(const CMatrix& m, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("mat_exp requires t >= 0");
  const int n = m.dim();
  CMatrix a = (-kI * t) * m;
  const double norm = a.one_norm();
  int squarings = 0;
  if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  a *= std::ldexp(1.0, -squarings);

  // Taylor series; with ||a|| <= 1/4 twenty terms are far below round-off.
  CMatrix term = CMatrix::identity(n);
  CMatrix sum = term;
  for (int k = 1; k <= 20; ++k) {
    term = (1.0 / k) * (term * a);
    sum += term;
    if (term.max_abs() < 1e-18 * sum.max_abs()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  if (!sum.all_finite()) throw NumericOverflow("matrix exponential overflowed");
  return sum;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
  // cyclic Jacobi; the closed trig form loses digits near degenerate roots
  const int n = m.dim();
  CMatrix a = hermitize(m);
  const double total = std::max(a.frobenius_norm() * a.frobenius_norm(), 1e-300);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off <= 1e-30 * total) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        // phase so the (p,q) entry is real, then a real plane rotation
        const cplx ph = a(p, q) / mag;
        const double theta = 0.5 * std::atan2(2.0 * mag, a(q, q).real() - a(p, p).real());
        const double c = std::cos(theta), s = std::sin(theta);
        CMatrix g = CMatrix::identity(n);
        g(p, p) = c;
        g(p, q) = s;
        g(q, p) = -s * std::conj(ph);
        g(q, q) = c * std::conj(ph);
        a = g.adjoint() * a * g;
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) ev[static_cast<std::size_t>(k)] = a(k, k).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

// ---------------------------------------------------------- density ops

DensityMatrix pure_state(const CVector& psi) {
  const double n2 = psi.norm2();
  if (n2 == 0.0) throw std::domain_error("cannot form a state from a zero vector");
  return (1.0 / n2) * CMatrix::outer(psi, psi);
}

DensityMatrix hermitize(const DensityMatrix& rho) { return 0.5 * (rho + rho.adjoint()); }

DensityMatrix normalize_density(const DensityMatrix& rho) {
  DensityMatrix h = hermitize(rho);
  const double tr = h.trace().real();
  if (tr == 0.0) throw std::domain_error("density matrix has zero trace");
  return (1.0 / tr) * h;
}

double hermiticity_error(const CMatrix& m) { return (m - m.adjoint()).max_abs(); }

double min_eigenvalue(const DensityMatrix& rho) { return hermitian_eigenvalues(hermitize(rho)).front(); }

std::string to_string(const CMatrix& m) {
  std::ostringstream os;
  os.precision(6);
  for (int r = 0; r < m.dim(); ++r) {
    os << (r == 0 ? "[" : " ");
    for (int c = 0; c < m.dim(); ++c) os << " " << m(r, c);
    os << (r + 1 == m.dim() ? " ]" : "\n");
  }
  return os.str();
}

}  // namespace zenosim
