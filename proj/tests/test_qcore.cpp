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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "zenosim/model.hpp"
#include "zenosim/qcore.hpp"

using namespace zenosim;
using zenosim::testing::kPi;

TEST_CASE("eig: diagonal matrix orders by imaginary part with standard vectors") {
  const CMatrix m = CMatrix::diagonal({1.0, cplx(0.0, 2.0), -3.0});
  const EigSystem es = eig_with_reciprocal(m);
  REQUIRE_FALSE(es.is_degenerate);
  const cplx want[] = {cplx(0.0, 2.0), 1.0, -3.0};
  const int basis_index[] = {1, 0, 2};
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(es.eigenvalues[i] - want[i]) < 1e-12);
    const CVector e = CVector::basis(3, basis_index[i]);
    CHECK((es.right_vectors[i] - e).norm() < 1e-12);
    CHECK((es.reciprocal_vectors[i] - e).norm() < 1e-12);
  }
}

TEST_CASE("eig: identity is flagged degenerate") {
  CHECK(eig_with_reciprocal(CMatrix::identity(3)).is_degenerate);
  CHECK(eig_with_reciprocal(CMatrix::identity(2)).is_degenerate);
}

TEST_CASE("eig: conditional Hamiltonian roots agree with an independent cubic solver") {
  const AtomParams p{1.0, 50.0, 20.0};
  const CMatrix h = build_h_cond(p, true, true);
  // Characteristic polynomial z^3 - tr z^2 + c2 z - det.
  cplx c2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) c2 += h(i, i) * h(j, j) - h(i, j) * h(j, i);
  }
  const auto roots = zenosim::testing::cubic_roots(-h.trace(), c2, -determinant(h));
  const EigSystem es = eig_with_reciprocal(h);
  for (const cplx& lam : es.eigenvalues) {
    double best = 1e300;
    for (const cplx& z : roots) best = std::min(best, std::abs(z - lam));
    CHECK(best < 1e-10);
  }
  // Slow mode: decay rate close to half of omega2 * eps_p.
  CHECK(-es.eigenvalues[0].imag() == doctest::Approx(0.004).epsilon(0.01));
}

TEST_CASE("eig: random matrices reconstruct and the reciprocal basis is biorthogonal") {
  std::mt19937_64 gen(11);
  for (int k = 0; k < 200; ++k) {
    const int dim = k % 4 == 0 ? 2 : 3;
    const CMatrix m = zenosim::testing::random_matrix(gen, dim);
    const EigSystem es = eig_with_reciprocal(m);
    REQUIRE_FALSE(es.is_degenerate);
    CHECK(max_abs_diff(es.reconstruct(), m) < 1e-10 * (1.0 + m.max_abs()));
    for (int i = 0; i < dim; ++i) {
      CHECK(std::abs(es.right_vectors[i].norm() - 1.0) < 1e-12);
      CHECK((m * es.right_vectors[i] - es.eigenvalues[i] * es.right_vectors[i]).norm() <
            1e-10 * (1.0 + m.max_abs()));
      for (int j = 0; j < dim; ++j) {
        const cplx ov = inner(es.reciprocal_vectors[j], es.right_vectors[i]);
        CHECK(std::abs(ov - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
      if (i > 0) CHECK(es.eigenvalues[i - 1].imag() >= es.eigenvalues[i].imag());
    }
  }
}

TEST_CASE("eig: near-degenerate pair is flagged") {
  const CMatrix m = CMatrix::diagonal({1.0, 1.0 + 1e-12, 3.0});
  CHECK(eig_with_reciprocal(m).is_degenerate);
  // Defective Jordan block.
  const CMatrix j(2, {1.0, 1.0, 0.0, 1.0});
  CHECK(eig_with_reciprocal(j).is_degenerate);
}

TEST_CASE("mat_exp: trivial cases") {
  CHECK(max_abs_diff(mat_exp(CMatrix(3), 3.7), CMatrix::identity(3)) < 1e-15);
  const double a3 = 20.0, t = 0.13;
  const CMatrix m = CMatrix::diagonal({0.0, 0.0, cplx(0.0, -a3 / 2)});
  const CMatrix want = CMatrix::diagonal({1.0, 1.0, std::exp(-a3 * t / 2)});
  CHECK(max_abs_diff(mat_exp(m, t), want) < 1e-14);
  CHECK(max_abs_diff(mat_exp(m, 0.0), CMatrix::identity(3)) < 1e-15);
  CHECK_THROWS_AS(mat_exp(m, -1.0), std::invalid_argument);
}

TEST_CASE("mat_exp: spectral form, scaling and squaring, and a Taylor product agree") {
  std::mt19937_64 gen(5);
  int tested = 0;
  while (tested < 50) {
    const CMatrix m = zenosim::testing::random_matrix(gen);
    const EigSystem es = eig_with_reciprocal(m);
    double gap = 1e300;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) gap = std::min(gap, std::abs(es.eigenvalues[i] - es.eigenvalues[j]));
    }
    if (gap <= 0.1) continue;
    ++tested;
    const double t = 0.3;
    const CMatrix a = mat_exp(m, t);
    const CMatrix b = spectral_exp(es, t);
    const double scale = 1.0 + a.max_abs();
    CHECK(max_abs_diff(a, b) < 1e-10 * scale);
    CHECK(max_abs_diff(a, zenosim::testing::taylor_exp(m, t)) < 1e-9 * scale);
  }
}

TEST_CASE("mat_exp: Hermitian generators give unitary propagators") {
  std::mt19937_64 gen(3);
  for (int k = 0; k < 20; ++k) {
    const CMatrix a = zenosim::testing::random_matrix(gen);
    const CMatrix h = 0.5 * (a + a.adjoint());
    const CMatrix u = mat_exp(h, 2.5);
    CHECK(max_abs_diff(u.adjoint() * u, CMatrix::identity(3)) < 1e-12);
  }
}

TEST_CASE("hermitian_eigenvalues: closed form matches eigenvalues of a known spectrum") {
  std::mt19937_64 gen(8);
  for (int k = 0; k < 50; ++k) {
    const CMatrix a = zenosim::testing::random_matrix(gen);
    const CMatrix h = 0.5 * (a + a.adjoint());
    const auto ev = hermitian_eigenvalues(h);
    REQUIRE(ev.size() == 3);
    CHECK(ev[0] <= ev[1]);
    CHECK(ev[1] <= ev[2]);
    CHECK(ev[0] + ev[1] + ev[2] == doctest::Approx(h.trace().real()).epsilon(1e-12));
    CHECK(std::abs(determinant(h) - cplx(ev[0] * ev[1] * ev[2])) < 1e-10 * (1.0 + h.max_abs() * h.max_abs() * h.max_abs()));
  }
}

TEST_CASE("density helpers") {
  std::mt19937_64 gen(2);
  const CVector psi = zenosim::testing::random_state(gen);
  const DensityMatrix rho = pure_state(psi);
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  CHECK(hermiticity_error(rho) < 1e-15);
  CHECK(min_eigenvalue(rho) > -1e-12);
  CHECK(min_eigenvalue(CMatrix(2, {0.0, cplx(0, -0.1), cplx(0, 0.1), 1.0})) < 0.0);
  const DensityMatrix n = normalize_density(3.0 * rho);
  CHECK(max_abs_diff(n, rho) < 1e-14);
  CHECK(inner(CVector{1.0, kI}, CVector{1.0, kI}) == cplx(2.0, 0.0));
  CHECK(determinant(CMatrix::identity(3)) == cplx(1.0));
  const CMatrix m = zenosim::testing::random_matrix(gen);
  CHECK(max_abs_diff(m * inverse(m), CMatrix::identity(3)) < 1e-12);
}
