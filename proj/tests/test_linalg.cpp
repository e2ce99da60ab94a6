/* Copyright 2026 The spinctrl Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <doctest.h>

#include <numbers>

#include "spinctrl/linalg.hpp"
#include "test_support.hpp"

using namespace spinctrl;
using namespace spinctrl::testing;

TEST_CASE("pauli matrices") {
  const ComplexMatrix x = pauli(Axis::X), y = pauli(Axis::Y), z = pauli(Axis::Z);
  CHECK(x(0, 1) == C(1));
  CHECK(x(1, 0) == C(1));
  CHECK(x(0, 0) == C(0));
  CHECK(z(0, 0) == C(1));
  CHECK(z(1, 1) == C(-1));
  CHECK(max_abs_entry(y * y - ComplexMatrix::Identity(2, 2)) == 0.0);
  CHECK(max_abs_entry(x * y - C(0, 1) * z) == 0.0);

  // single precision instantiation
  const CMatrix<float> xf = pauli<float>(Axis::X);
  CHECK(xf(0, 1) == std::complex<float>(1));
}

TEST_CASE("kron") {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  CHECK(max_abs_entry(kron(i2, i2) - ComplexMatrix::Identity(4, 4)) == 0.0);
  CHECK(kron(pauli(Axis::X), i2)(0, 2) == C(1));

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a = random_complex(2, rng), b = random_complex(3, rng);
    const ComplexMatrix ab = kron(a, b);
    CHECK(max_abs_entry(ab - naive_kron(a, b)) < 1e-14);
    CHECK(std::abs(ab.trace() - a.trace() * b.trace()) < 1e-12);
  }

  SUBCASE("associative on integer matrices") {
    std::uniform_int_distribution<int> d(-3, 3);
    const auto int_matrix = [&](int n) {
      ComplexMatrix m(n, n);
      for (auto& v : m.reshaped()) v = C(d(rng), d(rng));
      return m;
    };
    const ComplexMatrix a = int_matrix(2), b = int_matrix(3), c = int_matrix(2);
    CHECK((kron(kron(a, b), c) - kron(a, kron(b, c))).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("embed_single_site") {
  const ComplexMatrix x = pauli(Axis::X), z = pauli(Axis::Z);
  CHECK(max_abs_entry(embed_single_site(x, 1, 1) - x) == 0.0);
  CHECK(max_abs_entry(embed_single_site(z, 2, 2) - kron(ComplexMatrix::Identity(2, 2), z)) == 0.0);
  CHECK(max_abs_entry(embed_single_site(x, 2, 4) - naive_site_op(x, 2, 4)) == 0.0);

  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b) {
      if (a == b) continue;
      const ComplexMatrix ea = embed_single_site(x, a, 3);
      const ComplexMatrix eb = embed_single_site(pauli(Axis::Y), b, 3);
      CHECK(max_abs_entry(ea * eb - eb * ea) == 0.0);
    }

  CHECK_THROWS_AS(embed_single_site(x, 0, 3), std::out_of_range);
  CHECK_THROWS_AS(embed_single_site(x, 4, 3), std::out_of_range);
  CHECK_THROWS_AS(embed_single_site(ComplexMatrix::Identity(4, 4), 1, 3), std::invalid_argument);
}

TEST_CASE("expm_hermitian_times_minus_i") {
  const ComplexMatrix x = pauli(Axis::X);
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  const double theta = std::numbers::pi / 2;
  const ComplexMatrix expected = std::cos(theta) * i2 - C(0, std::sin(theta)) * x;
  CHECK(max_abs_entry(expm_hermitian_times_minus_i(x, theta) - expected) < 1e-14);

  std::mt19937_64 rng(11);
  const ComplexMatrix h = random_hermitian(4, rng);
  CHECK(max_abs_entry(expm_hermitian_times_minus_i(h, 0.0) - ComplexMatrix::Identity(4, 4)) < 1e-14);

  SUBCASE("semigroup") {
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexMatrix hr = random_hermitian(4, rng);
      const double s = 0.37, t = 1.21;
      const ComplexMatrix lhs = expm_hermitian_times_minus_i(hr, s) * expm_hermitian_times_minus_i(hr, t);
      CHECK(max_abs_entry(lhs - expm_hermitian_times_minus_i(hr, s + t)) < 1e-12);
    }
  }

  SUBCASE("matches Taylor reference") {
    for (int dim : {2, 8, 16}) {
      const ComplexMatrix hr = random_hermitian(dim, rng);
      CHECK(max_abs_entry(expm_hermitian_times_minus_i(hr, 0.8) - taylor_expm(hr, 0.8)) < 1e-11);
    }
  }

  SUBCASE("unitary up to dim 32") {
    for (int dim : {2, 4, 8, 16, 32}) {
      const ComplexMatrix u = expm_hermitian_times_minus_i(random_hermitian(dim, rng), 2.5);
      CHECK(max_abs_entry(u * u.adjoint() - ComplexMatrix::Identity(dim, dim)) < 1e-9);
    }
  }

  ComplexMatrix bad = random_hermitian(3, rng);
  bad(0, 1) += 1e-6;
  CHECK_THROWS_AS(expm_hermitian_times_minus_i(bad, 1.0), std::invalid_argument);
}

TEST_CASE("partial_trace_last_qubit") {
  std::mt19937_64 rng(3);
  const ComplexMatrix rho = random_density(4, rng);
  ComplexMatrix ket0 = ComplexMatrix::Zero(2, 2);
  ket0(0, 0) = 1.0;
  CHECK(max_abs_entry(partial_trace_last_qubit(kron(rho, ket0)) - rho) < 1e-15);

  const ComplexMatrix m = random_complex(8, rng);
  CHECK(std::abs(partial_trace_last_qubit(m).trace() - m.trace()) < 1e-12);

  // (|00> + |11>)/sqrt 2
  ComplexVector bell = ComplexVector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  const ComplexMatrix reduced = partial_trace_last_qubit(ComplexMatrix(bell * bell.adjoint()));
  CHECK(max_abs_entry(reduced - ComplexMatrix::Identity(2, 2) / 2.0) < 1e-15);

  SUBCASE("linear") {
    const ComplexMatrix a = random_complex(8, rng), b = random_complex(8, rng);
    const C ca(0.3, -1.2), cb(-2.0, 0.5);
    const ComplexMatrix lhs = partial_trace_last_qubit(ComplexMatrix(ca * a + cb * b));
    const ComplexMatrix rhs = ca * partial_trace_last_qubit(a) + cb * partial_trace_last_qubit(b);
    CHECK(max_abs_entry(lhs - rhs) < 1e-13);
  }

  SUBCASE("matches explicit basis contraction") {
    const ComplexMatrix a = random_complex(8, rng);
    ComplexMatrix ref = ComplexMatrix::Zero(4, 4);
    for (int e = 0; e < 2; ++e) {
      ComplexMatrix bra = ComplexMatrix::Zero(1, 2);
      bra(0, e) = 1.0;
      const ComplexMatrix proj = naive_kron(ComplexMatrix::Identity(4, 4), bra);
      ref += proj * a * proj.adjoint();
    }
    CHECK(max_abs_entry(partial_trace_last_qubit(a) - ref) < 1e-14);
  }

  CHECK_THROWS_AS(partial_trace_last_qubit(ComplexMatrix::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("trace_norm") {
  CHECK(trace_norm(ComplexMatrix::Zero(4, 4)) == 0.0);
  CHECK(trace_norm(pauli(Axis::Z)) == doctest::Approx(2.0).epsilon(1e-15));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix diff = random_density(4, rng) - random_density(4, rng);
    const double tn = trace_norm(diff);
    CHECK(tn <= 2.0 + 1e-12);
    CHECK(tn == doctest::Approx(svd_trace_norm(diff)).epsilon(1e-12));
  }

  SUBCASE("norm axioms") {
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexMatrix a = random_hermitian(4, rng), b = random_hermitian(4, rng),
                          c = random_hermitian(4, rng);
      CHECK(trace_norm(a) > 0);
      CHECK(trace_norm(ComplexMatrix(a - c)) <=
            trace_norm(ComplexMatrix(a - b)) + trace_norm(ComplexMatrix(b - c)) + 1e-12);
      CHECK(trace_norm(ComplexMatrix(-2.5 * a)) == doctest::Approx(2.5 * trace_norm(a)));
    }
    CHECK(trace_norm(ComplexMatrix(1e-14 * ComplexMatrix::Identity(2, 2))) < 1e-12);
  }

  CHECK_THROWS_AS(trace_norm(random_complex(3, rng)), std::invalid_argument);
}

TEST_CASE("structure predicates") {
  std::mt19937_64 rng(9);
  CHECK(is_unitary(random_unitary(8, rng)));
  CHECK(is_hermitian(random_hermitian(5, rng)));
  CHECK(is_positive_semidefinite(random_density(6, rng)));
  CHECK_FALSE(is_positive_semidefinite(pauli(Axis::Z)));
  CHECK_FALSE(is_unitary(ComplexMatrix(2.0 * ComplexMatrix::Identity(2, 2))));
}
