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

// Random instance generators and reference implementations used only by the
// tests. The references deliberately avoid the library's code paths: explicit
// index loops instead of Eigen's Kronecker module, Taylor series with scaling
// and squaring instead of the spectral exponential, singular values instead of
// eigenvalues.

#ifndef SPINCTRL_TESTS_TEST_SUPPORT_HPP_
#define SPINCTRL_TESTS_TEST_SUPPORT_HPP_

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "spinctrl/linalg.hpp"
#include "spinctrl/model.hpp"

namespace spinctrl::testing {

using C = std::complex<double>;

inline ComplexMatrix random_complex(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = C(n(rng), n(rng));
  return m;
}

inline ComplexMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  const ComplexMatrix a = random_complex(dim, rng);
  return (a + a.adjoint()) / 2.0;
}

inline ComplexMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_complex(dim, rng));
  return qr.householderQ() * ComplexMatrix::Identity(dim, dim);
}

inline ComplexMatrix random_density(Eigen::Index dim, std::mt19937_64& rng) {
  const ComplexMatrix a = random_complex(dim, rng);
  const ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

inline ControlSequence random_sequence(int slices, double dt, double bound, double amplitude,
                                       std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  ControlSequence seq = ControlSequence::zeros(slices, dt, bound);
  for (int j = 0; j < slices; ++j) {
    seq.hx[j] = u(rng);
    seq.hy[j] = u(rng);
  }
  return seq;
}

inline ComplexMatrix naive_kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline ComplexMatrix naive_site_op(const ComplexMatrix& op, int site, int sites) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int s = 1; s <= sites; ++s) out = naive_kron(out, s == site ? op : ComplexMatrix::Identity(2, 2));
  return out;
}

/// exp(-i t h) by Taylor series after scaling to norm < 0.5, then squaring.
inline ComplexMatrix taylor_expm(const ComplexMatrix& h, double t) {
  ComplexMatrix a = C(0, -t) * h;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.5) ++squarings;
  a /= std::pow(2.0, squarings);
  const Eigen::Index d = h.rows();
  ComplexMatrix term = ComplexMatrix::Identity(d, d);
  ComplexMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Explicit slice-by-slice product with the Taylor exponential.
inline ComplexMatrix naive_propagate(const std::function<ComplexMatrix(double, double)>& hamiltonian,
                                     const ControlSequence& seq) {
  ComplexMatrix u;
  for (int j = 0; j < seq.slices(); ++j) {
    const ComplexMatrix step = taylor_expm(hamiltonian(seq.hx[j], seq.hy[j]), seq.dt);
    u = j == 0 ? step : ComplexMatrix(step * u);
  }
  return u;
}

/// Heisenberg chain built term by term from naive Kronecker products.
inline ComplexMatrix naive_drift(int sites, double coupling) {
  const int dim = 1 << sites;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (int i = 1; i < sites; ++i)
    for (Axis axis : {Axis::X, Axis::Y, Axis::Z})
      h += naive_site_op(pauli(axis), i, sites) * naive_site_op(pauli(axis), i + 1, sites);
  return coupling * h;
}

/// Trace norm as the sum of singular values.
inline double svd_trace_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

/// Central finite-difference gradient.
inline RealVector central_difference(const std::function<double(const RealVector&)>& f,
                                     const RealVector& x, double step) {
  RealVector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    RealVector xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    g[i] = (f(xp) - f(xm)) / (2.0 * step);
  }
  return g;
}

}  // namespace spinctrl::testing

#endif  // SPINCTRL_TESTS_TEST_SUPPORT_HPP_
