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

#ifndef SPINCTRL_LINALG_HPP_
#define SPINCTRL_LINALG_HPP_

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <complex>
#include <stdexcept>
#include <string>

namespace spinctrl {

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;
using RealVector = RVector<double>;

/// Max-entry tolerance used by the structural predicates below.
inline constexpr double kStructureTol = 1e-10;

enum class Axis { X, Y, Z };

/// Bare Pauli matrix (not sigma/2).
template <typename Scalar = double>
CMatrix<Scalar> pauli(Axis axis) {
  using C = std::complex<Scalar>;
  CMatrix<Scalar> m(2, 2);
  switch (axis) {
    case Axis::X:
      m << C(0), C(1), C(1), C(0);
      break;
    case Axis::Y:
      m << C(0), C(0, -1), C(0, 1), C(0);
      break;
    case Axis::Z:
      m << C(1), C(0), C(0), C(-1);
      break;
  }
  return m;
}

template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Plain = typename DerivedA::PlainObject;
  Plain out = Eigen::kroneckerProduct(a.eval(), b.eval()).eval();
  return out;
}

/// I^{(site-1)} (x) op (x) I^{(N-site)}, sites counted from 1 at the most
/// significant tensor factor.
template <typename Derived>
auto embed_single_site(const Eigen::MatrixBase<Derived>& op, int site, int num_sites) {
  using Plain = typename Derived::PlainObject;
  if (op.rows() != 2 || op.cols() != 2)
    throw std::invalid_argument("embed_single_site: operator must be 2x2");
  if (num_sites < 1 || site < 1 || site > num_sites)
    throw std::out_of_range("embed_single_site: site " + std::to_string(site) +
                            " outside chain of length " + std::to_string(num_sites));
  const Eigen::Index left = Eigen::Index(1) << (site - 1);
  const Eigen::Index right = Eigen::Index(1) << (num_sites - site);
  Plain out = kron(kron(Plain::Identity(left, left), op), Plain::Identity(right, right));
  return out;
}

template <typename Derived>
typename Derived::RealScalar max_abs_entry(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kStructureTol) {
  return m.rows() == m.cols() && max_abs_entry(m - m.adjoint()) <= tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m, double tol = kStructureTol) {
  if (m.rows() != m.cols()) return false;
  using Plain = typename Derived::PlainObject;
  return max_abs_entry(m * m.adjoint() - Plain::Identity(m.rows(), m.cols())) <= tol;
}

template <typename Derived>
bool is_positive_semidefinite(const Eigen::MatrixBase<Derived>& m, double tol = kStructureTol) {
  if (!is_hermitian(m, tol)) return false;
  using Plain = typename Derived::PlainObject;
  const Plain sym = (m + m.adjoint()) / 2;
  Eigen::SelfAdjointEigenSolver<Plain> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

/// Spectral decomposition H = V diag(w) V^dagger of a Hermitian matrix.
template <typename Scalar>
struct HermitianEigen {
  RVector<Scalar> values;
  CMatrix<Scalar> vectors;
};

template <typename Derived>
auto hermitian_eigen(const Eigen::MatrixBase<Derived>& h, double tol = kStructureTol) {
  using Real = typename Derived::RealScalar;
  using Plain = CMatrix<Real>;
  if (!is_hermitian(h, tol)) throw std::invalid_argument("hermitian_eigen: input is not Hermitian");
  const Plain sym = (h + h.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<Plain> es(sym);
  if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eigen: eigensolver failed");
  return HermitianEigen<Real>{es.eigenvalues(), es.eigenvectors()};
}

/// exp(-i t h) for Hermitian h, via its spectral decomposition.
template <typename Derived>
auto expm_hermitian_times_minus_i(const Eigen::MatrixBase<Derived>& h,
                                  typename Derived::RealScalar t) {
  using Real = typename Derived::RealScalar;
  using C = std::complex<Real>;
  const auto eig = hermitian_eigen(h);
  const CVector<Real> phases =
      eig.values.unaryExpr([t](Real w) { return std::exp(C(0, -t * w)); });
  CMatrix<Real> out = eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
  return out;
}

/// Traces out the final two-dimensional tensor factor.
template <typename Derived>
auto partial_trace_last_qubit(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  if (m.rows() != m.cols() || m.rows() % 2 != 0)
    throw std::invalid_argument("partial_trace_last_qubit: dimension must be even");
  const Eigen::Index half = m.rows() / 2;
  Plain out(half, half);
  for (Eigen::Index i = 0; i < half; ++i)
    for (Eigen::Index j = 0; j < half; ++j)
      out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
  return out;
}

/// Sum of absolute eigenvalues; defined here for Hermitian input only.
template <typename Derived>
typename Derived::RealScalar trace_norm(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  if (!is_hermitian(m)) throw std::invalid_argument("trace_norm: input is not Hermitian");
  const Plain sym = (m + m.adjoint()) / typename Derived::RealScalar(2);
  Eigen::SelfAdjointEigenSolver<Plain> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace spinctrl

#endif  // SPINCTRL_LINALG_HPP_
