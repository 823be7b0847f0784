// Copyright 2026 The geodd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Small-dimension complex linear algebra. Operators are fixed-size Eigen
// matrices; every routine here is pure and allocation-free for Dim <= 8.
//
// Units: time in microseconds, Hamiltonian entries in rad/us, so that
// hermitian_exp(H, t) = exp(-i H t) needs no extra factors.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace geodd {

using cplx = std::complex<double>;
inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;

template <int Dim>
using Operator = Eigen::Matrix<cplx, Dim, Dim>;

template <int Dim>
using StateVector = Eigen::Matrix<cplx, Dim, 1>;

using Op2 = Operator<2>;
using Op4 = Operator<4>;
using State2 = StateVector<2>;
using State4 = StateVector<4>;

/// Raised for contract violations: bad inputs, broken invariants, I/O.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
template <int Dim>
constexpr void check_dim() {
  static_assert(Dim >= 1 && Dim <= 8, "operators are limited to dimension 8");
}

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}
}  // namespace detail

namespace pauli {
inline Op2 identity() { return Op2::Identity(); }
inline Op2 x() {
  Op2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
inline Op2 y() {
  Op2 m;
  m << 0.0, -kI, kI, 0.0;
  return m;
}
inline Op2 z() {
  Op2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
/// sigma_+ = |0><1| in the basis (|0>, |1>) with sigma_z|0> = +|0>.
inline Op2 plus() {
  Op2 m;
  m << 0.0, 1.0, 0.0, 0.0;
  return m;
}
inline Op2 minus() { return plus().adjoint(); }
/// Projectors on the nuclear basis; |up> is index 0, |down> index 1.
inline Op2 proj_up() {
  Op2 m;
  m << 1.0, 0.0, 0.0, 0.0;
  return m;
}
inline Op2 proj_down() {
  Op2 m;
  m << 0.0, 0.0, 0.0, 1.0;
  return m;
}
/// n . sigma for a real 3-vector n.
inline Op2 along(double nx, double ny, double nz) { return nx * x() + ny * y() + nz * z(); }
}  // namespace pauli

template <int Dim>
double anti_hermitian_norm(const Operator<Dim>& h) {
  return (0.5 * (h - h.adjoint())).norm();
}

/// Tolerances on these predicates are absolute, in Frobenius norm.
template <int Dim>
bool is_hermitian(const Operator<Dim>& h, double tol) {
  return anti_hermitian_norm(h) <= tol;
}

template <int Dim>
bool is_unitary(const Operator<Dim>& u, double tol) {
  return (u.adjoint() * u - Operator<Dim>::Identity()).norm() <= tol;
}

template <int Dim>
bool is_density_matrix(const Operator<Dim>& rho, double tol) {
  if (!is_hermitian(rho, tol)) return false;
  if (std::abs(rho.trace() - cplx{1.0, 0.0}) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Operator<Dim>> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

/// exp(-i H t) for Hermitian H via its eigendecomposition. Dimension 2 uses
/// the closed-form spectrum of a0*I + a.sigma; larger dimensions use Eigen's
/// self-adjoint solver.
///
/// The Hermiticity check is relative: ||(H - H^dag)/2|| <= 1e-12 * max(1, ||H||).
template <int Dim>
Operator<Dim> hermitian_exp(const Operator<Dim>& h, double t) {
  detail::check_dim<Dim>();
  const double anti = anti_hermitian_norm(h);
  if (anti > 1e-12 * std::max(1.0, h.norm())) {
    throw Error("hermitian_exp: operator is not Hermitian (anti-Hermitian norm " + detail::fmt_double(anti) +
                ")");
  }
  if constexpr (Dim == 2) {
    const double a0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double ax = 0.5 * (h(0, 1).real() + h(1, 0).real());
    const double ay = 0.5 * (h(1, 0).imag() - h(0, 1).imag());
    const double az = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const double r = std::sqrt(ax * ax + ay * ay + az * az);
    const double c = std::cos(r * t);
    // sin(r t)/r, finite as r -> 0.
    const double s = r > 1e-300 ? std::sin(r * t) / r : t;
    const cplx phase = std::exp(cplx{0.0, -a0 * t});
    Op2 u;
    u(0, 0) = phase * cplx{c, -s * az};
    u(1, 1) = phase * cplx{c, s * az};
    u(0, 1) = phase * (-kI * s * cplx{ax, -ay});
    u(1, 0) = phase * (-kI * s * cplx{ax, ay});
    return u;
  } else {
    Eigen::SelfAdjointEigenSolver<Operator<Dim>> es(0.5 * (h + h.adjoint()));
    const auto& vecs = es.eigenvectors();
    Eigen::Matrix<cplx, Dim, 1> phases;
    for (int k = 0; k < Dim; ++k) phases(k) = std::exp(cplx{0.0, -es.eigenvalues()(k) * t});
    return vecs * phases.asDiagonal() * vecs.adjoint();
  }
}

/// Kronecker product; the first factor is the most significant subsystem.
template <int DA, int DB>
Operator<DA * DB> tensor(const Operator<DA>& a, const Operator<DB>& b) {
  detail::check_dim<DA * DB>();
  Operator<DA * DB> out;
  for (int i = 0; i < DA; ++i) {
    for (int j = 0; j < DA; ++j) out.template block<DB, DB>(i * DB, j * DB) = a(i, j) * b;
  }
  return out;
}

template <int DA, int DB>
StateVector<DA * DB> tensor(const StateVector<DA>& a, const StateVector<DB>& b) {
  StateVector<DA * DB> out;
  for (int i = 0; i < DA; ++i) out.template segment<DB>(i * DB) = a(i) * b;
  return out;
}

struct OperatorDistance {
  double phase_insensitive = 0.0;  ///< min over alpha of ||A - e^{i alpha} B||_F
  double phase_sensitive = 0.0;    ///< ||A - B||_F
};

/// The optimal alpha is arg tr(B^dag A); the norm is evaluated directly at that
/// phase rather than through the expanded quadratic, which would lose half the
/// digits near zero.
template <int Dim>
OperatorDistance operator_distance(const Operator<Dim>& a, const Operator<Dim>& b) {
  const cplx overlap = (b.adjoint() * a).trace();
  const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
  return {(a - phase * b).norm(), (a - b).norm()};
}

/// Runtime-dimension overload rejects mismatched shapes.
inline OperatorDistance operator_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error("operator_distance: dimension mismatch (" + std::to_string(a.rows()) + " vs " +
                std::to_string(b.rows()) + ")");
  }
  const cplx overlap = (b.adjoint() * a).trace();
  const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
  return {(a - phase * b).norm(), (a - b).norm()};
}

template <int Dim>
Operator<Dim> commutator(const Operator<Dim>& a, const Operator<Dim>& b) {
  return a * b - b * a;
}

/// Partial trace over the second (least significant) factor of a DA x DB system.
template <int DA, int DB>
Operator<DA> partial_trace_second(const Operator<DA * DB>& rho) {
  Operator<DA> out = Operator<DA>::Zero();
  for (int i = 0; i < DA; ++i) {
    for (int j = 0; j < DA; ++j) {
      cplx acc{0.0, 0.0};
      for (int k = 0; k < DB; ++k) acc += rho(i * DB + k, j * DB + k);
      out(i, j) = acc;
    }
  }
  return out;
}

template <int Dim>
double purity(const Operator<Dim>& rho) {
  return (rho * rho).trace().real();
}

}  // namespace geodd
