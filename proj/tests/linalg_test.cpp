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

#include <random>

#include <gtest/gtest.h>

#include "geodd/linalg.hpp"

namespace geodd {
namespace {

// Truncated power series of exp(-i H t); the reference for small ||H t||.
template <int Dim>
Operator<Dim> series_exp(const Operator<Dim>& h, double t, int terms = 60) {
  Operator<Dim> out = Operator<Dim>::Identity();
  Operator<Dim> term = Operator<Dim>::Identity();
  const Operator<Dim> a = (-kI * t) * h;
  for (int k = 1; k < terms; ++k) {
    term = (term * a / static_cast<double>(k)).eval();
    out += term;
  }
  return out;
}

template <int Dim>
Operator<Dim> random_hermitian(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Operator<Dim> a;
  for (int i = 0; i < Dim; ++i) {
    for (int j = 0; j < Dim; ++j) a(i, j) = cplx(n(rng), n(rng));
  }
  return 0.5 * (a + a.adjoint());
}

TEST(Pauli, AlgebraRelations) {
  const Op2 x = pauli::x(), y = pauli::y(), z = pauli::z();
  EXPECT_LT((x * x - Op2::Identity()).norm(), 1e-15);
  EXPECT_LT((x * y - kI * z).norm(), 1e-15);
  EXPECT_LT((y * z - kI * x).norm(), 1e-15);
  EXPECT_LT((z * x - kI * y).norm(), 1e-15);
  EXPECT_LT((pauli::plus() + pauli::minus() - x).norm(), 1e-15);
  EXPECT_LT((pauli::proj_up() + pauli::proj_down() - Op2::Identity()).norm(), 1e-15);
  EXPECT_EQ(pauli::proj_up()(0, 0), cplx(1.0));
}

TEST(HermitianExp, MatchesClosedFormRotation) {
  // exp(-i a sigma_x) = cos a I - i sin a sigma_x
  const double a = 0.7;
  const Op2 expect = std::cos(a) * Op2::Identity() - kI * std::sin(a) * pauli::x();
  EXPECT_LT((hermitian_exp<2>(pauli::x(), a) - expect).norm(), 1e-15);
}

TEST(HermitianExp, MatchesPowerSeries) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Op2 h2 = random_hermitian<2>(rng, 1.0);
    const Op4 h4 = random_hermitian<4>(rng, 1.0);
    EXPECT_LT((hermitian_exp<2>(h2, 0.3) - series_exp<2>(h2, 0.3)).norm(), 1e-13);
    EXPECT_LT((hermitian_exp<4>(h4, 0.3) - series_exp<4>(h4, 0.3)).norm(), 1e-13);
  }
}

TEST(HermitianExp, RandomInputsStayUnitaryAndComposeInTime) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const Op4 h = random_hermitian<4>(rng, 3.0);
    const double t1 = ut(rng), t2 = ut(rng);
    const Op4 u = hermitian_exp<4>(h, t1);
    EXPECT_TRUE(is_unitary(u, 1e-12));
    EXPECT_LT((u * hermitian_exp<4>(h, t2) - hermitian_exp<4>(h, t1 + t2)).norm(), 1e-11);
    const Op2 g = random_hermitian<2>(rng, 3.0);
    EXPECT_TRUE(is_unitary(hermitian_exp<2>(g, t1), 1e-13));
    EXPECT_LT((hermitian_exp<2>(g, t1) * hermitian_exp<2>(g, -t1) - Op2::Identity()).norm(), 1e-13);
  }
}

TEST(HermitianExp, ZeroAndDegenerateInputs) {
  EXPECT_LT((hermitian_exp<2>(Op2::Zero(), 3.0) - Op2::Identity()).norm(), 1e-15);
  const Op4 h = 2.0 * Op4::Identity();
  EXPECT_LT((hermitian_exp<4>(h, 0.5) - std::exp(-kI) * Op4::Identity()).norm(), 1e-14);
}

TEST(HermitianExp, RejectsNonHermitian) {
  Op2 h = pauli::x();
  h(0, 1) += 1e-3;
  EXPECT_THROW(hermitian_exp<2>(h, 1.0), Error);
  try {
    hermitian_exp<2>(h, 1.0);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("not Hermitian"), std::string::npos);
  }
}

TEST(Tensor, OrderingIsFirstFactorMostSignificant) {
  State2 up = State2::Zero(), down = State2::Zero();
  up(0) = 1.0;
  down(1) = 1.0;
  const State4 ud = tensor<2, 2>(up, down);
  EXPECT_EQ(ud(1), cplx(1.0));
  const Op4 zx = tensor<2, 2>(pauli::z(), pauli::x());
  EXPECT_LT(((zx * ud) - tensor<2, 2>(State2(pauli::z() * up), State2(pauli::x() * down))).norm(), 1e-15);
}

TEST(PartialTrace, ProductStatesFactor) {
  std::mt19937_64 rng(5);
  const Op2 a = hermitian_exp<2>(random_hermitian<2>(rng, 1.0), 1.0) * Op2(0.5 * (Op2::Identity() + pauli::z())) ;
  const Op2 rho_a = a * a.adjoint() / (a * a.adjoint()).trace();
  const Op2 rho_b = 0.5 * (Op2::Identity() + 0.3 * pauli::x());
  const Op4 rho = tensor<2, 2>(rho_a, rho_b);
  EXPECT_LT((partial_trace_second<2, 2>(rho) - rho_a).norm(), 1e-14);
  EXPECT_NEAR(purity(rho_a), 1.0, 1e-14);
  EXPECT_NEAR(purity<2>(Op2(0.5 * Op2::Identity())), 0.5, 1e-15);
}

TEST(OperatorDistance, IgnoresGlobalPhaseOnly) {
  std::mt19937_64 rng(9);
  const Op4 u = hermitian_exp<4>(random_hermitian<4>(rng, 1.0), 1.0);
  const Op4 v = std::exp(kI * 1.234) * u;
  const auto d = operator_distance<4>(u, v);
  EXPECT_LT(d.phase_insensitive, 1e-14);
  EXPECT_GT(d.phase_sensitive, 1.0);
  // A relative phase between blocks is not a global phase.
  Op4 w = u;
  w.row(0) *= std::exp(kI * 0.1);
  EXPECT_GT(operator_distance<4>(u, w).phase_insensitive, 0.05);
}

TEST(OperatorDistance, DynamicOverloadRejectsShapeMismatch) {
  const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2);
  const Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(4, 4);
  EXPECT_THROW(operator_distance(a, b), Error);
  EXPECT_NEAR(operator_distance(a, Eigen::MatrixXcd(-a)).phase_insensitive, 0.0, 1e-15);
}

TEST(Predicates, DensityMatrixChecks) {
  EXPECT_TRUE(is_density_matrix<2>(Op2(0.5 * Op2::Identity()), 1e-12));
  EXPECT_FALSE(is_density_matrix<2>(Op2(pauli::z()), 1e-12));
  EXPECT_FALSE(is_density_matrix<2>(Op2(Op2::Identity()), 1e-12));
  EXPECT_TRUE(is_hermitian<2>(pauli::y(), 0.0));
  EXPECT_LT(commutator<2>(pauli::x(), pauli::x()).norm(), 1e-15);
}

}  // namespace
}  // namespace geodd
