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

#include "geodd/dynamics.hpp"
#include "geodd/gate_design.hpp"

namespace geodd {
namespace {

// Five-point central difference with step h.
template <class F>
auto derivative(F&& f, double t, double h = 1e-6) {
  return ((f(t - 2 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2 * h)) / (12.0 * h)).eval();
}

LoopPath fig_path(double tau = 0.0125) {
  SynthesisRequest q;
  q.tau = tau;
  return synthesize_path(q);
}

// North-pole start, ramp down to theta1, sweep, ramp back. The loop encloses
// a cap of known solid angle.
LoopPath cap_path(double theta1, double dphi) {
  const double tau = 0.01;
  const int m_ramp = 10;
  const double rabi = theta1 / (2.0 * m_ramp * tau);
  return LoopPath(0.0, 0.0, tau,
                  {PathSegment::ramp(m_ramp, rabi, 0.0), PathSegment::sweep(20, dphi / (20 * tau)),
                   PathSegment::ramp(m_ramp, -rabi, dphi)});
}

TEST(FrameHamiltonian, DrivesFrameStatesWithoutDynamicalPhase) {
  // H |nu_k> = i (1 - |nu_k><nu_k|) d/dt |nu_k>, with the derivative taken numerically.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const FramePoint p{std::abs(u(rng)), u(rng), u(rng), u(rng)};
    const Op2 h = frame_hamiltonian(p);
    auto nu = [&](int k) {
      return [&, k](double t) {
        const double th = p.theta + p.theta_dot * t, ph = p.phi + p.phi_dot * t;
        return k == 1 ? detail::nu1(th, ph) : detail::nu2(th, ph);
      };
    };
    for (int k = 1; k <= 2; ++k) {
      const State2 v = nu(k)(0.0);
      const State2 dv = derivative(nu(k), 0.0);
      const State2 expect = kI * (dv - v * v.dot(dv));
      EXPECT_LT((h * v - expect).norm(), 1e-8);
      EXPECT_LT(std::abs(v.dot(h * v)), 1e-14);
    }
  }
}

TEST(DressedHamiltonian, MatchesRotatedFrameByFiniteDifference) {
  // H' = V H V^dag + i (dV/dt) V^dag
  const LoopPath p = fig_path();
  for (int n = 1; n <= 3; ++n) {
    const DressingSpec d{n, p.tau(), DressingTarget::one_qubit};
    for (double t : {0.01, 0.0731, 0.2, 0.41}) {
      auto v = [&](double s) { return dressing_operator<2>(d, s); };
      const Op2 vt = v(t);
      const Op2 expect = vt * bare_hamiltonian<2>(p, t) * vt.adjoint() + kI * derivative(v, t) * vt.adjoint();
      EXPECT_LT((dressed_hamiltonian<2>(p, d, t) - expect).norm(), 1e-6) << "n=" << n << " t=" << t;
    }
  }
}

TEST(DressedHamiltonian, PairDressesTheElectronInBothBlocks) {
  SynthesisRequest q;
  q.qubits = 2;
  q.axis = {0.0, 0.0, 1.0};
  const LoopPath p = synthesize_path(q);
  const DressingSpec d{1, p.tau(), DressingTarget::electron_of_pair};
  const double t = 0.1234;
  auto v = [&](double s) { return dressing_operator<4>(d, s); };
  const Op4 vt = v(t);
  const Op4 expect = vt * bare_hamiltonian<4>(p, t) * vt.adjoint() + kI * derivative(v, t) * vt.adjoint();
  EXPECT_LT((dressed_hamiltonian<4>(p, d, t) - expect).norm(), 1e-6);
  EXPECT_LT((dressing_generator<4>(d) - d.rate() * tensor<2, 2>(pauli::x(), pauli::identity())).norm(), 1e-9);
}

TEST(Dressing, PeriodicAndDecoupling) {
  for (int n = 1; n <= 4; ++n) {
    const DressingSpec d{n, 0.01, DressingTarget::one_qubit};
    for (int m = 1; m <= 5; ++m) EXPECT_LT((dressing_operator<2>(d, m * d.tau) - Op2::Identity()).norm(), 1e-12);
    const auto di = decoupling_integral<2>(d, BathCoupling<2>::classical(pauli::z()));
    EXPECT_LT(di.quadrature.norm(), 1e-10);
    EXPECT_LT(di.closed_form.norm(), 1e-15);
    // sigma_x commutes with V and is not averaged away.
    const auto dx = decoupling_integral<2>(d, BathCoupling<2>::classical(pauli::x()));
    EXPECT_LT((dx.quadrature - Eigen::MatrixXcd(pauli::x())).norm(), 1e-10);
  }
  EXPECT_THROW(decoupling_integral<2>(DressingSpec{1, 0.01, DressingTarget::one_qubit},
                                      BathCoupling<2>::classical(pauli::z()), 7),
               Error);
}

TEST(GeometricPhase, CapSolidAngleBySimpson) {
  const double theta1 = 1.1, dphi = 2.3;
  const LoopPath p = cap_path(theta1, dphi);
  // (1/2) integral (1 - cos theta) phi_dot dt by Simpson over the whole loop.
  const int n = 4000;
  const double T = p.total_time(), h = T / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const FramePoint f = p.point(h * i);
    acc += w * 0.5 * (1.0 - std::cos(f.theta)) * f.phi_dot;
  }
  acc *= h / 3.0;
  const GeometricPhase g = geometric_phase(p);
  EXPECT_NEAR(g.gamma, acc, 1e-3);  // the integrand jumps at segment ends
  EXPECT_NEAR(g.gamma, 0.5 * (1.0 - std::cos(theta1)) * dphi, 1e-12);
  EXPECT_EQ(g.closure, 0.0);
}

TEST(GeometricPhase, PropagationOracle) {
  // <nu_1(0)| U(T) |nu_1(0)> = e^{i chi} e^{-i gamma}, <nu_2|U|nu_2> = e^{i chi} e^{+i gamma}
  for (const LoopPath& p : {cap_path(1.1, 2.3), fig_path()}) {
    const Op2 u = propagate_unitary<2>(bare_schedule<2>(p), PropagationGrid{p.tau() / 200, 1});
    const auto nu = frame_states<2>(p, 0.0);
    const GeometricPhase g = geometric_phase(p);
    EXPECT_LT(std::abs(nu[0].dot(u * nu[0]) - std::exp(kI * (g.closure - g.gamma))), 1e-8);
    EXPECT_LT(std::abs(nu[1].dot(u * nu[1]) - std::exp(kI * (g.closure + g.gamma))), 1e-8);
    EXPECT_LT(operator_distance<2>(u, ideal_gate<2>(p)).phase_sensitive, 1e-8);
  }
}

TEST(GeometricPhase, OpenPathIsRejected) {
  const LoopPath open(kPi / 2, 0.0, 0.01, {PathSegment::ramp(5, 1.0, 0.0)});
  EXPECT_FALSE(closure_phase(open).has_value());
  EXPECT_THROW(geometric_phase(open), Error);
}

TEST(DynamicalPhase, VanishesOnSynthesizedPaths) {
  for (Recipe r : {Recipe::orange_slice, Recipe::pole_sweep}) {
    SynthesisRequest q;
    q.axis = {0.48, 0.6, 0.64};
    q.angle = -1.3;
    q.recipe = r;
    const LoopPath p = synthesize_path(q);
    EXPECT_LT(dynamical_phase_residual<2>(p, sample_times(p, 1000)), 1e-12) << to_string(r);
    q.qubits = 2;
    const LoopPath p2 = synthesize_path(q);
    EXPECT_LT(dynamical_phase_residual<4>(p2, sample_times(p2, 1000)), 1e-12);
  }
}

TEST(Synthesis, FigureGateIsExact) {
  const LoopPath p = fig_path();
  EXPECT_NEAR(p.total_time(), 0.5, 1e-15);
  const Op2 target = hermitian_exp<2>(pauli::x(), kPi / 4);
  EXPECT_LT(operator_distance<2>(ideal_gate<2>(p), target).phase_sensitive, 1e-15);
  const Op2 u = propagate_unitary<2>(bare_schedule<2>(p), PropagationGrid{p.tau() / 40, 1});
  EXPECT_LT(operator_distance<2>(u, target).phase_insensitive, 1e-12);
}

TEST(Synthesis, PolesAndRecipes) {
  for (const std::array<double, 3>& n : {std::array<double, 3>{0, 0, 1}, std::array<double, 3>{0, 0, -1},
                                         std::array<double, 3>{0, 1, 0}}) {
    for (Recipe r : {Recipe::orange_slice, Recipe::pole_sweep}) {
      if (r == Recipe::pole_sweep && n[2] < 0) continue;
      SynthesisRequest q;
      q.axis = n;
      q.angle = 0.9;
      q.recipe = r;
      const LoopPath p = synthesize_path(q);
      const Op2 target = hermitian_exp<2>(Op2(pauli::along(n[0], n[1], n[2])), 0.9);
      EXPECT_LT(operator_distance<2>(ideal_gate<2>(p), target).phase_insensitive, 1e-12);
      const Op2 u = propagate_unitary<2>(bare_schedule<2>(p), PropagationGrid{p.tau() / 400, 1});
      EXPECT_LT(operator_distance<2>(u, target).phase_insensitive, 1e-7);
    }
  }
}

TEST(Synthesis, RejectsBadRequests) {
  SynthesisRequest q;
  q.axis = {1.0, 1.0, 0.0};
  EXPECT_THROW(synthesize_path(q), Error);
  q = {};
  q.angle = 4.0;
  EXPECT_THROW(synthesize_path(q), Error);
  q = {};
  q.rabi = 0.0;
  EXPECT_THROW(synthesize_path(q), Error);
  q = {};
  q.tau = 1.0;  // ramps shorter than half a period
  EXPECT_THROW(synthesize_path(q), Error);
  q = {};
  q.axis = {0.0, 0.0, -1.0};
  q.recipe = Recipe::pole_sweep;
  EXPECT_THROW(synthesize_path(q), Error);
}

TEST(TwoQubitIdeal, ControlledPhaseAndNot) {
  SynthesisRequest q;
  q.qubits = 2;
  q.axis = {0, 0, 1};
  q.angle = kPi;
  const Op4 cz = ideal_gate<4>(synthesize_path(q));
  const Op4 expect_cz = tensor<2, 2>(Op2::Identity(), Op2(pauli::proj_down())) - tensor<2, 2>(Op2::Identity(), Op2(pauli::proj_up()));
  EXPECT_LT(operator_distance<4>(cz, expect_cz).phase_insensitive, 1e-12);
  q.axis = {1, 0, 0};
  q.angle = kPi / 2;
  const Op4 cnot = ideal_gate<4>(synthesize_path(q));
  const Op4 expect_cnot =
      tensor<2, 2>(Op2::Identity(), Op2(pauli::proj_down())) + tensor<2, 2>(Op2(-kI * pauli::x()), Op2(pauli::proj_up()));
  EXPECT_LT(operator_distance<4>(cnot, expect_cnot).phase_insensitive, 1e-12);
}

}  // namespace
}  // namespace geodd
