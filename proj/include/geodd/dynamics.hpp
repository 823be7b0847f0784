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

// Time evolution: time-ordered midpoint-exponential propagation for pure
// states and unitaries, RK4 integration of the master equation
//   drho/dt = -i[H, rho] + (Gamma/2) sum_{a = sigma+, sigma-} (2 a^dag rho a - rho a a^dag - a a^dag rho)
// exactly as written (it equals Gamma times the standard dissipator with jump
// operator a^dag, summed over both a), plus rotating-frame and Magnus
// diagnostics and the toy-bath factorization check.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "geodd/csv.hpp"
#include "geodd/gate_design.hpp"
#include "geodd/linalg.hpp"
#include "geodd/schedule.hpp"

namespace geodd {

template <int Dim>
struct TimedState {
  double t = 0.0;
  StateVector<Dim> psi;
};

template <int Dim>
struct TimedDensity {
  double t = 0.0;
  Operator<Dim> rho;
};

/// Flattened trajectory dump: t_us then (re, im) for each entry in row-major
/// order, headers re_i_j/im_i_j (density) or re_i/im_i (state).
template <int Dim>
void write_trajectory_csv(std::ostream& os, const std::vector<TimedDensity<Dim>>& traj) {
  std::vector<std::string> head{"t_us"};
  for (int i = 0; i < Dim; ++i) {
    for (int j = 0; j < Dim; ++j) {
      head.push_back("re_" + std::to_string(i) + "_" + std::to_string(j));
      head.push_back("im_" + std::to_string(i) + "_" + std::to_string(j));
    }
  }
  csv::write_header(os, head);
  for (const auto& p : traj) {
    std::vector<double> row{p.t};
    for (int i = 0; i < Dim; ++i) {
      for (int j = 0; j < Dim; ++j) {
        row.push_back(p.rho(i, j).real());
        row.push_back(p.rho(i, j).imag());
      }
    }
    csv::write_row(os, row);
  }
}

template <int Dim>
void write_trajectory_csv(std::ostream& os, const std::vector<TimedState<Dim>>& traj) {
  std::vector<std::string> head{"t_us"};
  for (int i = 0; i < Dim; ++i) {
    head.push_back("re_" + std::to_string(i));
    head.push_back("im_" + std::to_string(i));
  }
  csv::write_header(os, head);
  for (const auto& p : traj) {
    std::vector<double> row{p.t};
    for (int i = 0; i < Dim; ++i) {
      row.push_back(p.psi(i).real());
      row.push_back(p.psi(i).imag());
    }
    csv::write_row(os, row);
  }
}

/// prod_k exp(-i H(t_mid) dt) in time order.
template <int Dim>
Operator<Dim> propagate_unitary(const HamiltonianSchedule<Dim>& s, const PropagationGrid& grid) {
  Operator<Dim> u = Operator<Dim>::Identity();
  long steps = 0;
  detail::for_each_step(s, grid, [&](double t0, double t1, long) {
    const double mid = 0.5 * (t0 + t1);
    u = hermitian_exp<Dim>(s(mid, mid), t1 - t0) * u;
    ++steps;
  });
  // Rounding drift grows like the square root of the step count.
  const double tol = 1e-12 * std::sqrt(static_cast<double>(std::max(1L, steps))) * Dim;
  const double drift = (u.adjoint() * u - Operator<Dim>::Identity()).norm();
  if (drift > tol) {
    throw Error("propagate_unitary: unitarity drift " + detail::fmt_double(drift) + " after " + std::to_string(steps) +
                " steps");
  }
  return u;
}

template <int Dim>
std::vector<TimedState<Dim>> propagate_state(const HamiltonianSchedule<Dim>& s, const PropagationGrid& grid,
                                             const StateVector<Dim>& psi0) {
  if (std::abs(psi0.norm() - 1.0) > 1e-12) throw Error("propagate_state: initial state is not normalized");
  std::vector<TimedState<Dim>> out{{0.0, psi0}};
  StateVector<Dim> psi = psi0;
  const long total = detail::count_steps(s, grid);
  const int every = std::max(1, grid.record_every);
  detail::for_each_step(s, grid, [&](double t0, double t1, long k) {
    const double mid = 0.5 * (t0 + t1);
    psi = hermitian_exp<Dim>(s(mid, mid), t1 - t0) * psi;
    if ((k + 1) % every == 0 || k + 1 == total) {
      if (std::abs(psi.norm() - 1.0) > 1e-10) throw Error("propagate_state: norm drifted at t=" + std::to_string(t1));
      out.push_back({t1, psi});
    }
  });
  return out;
}

/// Relaxation with jump operators sigma+ and sigma- on the electron (the
/// most significant qubit). Gamma in 1/us.
struct LindbladSpec {
  double gamma = 0.0;
  void validate() const {
    if (!(gamma >= 0.0)) throw Error("LindbladSpec: Gamma must be >= 0");
  }
};

namespace detail {

template <int Dim>
struct Dissipator {
  std::array<Operator<Dim>, 2> a;
  std::array<Operator<Dim>, 2> a_dag;
  Operator<Dim> a_a_dag_sum;  // sum_a a a^dag
  double gamma = 0.0;

  explicit Dissipator(double g) : gamma(g) {
    static_assert(Dim % 2 == 0);
    const Operator<Dim / 2> id = Operator<Dim / 2>::Identity();
    a[0] = tensor<2, Dim / 2>(pauli::plus(), id);
    a[1] = tensor<2, Dim / 2>(pauli::minus(), id);
    for (int i = 0; i < 2; ++i) a_dag[i] = a[i].adjoint();
    a_a_dag_sum = a[0] * a_dag[0] + a[1] * a_dag[1];
  }

  Operator<Dim> apply(const Operator<Dim>& rho) const {
    Operator<Dim> out = -(rho * a_a_dag_sum + a_a_dag_sum * rho);
    for (int i = 0; i < 2; ++i) out += 2.0 * a_dag[i] * rho * a[i];
    return 0.5 * gamma * out;
  }
};

template <int Dim>
Operator<Dim> lindblad_rhs(const Operator<Dim>& h, const Operator<Dim>& rho, const Dissipator<Dim>& d) {
  Operator<Dim> out = -kI * (h * rho - rho * h);
  if (d.gamma != 0.0) out += d.apply(rho);
  return out;
}

/// One classical RK4 step; H sampled at t0, the midpoint and t1 of the step.
template <int Dim>
Operator<Dim> rk4_step(const HamiltonianSchedule<Dim>& s, const Dissipator<Dim>& d, const Operator<Dim>& rho,
                       double t0, double t1) {
  const double h = t1 - t0;
  const double mid = 0.5 * (t0 + t1);
  const Operator<Dim> h0 = s(t0, mid);
  const Operator<Dim> hm = s(mid, mid);
  const Operator<Dim> h1 = s(t1, mid);
  const Operator<Dim> k1 = lindblad_rhs<Dim>(h0, rho, d);
  const Operator<Dim> k2 = lindblad_rhs<Dim>(hm, rho + 0.5 * h * k1, d);
  const Operator<Dim> k3 = lindblad_rhs<Dim>(hm, rho + 0.5 * h * k2, d);
  const Operator<Dim> k4 = lindblad_rhs<Dim>(h1, rho + h * k3, d);
  return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

/// RK4 integration of the master equation. rho is re-symmetrized after every
/// step; a trace drift above 1e-6 aborts with the offending time.
template <int Dim>
std::vector<TimedDensity<Dim>> lindblad_evolve(const HamiltonianSchedule<Dim>& s, const LindbladSpec& spec,
                                               const PropagationGrid& grid, const Operator<Dim>& rho0) {
  spec.validate();
  if (!is_density_matrix(rho0, 1e-10)) throw Error("lindblad_evolve: initial state is not a density matrix");
  const detail::Dissipator<Dim> diss(spec.gamma);
  std::vector<TimedDensity<Dim>> out{{0.0, rho0}};
  Operator<Dim> rho = rho0;
  const cplx tr0 = rho0.trace();
  const long total = detail::count_steps(s, grid);
  const int every = std::max(1, grid.record_every);
  detail::for_each_step(s, grid, [&](double t0, double t1, long k) {
    rho = detail::rk4_step<Dim>(s, diss, rho, t0, t1);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    if ((k + 1) % every == 0 || k + 1 == total) {
      const double drift = std::abs(rho.trace() - tr0);
      if (drift > 1e-6) {
        throw Error("lindblad_evolve: trace drift " + detail::fmt_double(drift) + " at t=" + std::to_string(t1) +
                    "; reduce dt");
      }
      out.push_back({t1, rho});
    }
  });
  return out;
}

/// Linear map rho(t0) -> rho(t1) of the RK4 scheme on vec(rho) (column
/// stacking). Reusing it over identical periods reproduces step-by-step
/// integration up to rounding.
template <int Dim>
using Superoperator = Eigen::Matrix<cplx, Dim * Dim, Dim * Dim>;

template <int Dim>
Superoperator<Dim> lindblad_map(const HamiltonianSchedule<Dim>& s, const LindbladSpec& spec,
                                const PropagationGrid& grid) {
  spec.validate();
  const detail::Dissipator<Dim> diss(spec.gamma);
  Superoperator<Dim> map;
  for (int j = 0; j < Dim; ++j) {
    for (int i = 0; i < Dim; ++i) {
      Operator<Dim> e = Operator<Dim>::Zero();
      e(i, j) = 1.0;
      detail::for_each_step(s, grid, [&](double t0, double t1, long) { e = detail::rk4_step<Dim>(s, diss, e, t0, t1); });
      map.col(j * Dim + i) = Eigen::Map<const Eigen::Matrix<cplx, Dim * Dim, 1>>(e.data());
    }
  }
  return map;
}

template <int Dim>
Operator<Dim> apply_map(const Superoperator<Dim>& map, const Operator<Dim>& rho) {
  const Eigen::Matrix<cplx, Dim * Dim, 1> v = map * Eigen::Map<const Eigen::Matrix<cplx, Dim * Dim, 1>>(rho.data());
  Operator<Dim> out = Eigen::Map<const Operator<Dim>>(v.data());
  return 0.5 * (out + out.adjoint());
}

/// H_r = V^dag [H' + field * S - i dV/dt V^dag] V for a classical field:
/// the dressing terms of H' cancel and the coupling is conjugated by V.
template <int Dim>
HamiltonianSchedule<Dim> rotating_frame(HamiltonianSchedule<Dim> dressed, const DressingSpec& d,
                                        const BathCoupling<Dim>& coupling, std::function<double(double)> field) {
  coupling.validate();
  const Operator<Dim> gen = dressing_generator<Dim>(d);
  const Operator<Dim> s = coupling.system_op;
  auto inner = std::move(dressed.eval);
  dressed.eval = [inner = std::move(inner), d, gen, s, field = std::move(field)](double t, double t_ref) {
    const Operator<Dim> v = dressing_operator<Dim>(d, t);
    const double f = field ? field(t_ref) : 0.0;
    return Operator<Dim>(v.adjoint() * (inner(t, t_ref) + f * s - gen) * v);
  };
  dressed.dressing_period = d.tau;
  return dressed;
}

/// Toy-spin bath: system (x) bath, with H_E = omega_e sigma_z and
/// H_SE = lambda S (x) sigma_x; the result lives in dimension 2 Dim.
template <int Dim>
HamiltonianSchedule<2 * Dim> rotating_frame(const HamiltonianSchedule<Dim>& dressed, const DressingSpec& d,
                                            const BathCoupling<Dim>& coupling) {
  coupling.validate();
  if (!coupling.toy) throw Error("rotating_frame: coupling has no toy bath spin");
  const ToySpin spin = *coupling.toy;
  const Operator<Dim> gen = dressing_generator<Dim>(d);
  const Operator<Dim> s = coupling.system_op;
  const Operator<2 * Dim> h_env = spin.omega_e * tensor<Dim, 2>(Operator<Dim>::Identity(), pauli::z());
  auto inner = dressed.eval;
  HamiltonianSchedule<2 * Dim> out;
  out.eval = [inner, d, gen, s, h_env, spin](double t, double t_ref) {
    const Operator<Dim> v = dressing_operator<Dim>(d, t);
    const Operator<Dim> sys = v.adjoint() * (inner(t, t_ref) - gen) * v;
    const Operator<Dim> coup = v.adjoint() * s * v;
    return Operator<2 * Dim>(tensor<Dim, 2>(sys, Op2::Identity()) + h_env +
                             spin.lambda * tensor<Dim, 2>(coup, pauli::x()));
  };
  out.total_time = dressed.total_time;
  out.breaks = dressed.breaks;
  out.dressing_period = d.tau;
  return out;
}

/// System + toy spin in the lab frame: H (x) I + I (x) omega_e sigma_z
/// + lambda S (x) sigma_x.
template <int Dim>
HamiltonianSchedule<2 * Dim> with_toy_bath(const HamiltonianSchedule<Dim>& sys, const BathCoupling<Dim>& coupling) {
  coupling.validate();
  if (!coupling.toy) throw Error("with_toy_bath: coupling has no toy bath spin");
  const ToySpin spin = *coupling.toy;
  const Operator<2 * Dim> fixed = spin.omega_e * tensor<Dim, 2>(Operator<Dim>::Identity(), pauli::z()) +
                                  spin.lambda * tensor<Dim, 2>(coupling.system_op, pauli::x());
  auto inner = sys.eval;
  HamiltonianSchedule<2 * Dim> out;
  out.eval = [inner, fixed](double t, double t_ref) {
    return Operator<2 * Dim>(tensor<Dim, 2>(inner(t, t_ref), Op2::Identity()) + fixed);
  };
  out.total_time = sys.total_time;
  out.breaks = sys.breaks;
  out.dressing_period = sys.dressing_period;
  return out;
}

template <int Dim>
struct MagnusWindow {
  Operator<Dim> average;   ///< (1/tau) integral of H_r over the window
  double residual = 0.0;   ///< || T-exp over the window - exp(-i average tau) ||_F
};

/// Lowest-order Magnus term over [t_start, t_start + tau] by composite
/// Simpson quadrature, and the size of everything it neglects. `steps` sets
/// both the quadrature resolution and the time-ordered reference.
template <int Dim>
MagnusWindow<Dim> magnus_first_order(const HamiltonianSchedule<Dim>& s, double t_start, double tau, int steps = 2000) {
  if (!(tau > 0.0)) throw Error("magnus_first_order: tau must be > 0");
  const double cycles = t_start / tau;
  if (std::abs(cycles - std::round(cycles)) > 1e-9) {
    throw Error("magnus_first_order: window start " + std::to_string(t_start) + " is not a multiple of tau");
  }
  if (t_start + tau > s.total_time * (1.0 + 1e-12) + 1e-15) throw Error("magnus_first_order: window exceeds schedule");
  if (steps < 2 || steps % 2) throw Error("magnus_first_order: steps must be even");
  const double h = tau / steps;
  const double ref = t_start + 0.5 * tau;
  Operator<Dim> avg = Operator<Dim>::Zero();
  for (int i = 0; i <= steps; ++i) {
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    avg += w * s(t_start + h * i, ref);
  }
  avg *= h / 3.0 / tau;
  avg = 0.5 * (avg + avg.adjoint()).eval();

  HamiltonianSchedule<Dim> window{[&s, t_start](double t, double) { return s(t_start + t, t_start + t); }, tau, {}, 0.0};
  const Operator<Dim> exact = propagate_unitary(window, PropagationGrid{h, 1});
  return {avg, (exact - hermitian_exp<Dim>(avg, tau)).norm()};
}

struct ToyBathReport {
  double purity = 0.0;               ///< Tr(rho_sys^2) at T
  double factorization_error = 0.0;  ///< phase-insensitive distance of <g|U|g> to the ideal gate
  double infidelity = 0.0;           ///< 1 - <psi_ideal|rho_sys|psi_ideal>
};

/// Exact propagation of the one-qubit path with one toy bath spin coupled
/// through lambda sigma_z (x) sigma_x. Without a dressing the bare path
/// Hamiltonian is used. Initial state (|0>+|1>)/sqrt(2) (x) |g>, where |g>
/// is the lower eigenvector of omega_e sigma_z (|1> for omega_e >= 0).
inline ToyBathReport toy_bath_factorization(const LoopPath& path, const std::optional<DressingSpec>& dressing,
                                            ToySpin spin, const PropagationGrid& grid) {
  detail::require_path_dim<2>(path, "toy_bath_factorization");
  const auto coupling = BathCoupling<2>::toy_spin(pauli::z(), spin);
  const HamiltonianSchedule<2> sys = dressing ? dressed_schedule<2>(path, *dressing) : bare_schedule<2>(path);
  const Op4 u = propagate_unitary(with_toy_bath<2>(sys, coupling), grid);

  const int g = spin.omega_e >= 0.0 ? 1 : 0;
  Op2 block;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) block(i, j) = u(2 * i + g, 2 * j + g);
  }
  State2 plus;
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  State2 bath = State2::Zero();
  bath(g) = 1.0;
  const State4 psi = u * tensor<2, 2>(plus, bath);
  const Op2 rho = partial_trace_second<2, 2>(Op4(psi * psi.adjoint()));
  const Op2 target = ideal_gate<2>(path);
  const State2 ideal = target * plus;
  return {purity(rho), operator_distance<2>(block, target).phase_insensitive,
          1.0 - ideal.dot(rho * ideal).real()};
}

}  // namespace geodd
