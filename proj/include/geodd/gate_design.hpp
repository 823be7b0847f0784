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

// Geometric gate construction: frame states, the frame Hamiltonian that
// drives them with zero dynamical phase, the dressed (decoupled) Hamiltonian
// H' = V H V^dag + i dV/dt V^dag, closed-form phases, and path synthesis.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "geodd/linalg.hpp"
#include "geodd/path.hpp"
#include "geodd/schedule.hpp"

namespace geodd {

namespace detail {

template <int Dim>
void require_path_dim(const LoopPath& path, const char* what) {
  static_assert(Dim == 2 || Dim == 4, "paths act on one qubit (dim 2) or an electron-nuclear pair (dim 4)");
  if (path.dim() != Dim) {
    throw Error(std::string(what) + ": path acts on dimension " + std::to_string(path.dim()) + ", requested " +
                std::to_string(Dim));
  }
}

template <int Dim>
void require_dressing_dim(const DressingSpec& d, const char* what) {
  d.validate();
  if (d.dim() != Dim) {
    throw Error(std::string(what) + ": dressing acts on dimension " + std::to_string(d.dim()) + ", requested " +
                std::to_string(Dim));
  }
}

/// Embeds a one-qubit operator as electron (x) |up><up| for the pair.
template <int Dim>
Operator<Dim> embed_driven(const Op2& h) {
  if constexpr (Dim == 2) {
    return h;
  } else {
    return tensor<2, 2>(h, pauli::proj_up());
  }
}

inline State2 nu1(double theta, double phi) {
  State2 v;
  v << std::cos(0.5 * theta), std::sin(0.5 * theta) * std::exp(cplx{0.0, phi});
  return v;
}
inline State2 nu2(double theta, double phi) {
  State2 v;
  v << std::sin(0.5 * theta) * std::exp(cplx{0.0, -phi}), -std::cos(0.5 * theta);
  return v;
}

}  // namespace detail

/// Frame Hamiltonian for |nu_1>, |nu_2> with arbitrary (theta_dot, phi_dot):
///   -(1/2)[theta_dot sin(phi) + phi_dot sin(theta)cos(theta)cos(phi)] sigma_x
///   +(1/2)[theta_dot cos(phi) - phi_dot sin(theta)cos(theta)sin(phi)] sigma_y
///   +(1/2) phi_dot sin^2(theta) sigma_z
inline Op2 frame_hamiltonian(const FramePoint& p) {
  const double st = std::sin(p.theta);
  const double ct = std::cos(p.theta);
  const double sp = std::sin(p.phi);
  const double cp = std::cos(p.phi);
  const double hx = -0.5 * (p.theta_dot * sp + p.phi_dot * st * ct * cp);
  const double hy = 0.5 * (p.theta_dot * cp - p.phi_dot * st * ct * sp);
  const double hz = 0.5 * p.phi_dot * st * st;
  return pauli::along(hx, hy, hz);
}

/// |nu_k(t)>, k = 1..Dim. For the pair the order is |0 down>, |1 down>,
/// then the two driven states of the nuclear-up block.
template <int Dim>
std::vector<StateVector<Dim>> frame_states(const LoopPath& path, double t) {
  detail::require_path_dim<Dim>(path, "frame_states");
  const FramePoint p = path.point(t);
  const State2 a = detail::nu1(p.theta, p.phi);
  const State2 b = detail::nu2(p.theta, p.phi);
  if constexpr (Dim == 2) {
    return {a, b};
  } else {
    const State2 up = State2::UnitX();
    const State2 down = State2::UnitY();
    return {tensor<2, 2>(State2(State2::UnitX()), down), tensor<2, 2>(State2(State2::UnitY()), down),
            tensor<2, 2>(a, up), tensor<2, 2>(b, up)};
  }
}

namespace detail {
/// H_S(t) on the driven two-level block, whatever the path's qubit count.
inline Op2 driven_hamiltonian(const LoopPath& path, double t, double t_ref) {
  const PathSegment& seg = path.segments()[path.spans()[path.span_at(t_ref)].segment];
  if (seg.kind == SegmentKind::theta_ramp) {
    return seg.rabi * (-std::sin(seg.phi) * pauli::x() + std::cos(seg.phi) * pauli::y());
  }
  return frame_hamiltonian(path.point(t, t_ref));
}
}  // namespace detail

/// H_S(t). Theta ramps give Omega_j(-sin(phi_j) sigma_x + cos(phi_j) sigma_y);
/// phi sweeps the full frame Hamiltonian with theta_dot = 0. For the pair the
/// result acts on the nuclear-up block only.
template <int Dim>
Operator<Dim> bare_hamiltonian(const LoopPath& path, double t, double t_ref) {
  detail::require_path_dim<Dim>(path, "bare_hamiltonian");
  path.point(t, t_ref);  // range check
  return detail::embed_driven<Dim>(detail::driven_hamiltonian(path, t, t_ref));
}
template <int Dim>
Operator<Dim> bare_hamiltonian(const LoopPath& path, double t) {
  return bare_hamiltonian<Dim>(path, t, t);
}

/// V(t) for the given dressing.
template <int Dim>
Operator<Dim> dressing_operator(const DressingSpec& d, double t) {
  detail::require_dressing_dim<Dim>(d, "dressing_operator");
  const double a = d.rate() * t;
  const Op2 v = std::cos(a) * pauli::identity() - kI * std::sin(a) * pauli::x();
  if constexpr (Dim == 2) {
    return v;
  } else {
    return tensor<2, 2>(v, pauli::identity());
  }
}

/// i dV/dt V^dag = n w sigma_x on the electron.
template <int Dim>
Operator<Dim> dressing_generator(const DressingSpec& d) {
  detail::require_dressing_dim<Dim>(d, "dressing_generator");
  if constexpr (Dim == 2) {
    return d.rate() * pauli::x();
  } else {
    return d.rate() * tensor<2, 2>(pauli::x(), pauli::identity());
  }
}

namespace detail {
/// V (a X + b Y + c Z) V^dag for V = exp(-i s X):
///   a X + (b cos 2s - c sin 2s) Y + (b sin 2s + c cos 2s) Z
inline Op2 rotate_about_x(const Op2& h, double s) {
  const double a0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double a = 0.5 * (h(0, 1).real() + h(1, 0).real());
  const double b = 0.5 * (h(1, 0).imag() - h(0, 1).imag());
  const double c = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const double c2 = std::cos(2.0 * s);
  const double s2 = std::sin(2.0 * s);
  return a0 * pauli::identity() + pauli::along(a, b * c2 - c * s2, b * s2 + c * c2);
}
}  // namespace detail

/// H'_S(t) = V H_S V^dag + i dV/dt V^dag in closed form. On a theta ramp this
/// is (n w - Omega sin phi) sigma_x + Omega cos phi cos(2 n w t) sigma_y
///   + Omega cos phi sin(2 n w t) sigma_z,
/// and for the pair the same on the nuclear-up block plus n w sigma_x on the
/// nuclear-down block.
namespace detail {
template <int Dim>
Operator<Dim> dressed_from_driven(const Op2& h1, const DressingSpec& d, double t) {
  const Op2 rotated = rotate_about_x(h1, d.rate() * t) + d.rate() * pauli::x();
  if constexpr (Dim == 2) {
    return rotated;
  } else {
    return tensor<2, 2>(rotated, pauli::proj_up()) + tensor<2, 2>(Op2(d.rate() * pauli::x()), pauli::proj_down());
  }
}
}  // namespace detail

template <int Dim>
Operator<Dim> dressed_hamiltonian(const LoopPath& path, const DressingSpec& d, double t, double t_ref) {
  detail::require_path_dim<Dim>(path, "dressed_hamiltonian");
  detail::require_dressing_dim<Dim>(d, "dressed_hamiltonian");
  path.point(t, t_ref);
  return detail::dressed_from_driven<Dim>(detail::driven_hamiltonian(path, t, t_ref), d, t);
}
template <int Dim>
Operator<Dim> dressed_hamiltonian(const LoopPath& path, const DressingSpec& d, double t) {
  return dressed_hamiltonian<Dim>(path, d, t, t);
}

/// Dressing of an arbitrary schedule: V H(t) V^dag + i dV/dt V^dag.
template <int Dim>
HamiltonianSchedule<Dim> dress(HamiltonianSchedule<Dim> s, const DressingSpec& d) {
  detail::require_dressing_dim<Dim>(d, "dress");
  auto inner = std::move(s.eval);
  const Operator<Dim> gen = dressing_generator<Dim>(d);
  s.eval = [inner = std::move(inner), d, gen](double t, double t_ref) {
    const Operator<Dim> v = dressing_operator<Dim>(d, t);
    return Operator<Dim>(v * inner(t, t_ref) * v.adjoint() + gen);
  };
  s.dressing_period = d.tau;
  return s;
}

template <int Dim>
HamiltonianSchedule<Dim> bare_schedule(const LoopPath& path) {
  detail::require_path_dim<Dim>(path, "bare_schedule");
  return {[path](double t, double t_ref) { return bare_hamiltonian<Dim>(path, t, t_ref); }, path.total_time(),
          path.breakpoints(), 0.0};
}

template <int Dim>
HamiltonianSchedule<Dim> dressed_schedule(const LoopPath& path, const DressingSpec& d) {
  detail::require_path_dim<Dim>(path, "dressed_schedule");
  detail::require_dressing_dim<Dim>(d, "dressed_schedule");
  auto eval = [path, d](double t, double t_ref) {
    return detail::dressed_from_driven<Dim>(detail::driven_hamiltonian(path, t, t_ref), d, t);
  };
  return {eval, path.total_time(), path.breakpoints(), d.tau};
}

/// Closure phase chi: |nu_k(T)> = e^{i chi}|nu_k(0)> for the driven frame
/// states. Returns nullopt when the path does not close or chi is not 0 or pi.
inline std::optional<double> closure_phase(const LoopPath& path) {
  // Start before any leading jump: at a pole the frame states depend on phi.
  const FramePoint a{path.theta0(), path.phi0(), 0.0, 0.0};
  const FramePoint b{path.final_theta(), path.final_phi(), 0.0, 0.0};
  const cplx o1 = detail::nu1(a.theta, a.phi).dot(detail::nu1(b.theta, b.phi));
  const cplx o2 = detail::nu2(a.theta, a.phi).dot(detail::nu2(b.theta, b.phi));
  constexpr double tol = 1e-9;
  if (std::abs(o1 - o2) > tol) return std::nullopt;
  if (std::abs(o1 - 1.0) <= tol) return 0.0;
  if (std::abs(o1 + 1.0) <= tol) return kPi;
  return std::nullopt;
}

struct GeometricPhase {
  double gamma = 0.0;    ///< (1/2) integral of (1 - cos theta) dphi
  double closure = 0.0;  ///< chi in {0, pi}
};

/// Closed form: theta ramps contribute nothing, phi sweeps and pole jumps
/// contribute (1/2)(1 - cos theta) dphi.
inline GeometricPhase geometric_phase(const LoopPath& path) {
  const auto chi = closure_phase(path);
  if (!chi) throw Error("geometric_phase: path does not close (frame states do not return to themselves)");
  double gamma = 0.0;
  double theta = path.theta0();
  for (const PathSegment& s : path.segments()) {
    const double dur = static_cast<double>(s.periods) * path.tau();
    switch (s.kind) {
      case SegmentKind::theta_ramp:
        theta += 2.0 * s.rabi * dur;
        break;
      case SegmentKind::phi_sweep:
        gamma += 0.5 * (1.0 - std::cos(theta)) * s.phi_rate * dur;
        break;
      case SegmentKind::pole_jump:
        gamma += 0.5 * (1.0 - std::cos(theta)) * s.jump;
        break;
    }
  }
  return {gamma, *chi};
}

/// max over the grid and over k of |<nu_k(t)| H(t) |nu_k(t)>|.
template <int Dim, class HamFn>
double dynamical_phase_residual(const LoopPath& path, const std::vector<double>& grid, HamFn&& hamiltonian) {
  double worst = 0.0;
  for (double t : grid) {
    const Operator<Dim> h = hamiltonian(t);
    for (const auto& v : frame_states<Dim>(path, t)) worst = std::max(worst, std::abs(v.dot(h * v)));
  }
  return worst;
}

template <int Dim>
double dynamical_phase_residual(const LoopPath& path, const std::vector<double>& grid) {
  return dynamical_phase_residual<Dim>(path, grid, [&](double t) { return bare_hamiltonian<Dim>(path, t); });
}

/// Uniform grid of n + 1 points over [0, T]. Points on a segment boundary
/// see the later segment.
inline std::vector<double> sample_times(const LoopPath& path, int n) {
  std::vector<double> out;
  const double T = path.total_time();
  for (int i = 0; i <= n; ++i) out.push_back(T * static_cast<double>(i) / static_cast<double>(n));
  return out;
}

struct DecouplingIntegral {
  Eigen::MatrixXcd quadrature;   ///< (1/tau) integral_0^tau V^dag S V dt, composite Simpson
  Eigen::MatrixXcd closed_form;  ///< projection of S onto the commutant of sigma_x (electron)
};

/// Average of V^dag S V over one dressing period.
template <int Dim>
DecouplingIntegral decoupling_integral(const DressingSpec& d, const BathCoupling<Dim>& coupling, int points = 10000) {
  detail::require_dressing_dim<Dim>(d, "decoupling_integral");
  coupling.validate();
  if (points < 2 || points % 2 != 0) throw Error("decoupling_integral: Simpson rule needs an even point count");
  const Operator<Dim>& s = coupling.system_op;
  const double h = d.tau / static_cast<double>(points);
  Operator<Dim> acc = Operator<Dim>::Zero();
  for (int i = 0; i <= points; ++i) {
    const double w = (i == 0 || i == points) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const Operator<Dim> v = dressing_operator<Dim>(d, h * i);
    acc += w * (v.adjoint() * s * v);
  }
  acc *= h / 3.0 / d.tau;
  const Operator<Dim> xe = dressing_generator<Dim>(d) / d.rate();
  const Operator<Dim> closed = 0.5 * (s + xe * s * xe);
  return {acc, closed};
}

/// The ideal gate. One qubit: e^{i chi} exp(-i gamma n.sigma) with
/// n = (sin t0 cos p0, sin t0 sin p0, cos t0). Pair (electron (x) nuclear):
/// I (x) |down><down| + e^{i chi} exp(-i gamma n.sigma) (x) |up><up|.
template <int Dim>
Operator<Dim> ideal_gate(const LoopPath& path) {
  detail::require_path_dim<Dim>(path, "ideal_gate");
  const GeometricPhase g = geometric_phase(path);
  const double t0 = path.theta0();
  const double p0 = path.phi0();
  const Op2 ndots = pauli::along(std::sin(t0) * std::cos(p0), std::sin(t0) * std::sin(p0), std::cos(t0));
  const Op2 u = std::exp(cplx{0.0, g.closure}) * hermitian_exp<2>(ndots, g.gamma);
  if constexpr (Dim == 2) {
    return u;
  } else {
    return tensor<2, 2>(pauli::identity(), pauli::proj_down()) + tensor<2, 2>(u, pauli::proj_up());
  }
}

enum class Recipe {
  /// theta0 -> pi, jump gamma, pi -> 0, jump -gamma, 0 -> theta0. Every
  /// segment runs at the requested Rabi rate and T = pi/Omega for any axis.
  orange_slice,
  /// theta0 -> pi, jump dphi, pi -> theta0, phi sweep back to phi0 at theta0.
  pole_sweep,
};

inline const char* to_string(Recipe r) { return r == Recipe::orange_slice ? "orange-slice" : "pole-sweep"; }

struct SynthesisRequest {
  std::array<double, 3> axis{1.0, 0.0, 0.0};
  double angle = kPi / 4.0;   ///< gamma, rad, in (-pi, pi]
  double rabi = 2.0 * kPi;    ///< Omega, rad/us
  double tau = 0.0125;        ///< us
  int qubits = 1;
  Recipe recipe = Recipe::orange_slice;
};

namespace detail {

/// Ramp by dtheta at azimuth phi, rounded to whole periods; Omega is
/// adjusted so the ramp angle stays exact.
inline PathSegment rounded_ramp(double dtheta, double rabi, double phi, double tau, const char* label) {
  const double duration = std::abs(dtheta) / (2.0 * rabi);
  const long m = std::lround(duration / tau);
  if (m < 1) {
    throw Error(std::string("synthesize_path: ") + label + " lasts " + fmt_double(duration) +
                " us, shorter than half a dressing period; infeasible rounding");
  }
  return PathSegment::ramp(static_cast<int>(m), dtheta / (2.0 * static_cast<double>(m) * tau), phi);
}

}  // namespace detail

/// Builds a closed loop whose ideal gate is exp(-i angle axis.sigma).
inline LoopPath synthesize_path(const SynthesisRequest& req) {
  const auto& n = req.axis;
  const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (std::abs(norm - 1.0) > 1e-9) throw Error("synthesize_path: axis must be a unit vector (|n|=" + std::to_string(norm) + ")");
  if (!(req.rabi > 0.0)) throw Error("synthesize_path: Omega must be > 0");
  if (!(req.tau > 0.0)) throw Error("synthesize_path: tau must be > 0");
  if (!(req.angle > -kPi && req.angle <= kPi)) throw Error("synthesize_path: angle must lie in (-pi, pi]");
  if (req.qubits != 1 && req.qubits != 2) throw Error("synthesize_path: qubit count must be 1 or 2");

  const double theta0 = std::acos(std::clamp(n[2] / norm, -1.0, 1.0));
  const bool north = theta0 < 1e-12;
  const bool south = kPi - theta0 < 1e-12;
  const double phi0 = (north || south) ? 0.0 : std::atan2(n[1], n[0]);
  const double gamma = req.angle;
  std::vector<PathSegment> segs;

  if (req.recipe == Recipe::orange_slice) {
    if (!south) segs.push_back(detail::rounded_ramp(kPi - theta0, req.rabi, phi0, req.tau, "descent to the south pole"));
    if (gamma != 0.0) segs.push_back(PathSegment::pole_jump(gamma));
    segs.push_back(detail::rounded_ramp(-kPi, req.rabi, phi0 + gamma, req.tau, "pole-to-pole meridian"));
    if (!north) {
      if (gamma != 0.0) segs.push_back(PathSegment::pole_jump(-gamma));
      segs.push_back(detail::rounded_ramp(theta0, req.rabi, phi0, req.tau, "return from the north pole"));
    }
    return LoopPath(north ? 0.0 : theta0, phi0, req.tau, std::move(segs), req.qubits);
  }

  // pole-sweep: gamma = dphi (1 + cos theta0)/2 with the sweep undoing dphi.
  if (south) throw Error("synthesize_path: pole-sweep recipe has zero duration for axis -z; infeasible");
  const double dphi = north ? gamma : 2.0 * gamma / (1.0 + std::cos(theta0));
  segs.push_back(detail::rounded_ramp(kPi - theta0, req.rabi, phi0, req.tau, "descent to the south pole"));
  if (dphi != 0.0) segs.push_back(PathSegment::pole_jump(dphi));
  segs.push_back(detail::rounded_ramp(theta0 - kPi, req.rabi, phi0 + dphi, req.tau, "ascent from the south pole"));
  if (!north && dphi != 0.0) {
    // |phi_dot| sin(theta0)/2 = Omega keeps the sweep Hamiltonian at norm Omega.
    const double rate = 2.0 * req.rabi / std::sin(theta0);
    const double duration = std::abs(dphi) / rate;
    const long m = std::lround(duration / req.tau);
    if (m < 1) throw Error("synthesize_path: azimuth sweep shorter than half a dressing period; infeasible rounding");
    segs.push_back(PathSegment::sweep(static_cast<int>(m), -dphi / (static_cast<double>(m) * req.tau)));
  }
  return LoopPath(theta0, phi0, req.tau, std::move(segs), req.qubits);
}

}  // namespace geodd
