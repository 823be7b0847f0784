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

// Piecewise loop paths on the Bloch sphere. A path is parameterized by the
// polar angle theta(t) and azimuth phi(t) of the frame state
//   |nu_1> = cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>
// (alpha, beta for the nuclear-up block of the two-qubit gate). Three kinds
// of segment change the angles:
//   theta ramp   theta_dot = 2*Omega_j at fixed phi_j, lasting m_j periods
//   phi sweep    phi_dot constant at fixed theta, lasting m_j periods
//   pole jump    instantaneous azimuth step at theta = 0 or pi (mod 2pi)
// At a pole sin(theta) = 0, so every coefficient of the frame Hamiltonian
// vanishes and a jump costs no evolution time.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "geodd/linalg.hpp"

namespace geodd {

enum class SegmentKind { theta_ramp, phi_sweep, pole_jump };

inline const char* to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::theta_ramp:
      return "theta-ramp";
    case SegmentKind::phi_sweep:
      return "phi-sweep";
    case SegmentKind::pole_jump:
      return "pole-jump";
  }
  return "?";
}

struct PathSegment {
  SegmentKind kind = SegmentKind::theta_ramp;
  int periods = 0;        ///< m_j; zero for pole jumps
  double rabi = 0.0;      ///< theta ramp: Omega_j = theta_dot/2 (signed), rad/us
  double phi = 0.0;       ///< theta ramp: azimuth held during the ramp, rad
  double phi_rate = 0.0;  ///< phi sweep: phi_dot, rad/us
  double jump = 0.0;      ///< pole jump: azimuth step, rad

  static PathSegment ramp(int m, double rabi, double phi) {
    return {SegmentKind::theta_ramp, m, rabi, phi, 0.0, 0.0};
  }
  static PathSegment sweep(int m, double phi_rate) { return {SegmentKind::phi_sweep, m, 0.0, 0.0, phi_rate, 0.0}; }
  static PathSegment pole_jump(double dphi) { return {SegmentKind::pole_jump, 0, 0.0, 0.0, 0.0, dphi}; }
};

/// Angles and their rates at one instant.
struct FramePoint {
  double theta = 0.0;
  double phi = 0.0;
  double theta_dot = 0.0;
  double phi_dot = 0.0;
};

namespace detail {
inline double wrap_pi(double a) { return std::remainder(a, 2.0 * kPi); }
inline bool at_pole(double theta, double tol) { return std::abs(std::remainder(theta, kPi)) <= tol; }
}  // namespace detail

class LoopPath {
 public:
  /// Timed portion of one segment: [t_begin, t_end] with the angles at t_begin.
  struct Span {
    std::size_t segment = 0;
    double t_begin = 0.0;
    double t_end = 0.0;
    double theta = 0.0;
    double phi = 0.0;
  };

  LoopPath(double theta0, double phi0, double tau, std::vector<PathSegment> segments, int qubits = 1)
      : theta0_(theta0), phi0_(phi0), tau_(tau), qubits_(qubits), segments_(std::move(segments)) {
    build();
  }

  double theta0() const { return theta0_; }
  double phi0() const { return phi0_; }
  double tau() const { return tau_; }
  int qubits() const { return qubits_; }
  int dim() const { return qubits_ == 1 ? 2 : 4; }
  const std::vector<PathSegment>& segments() const { return segments_; }
  const std::vector<Span>& spans() const { return spans_; }

  int total_periods() const { return total_periods_; }
  double total_time() const { return static_cast<double>(total_periods_) * tau_; }
  double final_theta() const { return final_theta_; }
  double final_phi() const { return final_phi_; }

  /// Interior segment boundaries, ascending.
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < spans_.size(); ++i) out.push_back(spans_[i].t_end);
    return out;
  }

  /// Index into spans() of the timed segment containing t_ref. Boundaries
  /// belong to the later segment (right limit).
  std::size_t span_at(double t_ref) const {
    if (spans_.empty()) throw Error("LoopPath: path has no timed segments");
    for (std::size_t i = 0; i < spans_.size(); ++i) {
      if (t_ref < spans_[i].t_end - 1e-12 * std::max(1.0, spans_[i].t_end)) return i;
    }
    return spans_.size() - 1;
  }

  /// Angles at t. t_ref picks the segment; t = T returns the closed-loop
  /// end point including any trailing jumps.
  FramePoint point(double t, double t_ref) const {
    const double T = total_time();
    if (t < -1e-12 || t > T + 1e-12 * std::max(1.0, T)) {
      throw Error("LoopPath: t=" + std::to_string(t) + " outside [0, " + std::to_string(T) + "]");
    }
    if (spans_.empty()) return {final_theta_, final_phi_, 0.0, 0.0};
    const Span& sp = spans_[span_at(t_ref)];
    const PathSegment& seg = segments_[sp.segment];
    FramePoint p{sp.theta, sp.phi, 0.0, 0.0};
    const double dt = t - sp.t_begin;
    if (seg.kind == SegmentKind::theta_ramp) {
      p.theta_dot = 2.0 * seg.rabi;
      p.theta += p.theta_dot * dt;
    } else {
      p.phi_dot = seg.phi_rate;
      p.phi += p.phi_dot * dt;
    }
    if (t >= T - 1e-12 * std::max(1.0, T) && t_ref >= T - 1e-12 * std::max(1.0, T)) {
      p.theta = final_theta_;
      p.phi = final_phi_;
    }
    return p;
  }
  FramePoint point(double t) const { return point(t, t); }

 private:
  void build() {
    if (!(tau_ > 0.0)) throw Error("LoopPath: tau must be > 0");
    if (qubits_ != 1 && qubits_ != 2) throw Error("LoopPath: qubit count must be 1 or 2");
    double theta = theta0_;
    double phi = phi0_;
    int m_total = 0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const PathSegment& s = segments_[i];
      const std::string where = "LoopPath: segment " + std::to_string(i) + " (" + to_string(s.kind) + ")";
      switch (s.kind) {
        case SegmentKind::pole_jump:
          if (s.periods != 0) throw Error(where + ": pole jumps take no time (m must be 0)");
          if (!detail::at_pole(theta, 1e-9)) {
            throw Error(where + ": jump requested at theta=" + std::to_string(theta) + ", not at a pole");
          }
          phi += s.jump;
          break;
        case SegmentKind::theta_ramp:
        case SegmentKind::phi_sweep: {
          if (s.periods < 1) throw Error(where + ": duration must be m*tau with integer m >= 1");
          if (s.kind == SegmentKind::theta_ramp && std::abs(detail::wrap_pi(s.phi - phi)) > 1e-9) {
            throw Error(where + ": ramp azimuth " + std::to_string(s.phi) + " does not continue the path azimuth " +
                        std::to_string(phi));
          }
          const double t0 = static_cast<double>(m_total) * tau_;
          m_total += s.periods;
          const double t1 = static_cast<double>(m_total) * tau_;
          spans_.push_back({i, t0, t1, theta, phi});
          if (s.kind == SegmentKind::theta_ramp) {
            theta += 2.0 * s.rabi * (t1 - t0);
          } else {
            phi += s.phi_rate * (t1 - t0);
          }
          break;
        }
      }
    }
    total_periods_ = m_total;
    final_theta_ = theta;
    final_phi_ = phi;
  }

  double theta0_;
  double phi0_;
  double tau_;
  int qubits_;
  std::vector<PathSegment> segments_;
  std::vector<Span> spans_;
  int total_periods_ = 0;
  double final_theta_ = 0.0;
  double final_phi_ = 0.0;
};

enum class DressingTarget { one_qubit, electron_of_pair };

/// V(t) = exp(-i n w t sigma_x) (tensored with the nuclear identity for the
/// pair), w = 2 pi / tau.
struct DressingSpec {
  int n = 1;
  double tau = 0.0;
  DressingTarget target = DressingTarget::one_qubit;

  double omega() const { return 2.0 * kPi / tau; }
  double rate() const { return static_cast<double>(n) * omega(); }
  int dim() const { return target == DressingTarget::one_qubit ? 2 : 4; }

  void validate() const {
    if (n < 1) throw Error("DressingSpec: n must be a positive integer");
    if (!(tau > 0.0)) throw Error("DressingSpec: tau must be > 0");
  }
};

/// Toy bath: one spin with H_E = omega_e sigma_z and B_z = lambda sigma_x.
struct ToySpin {
  double lambda = 0.0;   // rad/us
  double omega_e = 0.0;  // rad/us
};

/// System side of H_SE = S (x) B_z. The bath side is either a classical
/// field delta0(t) (supplied by the caller) or a toy spin.
template <int Dim>
struct BathCoupling {
  Operator<Dim> system_op;
  std::optional<ToySpin> toy;

  static BathCoupling classical(const Operator<Dim>& s) { return {s, std::nullopt}; }
  static BathCoupling toy_spin(const Operator<Dim>& s, ToySpin spin) { return {s, spin}; }

  void validate() const {
    if (!is_hermitian(system_op, 1e-12)) throw Error("BathCoupling: system operator must be Hermitian");
  }
};

/// sigma_z on the electron: sigma_z for one qubit, sigma_z (x) I for the pair.
template <int Dim>
Operator<Dim> electron_z() {
  static_assert(Dim == 2 || Dim == 4);
  if constexpr (Dim == 2) {
    return pauli::z();
  } else {
    return tensor<2, 2>(pauli::z(), pauli::identity());
  }
}

}  // namespace geodd
