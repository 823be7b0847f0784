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

// Classical models of the Overhauser field delta0 (rad/us): a quasi-static
// Gaussian constant per realization, or an Ornstein-Uhlenbeck trajectory
// integrated by Euler-Maruyama.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <vector>

#include "geodd/csv.hpp"
#include "geodd/linalg.hpp"

namespace geodd {

/// Each Monte-Carlo realization owns an engine seeded from (master, index),
/// so results do not depend on how realizations are scheduled.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer over (master, index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Rng make_stream(std::uint64_t master, std::uint64_t index) { return Rng(derive_seed(master, index)); }

struct QuasiStaticGaussian {
  double std_dev = 0.0;  // rad/us
  double mean = 0.0;     // rad/us

  void validate() const {
    if (!(std_dev >= 0.0) || !std::isfinite(std_dev)) throw Error("QuasiStaticGaussian: std_dev must be >= 0");
    if (!std::isfinite(mean)) throw Error("QuasiStaticGaussian: mean must be finite");
  }
};

inline double sample_quasi_static(const QuasiStaticGaussian& model, Rng& rng) {
  model.validate();
  if (model.std_dev == 0.0) return model.mean;
  std::normal_distribution<double> normal(model.mean, model.std_dev);
  return normal(rng);
}

enum class OUStart {
  stationary,  ///< delta0(0) ~ N(mean, std_dev^2)
  at_mean,     ///< delta0(0) = mean
};

struct OUParams {
  double mean = 0.0;              // rad/us
  double std_dev = 0.0;           // rad/us
  double correlation_time = 1.0;  // us
  double dt = 0.01;               // us
  std::uint64_t seed = 0;
  OUStart start = OUStart::stationary;

  void validate() const {
    if (!(correlation_time > 0.0)) throw Error("OUParams: correlation_time must be > 0");
    if (!(std_dev >= 0.0)) throw Error("OUParams: std_dev must be >= 0");
    if (!(dt > 0.0)) throw Error("OUParams: dt must be > 0");
    if (dt > correlation_time / 10.0 * (1.0 + 1e-12)) {
      throw Error("OUParams: dt must not exceed correlation_time/10 (dt=" + detail::fmt_double(dt) +
                  ", tau_e=" + detail::fmt_double(correlation_time) + ")");
    }
  }
};

/// Samples on the uniform grid t_k = k*dt, k = 0..size()-1, covering [0, T].
/// Between grid points the field is held constant (zero-order hold).
struct NoiseTrajectory {
  double dt = 0.0;
  std::vector<double> values;

  double time(std::size_t k) const { return static_cast<double>(k) * dt; }
  double duration() const { return values.empty() ? 0.0 : time(values.size() - 1); }

  /// Zero-order hold: value at the last grid point at or before t.
  double at(double t) const {
    if (values.empty()) return 0.0;
    const double k = std::floor(t / dt + 1e-9);
    if (k <= 0.0) return values.front();
    const auto idx = static_cast<std::size_t>(k);
    return idx >= values.size() ? values.back() : values[idx];
  }

  void write_csv(std::ostream& os) const {
    csv::write_header(os, {"t_us", "delta0_rad_per_us"});
    for (std::size_t k = 0; k < values.size(); ++k) csv::write_row(os, {time(k), values[k]});
  }
};

/// d delta = -(delta - mu)/tau_e dt + sigma sqrt(2/tau_e) dW, Euler-Maruyama.
/// The stationary variance of the discrete scheme is sigma^2/(1 - dt/(2 tau_e)).
inline NoiseTrajectory ou_trajectory(const OUParams& p, double total_time) {
  p.validate();
  if (!(total_time > 0.0)) throw Error("ou_trajectory: T must be > 0");
  Rng rng(p.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const auto steps = static_cast<std::size_t>(std::ceil(total_time / p.dt - 1e-9));
  NoiseTrajectory traj;
  traj.dt = p.dt;
  traj.values.resize(steps + 1);

  double x = p.mean;
  if (p.start == OUStart::stationary) x = p.mean + p.std_dev * normal(rng);
  const double drift = p.dt / p.correlation_time;
  const double kick = p.std_dev * std::sqrt(2.0 / p.correlation_time) * std::sqrt(p.dt);
  traj.values[0] = x;
  for (std::size_t k = 1; k <= steps; ++k) {
    x += -(x - p.mean) * drift + kick * normal(rng);
    traj.values[k] = x;
  }
  return traj;
}

}  // namespace geodd
