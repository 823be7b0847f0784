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

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "geodd/linalg.hpp"

namespace geodd {

/// A time-dependent Hamiltonian on [0, T], piecewise smooth between the
/// listed discontinuities.
///
/// The callable receives (t, t_ref): t is where the smooth part is evaluated
/// and t_ref is a time strictly inside the same piece (integrators pass the
/// step midpoint). Piecewise data such as the active path segment or the
/// zero-order-hold noise bin is selected from t_ref, so the value at a step
/// end is the one-sided limit from inside the step.
template <int Dim>
struct HamiltonianSchedule {
  std::function<Operator<Dim>(double t, double t_ref)> eval;
  double total_time = 0.0;
  std::vector<double> breaks;       ///< interior discontinuities, ascending
  double dressing_period = 0.0;     ///< 0 when undressed

  Operator<Dim> operator()(double t) const { return eval(t, t); }
  Operator<Dim> operator()(double t, double t_ref) const { return eval(t, t_ref); }
};

template <int Dim>
HamiltonianSchedule<Dim> constant_schedule(const Operator<Dim>& h, double total_time) {
  return {[h](double, double) { return h; }, total_time, {}, 0.0};
}

/// Adds field(t_ref) * op to every sample; used for classical dephasing.
template <int Dim>
HamiltonianSchedule<Dim> with_field(HamiltonianSchedule<Dim> base, std::function<double(double)> field,
                                    const Operator<Dim>& op) {
  auto inner = std::move(base.eval);
  base.eval = [inner = std::move(inner), field = std::move(field), op](double t, double t_ref) {
    return Operator<Dim>(inner(t, t_ref) + field(t_ref) * op);
  };
  return base;
}

struct PropagationGrid {
  double dt = 0.0;        ///< nominal step, us; actual steps shrink to fit between breaks
  int record_every = 1;   ///< trajectory outputs keep every k-th step (and the final one)
};

namespace detail {

/// Visits the steps of `grid` over [0, T] without straddling a break.
/// fn(t0, t1, step_index) is called in time order.
template <int Dim, class Fn>
void for_each_step(const HamiltonianSchedule<Dim>& s, const PropagationGrid& grid, Fn&& fn) {
  if (!(grid.dt > 0.0)) throw Error("PropagationGrid: dt must be > 0");
  if (!(s.total_time >= 0.0)) throw Error("HamiltonianSchedule: total_time must be >= 0");
  if (s.dressing_period > 0.0 && grid.dt > s.dressing_period / 20.0 * (1.0 + 1e-12)) {
    throw Error("PropagationGrid: dt=" + fmt_double(grid.dt) + " exceeds tau/20 for dressing period " +
                fmt_double(s.dressing_period));
  }
  std::vector<double> knots;
  knots.reserve(s.breaks.size() + 2);
  knots.push_back(0.0);
  for (double b : s.breaks) {
    if (b > knots.back() + 1e-12 && b < s.total_time - 1e-12) knots.push_back(b);
  }
  knots.push_back(s.total_time);
  long step = 0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i];
    const double len = knots[i + 1] - a;
    if (len <= 0.0) continue;
    const auto n = std::max<long>(1, static_cast<long>(std::ceil(len / grid.dt - 1e-9)));
    const double h = len / static_cast<double>(n);
    for (long k = 0; k < n; ++k) {
      const double t0 = a + static_cast<double>(k) * h;
      const double t1 = (k + 1 == n) ? knots[i + 1] : a + static_cast<double>(k + 1) * h;
      fn(t0, t1, step++);
    }
  }
}

template <int Dim>
long count_steps(const HamiltonianSchedule<Dim>& s, const PropagationGrid& grid) {
  long n = 0;
  for_each_step(s, grid, [&](double, double, long) { ++n; });
  return n;
}

}  // namespace detail

}  // namespace geodd
