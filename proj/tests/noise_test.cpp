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

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "geodd/noise.hpp"

namespace geodd {
namespace {

TEST(Seeds, DerivedStreamsAreDistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_seed(42, i));
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_EQ(derive_seed(42, 7), derive_seed(42, 7));
  EXPECT_NE(derive_seed(42, 7), derive_seed(43, 7));
  Rng a = make_stream(1, 2), b = make_stream(1, 2);
  EXPECT_EQ(a(), b());
}

TEST(QuasiStatic, MomentsMatchTheModel) {
  const QuasiStaticGaussian m{0.4, 0.1};
  Rng rng = make_stream(7, 0);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_quasi_static(m, rng);
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  EXPECT_NEAR(mean, 0.1, 5.0 * 0.4 / std::sqrt(n));
  EXPECT_NEAR(var, 0.16, 5.0 * 0.16 * std::sqrt(2.0 / n));
}

TEST(QuasiStatic, ZeroWidthIsDeterministicAndNegativeRejected) {
  Rng rng(1);
  EXPECT_EQ(sample_quasi_static({0.0, 0.3}, rng), 0.3);
  EXPECT_THROW(sample_quasi_static({-1.0, 0.0}, rng), Error);
}

// Stationary statistics of the discretized process. dt = tau_e/100 keeps the
// scheme's variance inflation 1/(1 - dt/(2 tau_e)) at 0.5%.
TEST(OrnsteinUhlenbeck, StationaryVarianceAndCorrelation) {
  const double tau_e = 0.25, sigma = 1.5, dt = tau_e / 100.0;
  const double discrete_var = sigma * sigma / (1.0 - dt / (2.0 * tau_e));
  double s2 = 0.0, lag = 0.0;
  long count = 0, lag_count = 0;
  const std::size_t lag_steps = 100;  // = tau_e
  for (std::uint64_t r = 0; r < 40; ++r) {
    const auto traj = ou_trajectory({0.0, sigma, tau_e, dt, derive_seed(3, r), OUStart::stationary}, 250.0);
    for (std::size_t k = 0; k < traj.values.size(); ++k) {
      s2 += traj.values[k] * traj.values[k];
      ++count;
      if (k + lag_steps < traj.values.size()) {
        lag += traj.values[k] * traj.values[k + lag_steps];
        ++lag_count;
      }
    }
  }
  const double var = s2 / count;
  EXPECT_NEAR(var / discrete_var, 1.0, 0.02);
  // Correlation at lag tau_e: (1 - dt/tau_e)^100, close to 1/e.
  const double rho = lag / lag_count / var;
  EXPECT_NEAR(rho, std::pow(1.0 - dt / tau_e, 100), 0.03);
}

TEST(OrnsteinUhlenbeck, StartOptionsAndGrid) {
  OUParams p{0.2, 1.0, 0.25, 0.0025, 9, OUStart::at_mean};
  const auto traj = ou_trajectory(p, 0.5);
  EXPECT_EQ(traj.values.front(), 0.2);
  EXPECT_EQ(traj.values.size(), 201u);
  EXPECT_NEAR(traj.duration(), 0.5, 1e-12);
  // Same seed, same path.
  EXPECT_EQ(ou_trajectory(p, 0.5).values, traj.values);
  p.start = OUStart::stationary;
  EXPECT_NE(ou_trajectory(p, 0.5).values.front(), 0.2);
}

TEST(OrnsteinUhlenbeck, ZeroOrderHold) {
  NoiseTrajectory t{0.1, {1.0, 2.0, 3.0}};
  EXPECT_EQ(t.at(0.0), 1.0);
  EXPECT_EQ(t.at(0.05), 1.0);
  EXPECT_EQ(t.at(0.1), 2.0);  // grid point belongs to the new bin
  EXPECT_EQ(t.at(0.3 - 1e-12), 3.0);
  EXPECT_EQ(t.at(5.0), 3.0);
}

TEST(OrnsteinUhlenbeck, RejectsCoarseOrInvalidParameters) {
  EXPECT_THROW(ou_trajectory({0.0, 1.0, 0.25, 0.05, 1, OUStart::at_mean}, 1.0), Error);
  EXPECT_THROW(ou_trajectory({0.0, 1.0, 0.0, 0.001, 1, OUStart::at_mean}, 1.0), Error);
  EXPECT_THROW(ou_trajectory({0.0, -1.0, 0.25, 0.001, 1, OUStart::at_mean}, 1.0), Error);
  EXPECT_THROW(ou_trajectory({0.0, 1.0, 0.25, 0.001, 1, OUStart::at_mean}, 0.0), Error);
}

TEST(OrnsteinUhlenbeck, CsvDump) {
  NoiseTrajectory t{0.5, {1.0, -2.0}};
  std::ostringstream os;
  t.write_csv(os);
  EXPECT_EQ(os.str(), "t_us,delta0_rad_per_us\n0,1\n0.5,-2\n");
}

}  // namespace
}  // namespace geodd
