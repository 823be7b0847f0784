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

#include <gtest/gtest.h>

#include "geodd/path.hpp"

namespace geodd {
namespace {

constexpr double kTau = 0.0125;

LoopPath orange(double gamma) {
  return LoopPath(kPi / 2, 0.0, kTau,
                  {PathSegment::ramp(10, 2 * kPi, 0.0), PathSegment::pole_jump(gamma),
                   PathSegment::ramp(20, -2 * kPi, gamma), PathSegment::pole_jump(-gamma),
                   PathSegment::ramp(10, 2 * kPi, 0.0)});
}

TEST(LoopPath, TimingAndEndPoints) {
  const LoopPath p = orange(kPi / 4);
  EXPECT_EQ(p.total_periods(), 40);
  EXPECT_NEAR(p.total_time(), 0.5, 1e-15);
  EXPECT_NEAR(p.final_theta(), kPi / 2, 1e-12);
  EXPECT_NEAR(p.final_phi(), 0.0, 1e-15);
  ASSERT_EQ(p.spans().size(), 3u);
  EXPECT_EQ(p.breakpoints(), (std::vector<double>{0.125, 0.375}));
}

TEST(LoopPath, PointsFollowSegments) {
  const LoopPath p = orange(kPi / 4);
  const FramePoint a = p.point(0.0625);
  EXPECT_NEAR(a.theta, kPi / 2 + 2 * 2 * kPi * 0.0625, 1e-12);
  EXPECT_NEAR(a.theta_dot, 4 * kPi, 1e-12);
  // At a boundary, t_ref picks the side.
  EXPECT_NEAR(p.point(0.125, 0.1249).phi, 0.0, 1e-15);
  EXPECT_NEAR(p.point(0.125, 0.1251).phi, kPi / 4, 1e-15);
  EXPECT_NEAR(p.point(0.125, 0.1251).theta_dot, -4 * kPi, 1e-12);
  EXPECT_THROW(p.point(0.6), Error);
  EXPECT_THROW(p.point(-0.1), Error);
}

TEST(LoopPath, JumpsOnlyAtPoles) {
  EXPECT_THROW(LoopPath(kPi / 2, 0.0, kTau, {PathSegment::pole_jump(0.3)}), Error);
  EXPECT_NO_THROW(LoopPath(0.0, 0.0, kTau, {PathSegment::pole_jump(0.3), PathSegment::ramp(1, 1.0, 0.3)}));
  EXPECT_NO_THROW(LoopPath(kPi, 0.0, kTau, {PathSegment::pole_jump(0.3), PathSegment::ramp(1, 1.0, 0.3)}));
}

TEST(LoopPath, RejectsMalformedSegments) {
  EXPECT_THROW(LoopPath(0.0, 0.0, 0.0, {PathSegment::ramp(1, 1.0, 0.0)}), Error);
  EXPECT_THROW(LoopPath(0.0, 0.0, kTau, {PathSegment::ramp(0, 1.0, 0.0)}), Error);
  EXPECT_THROW(LoopPath(0.0, 0.0, kTau, {PathSegment::sweep(0, 1.0)}), Error);
  EXPECT_THROW(LoopPath(0.0, 0.0, kTau, {PathSegment::ramp(1, 1.0, 0.5)}), Error);  // azimuth discontinuity
  EXPECT_THROW(LoopPath(0.0, 0.0, kTau, {PathSegment::ramp(1, 1.0, 0.0)}, 3), Error);
  PathSegment timed_jump = PathSegment::pole_jump(0.1);
  timed_jump.periods = 2;
  EXPECT_THROW(LoopPath(0.0, 0.0, kTau, {timed_jump}), Error);
}

TEST(LoopPath, AzimuthContinuityIsModuloTwoPi) {
  EXPECT_NO_THROW(LoopPath(0.0, 0.0, kTau, {PathSegment::ramp(1, 1.0, 2 * kPi)}));
}

TEST(DressingSpec, RatesAndValidation) {
  const DressingSpec d{2, 0.01, DressingTarget::one_qubit};
  EXPECT_NEAR(d.omega(), 2 * kPi / 0.01, 1e-9);
  EXPECT_NEAR(d.rate(), 4 * kPi / 0.01, 1e-9);
  EXPECT_THROW((DressingSpec{0, 0.01, DressingTarget::one_qubit}.validate()), Error);
  EXPECT_THROW((DressingSpec{1, -1.0, DressingTarget::one_qubit}.validate()), Error);
  EXPECT_EQ((DressingSpec{1, 1.0, DressingTarget::electron_of_pair}.dim()), 4);
}

TEST(BathCoupling, ElectronOperatorAndValidation) {
  EXPECT_LT((electron_z<4>() - tensor<2, 2>(pauli::z(), pauli::identity())).norm(), 1e-15);
  EXPECT_THROW(BathCoupling<2>::classical(Op2(pauli::plus())).validate(), Error);
}

}  // namespace
}  // namespace geodd
