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

#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "geodd/experiments.hpp"

namespace geodd {
namespace {

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  EXPECT_EQ(std::accumulate(hits.begin(), hits.end(), 0), 1000);
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

TEST(ParallelFor, RethrowsWorkerFailure) {
  EXPECT_THROW(parallel_for(100, 3, [](std::size_t i) {
                 if (i == 42) throw Error("boom");
               }),
               Error);
}

TEST(Stats, PairwiseSumAndStandardError) {
  std::vector<double> v(1001);
  std::iota(v.begin(), v.end(), 0.0);
  EXPECT_EQ(stats::pairwise_sum(v, 0, 1, v.size()), 500500.0);
  EXPECT_EQ(stats::pairwise_sum(v, 1, 2, 500), 250000.0);  // odd entries
  const std::vector<double> table{1.0, 10.0, 3.0, 10.0};    // two rows, two columns
  const auto c0 = stats::column(table, 2, 0);
  EXPECT_DOUBLE_EQ(c0.mean, 2.0);
  EXPECT_DOUBLE_EQ(c0.stderr_of_mean, 1.0);
  EXPECT_DOUBLE_EQ(stats::column(table, 2, 1).stderr_of_mean, 0.0);
}

TEST(Fid, UnprotectedFollowsGaussianAverage) {
  FidConfig cfg;
  cfg.samples = 2000;
  cfg.t_max = 3.0;
  cfg.sample_step = 0.1;
  cfg.gamma = 0.0;
  const auto r = run_fid(cfg);
  const double s = cfg.noise.std_dev;
  const auto& inph = r.extra[2].second;
  const auto& se = r.extra[3].second;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const double oracle = std::exp(-2 * s * s * r.times[k] * r.times[k]);
    EXPECT_LE(std::abs(inph[k] - oracle), 4 * se[k] + 1e-12) << "t=" << r.times[k];
  }
  EXPECT_NEAR(r.summary.at("t2_us"), 1.0 / (std::sqrt(2.0) * s), 0.1);
  EXPECT_EQ(r.time_column, "t_us");
}

TEST(Fid, NoiselessSignalOscillatesAtDelta) {
  FidConfig cfg;
  cfg.samples = 100;
  cfg.noise.std_dev = 0.0;
  cfg.gamma = 0.0;
  cfg.t_max = 1.0;
  cfg.sample_step = 0.05;
  const auto r = run_fid(cfg);
  const auto& sig = r.extra[0].second;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    EXPECT_NEAR(sig[k], std::cos(2 * kPi * r.times[k]), 1e-8);
    EXPECT_NEAR(r.mean[k], 1.0, 1e-8);
  }
  EXPECT_EQ(r.summary.at("t2_is_lower_bound"), 1.0);
}

TEST(Fid, ProtectionRefocusesTheOffset) {
  FidConfig cfg;
  cfg.samples = 200;
  cfg.gamma = 0.0;
  cfg.protect = true;
  cfg.t_max = 5.0;
  cfg.sample_step = 0.5;
  const auto r = run_fid(cfg);
  EXPECT_GT(r.mean.back(), 0.999);
}

TEST(Fid, ConfigValidation) {
  FidConfig cfg;
  cfg.samples = 50;
  EXPECT_THROW(run_fid(cfg), Error);
  cfg = {};
  cfg.sample_step = 0.07;  // does not tile t_max
  EXPECT_THROW(run_fid(cfg), Error);
  cfg = {};
  cfg.protect = true;
  cfg.sample_step = 0.015;
  cfg.t_max = 0.03;
  EXPECT_THROW(run_fid(cfg), Error);  // not a multiple of tau
}

TEST(Gate, NoiseFreeFidelityStaysAtOne) {
  for (bool prot : {false, true}) {
    GateExpConfig cfg;
    cfg.noise = QuasiStaticGaussian{0.0, 0.0};
    cfg.gamma = 0.0;
    cfg.samples = 1;
    cfg.protect = prot;
    cfg.steps_per_period = 4000;
    const auto r = run_gate_fidelity(cfg);
    for (double f : r.mean) EXPECT_NEAR(f, 1.0, 1e-6);
    EXPECT_NEAR(r.times.back(), 1.0, 1e-12);
  }
}

TEST(Gate, ProtectedRecordsEveryHalfPeriod) {
  GateExpConfig cfg;
  cfg.samples = 4;
  cfg.protect = true;
  const auto r = run_gate_fidelity(cfg);
  EXPECT_EQ(r.times.size(), 81u);
  EXPECT_NEAR(r.times[1], 0.0125 / 2 / 0.5, 1e-12);
}

TEST(Gate, ProtectionWinsWithPairedSeeds) {
  GateExpConfig cfg;
  cfg.samples = 100;
  cfg.seed = 5;
  const double fu = run_gate_fidelity(cfg).summary.at("final_fidelity");
  cfg.protect = true;
  const double fp = run_gate_fidelity(cfg).summary.at("final_fidelity");
  EXPECT_GT(fp, fu);
}

TEST(Gate, WorkerCountDoesNotChangeResults) {
  GateExpConfig cfg;
  cfg.samples = 40;
  cfg.noise = OUNoise{};
  cfg.protect = true;
  cfg.workers = 1;
  const auto a = run_gate_fidelity(cfg);
  cfg.workers = 3;
  const auto b = run_gate_fidelity(cfg);
  std::ostringstream sa, sb;
  a.write_csv(sa);
  b.write_csv(sb);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(Gate, RejectsInconsistentConfigs) {
  GateExpConfig cfg;
  cfg.protect = true;
  cfg.target.tau = 0.011;
  EXPECT_THROW(run_gate_fidelity(cfg), Error);
  cfg = {};
  cfg.duration = 0.4;
  EXPECT_THROW(run_gate_fidelity(cfg), Error);
  cfg = {};
  cfg.initial = State2::Constant(1.0);
  EXPECT_THROW(run_gate_fidelity(cfg), Error);
  cfg = {};
  cfg.target.qubits = 2;
  EXPECT_THROW(run_gate_fidelity(cfg), Error);
}

TEST(Ou, StudyNeedsOuNoiseAndOrdersByG) {
  GateExpConfig cfg;
  EXPECT_THROW(run_ou_study(cfg, {0.1}), Error);
  cfg.noise = OUNoise{};
  cfg.samples = 40;
  const auto res = run_ou_study(cfg, {0.02, 0.5});
  ASSERT_EQ(res.size(), 2u);
  EXPECT_EQ(res[0].name, "ou_g0.02");
  EXPECT_GT(res[0].summary.at("final_fidelity"), res[1].summary.at("final_fidelity"));
}

TEST(TwoQubit, BlockStructureAndBathOrdering) {
  SynthesisRequest q;
  q.qubits = 2;
  q.axis = {0.0, 1.0, 0.0};
  q.angle = 0.6;
  const LoopPath p = synthesize_path(q);
  const DressingSpec d{1, p.tau(), DressingTarget::electron_of_pair};
  const auto rep = run_two_qubit_check(p, d, PropagationGrid{p.tau() / 4000, 1}, ToySpin{0.4, 0.1});
  EXPECT_TRUE(rep.passed) << rep.distance;
  EXPECT_LT(rep.off_block_norm, 1e-9);
  EXPECT_GT(rep.purity_protected, rep.purity_bare);
  const auto free = run_two_qubit_check(p, d, PropagationGrid{p.tau() / 400, 1}, ToySpin{0.0, 0.1}, 1e-4);
  EXPECT_NEAR(free.purity_protected, 1.0, 1e-10);
  EXPECT_THROW(run_two_qubit_check(synthesize_path(SynthesisRequest{}), d, PropagationGrid{1e-5, 1}, ToySpin{}), Error);
}

TEST(Result, CsvLayout) {
  ExperimentResult r;
  r.time_column = "t_over_T";
  r.times = {0.0, 1.0};
  r.mean = {1.0, 0.5};
  r.stderr_of_mean = {0.0, 0.1};
  r.extra = {{"x", {2.0, 3.0}}};
  std::ostringstream os;
  r.write_csv(os);
  EXPECT_EQ(os.str(), "t_over_T,mean,stderr,x\n0,1,0,2\n1,0.5,0.10000000000000001,3\n");
}

}  // namespace
}  // namespace geodd
