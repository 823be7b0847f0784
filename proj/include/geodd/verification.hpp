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

// End-to-end checks shared by `geodd verify` and the acceptance binary.
// Each check runs one study at a fixed seed and reports a verdict with the
// numbers it was based on. Seeds are fixed up front and never searched.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "geodd/experiments.hpp"
#include "geodd/io.hpp"

namespace geodd::verification {

struct CheckResult {
  int id = 0;  ///< acceptance criterion number, 0 for extra invariants
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Scale {
  bool full = true;  ///< paper-sized ensembles and runtime budgets
  int workers = 1;
  std::uint64_t seed = 2024;
};

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline CheckResult timed(int id, std::string name, const std::function<void(CheckResult&)>& body) {
  CheckResult r{id, std::move(name), false, {}, 0.0};
  Timer t;
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail += (r.detail.empty() ? "" : "; ") + std::string("error: ") + e.what();
  }
  r.seconds = t.seconds();
  return r;
}

/// Budget verdict; budgets only apply at full scale.
inline bool within_budget(const Scale& s, double seconds, double budget, std::string& detail) {
  if (!s.full) return true;
  detail += "; runtime " + fmt("%.1f", seconds) + " s (budget " + fmt("%.0f", budget) + " s)";
  return seconds <= budget;
}

/// Random synthesized paths away from the poles, alternating recipes.
inline std::vector<LoopPath> random_paths(int count, std::uint64_t seed, int qubits = 1) {
  Rng rng = make_stream(seed, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<LoopPath> out;
  for (int i = 0; i < count; ++i) {
    const double theta = std::acos(std::cos(0.3) - u(rng) * 2.0 * std::cos(0.3));
    const double phi = 2.0 * kPi * u(rng);
    double gamma = 0.5 + (kPi - 0.5) * u(rng);
    if (u(rng) < 0.5) gamma = -gamma;
    SynthesisRequest q;
    q.axis = {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
    q.angle = gamma;
    q.qubits = qubits;
    q.recipe = i % 2 ? Recipe::pole_sweep : Recipe::orange_slice;
    out.push_back(synthesize_path(q));
  }
  return out;
}

inline Op2 rotation(const std::array<double, 3>& n, double angle) {
  return hermitian_exp<2>(Op2(pauli::along(n[0], n[1], n[2])), angle);
}

inline std::array<double, 3> path_axis(const LoopPath& p) {
  return {std::sin(p.theta0()) * std::cos(p.phi0()), std::sin(p.theta0()) * std::sin(p.phi0()), std::cos(p.theta0())};
}

}  // namespace detail

// ------------------------------------------------------------- FID ----

inline CheckResult fid_unprotected(const Scale& s) {
  return detail::timed(1, "fid-unprotected", [&](CheckResult& r) {
    FidConfig cfg;
    cfg.samples = s.full ? 10000 : 1000;
    cfg.t_max = 6.0;
    cfg.sample_step = 0.05;
    cfg.seed = s.seed;
    cfg.workers = s.workers;
    detail::Timer timer;
    const auto res = run_fid(cfg);
    const double secs = timer.seconds();
    const auto& inph = res.extra[2].second;
    const auto& se = res.extra[3].second;
    const double sigma = cfg.noise.std_dev;
    int outside = 0;
    double worst = 0.0;
    for (std::size_t k = 0; k < res.times.size(); ++k) {
      const double t = res.times[k];
      const double oracle = std::exp(-2.0 * sigma * sigma * t * t) * std::exp(-cfg.gamma * t);
      const double z = std::abs(inph[k] - oracle) / std::max(se[k], 1e-300);
      if (std::abs(inph[k] - oracle) > 3.0 * se[k] + 1e-12) ++outside;
      if (se[k] > 0.0) worst = std::max(worst, z);
    }
    const double t2 = res.summary.at("t2_us");
    const double t2_oracle = 1.0 / (std::sqrt(2.0) * sigma);
    r.passed = outside == 0 && std::abs(t2 - 1.73) <= 0.05 && res.summary.at("t2_is_lower_bound") == 0.0;
    r.detail = "N=" + std::to_string(cfg.samples) + ", T2=" + detail::fmt("%.4f", t2) + " us (target 1.73 +- 0.05, oracle " +
               detail::fmt("%.4f", t2_oracle) + "), grid points beyond 3 SE: " + std::to_string(outside) + "/" +
               std::to_string(res.times.size()) + ", max |z|=" + detail::fmt("%.2f", worst);
    r.passed = detail::within_budget(s, secs, 60.0, r.detail) && r.passed;
  });
}

inline CheckResult fid_protected_short(const Scale& s) {
  return detail::timed(2, "fid-protected-10us", [&](CheckResult& r) {
    FidConfig cfg;
    cfg.protect = true;
    cfg.tau = 0.01;
    cfg.t_max = 10.0;
    cfg.sample_step = 0.5;
    cfg.samples = s.full ? 1000 : 200;
    cfg.seed = s.seed;
    cfg.workers = s.workers;
    detail::Timer t;
    const auto res = run_fid(cfg);
    const double secs = t.seconds();
    const double env = res.mean.back();
    FidConfig no_relax = cfg;
    no_relax.gamma = 0.0;
    no_relax.samples = 200;
    const double env0 = run_fid(no_relax).mean.back();
    r.passed = env >= 0.99;
    r.detail = "N=" + std::to_string(cfg.samples) + ", envelope(10 us)=" + detail::fmt("%.5f", env) +
               " (need >= 0.99); with Gamma=0: " + detail::fmt("%.5f", env0) + "; e^{-1.25 Gamma t}=" +
               detail::fmt("%.5f", std::exp(-1.25 * cfg.gamma * 10.0));
    r.passed = detail::within_budget(s, secs, 120.0, r.detail) && r.passed;
  });
}

inline CheckResult fid_protected_long(const Scale& s) {
  return detail::timed(3, "fid-protected-1ms", [&](CheckResult& r) {
    FidConfig cfg;
    cfg.protect = true;
    cfg.tau = 0.01;
    cfg.t_max = 1000.0;
    cfg.sample_step = 5.0;
    cfg.samples = s.full ? 200 : 100;
    cfg.seed = s.seed;
    cfg.workers = s.workers;
    detail::Timer t;
    const auto res = run_fid(cfg);
    const double secs = t.seconds();
    const double t2 = res.summary.at("t2_us");
    const bool bound = res.summary.at("t2_is_lower_bound") != 0.0;
    r.passed = !bound && t2 >= 500.0 && t2 <= 1500.0;
    r.detail = "N=" + std::to_string(cfg.samples) + ", T2=" + detail::fmt("%.1f", t2) + " us" +
               (bound ? " (lower bound)" : "") + " (need 500..1500)";
    r.passed = detail::within_budget(s, secs, 600.0, r.detail) && r.passed;
  });
}

// ------------------------------------------------------------ gates ----

inline CheckResult gate_quasi_static(const Scale& s) {
  return detail::timed(4, "gate-quasi-static", [&](CheckResult& r) {
    GateExpConfig cfg;
    cfg.samples = s.full ? 2000 : 200;
    cfg.seed = s.seed;
    cfg.workers = s.workers;
    detail::Timer t;
    const auto bare = run_gate_fidelity(cfg);
    cfg.protect = true;
    const auto prot = run_gate_fidelity(cfg);
    const double secs = t.seconds();
    const double fu = bare.summary.at("final_fidelity");
    const double fp = prot.summary.at("final_fidelity");

    // Halved step on a subset with the same seeds.
    GateExpConfig half = cfg;
    half.samples = 100;
    const double fp1 = run_gate_fidelity(half).summary.at("final_fidelity");
    half.steps_per_period *= 2;
    const double fp2 = run_gate_fidelity(half).summary.at("final_fidelity");
    half.protect = false;
    const double fu1 = run_gate_fidelity(half).summary.at("final_fidelity");
    half.unprotected_steps *= 2;
    half.output_points *= 2;
    const double fu2 = run_gate_fidelity(half).summary.at("final_fidelity");
    const double dt_shift = std::max(std::abs(fp2 - fp1), std::abs(fu2 - fu1));

    r.passed = std::abs(fu - 0.9873) <= 0.003 && std::abs(fp - 0.9997) <= 0.0005 && fp >= fu && dt_shift <= 1e-4;
    r.detail = "N=" + std::to_string(cfg.samples) + ", unprotected F(T)=" + detail::fmt("%.5f", fu) + " +- " +
               detail::fmt("%.1e", bare.summary.at("final_fidelity_stderr")) + " (target 0.9873 +- 0.003), protected F(T)=" +
               detail::fmt("%.5f", fp) + " +- " + detail::fmt("%.1e", prot.summary.at("final_fidelity_stderr")) +
               " (target 0.9997 +- 0.0005), dt-halving shift " + detail::fmt("%.1e", dt_shift);
    r.passed = detail::within_budget(s, secs, 300.0, r.detail) && r.passed;
  });
}

inline CheckResult gate_ou(const Scale& s) {
  return detail::timed(5, "gate-ou", [&](CheckResult& r) {
    GateExpConfig cfg;
    cfg.noise = OUNoise{};
    cfg.samples = s.full ? 500 : 100;
    cfg.seed = s.seed;
    cfg.workers = s.workers;
    const std::vector<double> gs{0.02, 0.1, 0.5};
    const std::vector<double> target{0.9997, 0.9991, 0.9861};
    const std::vector<double> tol{0.0005, 0.001, 0.005};
    detail::Timer t;
    const auto res = run_ou_study(cfg, gs);
    const double secs = t.seconds();

    // Halved propagation step on a subset; the OU grid stays put so both
    // runs see the same noise paths.
    GateExpConfig half = cfg;
    half.samples = 50;
    half.noise_dt = 0.1 * std::get<OUNoise>(cfg.noise).correlation_time / half.steps_per_period;
    const double f1 = run_ou_study(half, {0.1}).front().summary.at("final_fidelity");
    half.steps_per_period *= 2;
    const double f2 = run_ou_study(half, {0.1}).front().summary.at("final_fidelity");

    bool ok = true;
    r.detail = "N=" + std::to_string(cfg.samples);
    for (std::size_t i = 0; i < gs.size(); ++i) {
      const double f = res[i].summary.at("final_fidelity");
      ok = ok && std::abs(f - target[i]) <= tol[i];
      if (i > 0) ok = ok && f < res[i - 1].summary.at("final_fidelity");
      r.detail += ", g=" + detail::fmt("%g", gs[i]) + ": F(T)=" + detail::fmt("%.5f", f) + " (target " +
                  detail::fmt("%.4f", target[i]) + " +- " + detail::fmt("%g", tol[i]) + ")";
    }
    r.detail += ", dt-halving shift at g=0.1 " + detail::fmt("%.1e", std::abs(f2 - f1));
    r.passed = ok && std::abs(f2 - f1) <= 1e-4;
    r.passed = detail::within_budget(s, secs, 600.0, r.detail) && r.passed;
  });
}

// ------------------------------------------------------- noise-free ----

inline CheckResult noise_free_consistency(const Scale& s) {
  return detail::timed(6, "noise-free-gates", [&](CheckResult& r) {
    const auto paths = detail::random_paths(20, s.seed);
    double worst_bare = 0.0, worst_dressed = 0.0, worst_target = 0.0;
    const int steps = s.full ? 8000 : 2000;
    for (const auto& p : paths) {
      const Op2 ideal = ideal_gate<2>(p);
      const PropagationGrid grid{p.tau() / steps, 1};
      const DressingSpec d{1, p.tau(), DressingTarget::one_qubit};
      worst_bare = std::max(worst_bare, operator_distance<2>(propagate_unitary<2>(bare_schedule<2>(p), grid), ideal).phase_insensitive);
      worst_dressed = std::max(
          worst_dressed, operator_distance<2>(propagate_unitary<2>(dressed_schedule<2>(p, d), grid), ideal).phase_insensitive);
      const double gamma = geometric_phase(p).gamma;
      worst_target = std::max(
          worst_target, operator_distance<2>(ideal, detail::rotation(detail::path_axis(p), gamma)).phase_insensitive);
    }
    const double tol = s.full ? 1e-6 : 1e-5;
    r.passed = worst_bare < tol && worst_dressed < tol && worst_target < 1e-12;
    r.detail = "20 paths, dt=tau/" + std::to_string(steps) + ": max distance bare " + detail::fmt("%.2e", worst_bare) +
               ", dressed " + detail::fmt("%.2e", worst_dressed) + " (need < " + detail::fmt("%.0e", tol) +
               "), closed form vs exp(-i gamma n.sigma) " + detail::fmt("%.2e", worst_target);
  });
}

inline CheckResult structural_invariants(const Scale& s) {
  return detail::timed(7, "structural-invariants", [&](CheckResult& r) {
    auto paths = detail::random_paths(20, s.seed);
    paths.push_back(synthesize_path(SynthesisRequest{}));
    double dyn = 0.0;
    for (const auto& p : paths) dyn = std::max(dyn, dynamical_phase_residual<2>(p, sample_times(p, 2001)));

    double dec = 0.0, vmax = 0.0;
    for (int n = 1; n <= 4; ++n) {
      const DressingSpec d1{n, 0.0125, DressingTarget::one_qubit};
      const DressingSpec d2{n, 0.0125, DressingTarget::electron_of_pair};
      dec = std::max(dec, decoupling_integral<2>(d1, BathCoupling<2>::classical(pauli::z())).quadrature.norm());
      dec = std::max(dec, decoupling_integral<4>(d2, BathCoupling<4>::classical(electron_z<4>())).quadrature.norm());
      for (int m = 1; m <= 40; ++m) {
        vmax = std::max(vmax, (dressing_operator<2>(d1, m * d1.tau) - Op2::Identity()).norm());
        vmax = std::max(vmax, (dressing_operator<4>(d2, m * d2.tau) - Op4::Identity()).norm());
      }
    }

    // 1 ms of dressed free evolution with relaxation and a one-sigma offset.
    FidConfig f;
    f.protect = true;
    const double t_end = s.full ? 1000.0 : 50.0;
    const double sigma = f.noise.std_dev;
    auto sched = with_field<2>(fid_schedule(f, t_end), [sigma](double) { return sigma; }, pauli::z());
    const long every = 4000;
    const auto traj = lindblad_evolve<2>(sched, LindbladSpec{f.gamma}, PropagationGrid{f.tau / 40, every}, Op2::Constant(0.5));
    double drift = 0.0;
    for (const auto& p : traj) drift = std::max(drift, std::abs(p.rho.trace() - 1.0));

    r.passed = dyn < 1e-12 && dec < 1e-10 && vmax < 1e-12 && drift < 1e-9;
    r.detail = "dynamical phase residual " + detail::fmt("%.2e", dyn) + " (21 paths), decoupling integral " +
               detail::fmt("%.2e", dec) + " (n=1..4), max ||V(m tau)-I|| " + detail::fmt("%.2e", vmax) +
               ", trace drift over " + detail::fmt("%g", t_end) + " us " + detail::fmt("%.2e", drift);
  });
}

inline CheckResult decoupling_scaling(const Scale& s) {
  return detail::timed(8, "decoupling-scaling", [&](CheckResult& r) {
    (void)s;
    const std::vector<double> taus{0.02, 0.01, 0.005};
    const ToySpin spin{0.4, 0.1};
    std::vector<double> err, dist, magnus;
    for (double tau : taus) {
      SynthesisRequest q;
      q.tau = tau;
      const LoopPath p = synthesize_path(q);
      const DressingSpec d{1, tau, DressingTarget::one_qubit};
      const auto rep = toy_bath_factorization(p, d, spin, PropagationGrid{tau / 800, 1});
      err.push_back(rep.infidelity);
      dist.push_back(rep.factorization_error);
      const auto rot = rotating_frame<2>(dressed_schedule<2>(p, d), d, BathCoupling<2>::toy_spin(pauli::z(), spin));
      magnus.push_back(magnus_first_order<4>(rot, 0.0, tau, 2000).residual);
    }
    const double slope_err = detail::loglog_slope(taus, err);
    const double slope_mag = detail::loglog_slope(taus, magnus);
    const double slope_dist = detail::loglog_slope(taus, dist);
    const bool monotone = err[1] < err[0] && err[2] < err[1];
    r.passed = monotone && slope_err >= 1.0 && std::abs(slope_mag - 2.0) <= 0.3;
    r.detail = "toy-bath gate error 1-F at tau=0.02/0.01/0.005: " + detail::fmt("%.2e", err[0]) + "/" +
               detail::fmt("%.2e", err[1]) + "/" + detail::fmt("%.2e", err[2]) + ", slope " + detail::fmt("%.2f", slope_err) +
               " (need >= 1); bath-ground block distance slope " + detail::fmt("%.2f", slope_dist) +
               "; one-period Magnus residual slope " + detail::fmt("%.2f", slope_mag) + " (need 2 +- 0.3)";
  });
}

inline CheckResult two_qubit(const Scale& s) {
  return detail::timed(9, "two-qubit-gate", [&](CheckResult& r) {
    struct Case {
      const char* label;
      std::array<double, 3> axis;
      double angle;
    };
    const double c = 1.0 / std::sqrt(3.0);
    const std::vector<Case> cases{{"general", {c, c, c}, kPi / 3.0}, {"controlled-phase", {0, 0, 1}, kPi},
                                  {"controlled-not", {1, 0, 0}, kPi / 2.0}};
    const int steps = s.full ? 8000 : 2000;
    const double tol = s.full ? 1e-6 : 2e-5;
    bool ok = true;
    r.detail = "dt=tau/" + std::to_string(steps);
    for (const auto& cs : cases) {
      SynthesisRequest q;
      q.axis = cs.axis;
      q.angle = cs.angle;
      q.qubits = 2;
      const LoopPath p = synthesize_path(q);
      const DressingSpec d{1, p.tau(), DressingTarget::electron_of_pair};
      const auto rep = run_two_qubit_check(p, d, PropagationGrid{p.tau() / steps, 1}, ToySpin{0.4, 0.1}, tol);
      // The ideal gate itself against |down><down| (x) I + |up><up| (x) exp(-i gamma n.sigma).
      const Op4 expected = tensor<2, 2>(Op2::Identity(), Op2(pauli::proj_down())) +
                           tensor<2, 2>(detail::rotation(cs.axis, cs.angle), Op2(pauli::proj_up()));
      const double closed = operator_distance<4>(ideal_gate<4>(p), expected).phase_insensitive;
      const bool purity_order = rep.purity_protected > rep.purity_bare;
      ok = ok && rep.passed && closed < 1e-12 && purity_order;
      r.detail += "; " + std::string(cs.label) + ": distance " + detail::fmt("%.2e", rep.distance) + ", closed form " +
                  detail::fmt("%.1e", closed) + ", toy-bath purity " + detail::fmt("%.6f", rep.purity_protected) +
                  " vs bare " + detail::fmt("%.6f", rep.purity_bare);
    }
    r.passed = ok;
  });
}

inline CheckResult determinism(const Scale& s) {
  return detail::timed(10, "determinism", [&](CheckResult& r) {
    auto render = [&](io::Experiment kind, int samples, int workers) {
      io::Overrides o;
      o.seed = s.seed;
      o.samples = samples;
      o.workers = workers;
      if (kind == io::Experiment::gate) o.protect = true;
      std::string text;
      if (kind == io::Experiment::ou) text = R"({"params": {"g": [0.1]}})";
      const io::RunConfig c = io::parse_config_text(kind, text, o, nullptr);
      std::vector<ExperimentResult> res;
      if (kind == io::Experiment::fid) {
        res.push_back(run_fid(c.fid));
      } else if (kind == io::Experiment::gate) {
        res.push_back(run_gate_fidelity(c.gate));
      } else {
        res = run_ou_study(c.gate, c.ou_g);
      }
      std::string out = io::render_json(io::summary_json(c, res));
      for (const auto& x : res) out += io::render_csv(x);
      return out;
    };
    const int scale = s.full ? 1 : 4;
    struct Job {
      io::Experiment kind;
      int samples;
    };
    const std::vector<Job> jobs{{io::Experiment::fid, 2000 / scale}, {io::Experiment::gate, 200 / scale},
                                {io::Experiment::ou, 100 / scale}};
    bool ok = true;
    for (const auto& j : jobs) {
      const std::string a = render(j.kind, j.samples, 1);
      const std::string b = render(j.kind, j.samples, 1);
      const std::string c = render(j.kind, j.samples, 4);
      const bool same = a == b && a == c;
      ok = ok && same;
      r.detail += std::string(r.detail.empty() ? "" : ", ") + io::to_string(j.kind) + " (N=" + std::to_string(j.samples) +
                  ", " + std::to_string(a.size()) + " bytes) " + (same ? "identical" : "DIFFERS") + " across reruns and 1/4 workers";
    }
    r.passed = ok;
  });
}

// --------------------------------------------------- extra invariants ----

inline CheckResult invariants(const Scale& s) {
  return detail::timed(0, "invariants", [&](CheckResult& r) {
    bool ok = true;
    // Noise off, no relaxation: F(t) = 1 throughout.
    GateExpConfig g;
    g.noise = QuasiStaticGaussian{0.0, 0.0};
    g.gamma = 0.0;
    g.samples = 1;
    g.protect = true;
    g.steps_per_period = 4000;
    double dip = 0.0;
    for (double f : run_gate_fidelity(g).mean) dip = std::max(dip, 1.0 - f);
    ok = ok && dip < 1e-6;

    // Protection beats the bare gate at a one-sigma offset.
    std::string order;
    for (double tau : {0.005, 0.0125, 0.025}) {
      SynthesisRequest q;
      q.tau = tau;
      const LoopPath p = synthesize_path(q);
      const double sigma = defaults::kOverhauserSigma;
      const PropagationGrid grid{tau / 400, 1};
      const Op2 ideal = ideal_gate<2>(p);
      const auto field = [sigma](double) { return sigma; };
      const double eb = operator_distance<2>(propagate_unitary<2>(with_field<2>(bare_schedule<2>(p), field, pauli::z()), grid), ideal)
                            .phase_insensitive;
      const DressingSpec d{1, tau, DressingTarget::one_qubit};
      const double ed =
          operator_distance<2>(propagate_unitary<2>(with_field<2>(dressed_schedule<2>(p, d), field, pauli::z()), grid), ideal)
              .phase_insensitive;
      ok = ok && ed < eb;
      order += (order.empty() ? "" : ", ") + detail::fmt("%g", tau) + ": " + detail::fmt("%.1e", ed) + " < " +
               detail::fmt("%.1e", eb);
    }

    // Standard error shrinks as N^-1/2.
    std::vector<double> ns{250, 1000, 4000}, errs;
    for (double n : ns) {
      GateExpConfig q;
      q.samples = static_cast<int>(n);
      q.seed = s.seed;
      q.workers = s.workers;
      q.output_points = 4;
      q.unprotected_steps = 400;
      errs.push_back(run_gate_fidelity(q).summary.at("final_fidelity_stderr"));
    }
    const double se_slope = detail::loglog_slope(ns, errs);
    ok = ok && std::abs(se_slope + 0.5) <= 0.1;

    r.passed = ok;
    r.detail = "noise-free fidelity dip " + detail::fmt("%.1e", dip) + "; dressed < bare at one sigma (" + order +
               "); stderr exponent " + detail::fmt("%.3f", se_slope) + " (need -0.5 +- 0.1)";
  });
}

using CheckFn = CheckResult (*)(const Scale&);

inline std::vector<CheckFn> acceptance_checks() {
  return {fid_unprotected, fid_protected_short, fid_protected_long, gate_quasi_static, gate_ou,
          noise_free_consistency, structural_invariants, decoupling_scaling, two_qubit, determinism};
}

/// Everything `verify` runs: the acceptance checks plus the extra invariants.
inline std::vector<CheckFn> all_checks() {
  auto v = acceptance_checks();
  v.push_back(invariants);
  return v;
}

inline std::string format_line(const CheckResult& r) {
  const std::string tag = r.id > 0 ? "criterion " + std::to_string(r.id) : "extra";
  return std::string(r.passed ? "PASS" : "FAIL") + "  " + tag + "  " + r.name + ": " + r.detail + " [" +
         detail::fmt("%.1f", r.seconds) + " s]";
}

}  // namespace geodd::verification
