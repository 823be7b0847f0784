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

// geodd: command-line front end.
//
//   geodd fid|gate|ou|two-qubit|synth|verify [--config FILE] [--out DIR]
//         [--seed U64] [--samples N] [--tau US] [--protected|--no-protected]
//         [--workers K]
//
// Results go to DIR (see io.hpp for precedence, including $GEODD_OUT).
// summary.json and the CSV files depend only on the resolved config and
// seed; wall time and worker count go to runtime.json.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "geodd/io.hpp"
#include "geodd/verification.hpp"

namespace {

using geodd::io::Experiment;
using geodd::io::json;
namespace fs = std::filesystem;

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tau;
  std::optional<bool> protect;
  std::optional<int> workers;
  std::string axis;
  std::optional<double> angle;
  bool full = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw geodd::Error("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw geodd::Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw geodd::Error("write failed for '" + path.string() + "'");
}

std::array<double, 3> parse_axis(const std::string& s) {
  if (s == "x") return {1, 0, 0};
  if (s == "y") return {0, 1, 0};
  if (s == "z") return {0, 0, 1};
  std::array<double, 3> n{};
  char c1 = 0, c2 = 0;
  std::istringstream is(s);
  if (!(is >> n[0] >> c1 >> n[1] >> c2 >> n[2]) || c1 != ',' || c2 != ',' || !is.eof()) {
    throw geodd::io::ConfigError("--axis: expected x, y, z or nx,ny,nz");
  }
  const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (!(norm > 0.0)) throw geodd::io::ConfigError("--axis: zero vector");
  for (double& v : n) v /= norm;
  return n;
}

void add_common(CLI::App* sub, Flags& f, bool monte_carlo, bool tau, bool protect) {
  sub->add_option("--config", f.config, "JSON config file");
  sub->add_option("--out", f.out, "output directory (overrides $GEODD_OUT and the file)");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--workers", f.workers, "worker thread cap")->check(CLI::PositiveNumber);
  if (monte_carlo) sub->add_option("--samples", f.samples, "noise realizations")->check(CLI::PositiveNumber);
  if (tau) sub->add_option("--tau", f.tau, "dressing period, us")->check(CLI::PositiveNumber);
  if (protect) {
    sub->add_flag_callback("--protected", [&f] { f.protect = true; }, "use the dressed schedule");
    sub->add_flag_callback("--no-protected", [&f] { f.protect = false; }, "use the bare schedule");
  }
}

json synth_record(const geodd::io::RunConfig& c) {
  using namespace geodd;
  const LoopPath p = synthesize_path(c.synth.target);
  const GeometricPhase gp = geometric_phase(p);
  const PropagationGrid grid{p.tau() / c.synth.steps_per_period, 1};
  json oracle;
  double bare = 0.0, dressed = 0.0, target = 0.0;
  const auto& n = c.synth.target.axis;
  const Op2 rot = hermitian_exp<2>(Op2(pauli::along(n[0], n[1], n[2])), c.synth.target.angle);
  if (p.qubits() == 1) {
    const Op2 ideal = ideal_gate<2>(p);
    const DressingSpec d{1, p.tau(), DressingTarget::one_qubit};
    bare = operator_distance<2>(propagate_unitary<2>(bare_schedule<2>(p), grid), ideal).phase_insensitive;
    dressed = operator_distance<2>(propagate_unitary<2>(dressed_schedule<2>(p, d), grid), ideal).phase_insensitive;
    target = operator_distance<2>(ideal, rot).phase_insensitive;
  } else {
    const Op4 ideal = ideal_gate<4>(p);
    const DressingSpec d{1, p.tau(), DressingTarget::electron_of_pair};
    bare = operator_distance<4>(propagate_unitary<4>(bare_schedule<4>(p), grid), ideal).phase_insensitive;
    dressed = operator_distance<4>(propagate_unitary<4>(dressed_schedule<4>(p, d), grid), ideal).phase_insensitive;
    const Op4 expected = tensor<2, 2>(Op2::Identity(), Op2(pauli::proj_down())) + tensor<2, 2>(rot, Op2(pauli::proj_up()));
    target = operator_distance<4>(ideal, expected).phase_insensitive;
  }
  const auto times = sample_times(p, 2001);
  const double dyn = p.qubits() == 1 ? dynamical_phase_residual<2>(p, times) : dynamical_phase_residual<4>(p, times);
  oracle["geometric_phase"] = gp.gamma;
  oracle["closure_phase"] = gp.closure;
  oracle["dynamical_phase_residual"] = dyn;
  oracle["closed_form_vs_target"] = target;
  oracle["bare_propagation_distance"] = bare;
  oracle["dressed_propagation_distance"] = dressed;
  oracle["dt_us"] = grid.dt;
  oracle["passed"] = bare < 1e-6 && dressed < 1e-6 && target < 1e-12 && dyn < 1e-12;
  json out;
  out["config"] = io::resolved_config(c);
  out["path"] = io::to_json(p);
  out["oracle"] = oracle;
  return out;
}

int dispatch(Experiment kind, const Flags& f) {
  using namespace geodd;
  io::Overrides o{f.out, f.seed, f.samples, f.tau, f.protect, f.workers};
  std::string text;
  std::string source = "config";
  if (!f.config.empty()) {
    text = read_file(f.config);
    source = f.config;
    if (text.empty()) text = "{}";
  }
  if (kind == Experiment::synth && (!f.axis.empty() || f.angle)) {
    json j = text.empty() ? json::object() : json::parse(text);
    if (!f.axis.empty()) {
      const auto n = parse_axis(f.axis);
      j["params"]["axis"] = n;
    }
    if (f.angle) j["params"]["angle"] = *f.angle;
    text = j.dump();
  }
  io::RunConfig c = io::parse_config_text(kind, text, o, std::getenv(io::kOutEnv), source);
  if (kind == Experiment::verify && f.full) c.verify_full = true;

  const auto start = std::chrono::steady_clock::now();
  int status = 0;

  if (kind == Experiment::verify) {
    verification::Scale s{c.verify_full, c.workers, c.seed};
    int failed = 0;
    for (auto fn : verification::all_checks()) {
      const auto r = fn(s);
      std::cout << verification::format_line(r) << std::endl;
      if (!r.passed) ++failed;
    }
    std::cout << (failed ? std::to_string(failed) + " check(s) failed" : std::string("all checks passed")) << "\n";
    return failed ? 1 : 0;
  }

  const fs::path dir(c.out);
  fs::create_directories(dir);
  std::vector<ExperimentResult> results;
  json summary;
  switch (kind) {
    case Experiment::fid:
      results.push_back(run_fid(c.fid));
      write_file(dir / "fid.csv", io::render_csv(results.back()));
      summary = io::summary_json(c, results);
      break;
    case Experiment::gate:
      results.push_back(run_gate_fidelity(c.gate));
      write_file(dir / "gate_fidelity.csv", io::render_csv(results.back()));
      summary = io::summary_json(c, results);
      break;
    case Experiment::ou:
      results = run_ou_study(c.gate, c.ou_g);
      for (const auto& r : results) write_file(dir / (r.name + ".csv"), io::render_csv(r));
      summary = io::summary_json(c, results);
      break;
    case Experiment::two_qubit: {
      const LoopPath p = c.two_qubit.path ? *c.two_qubit.path : synthesize_path(c.two_qubit.target);
      const DressingSpec d{c.two_qubit.dressing_n, p.tau(), DressingTarget::electron_of_pair};
      const auto rep = run_two_qubit_check(p, d, PropagationGrid{p.tau() / c.two_qubit.steps_per_period, 1},
                                           c.two_qubit.spin);
      summary["config"] = io::resolved_config(c);
      summary["seed"] = c.seed;
      summary["path"] = io::to_json(p);
      summary["distance"] = rep.distance;
      summary["down_block_error"] = rep.down_block_error;
      summary["up_block_error"] = rep.up_block_error;
      summary["off_block_norm"] = rep.off_block_norm;
      summary["purity_protected"] = rep.purity_protected;
      summary["purity_bare"] = rep.purity_bare;
      summary["passed"] = rep.passed;
      if (!rep.passed) {
        std::cerr << "two-qubit: block structure violated (distance " << rep.distance << ", down " << rep.down_block_error
                  << ", up " << rep.up_block_error << ", off-diagonal " << rep.off_block_norm << ")\n";
        status = 1;
      }
      break;
    }
    case Experiment::synth: {
      summary = synth_record(c);
      write_file(dir / "path.json", io::render_json(summary));
      if (!summary["oracle"]["passed"].get<bool>()) status = 1;
      break;
    }
    case Experiment::verify:
      break;
  }
  if (kind != Experiment::synth) write_file(dir / "summary.json", io::render_json(summary));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file(dir / "runtime.json", io::render_json(json{{"runtime_s", secs}, {"workers", c.workers}}));

  for (const auto& r : results) {
    std::cout << r.name;
    for (const auto& [k, v] : r.summary) std::cout << "  " << k << "=" << csv::num(v);
    std::cout << "\n";
  }
  std::cout << "wrote " << dir.string() << " (" << secs << " s)\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherence-protected nonadiabatic geometric gates: simulations and checks"};
  app.require_subcommand(1);
  Flags f;
  struct Sub {
    const char* name;
    Experiment kind;
    const char* help;
    bool mc, tau, protect;
  };
  const Sub subs[] = {
      {"fid", Experiment::fid, "free-induction decay, bare or dressed", true, true, true},
      {"gate", Experiment::gate, "gate fidelity under quasi-static or OU noise", true, true, true},
      {"ou", Experiment::ou, "protected gate fidelity under OU noise for several g = tau/tau_e", true, false, false},
      {"two-qubit", Experiment::two_qubit, "noise-free two-qubit gate check", false, true, false},
      {"synth", Experiment::synth, "synthesize a loop path and validate it by propagation", false, true, false},
      {"verify", Experiment::verify, "run the verification suite", false, false, false},
  };
  std::optional<Experiment> chosen;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, f, s.mc, s.tau, s.protect);
    if (s.kind == Experiment::synth) {
      sub->add_option("--axis", f.axis, "rotation axis: x, y, z or nx,ny,nz");
      sub->add_option("--angle", f.angle, "rotation angle gamma, rad, in (-pi, pi]");
    }
    if (s.kind == Experiment::verify) sub->add_flag("--full", f.full, "paper-sized ensembles and runtime budgets");
    sub->callback([&chosen, k = s.kind] { chosen = k; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    return dispatch(*chosen, f);
  } catch (const geodd::io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
