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

// Run configuration, path (de)serialization and byte-stable output
// rendering for the command-line front end.
//
// Config files are JSON:
//
//   {
//     "seed": 7,              // master seed, unsigned 64-bit
//     "out": "results",       // output directory
//     "workers": 1,           // Monte-Carlo worker cap
//     "params": { ... }       // keys depend on the experiment
//   }
//
// Every key is optional and unknown keys are rejected. Output directory
// precedence: --out, then $GEODD_OUT, then "out" in the file, then
// "geodd-out".

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geodd/experiments.hpp"
#include "json.hpp"

namespace geodd::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kOutEnv = "GEODD_OUT";
inline constexpr const char* kDefaultOut = "geodd-out";

class ConfigError : public Error {
 public:
  using Error::Error;
};

// ------------------------------------------------------------- paths ----

inline json to_json(const PathSegment& s) {
  json j;
  j["kind"] = to_string(s.kind);
  switch (s.kind) {
    case SegmentKind::theta_ramp:
      j["periods"] = s.periods;
      j["rabi"] = s.rabi;
      j["phi"] = s.phi;
      break;
    case SegmentKind::phi_sweep:
      j["periods"] = s.periods;
      j["phi_rate"] = s.phi_rate;
      break;
    case SegmentKind::pole_jump:
      j["jump"] = s.jump;
      break;
  }
  return j;
}

inline json to_json(const LoopPath& p) {
  json j;
  j["theta0"] = p.theta0();
  j["phi0"] = p.phi0();
  j["tau_us"] = p.tau();
  j["qubits"] = p.qubits();
  j["total_time_us"] = p.total_time();
  json segs = json::array();
  for (const auto& s : p.segments()) segs.push_back(to_json(s));
  j["segments"] = std::move(segs);
  return j;
}

namespace detail {

/// Strict reader over one JSON object: every key must be consumed.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  void read(const std::string& key, T& dst) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    dst = convert<T>(j_.at(key), name(key));
  }

  template <class T>
  T require(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(name(key) + ": missing required field");
    seen_.insert(key);
    return convert<T>(j_.at(key), name(key));
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string name(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

  void finish() const {
    for (const auto& [k, _] : j_.items()) {
      if (!seen_.count(k)) throw ConfigError(name(k) + ": unknown key");
    }
  }

 private:
  template <class T>
  static T convert(const json& v, const std::string& key) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(key + ": expected true or false");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(key + ": expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError(key + ": expected a non-negative integer");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(key + ": expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(key + ": expected a string");
    }
    try {
      return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

inline SegmentKind segment_kind(const std::string& s, const std::string& key) {
  if (s == "theta-ramp") return SegmentKind::theta_ramp;
  if (s == "phi-sweep") return SegmentKind::phi_sweep;
  if (s == "pole-jump") return SegmentKind::pole_jump;
  throw ConfigError(key + ": unknown segment kind '" + s + "'");
}

inline Recipe recipe(const std::string& s, const std::string& key) {
  if (s == "orange-slice") return Recipe::orange_slice;
  if (s == "pole-sweep") return Recipe::pole_sweep;
  throw ConfigError(key + ": unknown recipe '" + s + "' (orange-slice, pole-sweep)");
}

inline std::array<double, 3> axis(const json& v, const std::string& key) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "x") return {1.0, 0.0, 0.0};
    if (s == "y") return {0.0, 1.0, 0.0};
    if (s == "z") return {0.0, 0.0, 1.0};
    throw ConfigError(key + ": axis name must be x, y or z");
  }
  if (!v.is_array() || v.size() != 3) throw ConfigError(key + ": expected x, y, z or a 3-vector");
  std::array<double, 3> n{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw ConfigError(key + ": components must be numbers");
    n[i] = v[i].get<double>();
  }
  const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (!(norm > 0.0)) throw ConfigError(key + ": zero vector");
  for (double& c : n) c /= norm;
  return n;
}

}  // namespace detail

inline LoopPath path_from_json(const json& j, const std::string& where = "path") {
  detail::ObjectReader r(j, where);
  const auto theta0 = r.require<double>("theta0");
  double phi0 = 0.0;
  r.read("phi0", phi0);
  const auto tau = r.require<double>("tau_us");
  int qubits = 1;
  r.read("qubits", qubits);
  if (r.has("total_time_us")) r.raw("total_time_us");  // derived; ignored on input
  const json& segs = r.raw("segments");
  r.finish();
  if (!segs.is_array()) throw ConfigError(where + ".segments: expected an array");
  std::vector<PathSegment> out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    detail::ObjectReader s(segs[i], where + ".segments[" + std::to_string(i) + "]");
    PathSegment seg;
    seg.kind = detail::segment_kind(s.require<std::string>("kind"), s.name("kind"));
    switch (seg.kind) {
      case SegmentKind::theta_ramp:
        seg.periods = s.require<int>("periods");
        seg.rabi = s.require<double>("rabi");
        seg.phi = s.require<double>("phi");
        break;
      case SegmentKind::phi_sweep:
        seg.periods = s.require<int>("periods");
        seg.phi_rate = s.require<double>("phi_rate");
        break;
      case SegmentKind::pole_jump:
        seg.jump = s.require<double>("jump");
        break;
    }
    s.finish();
    out.push_back(seg);
  }
  try {
    return LoopPath(theta0, phi0, tau, std::move(out), qubits);
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

// ------------------------------------------------------------ config ----

enum class Experiment { fid, gate, ou, two_qubit, synth, verify };

inline const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::fid:
      return "fid";
    case Experiment::gate:
      return "gate";
    case Experiment::ou:
      return "ou";
    case Experiment::two_qubit:
      return "two-qubit";
    case Experiment::synth:
      return "synth";
    case Experiment::verify:
      return "verify";
  }
  return "?";
}

struct TwoQubitConfig {
  SynthesisRequest target{{0.0, 0.0, 1.0}, kPi / 2.0, defaults::kRabi, defaults::kGateTau, 2, Recipe::orange_slice};
  std::optional<LoopPath> path;
  int dressing_n = 1;
  int steps_per_period = 8000;
  ToySpin spin{0.4, 0.1};
};

struct SynthConfig {
  SynthesisRequest target{};
  int steps_per_period = 4000;  ///< oracle propagation resolution
};

struct RunConfig {
  Experiment kind = Experiment::gate;
  std::uint64_t seed = 1;
  std::string out = kDefaultOut;
  int workers = 1;
  FidConfig fid;
  GateExpConfig gate;
  std::vector<double> ou_g{0.02, 0.1, 0.5};
  TwoQubitConfig two_qubit;
  SynthConfig synth;
  bool verify_full = false;
};

/// Command-line values that win over the file.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tau;
  std::optional<bool> protect;
  std::optional<int> workers;
};

inline RunConfig default_config(Experiment kind) {
  RunConfig c;
  c.kind = kind;
  if (kind == Experiment::ou) {
    c.gate.noise = OUNoise{};
    c.gate.samples = 500;
    c.gate.protect = true;
  }
  return c;
}

namespace detail {

inline void read_synthesis(ObjectReader& r, SynthesisRequest& q, bool with_qubits) {
  if (r.has("axis")) q.axis = axis(r.raw("axis"), r.name("axis"));
  r.read("angle", q.angle);
  r.read("rabi", q.rabi);
  r.read("tau", q.tau);
  if (with_qubits) r.read("qubits", q.qubits);
  if (r.has("recipe")) {
    std::string s;
    r.read("recipe", s);
    q.recipe = recipe(s, r.name("recipe"));
  }
}

inline void read_fid(ObjectReader& r, FidConfig& f) {
  r.read("delta", f.delta);
  r.read("sigma", f.noise.std_dev);
  r.read("mean", f.noise.mean);
  r.read("gamma", f.gamma);
  r.read("protected", f.protect);
  r.read("tau", f.tau);
  r.read("n", f.dressing_n);
  r.read("t_max", f.t_max);
  r.read("sample_step", f.sample_step);
  r.read("samples", f.samples);
  r.read("steps_per_period", f.steps_per_period);
  r.read("steps_per_sample", f.steps_per_sample);
}

inline NoiseSpec read_noise(const json& j, const std::string& where, const NoiseSpec& fallback) {
  ObjectReader r(j, where);
  std::string kind = std::holds_alternative<OUNoise>(fallback) ? "ou" : "quasi-static";
  r.read("kind", kind);
  NoiseSpec out;
  if (kind == "quasi-static") {
    QuasiStaticGaussian q{defaults::kOverhauserSigma, 0.0};
    if (const auto* f = std::get_if<QuasiStaticGaussian>(&fallback)) q = *f;
    r.read("sigma", q.std_dev);
    r.read("mean", q.mean);
    out = q;
  } else if (kind == "ou") {
    OUNoise o;
    if (const auto* f = std::get_if<OUNoise>(&fallback)) o = *f;
    r.read("sigma", o.std_dev);
    r.read("mean", o.mean);
    r.read("correlation_time", o.correlation_time);
    if (r.has("start")) {
      std::string s;
      r.read("start", s);
      if (s == "stationary") {
        o.start = OUStart::stationary;
      } else if (s == "at-mean") {
        o.start = OUStart::at_mean;
      } else {
        throw ConfigError(r.name("start") + ": expected stationary or at-mean");
      }
    }
    out = o;
  } else {
    throw ConfigError(r.name("kind") + ": expected quasi-static or ou");
  }
  r.finish();
  return out;
}

inline State2 read_state(const json& v, const std::string& key) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    State2 psi = State2::Zero();
    if (s == "plus") {
      psi.setConstant(1.0 / std::sqrt(2.0));
    } else if (s == "zero") {
      psi(0) = 1.0;
    } else if (s == "one") {
      psi(1) = 1.0;
    } else {
      throw ConfigError(key + ": expected plus, zero, one or [[re, im], [re, im]]");
    }
    return psi;
  }
  if (!v.is_array() || v.size() != 2) throw ConfigError(key + ": expected two complex amplitudes");
  State2 psi;
  for (std::size_t i = 0; i < 2; ++i) {
    if (!v[i].is_array() || v[i].size() != 2 || !v[i][0].is_number() || !v[i][1].is_number()) {
      throw ConfigError(key + ": amplitude " + std::to_string(i) + " must be [re, im]");
    }
    psi(static_cast<Eigen::Index>(i)) = cplx(v[i][0].get<double>(), v[i][1].get<double>());
  }
  if (std::abs(psi.norm() - 1.0) > 1e-12) throw ConfigError(key + ": state must be normalized");
  return psi;
}

inline void read_gate(ObjectReader& r, GateExpConfig& g, bool ou) {
  read_synthesis(r, g.target, false);
  if (r.has("path")) g.path = path_from_json(r.raw("path"), r.name("path"));
  r.read("duration", g.duration);
  if (!ou) r.read("protected", g.protect);
  r.read("n", g.dressing_n);
  if (r.has("noise")) g.noise = read_noise(r.raw("noise"), r.name("noise"), g.noise);
  r.read("gamma", g.gamma);
  if (r.has("initial")) g.initial = read_state(r.raw("initial"), r.name("initial"));
  r.read("samples", g.samples);
  r.read("steps_per_period", g.steps_per_period);
  r.read("unprotected_steps", g.unprotected_steps);
  r.read("output_points", g.output_points);
}

inline void read_params(ObjectReader& r, RunConfig& c) {
  switch (c.kind) {
    case Experiment::fid:
      read_fid(r, c.fid);
      break;
    case Experiment::gate:
      read_gate(r, c.gate, false);
      break;
    case Experiment::ou:
      read_gate(r, c.gate, true);
      r.read("g", c.ou_g);
      break;
    case Experiment::two_qubit:
      read_synthesis(r, c.two_qubit.target, false);
      if (r.has("path")) c.two_qubit.path = path_from_json(r.raw("path"), r.name("path"));
      r.read("n", c.two_qubit.dressing_n);
      r.read("steps_per_period", c.two_qubit.steps_per_period);
      r.read("lambda", c.two_qubit.spin.lambda);
      r.read("omega_e", c.two_qubit.spin.omega_e);
      break;
    case Experiment::synth:
      read_synthesis(r, c.synth.target, true);
      r.read("steps_per_period", c.synth.steps_per_period);
      break;
    case Experiment::verify:
      r.read("full", c.verify_full);
      break;
  }
}

/// 1-based line and column of byte offset `pos` (1-based, as reported by
/// the JSON parser).
inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t pos) {
  std::size_t line = 1;
  std::size_t col = 1;
  const std::size_t end = std::min(text.size(), pos > 0 ? pos - 1 : 0);
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline void apply_overrides(RunConfig& c, const Overrides& o) {
  auto reject = [&](const char* flag) {
    throw ConfigError(std::string(flag) + ": does not apply to '" + to_string(c.kind) + "'");
  };
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (o.samples) {
    if (c.kind == Experiment::fid) {
      c.fid.samples = *o.samples;
    } else if (c.kind == Experiment::gate || c.kind == Experiment::ou) {
      c.gate.samples = *o.samples;
    } else {
      reject("--samples");
    }
  }
  if (o.tau) {
    switch (c.kind) {
      case Experiment::fid:
        c.fid.tau = *o.tau;
        break;
      case Experiment::gate:
        c.gate.target.tau = *o.tau;
        break;
      case Experiment::two_qubit:
        c.two_qubit.target.tau = *o.tau;
        break;
      case Experiment::synth:
        c.synth.target.tau = *o.tau;
        break;
      default:
        reject("--tau");
    }
  }
  if (o.protect) {
    if (c.kind == Experiment::fid) {
      c.fid.protect = *o.protect;
    } else if (c.kind == Experiment::gate) {
      c.gate.protect = *o.protect;
    } else {
      reject("--protected");
    }
  }
}

inline void validate(const RunConfig& c) {
  if (c.workers < 1) throw ConfigError("workers: must be >= 1");
  try {
    switch (c.kind) {
      case Experiment::fid:
        c.fid.validate();
        break;
      case Experiment::gate:
        if (c.gate.protect && !c.gate.path) {
          const double m = c.gate.duration / c.gate.target.tau;
          if (std::abs(m - std::round(m)) > 1e-9) {
            throw ConfigError("params.tau: " + geodd::detail::fmt_double(c.gate.target.tau) + " us does not divide duration " +
                              geodd::detail::fmt_double(c.gate.duration) + " us (protected runs need T = M tau)");
          }
        }
        c.gate.validate();
        break;
      case Experiment::ou:
        if (c.gate.path) throw ConfigError("params.path: ou re-synthesizes the path for each g");
        if (!std::holds_alternative<OUNoise>(c.gate.noise)) throw ConfigError("params.noise.kind: ou needs OU noise");
        if (c.ou_g.empty()) throw ConfigError("params.g: at least one value required");
        for (double g : c.ou_g) {
          GateExpConfig probe = c.gate;
          probe.protect = true;
          probe.target.tau = g * std::get<OUNoise>(c.gate.noise).correlation_time;
          probe.validate();
        }
        break;
      case Experiment::two_qubit: {
        const LoopPath p = c.two_qubit.path ? *c.two_qubit.path : synthesize_path(c.two_qubit.target);
        if (p.qubits() != 2) throw ConfigError("params.path.qubits: two-qubit check needs a two-qubit path");
        DressingSpec{c.two_qubit.dressing_n, p.tau(), DressingTarget::electron_of_pair}.validate();
        if (c.two_qubit.steps_per_period < 20) throw ConfigError("params.steps_per_period: must be >= 20");
        break;
      }
      case Experiment::synth:
        synthesize_path(c.synth.target);
        if (c.synth.steps_per_period < 20) throw ConfigError("params.steps_per_period: must be >= 20");
        break;
      case Experiment::verify:
        break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
}

}  // namespace detail

/// Parses `text` (may be empty) for `kind`, then applies flags and the
/// environment. `env_out` is the value of $GEODD_OUT, if set.
inline RunConfig parse_config_text(Experiment kind, const std::string& text, const Overrides& flags,
                                   const char* env_out, const std::string& source = "config") {
  RunConfig c = default_config(kind);
  std::optional<std::string> file_out;
  if (!text.empty()) {
    json j;
    try {
      j = json::parse(text, nullptr, true, /*ignore_comments=*/false);
    } catch (const nlohmann::json::parse_error& e) {
      const auto [line, col] = detail::line_col(text, e.byte);
      throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": parse error: " +
                        e.what());
    }
    detail::ObjectReader top(j, "");
    if (top.has("experiment")) {
      std::string k;
      top.read("experiment", k);
      if (k != to_string(kind)) throw ConfigError("experiment: file is for '" + k + "', not '" + to_string(kind) + "'");
    }
    top.read("seed", c.seed);
    if (top.has("out")) {
      std::string o;
      top.read("out", o);
      file_out = o;
    }
    top.read("workers", c.workers);
    if (top.has("params")) {
      detail::ObjectReader p(top.raw("params"), "params");
      detail::read_params(p, c);
      p.finish();
    }
    top.finish();
  }
  detail::apply_overrides(c, flags);
  if (flags.out) {
    c.out = *flags.out;
  } else if (env_out && *env_out) {
    c.out = env_out;
  } else if (file_out) {
    c.out = *file_out;
  }
  c.fid.seed = c.seed;
  c.gate.seed = c.seed;
  c.fid.workers = c.workers;
  c.gate.workers = c.workers;
  detail::validate(c);
  return c;
}

// ------------------------------------------------------------- echo ----

inline json to_json(const SynthesisRequest& q) {
  return json{{"axis", q.axis}, {"angle", q.angle}, {"rabi", q.rabi}, {"tau", q.tau}, {"recipe", to_string(q.recipe)}};
}

inline json to_json(const NoiseSpec& n) {
  if (const auto* q = std::get_if<QuasiStaticGaussian>(&n)) {
    return json{{"kind", "quasi-static"}, {"sigma", q->std_dev}, {"mean", q->mean}};
  }
  const auto& o = std::get<OUNoise>(n);
  return json{{"kind", "ou"},
              {"sigma", o.std_dev},
              {"mean", o.mean},
              {"correlation_time", o.correlation_time},
              {"start", o.start == OUStart::stationary ? "stationary" : "at-mean"}};
}

/// Fully resolved parameters, in the same schema the parser accepts. The
/// worker count is left out so outputs do not depend on it.
inline json resolved_params(const RunConfig& c) {
  json p;
  switch (c.kind) {
    case Experiment::fid: {
      const auto& f = c.fid;
      p = json{{"delta", f.delta},         {"sigma", f.noise.std_dev},
               {"mean", f.noise.mean},     {"gamma", f.gamma},
               {"protected", f.protect},   {"tau", f.tau},
               {"n", f.dressing_n},        {"t_max", f.t_max},
               {"sample_step", f.sample_step}, {"samples", f.samples},
               {"steps_per_period", f.steps_per_period}, {"steps_per_sample", f.steps_per_sample}};
      break;
    }
    case Experiment::gate:
    case Experiment::ou: {
      const auto& g = c.gate;
      p = to_json(g.target);
      if (g.path) p["path"] = to_json(*g.path);
      p["duration"] = g.duration;
      if (c.kind == Experiment::gate) p["protected"] = g.protect;
      p["n"] = g.dressing_n;
      p["noise"] = to_json(g.noise);
      p["gamma"] = g.gamma;
      p["initial"] = json::array({json::array({g.initial(0).real(), g.initial(0).imag()}),
                                  json::array({g.initial(1).real(), g.initial(1).imag()})});
      p["samples"] = g.samples;
      p["steps_per_period"] = g.steps_per_period;
      p["unprotected_steps"] = g.unprotected_steps;
      p["output_points"] = g.output_points;
      if (c.kind == Experiment::ou) p["g"] = c.ou_g;
      break;
    }
    case Experiment::two_qubit:
      p = to_json(c.two_qubit.target);
      if (c.two_qubit.path) p["path"] = to_json(*c.two_qubit.path);
      p["n"] = c.two_qubit.dressing_n;
      p["steps_per_period"] = c.two_qubit.steps_per_period;
      p["lambda"] = c.two_qubit.spin.lambda;
      p["omega_e"] = c.two_qubit.spin.omega_e;
      break;
    case Experiment::synth:
      p = to_json(c.synth.target);
      p["qubits"] = c.synth.target.qubits;
      p["steps_per_period"] = c.synth.steps_per_period;
      break;
    case Experiment::verify:
      p = json{{"full", c.verify_full}};
      break;
  }
  return p;
}

inline json resolved_config(const RunConfig& c) {
  return json{{"experiment", to_string(c.kind)}, {"seed", c.seed}, {"params", resolved_params(c)}};
}

// ----------------------------------------------------------- outputs ----

inline std::string render_csv(const ExperimentResult& r) {
  std::ostringstream os;
  r.write_csv(os);
  return os.str();
}

inline json summary_json(const RunConfig& c, const std::vector<ExperimentResult>& results) {
  json s;
  s["config"] = resolved_config(c);
  s["seed"] = c.seed;
  json res = json::object();
  for (const auto& r : results) {
    json scalars = json::object();
    for (const auto& [k, v] : r.summary) scalars[k] = v;
    res[r.name] = std::move(scalars);
  }
  s["results"] = std::move(res);
  // Convenience copy for single-experiment runs.
  if (results.size() == 1) {
    for (const auto& [k, v] : results.front().summary) s[k] = v;
  }
  return s;
}

inline std::string render_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace geodd::io
