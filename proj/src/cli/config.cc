// Copyright 2026 The cvepr Authors
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

#include "cvepr/cli/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cvepr::cli {

namespace {

using nlohmann::json;

// Reject keys we do not know: a typo should not silently fall back to a
// default.
void expect_keys(const json& j, std::initializer_list<const char*> allowed,
                 const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

ElementKind parse_kind(const std::string& s) {
  if (s == "qwp") return ElementKind::QuarterWave;
  if (s == "hwp") return ElementKind::HalfWave;
  if (s == "phase") return ElementKind::Phase;
  if (s == "loss") return ElementKind::Loss;
  if (s == "pbs") return ElementKind::Pbs;
  throw ConfigError("chain: unknown element type '" + s + "'");
}

ElementSpec parse_element(const json& j, std::size_t index) {
  const std::string where = "chain[" + std::to_string(index) + "]";
  if (!j.is_object() || !j.contains("type")) throw ConfigError(where + ": missing 'type'");
  ElementSpec e;
  std::string type;
  read(j, "type", type, where);
  e.kind = parse_kind(type);
  switch (e.kind) {
    case ElementKind::QuarterWave:
    case ElementKind::HalfWave:
      expect_keys(j, {"type", "angle_deg"}, where);
      read(j, "angle_deg", e.angle_deg, where);
      break;
    case ElementKind::Phase:
      expect_keys(j, {"type", "targets", "theta"}, where);
      read(j, "targets", e.targets, where);
      read(j, "theta", e.theta, where);
      break;
    case ElementKind::Loss:
      expect_keys(j, {"type", "targets", "eta"}, where);
      read(j, "targets", e.targets, where);
      read(j, "eta", e.eta, where);
      break;
    case ElementKind::Pbs:
      expect_keys(j, {"type", "extinction_rad"}, where);
      read(j, "extinction_rad", e.extinction, where);
      break;
  }
  return e;
}

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw ConfigError(what + " must be finite");
}

}  // namespace

std::vector<ElementSpec> ScenarioConfig::default_chain() {
  return {{.kind = ElementKind::QuarterWave, .angle_deg = 0.0},
          {.kind = ElementKind::HalfWave, .angle_deg = kChainHalfWaveAngleDeg},
          {.kind = ElementKind::Pbs}};
}

PumpPhase parse_mode(const std::string& s) {
  if (s == "deamp" || s == "deamplification") return PumpPhase::Deamplification;
  if (s == "amp" || s == "amplification") return PumpPhase::Amplification;
  throw ConfigError("mode must be 'deamp' or 'amp', got '" + s + "'");
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ConfigError("format must be 'csv' or 'json', got '" + s + "'");
}

std::string to_string(PumpPhase p) {
  return p == PumpPhase::Deamplification ? "deamp" : "amp";
}

std::string to_string(DetectionScheme d) {
  return d == DetectionScheme::Direct ? "direct" : "homodyne_baseline";
}

void ScenarioConfig::validate() const {
  try {
    source.validate();
  } catch (const ModelError& e) {
    throw ConfigError(e.what());
  }
  if (!std::isfinite(source.alpha) || !std::isfinite(source.r)) {
    throw ConfigError("source: alpha and r must be finite");
  }
  if (detection == DetectionScheme::Direct && !(source.alpha > 0.0)) {
    throw ConfigError("source.alpha must be > 0 for direct detection");
  }
  require_finite(noise.common_phase, "noise.common_phase");
  require_finite(noise.differential_phase, "noise.differential_phase");
  if (!(noise.common_phase_rms >= 0.0) || !(noise.differential_phase_rms >= 0.0) ||
      !std::isfinite(noise.common_phase_rms) || !std::isfinite(noise.differential_phase_rms)) {
    throw ConfigError("noise: phase rms must be finite and >= 0");
  }
  if (!(electronic_noise >= 0.0) || !std::isfinite(electronic_noise)) {
    throw ConfigError("electronic_noise must be finite and >= 0");
  }
  if (mc) {
    try {
      mc->validate();
    } catch (const ModelError& e) {
      throw ConfigError(e.what());
    }
  }

  // Dry run of the wiring: which labels exist after each element.
  std::set<std::string> live{kSourceModes.x, kSourceModes.y};
  bool split = false;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const auto& e = chain[k];
    const std::string where = "chain[" + std::to_string(k) + "]";
    switch (e.kind) {
      case ElementKind::QuarterWave:
      case ElementKind::HalfWave:
        require_finite(e.angle_deg, where + ".angle_deg");
        if (split) throw ConfigError(where + ": wave plate after the beam splitter");
        break;
      case ElementKind::Phase:
      case ElementKind::Loss:
        if (e.targets.empty()) throw ConfigError(where + ": targets must not be empty");
        for (const auto& t : e.targets) {
          if (!live.contains(t)) throw ConfigError(where + ": unknown mode '" + t + "'");
        }
        if (e.kind == ElementKind::Phase) require_finite(e.theta, where + ".theta");
        if (e.kind == ElementKind::Loss && !(e.eta >= 0.0 && e.eta <= 1.0)) {
          throw ConfigError(where + ".eta must lie in [0, 1]");
        }
        break;
      case ElementKind::Pbs: {
        require_finite(e.extinction, where + ".extinction_rad");
        if (split) throw ConfigError(where + ": only one beam splitter is supported");
        split = true;
        const PbsPorts ports;
        live = {ports.c, ports.d, ports.c_leak, ports.d_leak};
        break;
      }
    }
  }
  if (detection == DetectionScheme::Direct && !split) {
    throw ConfigError("chain: direct detection needs a 'pbs' element");
  }
}

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ScenarioConfig c;
  expect_keys(j,
              {"id", "source", "chain", "detection", "noise", "electronic_noise",
               "analysis_frequency", "mc", "output"},
              "config");
  read(j, "id", c.id, "config");
  if (j.contains("source")) {
    const auto& s = j["source"];
    expect_keys(s, {"alpha", "r", "mode", "excess_noise", "efficiency"}, "source");
    read(s, "alpha", c.source.alpha, "source");
    read(s, "r", c.source.r, "source");
    read(s, "excess_noise", c.source.excess_noise, "source");
    read(s, "efficiency", c.source.efficiency, "source");
    std::string mode = to_string(c.source.pump_phase);
    read(s, "mode", mode, "source");
    c.source.pump_phase = parse_mode(mode);
  }
  if (j.contains("chain")) {
    if (!j["chain"].is_array()) throw ConfigError("chain: expected a list");
    c.chain.clear();
    for (std::size_t k = 0; k < j["chain"].size(); ++k) {
      c.chain.push_back(parse_element(j["chain"][k], k));
    }
  }
  if (j.contains("detection")) {
    std::string d;
    read(j, "detection", d, "config");
    if (d == "direct") {
      c.detection = DetectionScheme::Direct;
    } else if (d == "homodyne_baseline") {
      c.detection = DetectionScheme::HomodyneBaseline;
    } else {
      throw ConfigError("detection must be 'direct' or 'homodyne_baseline'");
    }
  }
  if (j.contains("noise")) {
    const auto& n = j["noise"];
    expect_keys(n, {"common_phase", "differential_phase", "common_phase_rms",
                    "differential_phase_rms"},
                "noise");
    read(n, "common_phase", c.noise.common_phase, "noise");
    read(n, "differential_phase", c.noise.differential_phase, "noise");
    read(n, "common_phase_rms", c.noise.common_phase_rms, "noise");
    read(n, "differential_phase_rms", c.noise.differential_phase_rms, "noise");
  }
  read(j, "electronic_noise", c.electronic_noise, "config");
  read(j, "analysis_frequency", c.analysis_frequency, "config");
  if (j.contains("mc")) {
    const auto& m = j["mc"];
    expect_keys(m, {"samples", "seed", "batch"}, "mc");
    McConfig mc;
    read(m, "samples", mc.samples, "mc");
    read(m, "seed", mc.seed, "mc");
    read(m, "batch", mc.batch, "mc");
    c.mc = mc;
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    expect_keys(o, {"path", "format"}, "output");
    read(o, "path", c.output.path, "output");
    std::string f = "csv";
    read(o, "format", f, "output");
    c.output.format = parse_format(f);
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace cvepr::cli
