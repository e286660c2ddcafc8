// Copyright 2026 The fluxqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fluxqed/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fluxqed/error.hpp"
#include "json.hpp"

namespace fluxqed {

namespace {

using Setter = std::function<void(RunConfig&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Field {
  const char* section;
  const char* key;
  Setter set;
  Getter get;
};

double parse_number(const std::string& s) {
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  while (end && (*end == ' ' || *end == '\t')) ++end;
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    throw ConfigError("'" + s + "' is not a finite number");
  return v;
}

long parse_integer(const std::string& s) {
  const double v = parse_number(s);
  if (v != std::floor(v) || std::abs(v) > 1e15)
    throw ConfigError("'" + s + "' is not an integer");
  return static_cast<long>(v);
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("'" + s + "' is not a boolean");
}

std::string fmt(double x) { return format_double(x); }

// Number stored in `member`, written with a scale (e.g. MHz in the file,
// GHz in memory).
template <class Ref>
Field number(const char* sec, const char* key, Ref ref, double scale = 1.0) {
  return {sec, key,
          [ref, scale](RunConfig& c, const std::string& v) {
            ref(c) = parse_number(v) * scale;
          },
          [ref, scale](const RunConfig& c) {
            return fmt(ref(const_cast<RunConfig&>(c)) / scale);
          }};
}

template <class Ref>
Field integer(const char* sec, const char* key, Ref ref) {
  return {sec, key,
          [ref](RunConfig& c, const std::string& v) {
            ref(c) = static_cast<std::remove_reference_t<decltype(ref(c))>>(
                parse_integer(v));
          },
          [ref](const RunConfig& c) {
            return std::to_string(ref(const_cast<RunConfig&>(c)));
          }};
}

FluxBias& path_point(std::optional<FluxBias>& slot) {
  if (!slot) slot = FluxBias{};
  return *slot;
}

const std::vector<Field>& schema() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    f.push_back(number("circuit", "omega_C_GHz", [](RunConfig& c) -> double& { return c.circuit.omega_C; }));
    f.push_back(number("circuit", "omega_J_GHz", [](RunConfig& c) -> double& { return c.circuit.omega_J; }));
    f.push_back(number("circuit", "omega_L_GHz", [](RunConfig& c) -> double& { return c.circuit.omega_L; }));
    f.push_back(number("circuit", "omega_r_GHz", [](RunConfig& c) -> double& { return c.circuit.omega_r_target; }));
    f.push_back(number("circuit", "Z_ohm", [](RunConfig& c) -> double& { return c.circuit.Z; }));
    f.push_back(number("circuit", "chi", [](RunConfig& c) -> double& { return c.circuit.chi; }));
    f.push_back(number("circuit", "kappa_GHz", [](RunConfig& c) -> double& { return c.circuit.kappa; }));
    f.push_back(number("circuit", "gamma_GHz", [](RunConfig& c) -> double& { return c.circuit.gamma; }));

    f.push_back(integer("basis", "n_fock", [](RunConfig& c) -> int& { return c.basis.n_fock; }));
    f.push_back(integer("basis", "n_phi", [](RunConfig& c) -> int& { return c.basis.n_phi; }));
    f.push_back(number("basis", "phi_span", [](RunConfig& c) -> double& { return c.basis.phi_span; }));
    f.push_back(integer("basis", "n_qubit_levels", [](RunConfig& c) -> int& { return c.basis.n_qubit_levels; }));
    f.push_back(number("basis", "conv_tol_GHz", [](RunConfig& c) -> double& { return c.basis.conv_tol; }));

    f.push_back(number("flux", "phi_x", [](RunConfig& c) -> double& { return c.flux.phi_x; }));
    f.push_back(number("flux", "phi_x_prime", [](RunConfig& c) -> double& { return c.flux.phi_x_prime; }));

    f.push_back(number("sweep", "phi_x_min", [](RunConfig& c) -> double& { return c.sweep.grid.phi_x_min; }));
    f.push_back(number("sweep", "phi_x_max", [](RunConfig& c) -> double& { return c.sweep.grid.phi_x_max; }));
    f.push_back(integer("sweep", "n_phi_x", [](RunConfig& c) -> int& { return c.sweep.grid.n_phi_x; }));
    f.push_back(number("sweep", "phi_x_prime_min", [](RunConfig& c) -> double& { return c.sweep.grid.phi_x_prime_min; }));
    f.push_back(number("sweep", "phi_x_prime_max", [](RunConfig& c) -> double& { return c.sweep.grid.phi_x_prime_max; }));
    f.push_back(integer("sweep", "n_phi_x_prime", [](RunConfig& c) -> int& { return c.sweep.grid.n_phi_x_prime; }));
    f.push_back(number("sweep", "on_delta_window_MHz", [](RunConfig& c) -> double& { return c.sweep.on_delta_window; }, 1e-3));

    // Path points: "auto" leaves the point to be detected from the sweep.
    auto path_field = [](const char* key, bool on, bool prime) {
      return Field{
          "path", key,
          [=](RunConfig& c, const std::string& v) {
            auto& slot = on ? c.path.on : c.path.off;
            if (v == "auto") {
              slot.reset();
              return;
            }
            FluxBias& b = path_point(slot);
            (prime ? b.phi_x_prime : b.phi_x) = parse_number(v);
          },
          [=](const RunConfig& c) -> std::string {
            const auto& slot = on ? c.path.on : c.path.off;
            if (!slot) return "auto";
            return fmt(prime ? slot->phi_x_prime : slot->phi_x);
          }};
    };
    f.push_back(path_field("phi_x_off", false, false));
    f.push_back(path_field("phi_x_prime_off", false, true));
    f.push_back(path_field("phi_x_on", true, false));
    f.push_back(path_field("phi_x_prime_on", true, true));
    f.push_back(integer("path", "samples", [](RunConfig& c) -> int& { return c.path.samples; }));

    f.push_back(number("protocol", "kappa_GHz", [](RunConfig& c) -> double& { return c.protocol.loss.kappa; }));
    f.push_back(number("protocol", "gamma_GHz", [](RunConfig& c) -> double& { return c.protocol.loss.gamma; }));
    f.push_back(number("protocol", "epsilon_sq", [](RunConfig& c) -> double& { return c.protocol.loss.epsilon_sq; }));
    f.push_back(number("protocol", "delta_i_MHz", [](RunConfig& c) -> double& { return c.protocol.loss.delta_i; }, 1e-3));
    f.push_back(Field{
        "protocol", "delta_m_MHz",
        [](RunConfig& c, const std::string& v) {
          if (v == "auto") {
            c.protocol.auto_delta_m = true;
            return;
          }
          c.protocol.auto_delta_m = false;
          c.protocol.loss.delta_m = parse_number(v) * 1e-3;
        },
        [](const RunConfig& c) -> std::string {
          return c.protocol.auto_delta_m ? "auto"
                                         : fmt(c.protocol.loss.delta_m * 1e3);
        }});
    f.push_back(integer("protocol", "n_phase", [](RunConfig& c) -> int& { return c.protocol.loss.n_phase; }));
    f.push_back(number("protocol", "on_off_min", [](RunConfig& c) -> double& { return c.protocol.on_off_min; }));
    f.push_back(number("protocol", "scan_delta_m_min_MHz", [](RunConfig& c) -> double& { return c.protocol.scan_lo; }, 1e-3));
    f.push_back(number("protocol", "scan_delta_m_max_MHz", [](RunConfig& c) -> double& { return c.protocol.scan_hi; }, 1e-3));
    f.push_back(integer("protocol", "scan_points", [](RunConfig& c) -> int& { return c.protocol.scan_points; }));
    f.push_back(integer("protocol", "schedule_samples", [](RunConfig& c) -> int& { return c.protocol.schedule_samples; }));

    f.push_back(Field{"gate", "use_protocol",
                      [](RunConfig& c, const std::string& v) {
                        c.gate_use_protocol = parse_bool(v);
                      },
                      [](const RunConfig& c) -> std::string {
                        return c.gate_use_protocol ? "true" : "false";
                      }});

    f.push_back(integer("run", "seed", [](RunConfig& c) -> std::uint64_t& { return c.seed; }));
    f.push_back(integer("run", "workers", [](RunConfig& c) -> unsigned& { return c.workers; }));
    return f;
  }();
  return fields;
}

bool same_sign(double a, double b) { return (a < 0.0) == (b < 0.0); }

}  // namespace

// ---------------------------------------------------------------------------

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RawConfig parse_raw_config(const std::string& text, bool json) {
  RawConfig raw;
  if (json) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    const nlohmann::json& cfg = doc.contains("config") ? doc["config"] : doc;
    if (!cfg.is_object()) throw ConfigError("JSON config must be an object");
    for (const auto& [sec, body] : cfg.items()) {
      if (!body.is_object())
        throw ConfigError("config section '" + sec + "' must be an object");
      for (const auto& [key, v] : body.items()) {
        if (v.is_string())
          raw[sec][key] = v.get<std::string>();
        else if (v.is_boolean())
          raw[sec][key] = v.get<bool>() ? "true" : "false";
        else if (v.is_number_integer())
          raw[sec][key] = std::to_string(v.get<long long>());
        else if (v.is_number())
          raw[sec][key] = format_double(v.get<double>());
        else
          throw ConfigError("config value " + sec + "." + key +
                            " must be a scalar");
      }
    }
    return raw;
  }
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  for (const auto& [sec, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + sec + "' appears outside any [section]");
    for (const auto& [key, v] : body) raw[sec][key] = v.data();
  }
  return raw;
}

RawConfig read_raw_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool json = first != std::string::npos && text[first] == '{';
  return parse_raw_config(text, json);
}

RunConfig build_config(const RawConfig& raw) {
  RunConfig c;
  std::vector<std::string> problems;

  std::map<std::string, std::map<std::string, const Field*>> index;
  for (const auto& f : schema()) index[f.section][f.key] = &f;

  bool kappa_set = false, gamma_set = false;
  for (const auto& [sec, body] : raw) {
    const auto sit = index.find(sec);
    if (sit == index.end()) {
      problems.push_back("unknown section [" + sec + "]");
      continue;
    }
    for (const auto& [key, value] : body) {
      const auto kit = sit->second.find(key);
      if (kit == sit->second.end()) {
        problems.push_back("unknown key " + sec + "." + key);
        continue;
      }
      try {
        kit->second->set(c, value);
      } catch (const ConfigError& e) {
        problems.push_back(sec + "." + key + ": " + e.what());
      }
      if (sec == "protocol" && key == "kappa_GHz") kappa_set = true;
      if (sec == "protocol" && key == "gamma_GHz") gamma_set = true;
    }
  }

  // The loss model reads its rates from [circuit] unless [protocol] repeats
  // them, in which case they must agree.
  auto circuit_has = [&](const char* key) {
    const auto it = raw.find("circuit");
    return it != raw.end() && it->second.count(key);
  };
  if (kappa_set && circuit_has("kappa_GHz") &&
      c.protocol.loss.kappa != c.circuit.kappa)
    problems.push_back("protocol.kappa_GHz disagrees with circuit.kappa_GHz");
  if (gamma_set && circuit_has("gamma_GHz") &&
      c.protocol.loss.gamma != c.circuit.gamma)
    problems.push_back("protocol.gamma_GHz disagrees with circuit.gamma_GHz");
  if (!kappa_set) c.protocol.loss.kappa = c.circuit.kappa;
  if (!gamma_set) c.protocol.loss.gamma = c.circuit.gamma;
  if (kappa_set && !circuit_has("kappa_GHz")) c.circuit.kappa = c.protocol.loss.kappa;
  if (gamma_set && !circuit_has("gamma_GHz")) c.circuit.gamma = c.protocol.loss.gamma;

  for (const auto& v : c.circuit.violations()) problems.push_back("circuit: " + v);
  for (const auto& v : c.basis.violations()) problems.push_back("basis: " + v);

  LossParams lp = c.protocol.loss;
  if (c.protocol.auto_delta_m) lp.delta_m = 0.5 * lp.delta_i;
  for (const auto& v : lp.violations()) problems.push_back("protocol: " + v);
  if (!(c.protocol.on_off_min >= 1.0))
    problems.push_back("protocol: on_off_min must be >= 1");
  const auto& pr = c.protocol;
  if (!(pr.scan_lo < pr.scan_hi))
    problems.push_back("protocol: scan_delta_m_min_MHz must be below the max");
  if (!same_sign(pr.scan_lo, pr.loss.delta_i) ||
      !same_sign(pr.scan_hi, pr.loss.delta_i) || pr.scan_lo == 0.0 ||
      pr.scan_hi == 0.0)
    problems.push_back("protocol: the scan range must share the sign of delta_i");
  if (std::max(std::abs(pr.scan_lo), std::abs(pr.scan_hi)) >=
      std::abs(pr.loss.delta_i))
    problems.push_back("protocol: the scan range must lie inside |delta_i|");
  if (pr.scan_points < 2) problems.push_back("protocol: scan_points must be >= 2");
  if (pr.schedule_samples < 2)
    problems.push_back("protocol: schedule_samples must be >= 2");

  const auto& g = c.sweep.grid;
  if (g.n_phi_x < 1 || g.n_phi_x_prime < 1)
    problems.push_back("sweep: grid sizes must be >= 1");
  if (g.phi_x_min > g.phi_x_max || g.phi_x_prime_min > g.phi_x_prime_max)
    problems.push_back("sweep: min must not exceed max");
  if (!(c.sweep.on_delta_window > 0.0))
    problems.push_back("sweep: on_delta_window_MHz must be > 0");
  if (c.path.samples < 2) problems.push_back("path: samples must be >= 2");
  const auto path_it = raw.find("path");
  for (const char* side : {"off", "on"}) {
    int given = 0;
    for (const char* k : {"phi_x_", "phi_x_prime_"}) {
      const std::string key = std::string(k) + side;
      if (path_it != raw.end() && path_it->second.count(key) &&
          path_it->second.at(key) != "auto")
        ++given;
    }
    if (given == 1)
      problems.push_back(std::string("path: give both fluxes of the ") + side +
                         " point or neither");
  }

  if (!problems.empty()) {
    std::ostringstream os;
    os << problems.size() << " configuration problem"
       << (problems.size() == 1 ? "" : "s") << ":";
    for (const auto& p : problems) os << "\n  - " << p;
    throw ConfigError(os.str());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  return build_config(read_raw_config(path));
}

std::map<std::string, std::map<std::string, std::string>> RunConfig::sections()
    const {
  std::map<std::string, std::map<std::string, std::string>> out;
  for (const auto& f : schema()) out[f.section][f.key] = f.get(*this);
  return out;
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  for (const auto& f : schema())
    os << f.section << '.' << f.key << " = " << f.get(*this) << '\n';
  return os.str();
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical()); }

}  // namespace fluxqed
