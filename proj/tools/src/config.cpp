#include "specbgk_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace specbgk::cli {

namespace {

const std::map<std::string, Output>& output_names() {
  static const std::map<std::string, Output> m{{"norms", Output::norms},
                                               {"conserved", Output::conserved},
                                               {"snapshots", Output::snapshots},
                                               {"recurrence", Output::recurrence},
                                               {"kn", Output::kn}};
  return m;
}

std::string output_name(Output o) {
  for (const auto& [k, v] : output_names())
    if (v == o) return k;
  return "?";
}

const std::vector<std::string>& initial_names() {
  static const std::vector<std::string> v{"momentum_energy", "energy_dipole", "density_energy_mix"};
  return v;
}

template <class T>
T scalar(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(key, "expected a " + std::string(std::is_same_v<T, bool>     ? "boolean"
                                                       : std::is_integral_v<T>     ? "integer"
                                                       : std::is_floating_point_v<T> ? "number"
                                                                                      : "string"));
  }
}

template <class T>
std::vector<T> list(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) throw ConfigError(key, "expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(scalar<T>(n[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

GridAxis axis(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence() || n.size() != 3) throw ConfigError(key, "expected [lo, hi, count]");
  return {scalar<double>(n[0], key), scalar<double>(n[1], key), scalar<int>(n[2], key)};
}

bool aligned(double t, double dt) {
  const double q = t / dt;
  return std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, std::abs(q));
}

}  // namespace

int RunConfig::steps() const { return static_cast<int>(std::llround(T / dt)); }

std::pair<double, double> RunConfig::window() const { return fit_window.value_or(std::pair{0.2 * T, T}); }

bool RunConfig::needs_stepping() const {
  return outputs.contains(Output::norms) || outputs.contains(Output::conserved) ||
         outputs.contains(Output::snapshots);
}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("config", std::string("parse error: ") + e.what());
  }
  RunConfig c;
  if (root.IsNull()) return c;
  if (!root.IsMap()) throw ConfigError("config", "expected a key: value mapping");

  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (key == "potential") {
      if (v.IsScalar()) {
        c.potential_name = v.as<std::string>();
        c.potential.clear();
      } else {
        c.potential = list<double>(v, key);
        c.potential_name.clear();
      }
    } else if (key == "K") {
      c.K = scalar<int>(v, key);
    } else if (key == "N") {
      c.N = scalar<int>(v, key);
    } else if (key == "dt") {
      c.dt = scalar<double>(v, key);
    } else if (key == "T") {
      c.T = scalar<double>(v, key);
    } else if (key == "initial") {
      if (v.IsScalar()) {
        c.initial_name = v.as<std::string>();
        c.initial.clear();
      } else {
        if (!v.IsSequence()) throw ConfigError(key, "expected a name or a list of [k, n, value]");
        c.initial.clear();
        c.initial_name.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
          const auto field = key + "[" + std::to_string(i) + "]";
          if (!v[i].IsSequence() || v[i].size() != 3) throw ConfigError(field, "expected [k, n, value]");
          c.initial.push_back({scalar<int>(v[i][0], field), scalar<int>(v[i][1], field), scalar<double>(v[i][2], field)});
        }
      }
    } else if (key == "purge") {
      c.purge = scalar<bool>(v, key);
    } else if (key == "outputs") {
      c.outputs.clear();
      for (const auto& name : list<std::string>(v, key)) {
        auto it = output_names().find(name);
        if (it == output_names().end()) throw ConfigError(key, "unknown output '" + name + "'");
        c.outputs.insert(it->second);
      }
    } else if (key == "snapshot_times") {
      c.snapshot_times = list<double>(v, key);
    } else if (key == "snapshot_x") {
      c.snapshot_x = axis(v, key);
    } else if (key == "snapshot_v") {
      c.snapshot_v = axis(v, key);
    } else if (key == "fit_window") {
      const auto w = list<double>(v, key);
      if (w.size() != 2) throw ConfigError(key, "expected [t_start, t_end]");
      c.fit_window = std::pair{w[0], w[1]};
    } else if (key == "quad_tol") {
      c.quad_tol = scalar<double>(v, key);
    } else if (key == "recurrence_method") {
      const auto m = scalar<std::string>(v, key);
      if (m == "stieltjes")
        c.recurrence_method = RecurrenceMethod::stieltjes;
      else if (m == "chebyshev")
        c.recurrence_method = RecurrenceMethod::chebyshev_extended;
      else
        throw ConfigError(key, "expected stieltjes or chebyshev");
    } else if (key == "recurrence_n") {
      c.recurrence_n = scalar<int>(v, key);
    } else if (key == "kn_N") {
      c.kn_N = list<int>(v, key);
    } else if (key == "sweep") {
      c.sweep = scalar<std::string>(v, key);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "potential";
  if (!c.potential_name.empty())
    e << YAML::Value << c.potential_name;
  else
    e << YAML::Value << YAML::Flow << c.potential;
  e << YAML::Key << "K" << YAML::Value << c.K;
  e << YAML::Key << "N" << YAML::Value << c.N;
  e << YAML::Key << "dt" << YAML::Value << c.dt;
  e << YAML::Key << "T" << YAML::Value << c.T;
  e << YAML::Key << "initial";
  if (!c.initial_name.empty()) {
    e << YAML::Value << c.initial_name;
  } else {
    e << YAML::Value << YAML::BeginSeq;
    for (const auto& ic : c.initial) e << YAML::Flow << YAML::BeginSeq << ic.k << ic.n << ic.value << YAML::EndSeq;
    e << YAML::EndSeq;
  }
  e << YAML::Key << "purge" << YAML::Value << c.purge;
  e << YAML::Key << "outputs" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (auto o : c.outputs) e << output_name(o);
  e << YAML::EndSeq;
  e << YAML::Key << "snapshot_times" << YAML::Value << YAML::Flow << c.snapshot_times;
  for (const auto& [name, ax] : {std::pair{"snapshot_x", c.snapshot_x}, std::pair{"snapshot_v", c.snapshot_v}})
    e << YAML::Key << name << YAML::Value << YAML::Flow << YAML::BeginSeq << ax.lo << ax.hi << ax.count << YAML::EndSeq;
  const auto w = c.window();
  e << YAML::Key << "fit_window" << YAML::Value << YAML::Flow << YAML::BeginSeq << w.first << w.second
    << YAML::EndSeq;
  e << YAML::Key << "quad_tol" << YAML::Value << c.quad_tol;
  e << YAML::Key << "recurrence_method" << YAML::Value
    << (c.recurrence_method == RecurrenceMethod::stieltjes ? "stieltjes" : "chebyshev");
  e << YAML::Key << "recurrence_n" << YAML::Value << c.recurrence_n;
  e << YAML::Key << "kn_N" << YAML::Value << YAML::Flow << c.kn_N;
  if (!c.sweep.empty()) e << YAML::Key << "sweep" << YAML::Value << c.sweep;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> v{"harmonic_fig1", "doublewell_fig3", "doublewell_fig4", "harmonic_kn",
                                          "doublewell_kn"};
  return v;
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  if (name == "harmonic_fig1") {
    c.potential_name = "harmonic";
    c.K = 20;
    c.N = 30;
    c.T = 40.0;
    c.initial_name = "momentum_energy";
    c.sweep = "N=5,30";
  } else if (name == "doublewell_fig3") {
    c.potential_name = "double_well";
    c.K = 20;
    c.N = 30;
    c.T = 200.0;
    c.initial_name = "energy_dipole";
    c.sweep = "N=5,30";
  } else if (name == "doublewell_fig4") {
    c.potential_name = "double_well";
    c.K = 20;
    c.N = 30;
    c.T = 8.0;
    c.initial_name = "density_energy_mix";
    c.outputs = {Output::norms, Output::conserved, Output::snapshots};
    c.snapshot_times = {0.0, 2.0, 4.0, 6.0, 8.0};
  } else if (name == "harmonic_kn") {
    c.potential_name = "harmonic";
    c.N = 2;
    c.initial_name = "momentum_energy";
    c.outputs = {Output::kn, Output::recurrence};
    c.kn_N = {0, 1, 2, 4, 8, 16, 32};
  } else if (name == "doublewell_kn") {
    c.potential_name = "double_well";
    c.N = 4;
    c.initial_name = "energy_dipole";
    c.outputs = {Output::kn, Output::recurrence};
    c.kn_N = {4, 8, 16, 32};
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("--preset", "unknown preset '" + name + "' (known: " + known + ")");
  }
  return c;
}

RawPotential raw_potential(const RunConfig& c) {
  if (c.potential_name == "harmonic") return RawPotential{{0.0, 0.5}};
  if (c.potential_name == "double_well") return RawPotential{{1.0, -2.0, 1.0}};
  if (!c.potential_name.empty())
    throw ConfigError("potential", "unknown potential '" + c.potential_name + "' (harmonic, double_well or a list)");
  return RawPotential{c.potential};
}

NormalizedPotential make_potential(const RunConfig& c) {
  if (c.potential_name == "harmonic") return harmonic_potential();
  return normalize_potential(raw_potential(c), c.quad_tol);
}

void validate(const RunConfig& c) {
  const RawPotential raw = raw_potential(c);
  try {
    specbgk::validate(raw);
  } catch (const std::exception& e) {
    throw ConfigError("potential", e.what());
  }
  const int deg = raw.degree();

  if (c.K < 0) throw ConfigError("K", "must be >= 0");
  if (c.N < deg) throw ConfigError("N", "must satisfy N >= deg(phi) = " + std::to_string(deg));
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ConfigError("dt", "must be a positive number");
  if (!(c.T > 0.0) || !std::isfinite(c.T)) throw ConfigError("T", "must be a positive number");
  if (!aligned(c.T, c.dt)) throw ConfigError("T", "T / dt must be an integer");
  if (c.T / c.dt > 1e7) throw ConfigError("T", "T / dt exceeds 1e7 steps");
  if (!(c.quad_tol > 0.0) || c.quad_tol > 1e-6) throw ConfigError("quad_tol", "must lie in (0, 1e-6]");
  if (c.recurrence_n < 0) throw ConfigError("recurrence_n", "must be >= 0");

  if (c.needs_stepping()) {
    if (c.initial_name.empty() && c.initial.empty()) throw ConfigError("initial", "no initial data given");
    if (!c.initial_name.empty()) {
      const auto& names = initial_names();
      if (std::find(names.begin(), names.end(), c.initial_name) == names.end())
        throw ConfigError("initial", "unknown initial data '" + c.initial_name +
                                         "' (momentum_energy, energy_dipole, density_energy_mix)");
      if (c.K < 2) throw ConfigError("K", "named initial data needs K >= 2");
    }
    for (std::size_t i = 0; i < c.initial.size(); ++i) {
      const auto& ic = c.initial[i];
      const auto field = "initial[" + std::to_string(i) + "]";
      if (ic.k < 0 || ic.k > c.K || ic.n < 0 || ic.n > c.N)
        throw ConfigError(field, "index outside 0 <= k <= K, 0 <= n <= N");
      if (!std::isfinite(ic.value)) throw ConfigError(field, "value must be finite");
    }
    if (c.purge && c.K < 2) throw ConfigError("purge", "needs K >= 2");
  }

  if (c.outputs.contains(Output::norms)) {
    const auto [t0, t1] = c.window();
    if (!(t0 >= 0.0 && t0 < t1 && t1 <= c.T * (1 + 1e-12)))
      throw ConfigError("fit_window", "needs 0 <= t_start < t_end <= T");
    if ((t1 - t0) / c.dt < 9.0) throw ConfigError("fit_window", "holds fewer than 10 time samples");
  }

  if (c.outputs.contains(Output::snapshots)) {
    if (c.snapshot_times.empty()) throw ConfigError("snapshot_times", "snapshots requested but no times given");
    for (double t : c.snapshot_times)
      if (!(t >= 0.0 && t <= c.T * (1 + 1e-12)) || !aligned(t, c.dt))
        throw ConfigError("snapshot_times", "time " + std::to_string(t) + " not a multiple of dt in [0, T]");
    for (const auto& [name, ax] : {std::pair{"snapshot_x", c.snapshot_x}, std::pair{"snapshot_v", c.snapshot_v}}) {
      if (!(std::isfinite(ax.lo) && std::isfinite(ax.hi) && ax.lo < ax.hi))
        throw ConfigError(name, "needs finite lo < hi");
      if (ax.count < 2 || ax.count > 10001) throw ConfigError(name, "count must lie in [2, 10001]");
    }
  }

  if (c.outputs.contains(Output::kn)) {
    for (int n : c.kn_N)
      if (n < 0) throw ConfigError("kn_N", "entries must be >= 0");
  }

  if (!c.sweep.empty()) {
    const auto s = parse_sweep(c.sweep);
    for (const auto& v : s.values) {
      RunConfig one = c;
      one.sweep.clear();
      try {
        validate(apply_sweep(one, s.param, v));
      } catch (const ConfigError& e) {
        throw ConfigError("sweep", s.param + "=" + v + " gives " + e.what());
      }
    }
  }
}

SweepSpec parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("sweep", "expected param=v1,v2,...");
  SweepSpec s;
  s.param = text.substr(0, eq);
  if (s.param != "K" && s.param != "N" && s.param != "dt" && s.param != "T")
    throw ConfigError("sweep", "parameter must be one of K, N, dt, T");
  std::stringstream ss(text.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) s.values.push_back(item);
  if (s.values.empty()) throw ConfigError("sweep", "empty value list");
  return s;
}

RunConfig apply_sweep(const RunConfig& base, const std::string& param, const std::string& value) {
  RunConfig c = base;
  c.sweep.clear();
  try {
    std::size_t used = 0;
    if (param == "K" || param == "N") {
      const int v = std::stoi(value, &used);
      (param == "K" ? c.K : c.N) = v;
    } else {
      const double v = std::stod(value, &used);
      (param == "dt" ? c.dt : c.T) = v;
    }
    if (used != value.size()) throw std::invalid_argument(value);
  } catch (const std::logic_error&) {
    throw ConfigError("sweep", "bad value '" + value + "' for " + param);
  }
  return c;
}

std::vector<InitialCoefficient> initial_coefficients(const RunConfig& c, const FunctionalBasis& basis) {
  if (c.initial_name.empty()) return c.initial;
  if (c.initial_name == "momentum_energy") return {{1, 2, 1.0}, {2, 1, 1.0}};
  if (c.initial_name == "energy_dipole") return {{2, 1, 1.0}};
  // C_0 = P_1 + P_2, C_2 = -sqrt2 <phi, P_2> + P_1
  return {{0, 1, 1.0}, {0, 2, 1.0}, {2, 0, -std::numbers::sqrt2 * basis.ip_phi[2]}, {2, 1, 1.0}};
}

}  // namespace specbgk::cli
