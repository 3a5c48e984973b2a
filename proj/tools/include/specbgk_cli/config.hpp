#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "specbgk/orthopoly.hpp"
#include "specbgk/potential.hpp"
#include "specbgk/scheme.hpp"

namespace specbgk::cli {

/// Bad configuration; `field` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Output { norms, conserved, snapshots, recurrence, kn };

struct GridAxis {
  double lo = -4.0;
  double hi = 4.0;
  int count = 201;
};

struct RunConfig {
  // either a named potential ("harmonic", "double_well") or raw even coefficients
  std::string potential_name;
  std::vector<double> potential;
  int K = 20;
  int N = 30;
  double dt = 1e-2;
  double T = 10.0;
  std::string initial_name;  // empty when `initial` is given explicitly
  std::vector<InitialCoefficient> initial;
  bool purge = false;
  std::set<Output> outputs{Output::norms, Output::conserved};
  std::vector<double> snapshot_times;
  GridAxis snapshot_x;
  GridAxis snapshot_v;
  std::optional<std::pair<double, double>> fit_window;  // default [0.2 T, T]
  double quad_tol = 1e-12;
  RecurrenceMethod recurrence_method = RecurrenceMethod::stieltjes;
  int recurrence_n = 0;  // 0: N + deg
  std::vector<int> kn_N{4, 8, 16, 32};
  std::string sweep;  // "param=v1,v2,..."

  int steps() const;
  std::pair<double, double> window() const;
  bool needs_stepping() const;
};

/// Flat YAML mapping; unknown keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string dump_config(const RunConfig& c);

const std::vector<std::string>& preset_names();
RunConfig preset(const std::string& name);

/// Throws ConfigError; cheap, performs no numerical work.
void validate(const RunConfig& c);

struct SweepSpec {
  std::string param;
  std::vector<std::string> values;
};

SweepSpec parse_sweep(const std::string& text);
/// Config with `param` replaced by `value`, re-validated.
RunConfig apply_sweep(const RunConfig& base, const std::string& param, const std::string& value);

/// Raw potential as configured (named potentials expand to their coefficients).
RawPotential raw_potential(const RunConfig& c);
/// Normalized potential; "harmonic" uses the closed form.
NormalizedPotential make_potential(const RunConfig& c);
/// Coefficients of the named initial data; needs the functional basis for density_energy_mix.
std::vector<InitialCoefficient> initial_coefficients(const RunConfig& c, const FunctionalBasis& basis);

}  // namespace specbgk::cli
