#include "specbgk_cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>

#include "specbgk/conjecture_lab.hpp"
#include "specbgk/csv.hpp"
#include "specbgk/scheme.hpp"

namespace specbgk::cli {

namespace {

std::string time_label(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

}  // namespace

RunSummary run(const RunConfig& c, const std::filesystem::path& out_dir) {
  validate(c);
  if (!c.sweep.empty()) throw ConfigError("sweep", "run() takes a single variant; use run_all");

  const NormalizedPotential p = make_potential(c);
  const int deg = p.degree();
  int n_max = c.N + deg;
  if (c.outputs.contains(Output::recurrence)) n_max = std::max(n_max, c.recurrence_n);
  if (c.outputs.contains(Output::kn)) n_max = std::max(n_max, required_recurrence(deg, c.kn_N));
  const RecurrenceTable table = build_recurrence(p, n_max, c.recurrence_method);

  RunSummary summary;
  std::filesystem::create_directories(out_dir);

  if (c.needs_stepping()) {
    const FunctionalBasis basis = functional_basis(table, c.N);
    const Generator gen = assemble_generator(build_deriv_couplings(table, c.N), c.K, c.N);
    const SteppingPlan plan(gen, c.dt);

    const auto ic = initial_coefficients(c, basis);
    SpectralState s = project_initial_condition(c.K, c.N, ic);
    if (c.purge) s = purge_equilibrium_components(s, basis);

    std::map<int, double> snap_steps;
    if (c.outputs.contains(Output::snapshots))
      for (double t : c.snapshot_times) snap_steps.emplace(static_cast<int>(std::llround(t / c.dt)), t);
    const auto xs = linspace(c.snapshot_x.lo, c.snapshot_x.hi, c.snapshot_x.count);
    const auto vs = linspace(c.snapshot_v.lo, c.snapshot_v.hi, c.snapshot_v.count);
    std::vector<std::pair<double, Eigen::MatrixXd>> snaps;

    DiagnosticsSeries series;
    const int steps = c.steps();
    const double n0 = l2_norm(s);
    for (int i = 0;; ++i) {
      series.record(s, basis);
      if (auto it = snap_steps.find(i); it != snap_steps.end()) snaps.emplace_back(it->second, snapshot(s, xs, vs, table));
      if (i == steps) break;
      s = step(plan, s);
      s.t = (i + 1) * c.dt;
    }
    summary.steps = steps;
    for (std::size_t i = 0; i < series.size(); ++i) {
      const double scale = n0 > 0.0 ? n0 : 1.0;
      summary.max_drift = std::max(summary.max_drift, series.conserved[i].max_abs() / scale);
      if (i > 0 && series.norm[i] > series.norm[i - 1]) summary.monotone = false;
    }

    if (c.outputs.contains(Output::norms)) {
      write_norms_csv(out_dir / "norms.csv", series);
      summary.files.push_back("norms.csv");
      const auto [t0, t1] = c.window();
      if (std::all_of(series.norm.begin(), series.norm.end(), [](double v) { return v > 0.0; }))
        summary.fit = fit_decay_rate(series, t0 - 1e-9 * c.dt, t1 + 1e-9 * c.dt);
    }
    if (c.outputs.contains(Output::conserved)) {
      write_conserved_csv(out_dir / "conserved.csv", series);
      summary.files.push_back("conserved.csv");
    }
    for (const auto& [t, grid] : snaps) {
      const auto name = "snapshot_" + time_label(t) + ".csv";
      write_snapshot_csv(out_dir / name, xs, vs, grid);
      summary.files.push_back(name);
    }
  }

  if (c.outputs.contains(Output::recurrence)) {
    const int n = c.recurrence_n > 0 ? c.recurrence_n : c.N + deg;
    const auto a = table.coefficients().subspan(0, static_cast<std::size_t>(n) + 1);
    write_recurrence_csv(out_dir / "recurrence.csv",
                         RecurrenceTable(std::vector<double>(a.begin(), a.end()), table.method(), p));
    summary.files.push_back("recurrence.csv");
  }
  if (c.outputs.contains(Output::kn)) {
    const auto reports = kn_sweep(table, c.kn_N);
    write_kn_csv(out_dir / "kn_table.csv", reports);
    summary.files.push_back("kn_table.csv");
  }
  return summary;
}

std::vector<RunSummary> run_all(const RunConfig& c, const std::filesystem::path& out_dir) {
  validate(c);
  if (c.sweep.empty()) return {run(c, out_dir)};

  const auto spec = parse_sweep(c.sweep);
  std::vector<std::future<RunSummary>> jobs;
  for (const auto& v : spec.values) {
    const auto label = spec.param + "_" + v;
    jobs.push_back(std::async(std::launch::async, [variant = apply_sweep(c, spec.param, v), dir = out_dir / label, label] {
      RunSummary s = run(variant, dir);
      s.label = label;
      return s;
    }));
  }
  std::vector<RunSummary> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

std::string summary_line(const RunSummary& s) {
  std::string line = s.label.empty() ? "run" : s.label;
  line += ": steps=" + std::to_string(s.steps);
  if (s.fit) {
    char buf[128];
    std::snprintf(buf, sizeof buf, " kappa=%.6g r2=%.6f", s.fit->rate, s.fit->r2);
    line += buf;
  }
  if (s.steps > 0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, " max_drift=%.3e monotone=%s", s.max_drift, s.monotone ? "yes" : "no");
    line += buf;
  }
  line += " files=" + std::to_string(s.files.size());
  return line;
}

}  // namespace specbgk::cli
