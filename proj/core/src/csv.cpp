#include "specbgk/csv.hpp"

#include <cstdio>
#include <fstream>

#include "specbgk/error.hpp"

namespace specbgk {

namespace {

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot open " + path.string() + " for writing");
  return out;
}

void close(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw Error(ErrorKind::invalid_argument, "write to " + path.string() + " failed");
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_norms_csv(const std::filesystem::path& path, const DiagnosticsSeries& series) {
  auto out = open(path);
  out << "t,norm\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    out << format_double(series.times[i]) << ',' << format_double(series.norm[i]) << '\n';
  close(out, path);
}

void write_conserved_csv(const std::filesystem::path& path, const DiagnosticsSeries& series) {
  auto out = open(path);
  out << "t,mass,energy_plus,rx,m0,mx,energy_minus\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& c = series.conserved[i];
    out << format_double(series.times[i]) << ',' << format_double(c.mass) << ',' << format_double(c.energy_plus)
        << ',' << opt(c.rx) << ',' << opt(c.m0) << ',' << opt(c.mx) << ',' << opt(c.energy_minus) << '\n';
  }
  close(out, path);
}

void write_snapshot_csv(const std::filesystem::path& path, std::span<const double> xs, std::span<const double> vs,
                        const Eigen::MatrixXd& grid) {
  auto out = open(path);
  out << "x,v,h\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j)
      out << format_double(xs[i]) << ',' << format_double(vs[j]) << ','
          << format_double(grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
  close(out, path);
}

void write_recurrence_csv(const std::filesystem::path& path, const RecurrenceTable& t) {
  auto out = open(path);
  out << "n,a_n\n";
  for (int n = 0; n <= t.n_max(); ++n) out << n << ',' << format_double(t.a(n)) << '\n';
  close(out, path);
}

void write_kn_csv(const std::filesystem::path& path, std::span<const KNReport> reports) {
  auto out = open(path);
  out << "N,M_big,kn0,kn1,kn2,kn3,converged\n";
  for (const auto& r : reports) {
    out << r.N << ',' << r.M_big;
    for (double v : r.kn) out << ',' << format_double(v);
    out << ',' << (r.converged ? "true" : "false") << '\n';
  }
  close(out, path);
}

}  // namespace specbgk
