#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specbgk/conjecture_lab.hpp"
#include "specbgk/diagnostics.hpp"
#include "specbgk/orthopoly.hpp"

namespace specbgk {

/// 17 significant digits, shortest form that round-trips.
std::string format_double(double v);

void write_norms_csv(const std::filesystem::path& path, const DiagnosticsSeries& series);
/// Harmonic-only columns are left empty when absent.
void write_conserved_csv(const std::filesystem::path& path, const DiagnosticsSeries& series);
void write_snapshot_csv(const std::filesystem::path& path, std::span<const double> xs, std::span<const double> vs,
                        const Eigen::MatrixXd& grid);
void write_recurrence_csv(const std::filesystem::path& path, const RecurrenceTable& t);
void write_kn_csv(const std::filesystem::path& path, std::span<const KNReport> reports);

}  // namespace specbgk
