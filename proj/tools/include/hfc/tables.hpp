#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hfc/experiments.hpp"
#include "hfc/metrics.hpp"

namespace hfc::tables {

// Every table starts with one `# hfc-table v1 kind=<kind>` line followed by a
// comma-separated header whose column names match the row field names.
// Numbers use the shortest round-trip decimal form, so equal values always
// produce equal bytes.

inline constexpr int kSchemaVersion = 1;

std::string schema_line(std::string_view kind);

void write_sweep(std::ostream& out, std::span<const SweepRow> rows);
void write_differential(std::ostream& out, std::span<const DifferentialRow> rows);
void write_qscan(std::ostream& out, std::span<const QScanResult> scans);
void write_qscan_summary(std::ostream& out, std::span<const QScanResult> scans);
void write_convergence(std::ostream& out, int n, const ExperimentConfig& base,
                       std::span<const ConvergencePoint> points, bool with_header);
void write_geometry(std::ostream& out, const ExperimentConfig& base,
                    std::span<const TrailPoint> points, double display_q);
/// Pair matrix as long-form rows `a_i,a_j,probability` with one-based actions.
void write_pair(std::ostream& out, int i, int j, const PairMatrix& pair);

struct OracleCheck {
  std::string check;
  std::string parameters;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};
void write_oracle_checks(std::ostream& out, std::span<const OracleCheck> checks);

/// Splits a table into rows of fields; skips the schema line. Used by tests
/// and by anything reading exported tables back.
std::vector<std::vector<std::string>> read_rows(std::istream& in);

}  // namespace hfc::tables
