#include "hfc/tables.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "hfc/config.hpp"

namespace hfc::tables {
namespace {

std::string num(double x) { return format_double(x); }

class RowWriter {
 public:
  explicit RowWriter(std::ostream& out) : out_(out) {}
  ~RowWriter() { out_ << '\n'; }

  template <typename T>
  RowWriter& operator<<(const T& field) {
    if (!first_) out_ << ',';
    first_ = false;
    if constexpr (std::is_floating_point_v<T>) {
      out_ << num(field);
    } else {
      out_ << field;
    }
    return *this;
  }

 private:
  std::ostream& out_;
  bool first_ = true;
};

constexpr const char* kConfigColumns = "n,m,k,p,eps,v,lambda,q,strategy";

void config_fields(RowWriter& row, const ExperimentConfig& c) {
  row << c.n << c.m << c.k << c.p << c.eps << c.v << c.lambda << c.q << to_string(c.strategy);
}

}  // namespace

std::string schema_line(std::string_view kind) {
  return "# hfc-table v" + std::to_string(kSchemaVersion) + " kind=" + std::string(kind);
}

void write_sweep(std::ostream& out, std::span<const SweepRow> rows) {
  out << schema_line("sweep") << '\n';
  out << kConfigColumns
      << ",mode,seed_root,apmi_mean,apmi_std,tc_mean,tc_std,coin_mean,coin_std,"
         "global_collision_mean,global_collision_std,product_coin_mean,product_coin_std,"
         "marginal,replicates,rounds,std_defined\n";
  for (const auto& r : rows) {
    RowWriter row(out);
    config_fields(row, r.config);
    row << to_string(r.config.mode) << r.config.seed_root;
    row << r.apmi.mean << r.apmi.std << r.tc.mean << r.tc.std << r.coin.mean << r.coin.std
        << r.global_collision.mean << r.global_collision.std << r.product_coin.mean
        << r.product_coin.std;
    std::string marginal;
    for (std::size_t t = 0; t < r.marginal.size(); ++t) {
      if (t) marginal += ';';
      marginal += num(r.marginal[t]);
    }
    row << marginal << r.replicates << r.rounds << (r.std_defined ? 1 : 0);
  }
}

void write_differential(std::ostream& out, std::span<const DifferentialRow> rows) {
  out << schema_line("differential") << '\n';
  out << "n,p,lambda,delta_apmi,delta_tc,best_classical_value_apmi,best_q_apmi,"
         "best_classical_value_tc,best_q_tc,quantum_apmi,quantum_tc,independent_apmi,"
         "independent_tc\n";
  for (const auto& r : rows) {
    RowWriter row(out);
    row << r.n << r.p << r.lambda << r.delta_apmi << r.delta_tc << r.best_classical_value_apmi
        << r.best_q_apmi << r.best_classical_value_tc << r.best_q_tc << r.quantum_apmi
        << r.quantum_tc << r.independent_apmi << r.independent_tc;
  }
}

void write_qscan(std::ostream& out, std::span<const QScanResult> scans) {
  out << schema_line("qscan") << '\n';
  out << "n,p,lambda,q,tc_mean,tc_std\n";
  for (const auto& scan : scans) {
    for (const auto& point : scan.points) {
      RowWriter row(out);
      row << scan.n << scan.p << scan.lambda << point.q << point.tc.mean << point.tc.std;
    }
  }
}

void write_qscan_summary(std::ostream& out, std::span<const QScanResult> scans) {
  out << schema_line("qscan_summary") << '\n';
  out << "n,p,lambda,quantum_tc_mean,quantum_tc_std,independent_tc_mean,independent_tc_std,"
         "crossover_q\n";
  for (const auto& scan : scans) {
    RowWriter row(out);
    row << scan.n << scan.p << scan.lambda << scan.quantum_tc.mean << scan.quantum_tc.std
        << scan.independent_tc.mean << scan.independent_tc.std;
    row << (scan.crossover ? num(*scan.crossover) : std::string());
  }
}

void write_convergence(std::ostream& out, int n, const ExperimentConfig& base,
                       std::span<const ConvergencePoint> points, bool with_header) {
  if (with_header) {
    out << schema_line("convergence") << '\n';
    out << "n,p,lambda,rounds,delta_tc_mean,delta_tc_std,quantum_tc_mean,quantum_tc_std,"
           "best_classical_tc_mean,best_classical_tc_std\n";
  }
  for (const auto& point : points) {
    RowWriter row(out);
    row << n << base.p << base.lambda << point.rounds << point.delta_tc.mean
        << point.delta_tc.std << point.quantum_tc.mean << point.quantum_tc.std
        << point.best_classical_tc.mean << point.best_classical_tc.std;
  }
}

void write_geometry(std::ostream& out, const ExperimentConfig& base,
                    std::span<const TrailPoint> points, double display_q) {
  out << schema_line("geometry") << '\n';
  out << "strategy,n,p,lambda,q,coin_mean,coin_std,apmi_mean,apmi_std,product_coin\n";
  for (const auto& point : points) {
    RowWriter row(out);
    row << to_string(point.strategy) << base.n << point.p << base.lambda << display_q
        << point.coin.mean << point.coin.std << point.apmi.mean << point.apmi.std
        << point.product_coin;
  }
}

void write_pair(std::ostream& out, int i, int j, const PairMatrix& pair) {
  out << schema_line("pair") << " i=" << i + 1 << " j=" << j + 1 << '\n';
  out << "a_i,a_j,probability\n";
  for (int r = 0; r < pair.m; ++r) {
    for (int c = 0; c < pair.m; ++c) {
      RowWriter row(out);
      row << r + 1 << c + 1 << pair.at(r, c);
    }
  }
}

void write_oracle_checks(std::ostream& out, std::span<const OracleCheck> checks) {
  out << schema_line("oracle_check") << '\n';
  out << "check,parameters,value,tolerance,pass\n";
  for (const auto& c : checks) {
    RowWriter row(out);
    row << c.check << c.parameters << c.value << c.tolerance << (c.pass ? 1 : 0);
  }
}

std::vector<std::vector<std::string>> read_rows(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace hfc::tables
