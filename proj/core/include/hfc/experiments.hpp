#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hfc/config.hpp"
#include "hfc/metrics.hpp"

namespace hfc {

// ---------------------------------------------------------------------------
// Round simulation

/// Final profile of one round: field, proposals, then per-agent intel, each
/// drawn from its own (stream, replicate, round) generator.
ProfileCode simulate_round(const ExperimentConfig& config, const SeedSource& seeds,
                           std::uint64_t replicate, std::uint64_t round);

/// Codes of rounds [0, rounds) in round order. A shorter run is a prefix of
/// a longer one.
std::vector<ProfileCode> simulate_codes(const ExperimentConfig& config, std::uint64_t replicate,
                                        std::int64_t rounds);

JointHistogram run_rounds(const ExperimentConfig& config, std::uint64_t replicate,
                          std::int64_t rounds);
JointHistogram run_rounds(const ExperimentConfig& config, std::uint64_t replicate);

// ---------------------------------------------------------------------------
// Aggregation

struct Summary {
  double mean = 0.0;
  double std = 0.0;  ///< sample standard deviation across replicates
};

struct SweepRow {
  ExperimentConfig config;
  Summary apmi;
  Summary tc;
  Summary coin;
  Summary global_collision;
  Summary product_coin;
  std::vector<double> marginal;  ///< replicate-mean common marginal
  int replicates = 0;
  std::int64_t rounds = 0;
  /// False when only one replicate was available; std is then 0 by convention.
  bool std_defined = false;
};

SweepRow aggregate(const ExperimentConfig& config, std::span<const MetricSet> per_replicate);
SweepRow aggregate(const ExperimentConfig& config, std::span<const JointHistogram> per_replicate);

/// True when `config` asks for exact mode and the joint fits the dense bound.
bool uses_exact(const ExperimentConfig& config);

/// Metrics for one configuration: the exact law in exact mode (zero
/// variance), otherwise run_rounds over all replicates. Exact mode falls back
/// to Monte Carlo when the joint is intractable.
SweepRow evaluate(const ExperimentConfig& config, int workers = 1);

// ---------------------------------------------------------------------------
// Best classical baseline

enum class Metric { apmi, tc, coin, global_collision, product_coin };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view text);
double metric_mean(const SweepRow& row, Metric metric);

/// 0, step, 2*step, ..., 1 (inclusive, rounded to the step).
std::vector<double> make_q_grid(double step);
/// lo, lo+step, ..., hi (inclusive within half a step).
std::vector<double> make_grid(double lo, double hi, double step);

struct ClassicalScan {
  SweepRow independent;
  std::vector<double> q_grid;
  std::vector<SweepRow> shared;  ///< one per q_grid entry
};

/// Classical strategies ignore lambda; they take p and the world parameters
/// from `base`.
ClassicalScan scan_classical(const ExperimentConfig& base, std::span<const double> q_grid,
                             int workers = 1);

struct BestClassical {
  double value = 0.0;
  /// Argmax over the grid; ties resolve to the smallest q. Reported as 0 when
  /// the independent baseline strictly beats every grid point (it equals the
  /// shared-latent law at q = 0).
  double best_q = 0.0;
};

BestClassical best_of(const ClassicalScan& scan, Metric metric);

/// max{metric(independent), max_q metric(shared_latent(q))} at base's
/// (n, p). Maximizes the metric; it is not a coincidence minimizer.
BestClassical best_classical(Metric metric, const ExperimentConfig& base,
                             std::span<const double> q_grid, int workers = 1);

// ---------------------------------------------------------------------------
// Studies

struct DifferentialRow {
  int n = 0;
  double p = 0.0;
  double lambda = 0.0;
  double delta_apmi = 0.0;
  double delta_tc = 0.0;
  double best_classical_value_apmi = 0.0;
  double best_q_apmi = 0.0;
  double best_classical_value_tc = 0.0;
  double best_q_tc = 0.0;
  double quantum_apmi = 0.0;
  double quantum_tc = 0.0;
  double independent_apmi = 0.0;
  double independent_tc = 0.0;
};

/// Rows in p-major, lambda-minor order. The classical scan is computed once
/// per p and reused for every lambda.
std::vector<DifferentialRow> differential_grid(const ExperimentConfig& base,
                                               std::span<const double> p_grid,
                                               std::span<const double> lambda_grid,
                                               std::span<const double> q_grid, int workers = 1);

struct QScanPoint {
  double q = 0.0;
  Summary tc;
};

struct QScanResult {
  int n = 0;
  double p = 0.0;
  double lambda = 0.0;
  std::vector<QScanPoint> points;
  Summary quantum_tc;
  Summary independent_tc;
  /// Smallest grid q with TC_shared(q) >= TC_quantum.
  std::optional<double> crossover;
};

/// Requires consecutive q_grid entries at most 0.02 apart.
QScanResult q_scan(const ExperimentConfig& base, std::span<const double> q_grid, int workers = 1);

/// One DifferentialRow per n at base's (p, lambda).
std::vector<DifferentialRow> scaling_study(const ExperimentConfig& base,
                                           std::span<const int> n_list,
                                           std::span<const double> q_grid, int workers = 1);

struct ConvergencePoint {
  std::int64_t rounds = 0;
  Summary delta_tc;
  Summary quantum_tc;
  Summary best_classical_tc;
};

/// Monte Carlo only. Every checkpoint is evaluated on the prefix of the same
/// round streams; per replicate the classical optimum is taken over the
/// independent strategy and every q on the grid.
std::vector<ConvergencePoint> convergence_study(const ExperimentConfig& base,
                                                std::span<const std::int64_t> checkpoints,
                                                std::span<const double> q_grid, int workers = 1);

struct TrailPoint {
  Strategy strategy = Strategy::independent;
  double p = 0.0;
  Summary coin;
  Summary apmi;
  double product_coin = 0.0;
};

inline constexpr double kDefaultDisplayQ = 0.7;

/// (Coin, APMI) per strategy along p_grid; strategies in the order
/// independent, shared_latent (at display_q), quantum (at base.lambda).
std::vector<TrailPoint> geometry_trail(const ExperimentConfig& base, std::span<const double> p_grid,
                                       double display_q = kDefaultDisplayQ, int workers = 1);

}  // namespace hfc
