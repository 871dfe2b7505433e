#include "hfc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hfc/exact.hpp"
#include "hfc/parallel.hpp"
#include "hfc/quantum.hpp"
#include "hfc/strategies.hpp"
#include "hfc/world.hpp"

namespace hfc {

ProfileCode simulate_round(const ExperimentConfig& c, const SeedSource& seeds,
                           std::uint64_t replicate, std::uint64_t round) {
  Rng field_rng(seeds.seed(Stream::field, replicate, round));
  const auto field = sample_field(field_rng, c.m, c.k);

  Rng strategy_rng(seeds.seed(Stream::strategy, replicate, round));
  ActionProfile proposals;
  switch (c.strategy) {
    case Strategy::independent:
      proposals = propose_independent(strategy_rng, c.n, c.m);
      break;
    case Strategy::shared_latent: {
      Rng latent_rng(seeds.seed(Stream::latent, replicate, round));
      proposals = propose_given_latent(strategy_rng, draw_latent(latent_rng, c.m), c.n, c.m, c.q);
      break;
    }
    case Strategy::quantum: {
      Rng quantum_rng(seeds.seed(Stream::quantum, replicate, round));
      proposals = propose_quantum(quantum_rng, strategy_rng, c.n, c.m, c.lambda);
      break;
    }
  }

  Rng intel_rng(seeds.seed(Stream::intel, replicate, round));
  const IntelParams intel{c.p, c.eps, c.v};
  ProfileCode code = 0;
  for (Action proposal : proposals) {
    const Action final_action = intel_perturb(proposal, field, intel, intel_rng);
    code = code * static_cast<ProfileCode>(c.m) + static_cast<ProfileCode>(final_action);
  }
  return code;
}

std::vector<ProfileCode> simulate_codes(const ExperimentConfig& config, std::uint64_t replicate,
                                        std::int64_t rounds) {
  ExperimentConfig checked = config;
  checked.rounds = std::max<std::int64_t>(1, rounds);
  validate(checked);
  if (rounds < 0) throw std::invalid_argument("rounds must be >= 0");
  const SeedSource seeds(config);
  std::vector<ProfileCode> codes(static_cast<std::size_t>(rounds));
  for (std::int64_t r = 0; r < rounds; ++r) {
    codes[static_cast<std::size_t>(r)] = simulate_round(config, seeds, replicate, static_cast<std::uint64_t>(r));
  }
  return codes;
}

JointHistogram run_rounds(const ExperimentConfig& config, std::uint64_t replicate,
                          std::int64_t rounds) {
  return JointHistogram::from_codes(config.n, config.m, simulate_codes(config, replicate, rounds));
}

JointHistogram run_rounds(const ExperimentConfig& config, std::uint64_t replicate) {
  return run_rounds(config, replicate, config.rounds);
}

namespace {

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

template <typename Field>
Summary summarize_field(std::span<const MetricSet> sets, Field field) {
  std::vector<double> values;
  values.reserve(sets.size());
  for (const auto& set : sets) values.push_back(set.*field);
  return summarize(values);
}

}  // namespace

SweepRow aggregate(const ExperimentConfig& config, std::span<const MetricSet> per_replicate) {
  if (per_replicate.empty()) throw std::invalid_argument("aggregate: need at least one replicate");
  SweepRow row;
  row.config = config;
  row.apmi = summarize_field(per_replicate, &MetricSet::apmi);
  row.tc = summarize_field(per_replicate, &MetricSet::tc);
  row.coin = summarize_field(per_replicate, &MetricSet::coin);
  row.global_collision = summarize_field(per_replicate, &MetricSet::global_collision);
  row.product_coin = summarize_field(per_replicate, &MetricSet::product_coin);
  row.marginal.assign(per_replicate.front().marginal.size(), 0.0);
  for (const auto& set : per_replicate) {
    for (std::size_t t = 0; t < row.marginal.size(); ++t) row.marginal[t] += set.marginal[t];
  }
  for (auto& x : row.marginal) x /= static_cast<double>(per_replicate.size());
  row.replicates = static_cast<int>(per_replicate.size());
  row.rounds = config.rounds;
  row.std_defined = per_replicate.size() > 1;
  return row;
}

SweepRow aggregate(const ExperimentConfig& config, std::span<const JointHistogram> per_replicate) {
  std::vector<MetricSet> sets;
  sets.reserve(per_replicate.size());
  for (const auto& hist : per_replicate) sets.push_back(compute_metrics(hist));
  auto row = aggregate(config, sets);
  if (!per_replicate.empty()) row.rounds = static_cast<std::int64_t>(per_replicate.front().total());
  return row;
}

bool uses_exact(const ExperimentConfig& config) {
  return config.mode == Mode::exact && exact_tractable(config.n, config.m);
}

SweepRow evaluate(const ExperimentConfig& config, int workers) {
  validate(config);
  if (uses_exact(config)) {
    const MetricSet exact = exact_metrics(config);
    SweepRow row = aggregate(config, std::span<const MetricSet>(&exact, 1));
    row.replicates = config.replicates;
    row.std_defined = true;
    return row;
  }
  std::vector<MetricSet> sets(static_cast<std::size_t>(config.replicates));
  parallel_for(sets.size(), workers, [&](std::size_t r) {
    sets[r] = compute_metrics(run_rounds(config, r));
  });
  return aggregate(config, sets);
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::apmi: return "apmi";
    case Metric::tc: return "tc";
    case Metric::coin: return "coin";
    case Metric::global_collision: return "global_collision";
    case Metric::product_coin: return "product_coin";
  }
  return "?";
}

Metric parse_metric(std::string_view text) {
  for (auto m : {Metric::apmi, Metric::tc, Metric::coin, Metric::global_collision, Metric::product_coin}) {
    if (to_string(m) == text) return m;
  }
  throw std::invalid_argument("unknown metric '" + std::string(text) + "'");
}

double metric_mean(const SweepRow& row, Metric metric) {
  switch (metric) {
    case Metric::apmi: return row.apmi.mean;
    case Metric::tc: return row.tc.mean;
    case Metric::coin: return row.coin.mean;
    case Metric::global_collision: return row.global_collision.mean;
    case Metric::product_coin: return row.product_coin.mean;
  }
  return 0.0;
}

namespace {

double snap(double x) { return std::round(x * 1e12) / 1e12; }

void check_q_grid(std::span<const double> q_grid) {
  if (q_grid.empty()) throw std::invalid_argument("q grid must be nonempty");
  for (double q : q_grid) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q grid values must lie in [0,1]");
  }
}

ExperimentConfig with_strategy(ExperimentConfig c, Strategy s) {
  c.strategy = s;
  return c;
}

}  // namespace

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("grid needs step > 0 and hi >= lo");
  std::vector<double> grid;
  for (std::int64_t i = 0;; ++i) {
    const double x = snap(lo + static_cast<double>(i) * step);
    if (x > hi + step / 2) break;
    grid.push_back(std::min(x, hi));
    if (x >= hi) break;
  }
  return grid;
}

std::vector<double> make_q_grid(double step) {
  auto grid = make_grid(0.0, 1.0, step);
  if (grid.back() < 1.0) grid.push_back(1.0);
  return grid;
}

ClassicalScan scan_classical(const ExperimentConfig& base, std::span<const double> q_grid,
                             int workers) {
  check_q_grid(q_grid);
  ClassicalScan scan;
  scan.q_grid.assign(q_grid.begin(), q_grid.end());
  scan.shared.resize(q_grid.size());
  // Slot 0 is the independent strategy, slot i+1 the i-th q.
  parallel_for(q_grid.size() + 1, workers, [&](std::size_t i) {
    if (i == 0) {
      scan.independent = evaluate(with_strategy(base, Strategy::independent));
      return;
    }
    auto c = with_strategy(base, Strategy::shared_latent);
    c.q = q_grid[i - 1];
    scan.shared[i - 1] = evaluate(c);
  });
  return scan;
}

BestClassical best_of(const ClassicalScan& scan, Metric metric) {
  BestClassical best{-std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t i = 0; i < scan.q_grid.size(); ++i) {
    const double value = metric_mean(scan.shared[i], metric);
    if (value > best.value) best = {value, scan.q_grid[i]};
  }
  const double independent = metric_mean(scan.independent, metric);
  if (independent > best.value) best = {independent, 0.0};
  return best;
}

BestClassical best_classical(Metric metric, const ExperimentConfig& base,
                             std::span<const double> q_grid, int workers) {
  return best_of(scan_classical(base, q_grid, workers), metric);
}

namespace {

DifferentialRow make_row(const ExperimentConfig& c, const SweepRow& quantum,
                         const ClassicalScan& scan) {
  DifferentialRow row;
  row.n = c.n;
  row.p = c.p;
  row.lambda = c.lambda;
  const auto best_apmi = best_of(scan, Metric::apmi);
  const auto best_tc = best_of(scan, Metric::tc);
  row.quantum_apmi = quantum.apmi.mean;
  row.quantum_tc = quantum.tc.mean;
  row.independent_apmi = scan.independent.apmi.mean;
  row.independent_tc = scan.independent.tc.mean;
  row.best_classical_value_apmi = best_apmi.value;
  row.best_q_apmi = best_apmi.best_q;
  row.best_classical_value_tc = best_tc.value;
  row.best_q_tc = best_tc.best_q;
  row.delta_apmi = row.quantum_apmi - row.best_classical_value_apmi;
  row.delta_tc = row.quantum_tc - row.best_classical_value_tc;
  return row;
}

}  // namespace

std::vector<DifferentialRow> differential_grid(const ExperimentConfig& base,
                                               std::span<const double> p_grid,
                                               std::span<const double> lambda_grid,
                                               std::span<const double> q_grid, int workers) {
  if (p_grid.empty() || lambda_grid.empty()) throw std::invalid_argument("grids must be nonempty");
  check_q_grid(q_grid);
  const std::size_t np = p_grid.size();
  const std::size_t nl = lambda_grid.size();
  const std::size_t nq = q_grid.size();

  // Work units: for each p, the independent run and one run per q; then one
  // quantum run per (p, lambda). Every unit writes its own slot.
  std::vector<ClassicalScan> scans(np);
  for (auto& scan : scans) {
    scan.q_grid.assign(q_grid.begin(), q_grid.end());
    scan.shared.resize(nq);
  }
  std::vector<SweepRow> quantum(np * nl);
  const std::size_t classical_units = np * (nq + 1);

  parallel_for(classical_units + np * nl, workers, [&](std::size_t unit) {
    if (unit < classical_units) {
      const std::size_t ip = unit / (nq + 1);
      const std::size_t slot = unit % (nq + 1);
      auto c = base;
      c.p = p_grid[ip];
      if (slot == 0) {
        scans[ip].independent = evaluate(with_strategy(c, Strategy::independent));
      } else {
        c = with_strategy(c, Strategy::shared_latent);
        c.q = q_grid[slot - 1];
        scans[ip].shared[slot - 1] = evaluate(c);
      }
      return;
    }
    const std::size_t cell = unit - classical_units;
    auto c = with_strategy(base, Strategy::quantum);
    c.p = p_grid[cell / nl];
    c.lambda = lambda_grid[cell % nl];
    quantum[cell] = evaluate(c);
  });

  std::vector<DifferentialRow> rows;
  rows.reserve(np * nl);
  for (std::size_t ip = 0; ip < np; ++ip) {
    for (std::size_t il = 0; il < nl; ++il) {
      rows.push_back(make_row(quantum[ip * nl + il].config, quantum[ip * nl + il], scans[ip]));
    }
  }
  return rows;
}

QScanResult q_scan(const ExperimentConfig& base, std::span<const double> q_grid, int workers) {
  check_q_grid(q_grid);
  for (std::size_t i = 1; i < q_grid.size(); ++i) {
    if (q_grid[i] - q_grid[i - 1] > 0.02 + 1e-12) {
      throw std::invalid_argument("q_scan: grid spacing must be at most 0.02");
    }
  }
  const auto scan = scan_classical(base, q_grid, workers);
  const auto quantum = evaluate(with_strategy(base, Strategy::quantum), workers);

  QScanResult result;
  result.n = base.n;
  result.p = base.p;
  result.lambda = base.lambda;
  result.quantum_tc = quantum.tc;
  result.independent_tc = scan.independent.tc;
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    result.points.push_back({q_grid[i], scan.shared[i].tc});
    if (!result.crossover && scan.shared[i].tc.mean >= quantum.tc.mean) {
      result.crossover = q_grid[i];
    }
  }
  return result;
}

std::vector<DifferentialRow> scaling_study(const ExperimentConfig& base,
                                           std::span<const int> n_list,
                                           std::span<const double> q_grid, int workers) {
  std::vector<DifferentialRow> rows;
  const double p[] = {base.p};
  const double lambda[] = {base.lambda};
  for (int n : n_list) {
    if (n < 2) throw std::invalid_argument("scaling_study: n must be >= 2");
    auto c = base;
    c.n = n;
    auto grid = differential_grid(c, p, lambda, q_grid, workers);
    rows.push_back(grid.front());
  }
  return rows;
}

std::vector<ConvergencePoint> convergence_study(const ExperimentConfig& base,
                                                std::span<const std::int64_t> checkpoints,
                                                std::span<const double> q_grid, int workers) {
  check_q_grid(q_grid);
  if (checkpoints.empty()) throw std::invalid_argument("convergence_study: no checkpoints");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
      throw std::invalid_argument("convergence_study: checkpoints must be positive and increasing");
    }
  }
  validate(base);
  const std::int64_t max_rounds = checkpoints.back();
  const std::size_t nc = checkpoints.size();
  const auto replicates = static_cast<std::size_t>(base.replicates);

  auto prefix_tcs = [&](const ExperimentConfig& c, std::uint64_t replicate) {
    const auto codes = simulate_codes(c, replicate, max_rounds);
    std::vector<double> tcs(nc);
    for (std::size_t k = 0; k < nc; ++k) {
      std::vector<ProfileCode> prefix(codes.begin(), codes.begin() + checkpoints[k]);
      tcs[k] = total_correlation(to_law(JointHistogram::from_codes(c.n, c.m, std::move(prefix))));
    }
    return tcs;
  };

  // [replicate][checkpoint]
  std::vector<std::vector<double>> quantum_tc(replicates);
  std::vector<std::vector<double>> classical_tc(replicates);
  parallel_for(replicates, workers, [&](std::size_t r) {
    quantum_tc[r] = prefix_tcs(with_strategy(base, Strategy::quantum), r);
    auto best = prefix_tcs(with_strategy(base, Strategy::independent), r);
    for (double q : q_grid) {
      auto c = with_strategy(base, Strategy::shared_latent);
      c.q = q;
      const auto tcs = prefix_tcs(c, r);
      for (std::size_t k = 0; k < nc; ++k) best[k] = std::max(best[k], tcs[k]);
    }
    classical_tc[r] = std::move(best);
  });

  std::vector<ConvergencePoint> points;
  for (std::size_t k = 0; k < nc; ++k) {
    std::vector<double> delta;
    std::vector<double> quantum;
    std::vector<double> classical;
    for (std::size_t r = 0; r < replicates; ++r) {
      quantum.push_back(quantum_tc[r][k]);
      classical.push_back(classical_tc[r][k]);
      delta.push_back(quantum_tc[r][k] - classical_tc[r][k]);
    }
    points.push_back({checkpoints[k], summarize(delta), summarize(quantum), summarize(classical)});
  }
  return points;
}

std::vector<TrailPoint> geometry_trail(const ExperimentConfig& base, std::span<const double> p_grid,
                                       double display_q, int workers) {
  if (p_grid.empty()) throw std::invalid_argument("geometry_trail: p grid must be nonempty");
  const Strategy order[] = {Strategy::independent, Strategy::shared_latent, Strategy::quantum};
  std::vector<TrailPoint> points(3 * p_grid.size());
  parallel_for(points.size(), workers, [&](std::size_t i) {
    auto c = with_strategy(base, order[i / p_grid.size()]);
    c.p = p_grid[i % p_grid.size()];
    c.q = display_q;
    const auto row = evaluate(c);
    points[i] = {c.strategy, c.p, row.coin, row.apmi, row.product_coin.mean};
  });
  return points;
}

}  // namespace hfc
