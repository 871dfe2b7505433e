#include "hfc/exact.hpp"

#include <cmath>

#include "hfc/strategies.hpp"
#include "hfc/world.hpp"

namespace hfc {

bool exact_tractable(int n, int m) {
  std::uint64_t cells = 1;
  for (int i = 0; i < n; ++i) {
    cells *= static_cast<std::uint64_t>(m);
    if (cells > kExactCellLimit) return false;
  }
  return true;
}

ExactJoint::ExactJoint(int n, int m, std::vector<double> probs, std::uint64_t fingerprint)
    : n_(n), m_(m), probs_(std::move(probs)), fingerprint_(fingerprint) {}

ExactJoint exact_joint(const ExperimentConfig& config) {
  validate(config);
  const int n = config.n;
  const int m = config.m;
  if (!exact_tractable(n, m)) {
    throw IntractableError("exact_joint: m^n exceeds " + std::to_string(kExactCellLimit) + " cells");
  }
  const auto mm = static_cast<std::size_t>(m);
  std::size_t cells = 1;
  for (int i = 0; i < n; ++i) cells *= mm;

  const auto fields = enumerate_fields(m, config.k);
  const auto kernel = proposal_kernel(config.strategy, n, m, config.q, config.lambda);
  const IntelParams intel{config.p, config.eps, config.v};
  const double field_weight = 1.0 / static_cast<double>(fields.size());

  std::vector<double> probs(cells, 0.0);
  std::vector<double> current;
  std::vector<double> next;
  current.reserve(cells);
  next.reserve(cells);
  std::vector<std::vector<double>> finals(kernel.conditionals.size(), std::vector<double>(mm));

  for (const auto& field : fields) {
    const auto transition = intel_matrix(field, intel);
    // Push every distinct proposal law through this field's intel channel.
    for (std::size_t c = 0; c < kernel.conditionals.size(); ++c) {
      auto& out = finals[c];
      std::fill(out.begin(), out.end(), 0.0);
      for (std::size_t from = 0; from < mm; ++from) {
        const double w = kernel.conditionals[c][from];
        if (w == 0.0) continue;
        for (std::size_t to = 0; to < mm; ++to) out[to] += w * transition[from * mm + to];
      }
    }
    for (const auto& term : kernel.terms) {
      current.assign(1, term.weight * field_weight);
      for (int law : term.agent_law) {
        const auto& d = finals[static_cast<std::size_t>(law)];
        next.resize(current.size() * mm);
        for (std::size_t j = 0; j < current.size(); ++j) {
          for (std::size_t t = 0; t < mm; ++t) next[j * mm + t] = current[j] * d[t];
        }
        current.swap(next);
      }
      for (std::size_t cell = 0; cell < cells; ++cell) probs[cell] += current[cell];
    }
  }
  return {n, m, std::move(probs), stable_hash64(canonical_serialization(config))};
}

JointLaw to_law(const ExactJoint& joint) {
  JointLaw law{joint.n(), joint.m(), {}};
  const auto probs = joint.probs();
  for (std::size_t code = 0; code < probs.size(); ++code) {
    if (probs[code] > 0.0) law.cells.emplace_back(code, probs[code]);
  }
  return law;
}

MetricSet exact_metrics(const ExperimentConfig& config) {
  return compute_metrics(to_law(exact_joint(config)));
}

double total_variation(const JointHistogram& hist, const ExactJoint& joint) {
  if (hist.n() != joint.n() || hist.m() != joint.m()) {
    throw std::invalid_argument("total_variation: shape mismatch");
  }
  const auto probs = joint.probs();
  const auto total = static_cast<double>(hist.total());
  double distance = 0.0;
  auto entry = hist.entries().begin();
  for (std::size_t code = 0; code < probs.size(); ++code) {
    double empirical = 0.0;
    if (entry != hist.entries().end() && entry->first == code) {
      empirical = static_cast<double>(entry->second) / total;
      ++entry;
    }
    distance += std::abs(empirical - probs[code]);
  }
  return 0.5 * distance;
}

}  // namespace hfc
