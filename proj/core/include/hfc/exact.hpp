#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hfc/config.hpp"
#include "hfc/metrics.hpp"

namespace hfc {

/// Largest dense joint (m^n cells) the exact engine will build.
inline constexpr std::uint64_t kExactCellLimit = 1'000'000;

bool exact_tractable(int n, int m);

class IntractableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense joint law over {0..m-1}^n in lexicographic (ProfileCode) order.
class ExactJoint {
 public:
  ExactJoint(int n, int m, std::vector<double> probs, std::uint64_t fingerprint);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](ProfileCode code) const { return probs_.at(code); }
  /// stable_hash64 of the canonical serialization of the source config.
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

 private:
  int n_;
  int m_;
  std::vector<double> probs_;
  std::uint64_t fingerprint_;
};

/// P(a) = (1/C(M,K)) sum_f sum_res P(res) prod_i sum_ã P(ã|res) kernel_f(a_i|ã).
/// Fields and resources are visited in a fixed order, so the result is
/// bit-reproducible. Throws IntractableError past kExactCellLimit and
/// ConfigError on an invalid config.
ExactJoint exact_joint(const ExperimentConfig& config);

/// Nonzero cells of the dense joint.
JointLaw to_law(const ExactJoint& joint);

MetricSet exact_metrics(const ExperimentConfig& config);

/// Total-variation distance between a sampled histogram and the exact law.
double total_variation(const JointHistogram& hist, const ExactJoint& joint);

}  // namespace hfc
