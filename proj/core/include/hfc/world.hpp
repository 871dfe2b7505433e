#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hfc/rng.hpp"

namespace hfc {

/// Actions are stored zero-based: action 0 is target 1 (the leader target),
/// action m-1 is target m. Tables and the CLI print them one-based.
using Action = int;
using ActionProfile = std::vector<Action>;

/// Indicator of the K defended targets among M.
class HiddenField {
 public:
  HiddenField() = default;
  static HiddenField from_subset(int m, std::span<const int> defended);
  static HiddenField from_bits(std::vector<std::uint8_t> bits);

  int size() const noexcept { return static_cast<int>(bits_.size()); }
  int defended_count() const noexcept;
  bool defended(Action t) const { return bits_.at(static_cast<std::size_t>(t)) != 0; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  friend bool operator==(const HiddenField&, const HiddenField&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Uniform K-subset via a partial Fisher-Yates shuffle.
HiddenField sample_field(Rng& rng, int m, int k);

/// All C(m,k) fields in lexicographic subset order.
std::vector<HiddenField> enumerate_fields(int m, int k);

struct IntelParams {
  double p = 0.0;    ///< inspection rate
  double eps = 0.0;  ///< flip probability of the observed defended bit
  double v = 0.0;    ///< veto probability
};

/// Samples the local intel channel for one agent.
///
/// Always consumes exactly five variates (inspect, target, flip, veto,
/// redirect) so that two strategies fed the same generator see the same
/// intel realization regardless of which branch fires.
Action intel_perturb(Action proposal, const HiddenField& field, const IntelParams& params,
                     Rng& rng);

/// Probability that the channel moves `proposal` elsewhere:
/// p * v * (1/M) * P(noisy bit reads 1 | f_proposal).
double redirect_probability(Action proposal, const HiddenField& field, const IntelParams& params);

/// Exact law of intel_perturb over {0..M-1}.
std::vector<double> intel_kernel(Action proposal, const HiddenField& field,
                                 const IntelParams& params);

/// Row-major M x M transition matrix; row = proposal, column = final action.
std::vector<double> intel_matrix(const HiddenField& field, const IntelParams& params);

}  // namespace hfc
