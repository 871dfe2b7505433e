#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "hfc/world.hpp"

namespace hfc {

/// Base-m packing of an action profile, agent 0 most significant. Equals the
/// lexicographic index into a dense {0..m-1}^n array.
using ProfileCode = std::uint64_t;

ProfileCode encode_profile(std::span<const Action> profile, int m);
ActionProfile decode_profile(ProfileCode code, int n, int m);

/// Sparse counts over action profiles, kept sorted by code so that every
/// derived quantity is summed in a fixed order.
class JointHistogram {
 public:
  using Entry = std::pair<ProfileCode, std::uint64_t>;

  JointHistogram(int n, int m);
  /// Builds from raw per-round codes (sorted internally).
  static JointHistogram from_codes(int n, int m, std::vector<ProfileCode> codes);
  /// Builds from (code, count) pairs in any order; duplicates are summed.
  static JointHistogram from_entries(int n, int m, std::vector<Entry> entries);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  std::uint64_t total() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0; }
  std::span<const Entry> entries() const noexcept { return entries_; }
  std::uint64_t count(std::span<const Action> profile) const;

  /// Associative and commutative; the result is independent of merge order.
  void merge(const JointHistogram& other);

  friend bool operator==(const JointHistogram&, const JointHistogram&) = default;

 private:
  int n_;
  int m_;
  std::vector<Entry> entries_;
  std::uint64_t total_ = 0;
};

/// A normalized joint law over {0..m-1}^n as (code, probability) cells.
/// Both histograms and exact distributions are reduced to this form.
struct JointLaw {
  int n = 0;
  int m = 0;
  std::vector<std::pair<ProfileCode, double>> cells;
};

JointLaw to_law(const JointHistogram& hist);

/// Shannon entropy in bits. Throws std::invalid_argument on a negative entry
/// or when the total is off 1 by more than 1e-9.
double entropy(std::span<const double> dist);

/// m x m row-major matrix of P(a_i = row, a_j = col).
struct PairMatrix {
  int m = 0;
  std::vector<double> cells;
  double at(Action row, Action col) const {
    return cells[static_cast<std::size_t>(row) * static_cast<std::size_t>(m) +
                 static_cast<std::size_t>(col)];
  }
};

PairMatrix pairwise_joint(const JointLaw& law, int i, int j);
PairMatrix pairwise_joint(const JointHistogram& hist, int i, int j);

/// Clipping threshold for MI and TC values that are negative only through
/// rounding.
inline constexpr double kNegativeClip = 1e-12;

double mutual_information(const PairMatrix& pair);

double apmi(const JointLaw& law);
double total_correlation(const JointLaw& law);
double pairwise_coincidence(const JointLaw& law);
double global_collision(const JointLaw& law);

struct ProductBaseline {
  std::vector<double> marginal;  ///< mean of the per-agent marginals
  double product_coin = 0.0;     ///< sum_t marginal(t)^2
};
ProductBaseline product_baseline(const JointLaw& law);

/// Per-agent marginals, n rows of m.
std::vector<std::vector<double>> agent_marginals(const JointLaw& law);

double apmi(const JointHistogram& hist);
double total_correlation(const JointHistogram& hist);
double pairwise_coincidence(const JointHistogram& hist);
double global_collision(const JointHistogram& hist);
ProductBaseline product_baseline(const JointHistogram& hist);

struct MetricSet {
  double apmi = 0.0;              ///< bits
  double tc = 0.0;                ///< bits
  double coin = 0.0;
  double global_collision = 0.0;
  double product_coin = 0.0;
  std::vector<double> marginal;   ///< common marginal over actions
};

/// All metrics from one pass over the cells.
MetricSet compute_metrics(const JointLaw& law);
MetricSet compute_metrics(const JointHistogram& hist);

/// Histogram export: a schema comment line, a `profile,count` header, then
/// one row per nonzero profile in code order. Profiles print one-based with
/// '-' between agents, e.g. `1-3-2`.
void write_histogram(std::ostream& out, const JointHistogram& hist);
JointHistogram read_histogram(std::istream& in, int n, int m);

inline constexpr const char* kHistogramSchema = "# hfc-table v1 kind=histogram";

}  // namespace hfc
