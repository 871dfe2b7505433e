#include "hfc/world.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace hfc {

HiddenField HiddenField::from_subset(int m, std::span<const int> defended) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(m), 0);
  for (int t : defended) {
    if (t < 0 || t >= m) throw std::out_of_range("defended target out of range");
    bits[static_cast<std::size_t>(t)] = 1;
  }
  return from_bits(std::move(bits));
}

HiddenField HiddenField::from_bits(std::vector<std::uint8_t> bits) {
  HiddenField f;
  for (auto& b : bits) b = b ? 1 : 0;
  f.bits_ = std::move(bits);
  return f;
}

int HiddenField::defended_count() const noexcept {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

HiddenField sample_field(Rng& rng, int m, int k) {
  std::vector<int> targets(static_cast<std::size_t>(m));
  std::iota(targets.begin(), targets.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(m - i)));
    std::swap(targets[static_cast<std::size_t>(i)], targets[static_cast<std::size_t>(j)]);
  }
  return HiddenField::from_subset(m, std::span(targets).first(static_cast<std::size_t>(k)));
}

std::vector<HiddenField> enumerate_fields(int m, int k) {
  if (k < 0 || k > m) throw std::invalid_argument("k out of [0, m]");
  std::vector<HiddenField> fields;
  std::vector<int> subset(static_cast<std::size_t>(k));
  std::iota(subset.begin(), subset.end(), 0);
  while (true) {
    fields.push_back(HiddenField::from_subset(m, subset));
    int i = k - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return fields;
}

Action intel_perturb(Action proposal, const HiddenField& field, const IntelParams& params,
                     Rng& rng) {
  const int m = field.size();
  const bool inspect = bernoulli(rng, params.p);
  const auto target = static_cast<Action>(uniform_index(rng, static_cast<std::uint64_t>(m)));
  const bool flip = bernoulli(rng, params.eps);
  const bool veto = bernoulli(rng, params.v);
  const auto redirect =
      m > 1 ? static_cast<Action>(uniform_index(rng, static_cast<std::uint64_t>(m - 1))) : 0;

  const bool reads_defended = field.defended(target) != flip;
  if (inspect && target == proposal && reads_defended && veto && m > 1) {
    return redirect >= target ? redirect + 1 : redirect;
  }
  return proposal;
}

double redirect_probability(Action proposal, const HiddenField& field, const IntelParams& params) {
  const int m = field.size();
  if (m < 2) return 0.0;
  const double reads_one = field.defended(proposal) ? 1.0 - params.eps : params.eps;
  return params.p * params.v * reads_one / m;
}

std::vector<double> intel_kernel(Action proposal, const HiddenField& field,
                                 const IntelParams& params) {
  const int m = field.size();
  const double r = redirect_probability(proposal, field, params);
  std::vector<double> row(static_cast<std::size_t>(m), m > 1 ? r / (m - 1) : 0.0);
  row[static_cast<std::size_t>(proposal)] = 1.0 - r;
  return row;
}

std::vector<double> intel_matrix(const HiddenField& field, const IntelParams& params) {
  const auto m = static_cast<std::size_t>(field.size());
  std::vector<double> matrix;
  matrix.reserve(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    const auto row = intel_kernel(static_cast<Action>(a), field, params);
    matrix.insert(matrix.end(), row.begin(), row.end());
  }
  return matrix;
}

}  // namespace hfc
