#include "hfc/quantum.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace hfc {

MeasurementDistribution::MeasurementDistribution(int n_qubits, std::vector<double> probs)
    : n_qubits_(n_qubits), probs_(std::move(probs)) {
  if (n_qubits < 1 || n_qubits > 62) throw std::invalid_argument("qubit count out of range");
  if (probs_.size() != (std::size_t{1} << n_qubits)) {
    throw std::invalid_argument("probability vector length must be 2^N");
  }
}

std::vector<double> MeasurementDistribution::weight_class_masses() const {
  std::vector<double> masses(static_cast<std::size_t>(n_qubits_) + 1, 0.0);
  for (std::size_t b = 0; b < probs_.size(); ++b) {
    masses[static_cast<std::size_t>(hamming_weight(b))] += probs_[b];
  }
  return masses;
}

MeasurementDistribution w_state_diagonal(int n) {
  if (n < 1 || n > 30) throw std::invalid_argument("w_state_diagonal: N out of [1, 30]");
  std::vector<double> probs(std::size_t{1} << n, 0.0);
  for (int i = 0; i < n; ++i) probs[std::size_t{1} << i] = 1.0 / n;
  return {n, std::move(probs)};
}

MeasurementDistribution depolarize_diagonal(const MeasurementDistribution& dist, double lambda,
                                            int qubit) {
  if (qubit < 0 || qubit >= dist.n_qubits()) throw std::out_of_range("qubit index");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda out of [0,1]");
  const double flip = lambda / 2.0;
  const auto in = dist.probs();
  const Bitstring mask = Bitstring{1} << qubit;
  std::vector<double> out(in.size());
  for (std::size_t b = 0; b < in.size(); ++b) {
    out[b] = (1.0 - flip) * in[b] + flip * in[b ^ mask];
  }
  return {dist.n_qubits(), std::move(out)};
}

MeasurementDistribution noisy_w_distribution(int n, double lambda) {
  auto dist = w_state_diagonal(n);
  for (int q = 0; q < n; ++q) dist = depolarize_diagonal(dist, lambda, q);
  return dist;
}

std::vector<double> noisy_w_weight_class_masses(int n, double lambda) {
  // Start from weight 1. The excited bit survives with prob 1-f; each of the
  // other n-1 bits turns on independently with prob f.
  const double f = lambda / 2.0;
  std::vector<double> masses(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> others(static_cast<std::size_t>(n), 0.0);  // Binomial(n-1, f)
  others[0] = 1.0;
  for (int i = 0; i < n - 1; ++i) {
    for (int j = i + 1; j >= 1; --j) {
      others[static_cast<std::size_t>(j)] =
          others[static_cast<std::size_t>(j)] * (1.0 - f) + others[static_cast<std::size_t>(j - 1)] * f;
    }
    others[0] *= (1.0 - f);
  }
  for (int j = 0; j < n; ++j) {
    masses[static_cast<std::size_t>(j) + 1] += (1.0 - f) * others[static_cast<std::size_t>(j)];
    masses[static_cast<std::size_t>(j)] += f * others[static_cast<std::size_t>(j)];
  }
  return masses;
}

Bitstring sample_outcome(Rng& rng, int n, double lambda) {
  const double flip = lambda / 2.0;
  Bitstring b = Bitstring{1} << uniform_index(rng, static_cast<std::uint64_t>(n));
  for (int i = 0; i < n; ++i) {
    if (bernoulli(rng, flip)) b ^= Bitstring{1} << i;
  }
  return b;
}

namespace {

using Complex = std::complex<double>;
using Op2 = std::array<Complex, 4>;  // row-major 2x2

// rho' = (op on `qubit`) rho (op on `qubit`)^dagger, for a dense dim x dim rho.
std::vector<Complex> conjugate_by(const std::vector<Complex>& rho, std::size_t dim,
                                  const Op2& op, int qubit) {
  const std::size_t mask = std::size_t{1} << qubit;
  std::vector<Complex> left(rho.size());
  for (std::size_t r = 0; r < dim; ++r) {
    const std::size_t bit = (r & mask) ? 1 : 0;
    const std::size_t r0 = r & ~mask;
    const std::size_t r1 = r | mask;
    for (std::size_t c = 0; c < dim; ++c) {
      left[r * dim + c] = op[bit * 2 + 0] * rho[r0 * dim + c] + op[bit * 2 + 1] * rho[r1 * dim + c];
    }
  }
  std::vector<Complex> out(rho.size());
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      const std::size_t bit = (c & mask) ? 1 : 0;
      const std::size_t c0 = c & ~mask;
      const std::size_t c1 = c | mask;
      out[r * dim + c] = left[r * dim + c0] * std::conj(op[bit * 2 + 0]) +
                         left[r * dim + c1] * std::conj(op[bit * 2 + 1]);
    }
  }
  return out;
}

}  // namespace

MeasurementDistribution density_matrix_oracle(int n, double lambda) {
  if (n < 1 || n > kOracleMaxQubits) {
    throw std::invalid_argument("density_matrix_oracle: N too large for dense representation");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda out of [0,1]");
  const std::size_t dim = std::size_t{1} << n;

  std::vector<Complex> psi(dim, 0.0);
  for (int k = 0; k < n; ++k) psi[std::size_t{1} << k] = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<Complex> rho(dim * dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) rho[r * dim + c] = psi[r] * std::conj(psi[c]);
  }

  const Complex i{0.0, 1.0};
  const std::array<Op2, 4> paulis{{
      {1.0, 0.0, 0.0, 1.0},  // I
      {0.0, 1.0, 1.0, 0.0},  // X
      {0.0, -i, i, 0.0},     // Y
      {1.0, 0.0, 0.0, -1.0}, // Z
  }};
  const std::array<double, 4> weights{1.0 - 3.0 * lambda / 4.0, lambda / 4.0, lambda / 4.0,
                                      lambda / 4.0};

  for (int q = 0; q < n; ++q) {
    std::vector<Complex> next(rho.size(), 0.0);
    for (std::size_t k = 0; k < paulis.size(); ++k) {
      if (weights[k] == 0.0) continue;
      const auto term = conjugate_by(rho, dim, paulis[k], q);
      for (std::size_t e = 0; e < next.size(); ++e) next[e] += weights[k] * term[e];
    }
    rho = std::move(next);
  }

  std::vector<double> diag(dim);
  for (std::size_t b = 0; b < dim; ++b) diag[b] = rho[b * dim + b].real();
  return {n, std::move(diag)};
}

}  // namespace hfc
