#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hfc/rng.hpp"

namespace hfc {

/// Computational-basis outcome of N qubits; bit i is agent i's measurement.
using Bitstring = std::uint64_t;

inline int hamming_weight(Bitstring b) noexcept { return __builtin_popcountll(b); }

/// Probability vector over the 2^N computational-basis outcomes.
class MeasurementDistribution {
 public:
  MeasurementDistribution(int n_qubits, std::vector<double> probs);

  int n_qubits() const noexcept { return n_qubits_; }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](Bitstring b) const { return probs_.at(static_cast<std::size_t>(b)); }

  /// Total mass of each Hamming-weight class 0..N.
  std::vector<double> weight_class_masses() const;

 private:
  int n_qubits_;
  std::vector<double> probs_;
};

/// Diagonal of |W_N><W_N|: 1/N on each single-excitation string.
MeasurementDistribution w_state_diagonal(int n);

/// Depolarizing channel rho -> (1-lambda) rho + lambda I/2 on one qubit,
/// restricted to the diagonal: the qubit's bit flips with probability lambda/2.
MeasurementDistribution depolarize_diagonal(const MeasurementDistribution& dist, double lambda,
                                            int qubit);

/// W diagonal with depolarize_diagonal applied to every qubit in index order.
MeasurementDistribution noisy_w_distribution(int n, double lambda);

/// Closed form of noisy_w_distribution's Hamming-weight class masses,
/// computed without the 2^N vector.
std::vector<double> noisy_w_weight_class_masses(int n, double lambda);

/// Draws one outcome from noisy_w_distribution in O(N): a uniformly placed
/// single excitation followed by independent lambda/2 bit flips.
Bitstring sample_outcome(Rng& rng, int n, double lambda);

/// Dense density-matrix reference: builds |W_N><W_N|, applies the four-Kraus
/// depolarizing channel (I with weight 1-3λ/4, X, Y, Z with λ/4 each) to every
/// qubit, and reads the diagonal. Limited to N <= 6.
MeasurementDistribution density_matrix_oracle(int n, double lambda);

inline constexpr int kOracleMaxQubits = 6;

}  // namespace hfc
