#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hfc {

enum class Strategy { independent, shared_latent, quantum };
enum class Mode { monte_carlo, exact };

/// Randomness streams. Each stream gets its own generator per
/// (replicate, round) so that, for example, the hidden-field sequence is the
/// same no matter which strategy consumes the proposals.
enum class Stream : std::uint8_t { field, intel, strategy, latent, quantum };

std::string_view to_string(Strategy s);
std::string_view to_string(Mode m);
std::string_view to_string(Stream s);
Strategy parse_strategy(std::string_view text);
Mode parse_mode(std::string_view text);

inline constexpr std::uint64_t kDefaultSeedRoot = 20240917;

struct ExperimentConfig {
  int n = 3;              ///< agents
  int m = 5;              ///< action alphabet size
  int k = 2;              ///< defended targets
  double p = 0.25;        ///< intel rate
  double eps = 0.1;       ///< intel flip probability
  double v = 1.0;         ///< veto probability
  double lambda = 0.0;    ///< depolarizing strength (quantum only)
  double q = 0.7;         ///< shared-latent strength (shared_latent only)
  Strategy strategy = Strategy::quantum;
  std::int64_t rounds = 2000;
  int replicates = 8;
  std::uint64_t seed_root = kDefaultSeedRoot;
  Mode mode = Mode::monte_carlo;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Every violated constraint, in a fixed order. Empty means valid.
std::vector<std::string> config_violations(const ExperimentConfig& config);

/// Returns the config unchanged when valid; throws ConfigError otherwise.
const ExperimentConfig& validate(const ExperimentConfig& config);

/// `key=value` lines sorted by key, with numbers in shortest round-trip form.
/// Independent of the order in which fields were set or read from a file.
std::string canonical_serialization(const ExperimentConfig& config);

/// 64-bit FNV-1a over the bytes, passed through the SplitMix64 finalizer.
/// This function is part of the reproducibility contract: changing it
/// changes every derived seed.
std::uint64_t stable_hash64(std::string_view bytes) noexcept;

/// Seeds are keyed on the world identity only (n, m, k, p, eps, v,
/// seed_root). Strategy-specific parameters (strategy, q, lambda) and the
/// run shape (rounds, replicates, mode) are excluded, so every strategy and
/// every q or lambda value at the same world point sees identical hidden
/// fields and intel draws, and a longer run extends a shorter one.
class SeedSource {
 public:
  explicit SeedSource(const ExperimentConfig& config);

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t seed(Stream stream, std::uint64_t replicate,
                     std::uint64_t round) const noexcept;

 private:
  std::uint64_t key_;
};

std::uint64_t derive_seed(const ExperimentConfig& config, Stream stream,
                          std::uint64_t replicate, std::uint64_t round);

/// Sets one field from its text form. Keys are the field names above; the
/// command-line spellings `veto` and `seed` are accepted as aliases.
/// Numbers are parsed without reference to the C locale.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Reads a flat `key = value` document (one key per line, `#` comments,
/// blank lines ignored) on top of `base`.
ExperimentConfig load_config(std::istream& in, ExperimentConfig base = {});

double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);
std::uint64_t parse_uint(std::string_view text);

/// Shortest decimal form that round-trips exactly.
std::string format_double(double value);

}  // namespace hfc
