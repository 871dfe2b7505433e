#include "hfc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <system_error>

#include "hfc/rng.hpp"

namespace hfc {
namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& line : lines) {
    if (!out.empty()) out += "; ";
    out += line;
  }
  return out;
}

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Profiles are packed base-m into 63 bits.
bool profile_space_fits(int n, int m) {
  if (n < 1 || m < 1) return true;
  long double cells = 1.0L;
  for (int i = 0; i < n; ++i) cells *= m;
  return cells < 9.2e18L;
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::independent: return "independent";
    case Strategy::shared_latent: return "shared_latent";
    case Strategy::quantum: return "quantum";
  }
  return "?";
}

std::string_view to_string(Mode m) {
  return m == Mode::exact ? "exact" : "monte_carlo";
}

std::string_view to_string(Stream s) {
  switch (s) {
    case Stream::field: return "field";
    case Stream::intel: return "intel";
    case Stream::strategy: return "strategy";
    case Stream::latent: return "latent";
    case Stream::quantum: return "quantum";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "independent") return Strategy::independent;
  if (text == "shared_latent" || text == "shared-latent") return Strategy::shared_latent;
  if (text == "quantum") return Strategy::quantum;
  throw ConfigError({"unknown strategy '" + std::string(text) + "'"});
}

Mode parse_mode(std::string_view text) {
  if (text == "monte_carlo" || text == "monte-carlo") return Mode::monte_carlo;
  if (text == "exact") return Mode::exact;
  throw ConfigError({"unknown mode '" + std::string(text) + "'"});
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::invalid_argument(join_lines(violations)), violations_(std::move(violations)) {}

std::vector<std::string> config_violations(const ExperimentConfig& c) {
  std::vector<std::string> errors;
  if (c.n < 2) errors.emplace_back("n must be >= 2");
  if (c.n > 62) errors.emplace_back("n must be <= 62");
  if (c.m < 2) errors.emplace_back("m must be >= 2");
  if (c.k < 0 || c.k > c.m) errors.emplace_back("k out of [0, m]");
  if (!in_unit_interval(c.p)) errors.emplace_back("p out of [0,1]");
  if (!in_unit_interval(c.eps)) errors.emplace_back("eps out of [0,1]");
  if (!in_unit_interval(c.v)) errors.emplace_back("v out of [0,1]");
  if (!in_unit_interval(c.lambda)) errors.emplace_back("lambda out of [0,1]");
  if (!in_unit_interval(c.q)) errors.emplace_back("q out of [0,1]");
  if (c.strategy == Strategy::quantum && c.m < 2)
    errors.emplace_back("quantum requires m >= 2");
  if (c.rounds < 1) errors.emplace_back("rounds must be >= 1");
  if (c.replicates < 1) errors.emplace_back("replicates must be >= 1");
  if (!profile_space_fits(c.n, c.m)) errors.emplace_back("m^n exceeds 63-bit profile packing");
  return errors;
}

const ExperimentConfig& validate(const ExperimentConfig& config) {
  auto errors = config_violations(config);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return config;
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::string canonical_serialization(const ExperimentConfig& c) {
  const std::map<std::string_view, std::string> fields{
      {"eps", format_double(c.eps)},
      {"k", std::to_string(c.k)},
      {"lambda", format_double(c.lambda)},
      {"m", std::to_string(c.m)},
      {"mode", std::string(to_string(c.mode))},
      {"n", std::to_string(c.n)},
      {"p", format_double(c.p)},
      {"q", format_double(c.q)},
      {"replicates", std::to_string(c.replicates)},
      {"rounds", std::to_string(c.rounds)},
      {"seed_root", std::to_string(c.seed_root)},
      {"strategy", std::string(to_string(c.strategy))},
      {"v", format_double(c.v)},
  };
  std::string out;
  for (const auto& [key, value] : fields) {
    out.append(key).append("=").append(value).append("\n");
  }
  return out;
}

std::uint64_t stable_hash64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

SeedSource::SeedSource(const ExperimentConfig& c) {
  ExperimentConfig world;
  world.n = c.n;
  world.m = c.m;
  world.k = c.k;
  world.p = c.p;
  world.eps = c.eps;
  world.v = c.v;
  world.seed_root = c.seed_root;
  key_ = stable_hash64(canonical_serialization(world));
}

std::uint64_t SeedSource::seed(Stream stream, std::uint64_t replicate,
                               std::uint64_t round) const noexcept {
  std::uint64_t h = mix64(key_ ^ (static_cast<std::uint64_t>(stream) + 1) * 0xd6e8feb86659fd93ULL);
  h = mix64(h ^ replicate);
  h = mix64(h ^ round);
  return h;
}

std::uint64_t derive_seed(const ExperimentConfig& config, Stream stream,
                          std::uint64_t replicate, std::uint64_t round) {
  return SeedSource(config).seed(stream, replicate, round);
}

double parse_double(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw ConfigError({"not a number: '" + std::string(text) + "'"});
  }
  return value;
}

std::int64_t parse_int(std::string_view text) {
  text = trim(text);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError({"not an integer: '" + std::string(text) + "'"});
  }
  return value;
}

std::uint64_t parse_uint(std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError({"not an unsigned integer: '" + std::string(text) + "'"});
  }
  return value;
}

namespace {

int parse_small_int(std::string_view key, std::string_view value) {
  const auto v = parse_int(value);
  if (v < -1'000'000 || v > 1'000'000) {
    throw ConfigError({std::string(key) + " out of range"});
  }
  return static_cast<int>(v);
}

}  // namespace

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "n" || key == "N") c.n = parse_small_int(key, value);
  else if (key == "m" || key == "M") c.m = parse_small_int(key, value);
  else if (key == "k" || key == "K") c.k = parse_small_int(key, value);
  else if (key == "p") c.p = parse_double(value);
  else if (key == "eps") c.eps = parse_double(value);
  else if (key == "v" || key == "veto") c.v = parse_double(value);
  else if (key == "lambda") c.lambda = parse_double(value);
  else if (key == "q") c.q = parse_double(value);
  else if (key == "strategy") c.strategy = parse_strategy(value);
  else if (key == "rounds") c.rounds = parse_int(value);
  else if (key == "replicates") c.replicates = parse_small_int(key, value);
  else if (key == "seed_root" || key == "seed") c.seed_root = parse_uint(value);
  else if (key == "mode") c.mode = parse_mode(value);
  else throw ConfigError({"unknown config key '" + std::string(key) + "'"});
}

ExperimentConfig load_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> errors;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    try {
      apply_setting(base, view.substr(0, eq), view.substr(eq + 1));
    } catch (const ConfigError& e) {
      errors.push_back("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return base;
}

}  // namespace hfc
