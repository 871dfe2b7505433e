#include "hfc/cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "hfc/exact.hpp"
#include "hfc/experiments.hpp"
#include "hfc/parallel.hpp"
#include "hfc/quantum.hpp"
#include "hfc/tables.hpp"
#include "json.hpp"

namespace hfc::cli {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

std::string RunManifest::digest() const {
  std::string lines;
  for (const auto& o : outputs) lines += o.name + " " + o.sha256 + "\n";
  return sha256_hex(lines);
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "hfc-manifest v1";
  j["command"] = command;
  j["artifact_version"] = kArtifactVersion;
  j["seed_root"] = config.seed_root;
  nlohmann::ordered_json c;
  c["n"] = config.n;
  c["m"] = config.m;
  c["k"] = config.k;
  c["p"] = config.p;
  c["eps"] = config.eps;
  c["v"] = config.v;
  c["lambda"] = config.lambda;
  c["q"] = config.q;
  c["strategy"] = std::string(to_string(config.strategy));
  c["rounds"] = config.rounds;
  c["replicates"] = config.replicates;
  c["seed_root"] = config.seed_root;
  c["mode"] = std::string(to_string(config.mode));
  j["config"] = c;
  j["settings"] = extra_json.empty() ? nlohmann::ordered_json::object()
                                     : nlohmann::ordered_json::parse(extra_json);
  auto files = nlohmann::ordered_json::array();
  for (const auto& o : outputs) {
    files.push_back({{"name", o.name}, {"sha256", o.sha256}, {"bytes", o.bytes}});
  }
  j["outputs"] = files;
  j["digest"] = digest();
  j["duration_seconds"] = duration_seconds;
  return j.dump(2) + "\n";
}

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags shared by every command; values are kept as text and parsed with
// the locale-independent helpers from config.hpp.
const std::vector<std::string> kConfigFlags = {"strategy", "n",      "m",      "k",
                                               "p",        "eps",    "veto",   "lambda",
                                               "q",        "rounds", "replicates", "seed",
                                               "mode"};
const std::vector<std::string> kRunFlags = {"out-dir",     "workers",     "q-grid-step",
                                            "p-grid",      "lambda-grid", "n-list",
                                            "checkpoints", "pair",        "config"};

const std::map<std::string, std::string> kFlagHelp = {
    {"strategy", "independent | shared_latent | quantum (default quantum)"},
    {"n", "agents (default 3)"},
    {"m", "action alphabet size (default 5)"},
    {"k", "defended targets (default 2)"},
    {"p", "intel rate (default 0.25)"},
    {"eps", "intel flip probability (default 0.1)"},
    {"veto", "veto probability (default 1.0)"},
    {"lambda", "depolarizing strength (default 0)"},
    {"q", "shared-latent strength (default 0.7)"},
    {"rounds", "rounds per replicate (default 2000)"},
    {"replicates", "replicates (default 8)"},
    {"seed", "seed root (default 20240917)"},
    {"mode", "monte_carlo | exact (default monte_carlo)"},
    {"out-dir", "output directory (default $HFC_OUT_DIR, else hfc-out)"},
    {"workers", "worker threads; results do not depend on it (default 1)"},
    {"q-grid-step", "spacing of the q grid on [0,1] (default 0.01)"},
    {"p-grid", "lo:hi:step or comma list (default 0:0.5:0.05)"},
    {"lambda-grid", "lo:hi:step or comma list (default 0:0.5:0.05)"},
    {"n-list", "comma list of agent counts"},
    {"checkpoints", "comma list of round counts"},
    {"pair", "one-based agent pair i,j for pair.csv (default 1,2)"},
    {"config", "key = value file applied before flags"},
};

struct Invocation {
  std::string command;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> given;

  bool has(const std::string& key) const {
    auto it = given.find(key);
    return it != given.end() && it->second;
  }
  const std::string& get(const std::string& key) const { return values.at(key); }
};

std::vector<double> parse_grid(const std::string& text) {
  // lo:hi:step or a comma list.
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw UsageError("grid '" + text + "' must be lo:hi:step");
    return make_grid(parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2]));
  }
  std::vector<double> values;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) values.push_back(parse_double(part));
  if (values.empty()) throw UsageError("empty grid");
  return values;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> values;
  if (text.find(':') != std::string::npos) {
    const auto colon = text.find(':');
    const auto lo = parse_int(text.substr(0, colon));
    const auto hi = parse_int(text.substr(colon + 1));
    for (auto v = lo; v <= hi; ++v) values.push_back(v);
  } else {
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) values.push_back(parse_int(part));
  }
  if (values.empty()) throw UsageError("empty list '" + text + "'");
  return values;
}

ExperimentConfig resolve_config(const Invocation& inv) {
  ExperimentConfig config;
  if (inv.has("config")) {
    std::ifstream in(inv.get("config"));
    if (!in) throw UsageError("cannot read config file '" + inv.get("config") + "'");
    config = load_config(in, config);
  }
  for (const auto& flag : kConfigFlags) {
    if (inv.has(flag)) apply_setting(config, flag, inv.get(flag));
  }
  return validate(config);
}

fs::path resolve_out_dir(const Invocation& inv) {
  if (inv.has("out-dir")) return inv.get("out-dir");
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return kDefaultOutDir;
}

int resolve_workers(const Invocation& inv) {
  if (!inv.has("workers")) return 1;
  const auto w = parse_int(inv.get("workers"));
  if (w < 1 || w > 1024) throw UsageError("--workers must be in [1, 1024]");
  return static_cast<int>(w);
}

std::vector<double> resolve_q_grid(const Invocation& inv) {
  return make_q_grid(inv.has("q-grid-step") ? parse_double(inv.get("q-grid-step")) : 0.01);
}

std::vector<double> resolve_grid(const Invocation& inv, const std::string& key) {
  return parse_grid(inv.has(key) ? inv.get(key) : std::string("0:0.5:0.05"));
}

std::string grid_text(std::span<const double> grid) {
  std::string s;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) s += ',';
    s += format_double(grid[i]);
  }
  return s;
}

class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw IoError("cannot create output directory '" + dir_.string() + "'");
    }
  }

  void write(const std::string& name, const std::string& contents) {
    const auto path = dir_ / name;
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file << contents;
    file.close();
    if (!file) throw IoError("cannot write '" + path.string() + "'");
    files_.push_back({name, sha256_hex(contents), contents.size()});
  }

  const std::vector<OutputFile>& files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<OutputFile> files_;
};

using Checks = std::vector<std::string>;

void check_unit(Checks& checks, const std::string& what, double x) {
  if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) checks.push_back(what + " outside [0,1]");
}

void check_sweep_row(Checks& checks, const SweepRow& row) {
  if (row.apmi.mean < 0.0) checks.push_back("apmi negative");
  if (row.tc.mean < 0.0) checks.push_back("tc negative");
  check_unit(checks, "coin", row.coin.mean);
  check_unit(checks, "global_collision", row.global_collision.mean);
  check_unit(checks, "product_coin", row.product_coin.mean);
  for (const auto* s : {&row.apmi, &row.tc, &row.coin, &row.global_collision, &row.product_coin}) {
    if (s->std < 0.0) checks.push_back("negative std");
  }
}

void check_differential(Checks& checks, std::span<const DifferentialRow> rows) {
  for (const auto& r : rows) {
    if (std::abs(r.delta_tc - (r.quantum_tc - r.best_classical_value_tc)) > 1e-12 ||
        std::abs(r.delta_apmi - (r.quantum_apmi - r.best_classical_value_apmi)) > 1e-12) {
      checks.push_back("delta identity violated");
    }
    if (r.best_classical_value_tc < r.independent_tc || r.best_classical_value_apmi < r.independent_apmi) {
      checks.push_back("best classical below independent baseline");
    }
    if (r.best_q_tc < 0.0 || r.best_q_tc > 1.0 || r.best_q_apmi < 0.0 || r.best_q_apmi > 1.0) {
      checks.push_back("best_q outside [0,1]");
    }
  }
}

template <typename Writer>
std::string render(Writer&& writer) {
  std::ostringstream out;
  writer(out);
  return out.str();
}

// --- commands --------------------------------------------------------------

struct CommandResult {
  nlohmann::ordered_json settings = nlohmann::ordered_json::object();
  Checks failed_checks;
};

CommandResult cmd_simulate(const Invocation& inv, const ExperimentConfig& config, OutputSet& outputs) {
  CommandResult result;
  const int workers = resolve_workers(inv);
  int pair_i = 0;
  int pair_j = 1;
  if (inv.has("pair")) {
    const auto pair = parse_int_list(inv.get("pair"));
    if (pair.size() != 2) throw UsageError("--pair expects i,j");
    pair_i = static_cast<int>(pair[0]) - 1;
    pair_j = static_cast<int>(pair[1]) - 1;
    if (pair_i == pair_j || pair_i < 0 || pair_j < 0 || pair_i >= config.n || pair_j >= config.n) {
      throw UsageError("--pair needs two distinct agents in 1..n");
    }
  }
  result.settings["pair"] = {pair_i + 1, pair_j + 1};
  result.settings["workers"] = workers;

  SweepRow row;
  PairMatrix pair;
  if (uses_exact(config)) {
    const auto joint = exact_joint(config);
    const auto law = to_law(joint);
    const auto metrics = compute_metrics(law);
    row = aggregate(config, std::span<const MetricSet>(&metrics, 1));
    row.replicates = config.replicates;
    row.std_defined = true;
    pair = pairwise_joint(law, pair_i, pair_j);
  } else {
    if (config.mode == Mode::exact) result.settings["exact_fallback"] = "monte_carlo";
    std::vector<JointHistogram> hists(static_cast<std::size_t>(config.replicates),
                                      JointHistogram(config.n, config.m));
    parallel_for(hists.size(), workers, [&](std::size_t r) { hists[r] = run_rounds(config, r); });
    row = aggregate(config, hists);
    JointHistogram pooled(config.n, config.m);
    for (const auto& h : hists) pooled.merge(h);
    pair = pairwise_joint(pooled, pair_i, pair_j);
    outputs.write("histogram.csv", render([&](std::ostream& o) { write_histogram(o, pooled); }));
  }
  outputs.write("metrics.csv", render([&](std::ostream& o) { tables::write_sweep(o, std::span(&row, 1)); }));
  outputs.write("pair.csv", render([&](std::ostream& o) { tables::write_pair(o, pair_i, pair_j, pair); }));
  check_sweep_row(result.failed_checks, row);
  return result;
}

CommandResult cmd_sweep(const Invocation& inv, const ExperimentConfig& config, OutputSet& outputs) {
  CommandResult result;
  const auto p_grid = resolve_grid(inv, "p-grid");
  const auto lambda_grid = resolve_grid(inv, "lambda-grid");
  const auto q_grid = resolve_q_grid(inv);
  std::vector<int> n_list{config.n};
  if (inv.has("n-list")) {
    n_list.clear();
    for (auto n : parse_int_list(inv.get("n-list"))) n_list.push_back(static_cast<int>(n));
  }
  std::vector<DifferentialRow> rows;
  for (int n : n_list) {
    auto c = config;
    c.n = n;
    validate(c);
    auto grid = differential_grid(c, p_grid, lambda_grid, q_grid, resolve_workers(inv));
    rows.insert(rows.end(), grid.begin(), grid.end());
  }
  result.settings["p_grid"] = grid_text(p_grid);
  result.settings["lambda_grid"] = grid_text(lambda_grid);
  result.settings["q_grid_points"] = q_grid.size();
  result.settings["n_list"] = n_list;
  outputs.write("differential.csv", render([&](std::ostream& o) { tables::write_differential(o, rows); }));
  check_differential(result.failed_checks, rows);
  return result;
}

CommandResult cmd_qscan(const Invocation& inv, const ExperimentConfig& config, OutputSet& outputs) {
  CommandResult result;
  const auto q_grid = resolve_q_grid(inv);
  std::vector<int> n_list{config.n};
  if (inv.has("n-list")) {
    n_list.clear();
    for (auto n : parse_int_list(inv.get("n-list"))) n_list.push_back(static_cast<int>(n));
  }
  std::vector<QScanResult> scans;
  for (int n : n_list) {
    auto c = config;
    c.n = n;
    validate(c);
    scans.push_back(q_scan(c, q_grid, resolve_workers(inv)));
  }
  result.settings["q_grid_points"] = q_grid.size();
  result.settings["n_list"] = n_list;
  outputs.write("qscan.csv", render([&](std::ostream& o) { tables::write_qscan(o, scans); }));
  outputs.write("qscan_summary.csv",
                render([&](std::ostream& o) { tables::write_qscan_summary(o, scans); }));
  for (const auto& scan : scans) {
    for (const auto& point : scan.points) {
      if (point.tc.mean < 0.0) result.failed_checks.push_back("negative tc in q scan");
    }
  }
  return result;
}

CommandResult cmd_scaling(const Invocation& inv, const ExperimentConfig& config, OutputSet& outputs) {
  CommandResult result;
  std::vector<int> n_list{3, 4, 5, 6, 7};
  if (inv.has("n-list")) {
    n_list.clear();
    for (auto n : parse_int_list(inv.get("n-list"))) n_list.push_back(static_cast<int>(n));
  }
  const auto q_grid = resolve_q_grid(inv);
  const auto rows = scaling_study(config, n_list, q_grid, resolve_workers(inv));
  result.settings["n_list"] = n_list;
  result.settings["q_grid_points"] = q_grid.size();
  outputs.write("scaling.csv", render([&](std::ostream& o) { tables::write_differential(o, rows); }));
  check_differential(result.failed_checks, rows);
  return result;
}

CommandResult cmd_convergence(const Invocation& inv, const ExperimentConfig& config, OutputSet& outputs) {
  CommandResult result;
  std::vector<std::int64_t> checkpoints{100, 200, 500, 1000, 2000, 5000, 10000, 20000};
  if (inv.has("checkpoints")) checkpoints = parse_int_list(inv.get("checkpoints"));
  std::vector<int> n_list{config.n};
  if (inv.has("n-list")) {
    n_list.clear();
    for (auto n : parse_int_list(inv.get("n-list"))) n_list.push_back(static_cast<int>(n));
  }
  const auto q_grid = resolve_q_grid(inv);
  std::ostringstream table;
  bool header = true;
  for (int n : n_list) {
    auto c = config;
    c.n = n;
    validate(c);
    const auto points = convergence_study(c, checkpoints, q_grid, resolve_workers(inv));
    tables::write_convergence(table, n, c, points, header);
    header = false;
    for (const auto& point : points) {
      if (point.delta_tc.std < 0.0) result.failed_checks.push_back("negative std");
    }
  }
  result.settings["checkpoints"] = checkpoints;
  result.settings["n_list"] = n_list;
  result.settings["q_grid_points"] = q_grid.size();
  outputs.write("convergence.csv", table.str());
  return result;
}

CommandResult cmd_geometry(const Invocation& inv, const ExperimentConfig& config, OutputSet& outputs) {
  CommandResult result;
  const auto p_grid = resolve_grid(inv, "p-grid");
  const auto points = geometry_trail(config, p_grid, config.q, resolve_workers(inv));
  result.settings["p_grid"] = grid_text(p_grid);
  result.settings["display_q"] = config.q;
  outputs.write("geometry.csv",
                render([&](std::ostream& o) { tables::write_geometry(o, config, points, config.q); }));
  for (const auto& point : points) {
    check_unit(result.failed_checks, "coin", point.coin.mean);
    check_unit(result.failed_checks, "product_coin", point.product_coin);
  }
  return result;
}

CommandResult cmd_oracle_check(const Invocation& inv, const ExperimentConfig& config, OutputSet& outputs) {
  CommandResult result;
  std::vector<tables::OracleCheck> checks;

  for (int n = 1; n <= 4; ++n) {
    for (int step = 0; step <= 10; ++step) {
      const double lambda = step / 10.0;
      const auto chain = noisy_w_distribution(n, lambda);
      const auto oracle = density_matrix_oracle(n, lambda);
      double max_abs = 0.0;
      for (std::size_t b = 0; b < chain.probs().size(); ++b) {
        max_abs = std::max(max_abs, std::abs(chain.probs()[b] - oracle.probs()[b]));
      }
      checks.push_back({"density_matrix_vs_diagonal",
                        "n=" + std::to_string(n) + " lambda=" + format_double(lambda), max_abs,
                        1e-12, max_abs < 1e-12});
    }
  }

  // Exact vs Monte Carlo at N=3, M=3; tolerance 0.005 at 10^6 rounds,
  // scaled as R^-1/2 when --rounds overrides the round count.
  const std::int64_t rounds = inv.has("rounds") ? config.rounds : 1'000'000;
  const double tolerance = 0.005 * std::sqrt(1e6 / static_cast<double>(rounds));
  for (auto strategy : {Strategy::independent, Strategy::shared_latent, Strategy::quantum}) {
    ExperimentConfig c = config;
    c.n = 3;
    c.m = 3;
    c.k = std::min(c.k, 3);
    c.p = 0.25;
    c.lambda = 0.2;
    c.q = 0.7;
    c.strategy = strategy;
    const double tv = total_variation(run_rounds(c, 0, rounds), exact_joint(c));
    checks.push_back({"exact_vs_monte_carlo_tv",
                      std::string(to_string(strategy)) + " n=3 m=3 rounds=" + std::to_string(rounds),
                      tv, tolerance, tv < tolerance});
  }
  result.settings["tv_rounds"] = rounds;
  outputs.write("oracle_check.csv",
                render([&](std::ostream& o) { tables::write_oracle_checks(o, checks); }));
  for (const auto& check : checks) {
    if (!check.pass) result.failed_checks.push_back(check.check + " (" + check.parameters + ")");
  }
  return result;
}

using Command = std::function<CommandResult(const Invocation&, const ExperimentConfig&, OutputSet&)>;

const std::map<std::string, std::pair<Command, std::string>>& commands() {
  static const std::map<std::string, std::pair<Command, std::string>> table{
      {"simulate", {cmd_simulate, "Run one configuration; write histogram, metrics, pair table"}},
      {"sweep", {cmd_sweep, "Differential grid over p and lambda"}},
      {"qscan", {cmd_qscan, "Shared-latent TC across q with the quantum reference"}},
      {"scaling", {cmd_scaling, "Differentials across agent counts"}},
      {"convergence", {cmd_convergence, "Delta TC against rounds on growing prefixes"}},
      {"geometry", {cmd_geometry, "(Coin, APMI) trails across p for every strategy"}},
      {"oracle-check", {cmd_oracle_check, "Density-matrix and exact-vs-Monte-Carlo checks"}},
  };
  return table;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hidden-field coordination simulator", "hfc"};
  app.require_subcommand(1);

  Invocation inv;
  for (const auto& flag : kConfigFlags) inv.values[flag];
  for (const auto& flag : kRunFlags) inv.values[flag];

  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  for (const auto& [name, entry] : commands()) {
    auto* sub = app.add_subcommand(name, entry.second);
    if (name == "oracle-check") sub->alias("oracle_check");
    for (const auto& flag : kConfigFlags) options[name][flag] = sub->add_option("--" + flag, inv.values[flag], kFlagHelp.at(flag));
    for (const auto& flag : kRunFlags) options[name][flag] = sub->add_option("--" + flag, inv.values[flag], kFlagHelp.at(flag));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "hfc: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  auto* chosen = app.get_subcommands().front();
  inv.command = chosen->get_name();
  for (const auto& [flag, option] : options[inv.command]) inv.given[flag] = option->count() > 0;

  const auto start = std::chrono::steady_clock::now();
  try {
    const auto config = resolve_config(inv);
    OutputSet outputs(resolve_out_dir(inv));
    auto result = commands().at(inv.command).first(inv, config, outputs);

    RunManifest manifest;
    manifest.command = inv.command;
    manifest.config = config;
    result.settings["display_q_default"] = kDefaultDisplayQ;
    manifest.extra_json = result.settings.dump();
    manifest.outputs = outputs.files();
    manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto manifest_path = outputs.dir() / "manifest.json";
    std::ofstream file(manifest_path, std::ios::binary | std::ios::trunc);
    file << manifest.to_json();
    file.close();
    if (!file) throw IoError("cannot write '" + manifest_path.string() + "'");

    for (const auto& o : manifest.outputs) out << (outputs.dir() / o.name).string() << " " << o.sha256 << "\n";
    out << "digest " << manifest.digest() << "\n";
    if (!result.failed_checks.empty()) {
      for (const auto& failure : result.failed_checks) err << "hfc: check failed: " << failure << "\n";
      return kExitCheckFailed;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    for (const auto& v : e.violations()) err << "hfc: invalid config: " << v << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "hfc: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "hfc: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "hfc: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace hfc::cli
