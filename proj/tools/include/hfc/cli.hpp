#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hfc/config.hpp"

namespace hfc::cli {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr const char* kOutDirEnv = "HFC_OUT_DIR";
inline constexpr const char* kDefaultOutDir = "hfc-out";

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;       ///< bad flags or invalid config
inline constexpr int kExitIo = 2;          ///< output path not writable
inline constexpr int kExitCheckFailed = 3; ///< run finished but a consistency check failed

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

struct OutputFile {
  std::string name;  ///< relative to the output directory
  std::string sha256;
  std::uint64_t bytes = 0;
};

/// Written as manifest.json next to the outputs. `digest` is the SHA-256 of
/// the `name sha256` lines of all outputs, so it changes exactly when some
/// output byte changes; duration is informational and not part of it.
struct RunManifest {
  std::string command;
  ExperimentConfig config;
  std::string extra_json;  ///< command-specific resolved settings (JSON object)
  std::vector<OutputFile> outputs;
  double duration_seconds = 0.0;

  std::string digest() const;
  std::string to_json() const;
};

/// Runs one command line (args exclude the program name). Never throws.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace hfc::cli
