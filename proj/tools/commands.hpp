#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace khb::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kInputError = 2, kInternalError = 3 };

struct RunConfig {
  std::string command;  // e.g. "kh homology"
  std::vector<std::string> inputs;
  bool json = false;
  bool reduced = false;
  std::optional<int> basepoint;
  /// Cap on per-face bijections during matching search and on nodes during
  /// isomorphism search.
  std::optional<std::uint64_t> max_search;
  int jobs = 1;
  bool search = false;
  /// Constraints "FACE:A=B" restricting counted completions.
  std::vector<std::string> fixes;
  std::string output;
};

/// Fixture directory: $KH_CORPUS_DIR if set, else the compiled-in default.
std::string corpus_dir();

/// `path` if it names an existing file, else the same path under corpus_dir().
std::string resolve_input(const std::string& path);

/// Runs one command, writing its report to `out` and diagnostics to `err`.
/// Never throws; failures are mapped to exit codes.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace khb::cli
