#pragma once

#include <cstdint>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "snowlab/io.hpp"

namespace snowlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitRefuted = 2;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::uint64_t seed = 0;
  int threads = 0;               // 0 = hardware concurrency
  std::string out_dir = ".";
  std::set<std::string> formats = {"json", "csv", "svg"};
  bool quiet = false;

  /// Writes `<out_dir>/<name>` when its extension is among the enabled formats.
  void emit(const std::string& name, const std::string& text) const;
  void emit_json(const std::string& name, const Json& j) const;
};

/// Adds every subcommand to `app`. The selected command runs from its callback
/// and leaves its exit code in `exit_code`.
void register_commands(CLI::App& app, RunConfig& cfg, int& exit_code);

/// Example tables per module; "all" runs every table. Returns the number of
/// failed checks; -1 for an unknown module.
int run_selftest(const std::string& module);

struct SvgOptions {
  std::string title;
  bool polyline = false;
  /// Radius r drawn as log(1 + r); angles about the origin are kept.
  bool log_radius = false;
};

std::string points_svg(const Matrix& points, const SvgOptions& opt);

}  // namespace snowlab::cli
