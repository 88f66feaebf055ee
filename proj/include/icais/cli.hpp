#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "icais/infodyn.hpp"

namespace icais::cli {

inline constexpr const char* kSchema = "icais/1";

struct RunConfig {
  enum class Command { generate, analyze, sweep, oracle };

  Command command = Command::analyze;
  /// ais | icais | interaction | all
  std::string measure = "ais";
  int k = 1;
  int k_min = 1;
  int k_max = 1;

  std::string data_path;
  std::string out_path;
  std::string col = "output";
  std::vector<std::string> cols;
  std::string input_col;
  std::vector<std::string> input_cols;
  int input_lag = 0;

  std::string process;
  std::string unit;
  std::size_t n = 0;
  std::optional<std::uint64_t> seed;
  double tol = 1e-14;
  std::size_t max_iterations = 1'000'000;

  bool emit_local = false;
  /// json | csv
  std::string format = "json";

  std::vector<Measure> measures() const;
  void validate() const;
};

/// Writes CSV to `out` (or to config.out_path plus a `.meta.json` sidecar).
void cmd_generate(const RunConfig& config, std::ostream& out);
/// One JSON object per line per measure, or a CSV table.
void cmd_analyze(const RunConfig& config, std::ostream& out);
/// CSV `measure,k,average_bits,n_transitions`.
void cmd_sweep(const RunConfig& config, std::ostream& out);
void cmd_oracle(const RunConfig& config, std::ostream& out);

/// Parses argv and dispatches. Returns the process exit code: 0 success,
/// 1 usage error, 2 data error, 3 numerical error. Errors are reported as a
/// JSON object on `err`.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace icais::cli
