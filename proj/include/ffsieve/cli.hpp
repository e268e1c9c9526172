#pragma once

// Command-line front end. parse_args validates everything before run
// touches a scheme; run writes one report to `out` and returns the exit
// code: 0 success, 1 error, 2 certified failure (embedder obstruction).

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ffsieve/sieve.hpp"

namespace ffsieve::cli {

enum class Command { Predict, Estimate, SingDist, LowDeg, Zeta, Embed, Points };
enum class OutFormat { Json, Csv };

std::string to_string(Command c);

struct RunConfig {
  Command command = Command::Predict;
  std::string singdist_mode;  // "predict" or "estimate"
  std::string scheme;
  std::optional<std::uint64_t> q;
  std::vector<int> degrees;
  std::string degrees_text;
  sieve::Budget budget;
  std::string budget_text = "exhaustive";
  std::uint64_t seed = 0;
  std::optional<int> sing_bound;
  bool exact = false;  // --exact given; otherwise each command's default
  int ell_max = 3;
  OutFormat out = OutFormat::Json;
  int threads = 0;  // 0: OpenMP default
  std::optional<int> r;
  int d_max = 8;
  std::optional<int> s;
  int max_degree = 4;
};

// Throws Error(UsageError) naming the offending flag.
RunConfig parse_args(const std::vector<std::string>& args);

// "3..5", "4" or comma-separated mixtures; throws UsageError.
std::vector<int> parse_degree_range(const std::string& text);
// "exhaustive" or "sample:N"; throws UsageError.
sieve::Budget parse_budget(const std::string& text);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_args + run, turning usage errors into exit code 1.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ffsieve::cli
