#pragma once

// Batch commands behind the command-line tool: configuration, run manifest, and the
// spectrum / verify / compactness / fredholm / band runs that write JSON and CSV files.

#include <string>
#include <vector>

#include "bergman_limits/limits_spectra.hpp"

namespace bl {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string command;
  std::string domain = "disk";  // disk, ball2, ball3, ball4, matrix
  double nu = 0.0;
  double p = 2.0;
  int degree = -1;  // -1: per-domain default
  std::string symbol = "z";
  std::string shell;  // "tmin:tmax:grid"; empty: per-command default
  std::string sequences = "default";
  int steps = 8;
  cplx lambda = 0.0;
  std::string op = "projection";  // band: projection, identity, toeplitz, multiplication
  std::string omegas = "1,2,3,4";
  double cover_t = 0.9;
  double extent = 0.95;
  std::string out = ".";
  uint64_t seed = 1;
  int threads = 0;  // 0: BERGMAN_LIMITS_THREADS, else hardware; not part of the manifest
  bool corrupt_branch = false;  // test hook: verify with a discontinuous branch of log h
};

/// Reads a JSON object with the RunConfig field names; unknown keys throw InvalidArgument.
RunConfig config_from_json(const std::string& text);

struct RunResult {
  int exit_code = 0;
  std::string summary;             // one line per written file plus the verdict
  std::vector<std::string> files;  // written paths
};

/// Exit codes: 0 success, 1 verify failure, 2 parse or argument error, 3 not admissible,
/// 4 accuracy failure, 5 I/O or internal error.
int exit_code_for(ErrorCode code);

/// Runs the command, writes its files under config.out and never throws.
RunResult run_command(const RunConfig& config);

Domain parse_domain(const std::string& name);
/// "default" or a comma list of "rays:K" and "spiral".
std::vector<BoundarySequence> parse_sequences(const Domain& dom, const std::string& spec);
/// 64-bit FNV-1a.
uint64_t fnv1a64(const std::string& bytes);

}  // namespace bl
