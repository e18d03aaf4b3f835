#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace cuspsieve::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string command;
  std::uint64_t N = 0;
  std::string subset = "full";  // full | sqrt2 | random
  double density = 0.5;
  std::uint64_t seed = 42;
  double lower = 0.0;           // subset lower cutoff; 0 = command default
  double A = 4.0;
  double B = 1.0;
  double xi = 0.0;
  double z0 = 3.0;
  double z = 0.0;
  std::uint64_t M = 0;
  std::uint64_t tau = 1;
  std::uint64_t grid = 0;       // 0 = grid_factor * N rounded up to a power of two
  std::uint64_t grid_factor = 32;
  std::uint64_t stride = 1;
  std::uint64_t farey_q = 30;
  std::string format;           // json | csv | plotdata; empty = command default
  std::string output = "-";
  std::string farey_output;
  std::string csv_output;
  unsigned threads = 1;
  std::string mode = "exact";   // exact | fast
  std::string suite = "all";
  std::uint64_t zmax = 100'000;
  std::uint64_t sieve_nmax = 2000;
  std::uint64_t envelope_max = 100'000;
  std::size_t trials = 200;
  std::uint64_t samples = 1;
  std::size_t alpha_samples = 1000;
};

/// Reads key=value lines ('#' comments, blank lines ignored) into
/// "--key value" tokens. Throws std::runtime_error naming the path on failure.
std::vector<std::string> read_config_tokens(const std::string& path);

/// Parses argv (flags after a --config file win), runs the command and
/// returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cuspsieve::cli
