// cli.hpp -- command-line front end
#pragma once

#include <iosfwd>

#include "zeroone/crp.hpp"

namespace zeroone::cli {

inline constexpr int kPositive = 0;
inline constexpr int kNegative = 1;
inline constexpr int kError = 2;

/// Defaults overridden by ZEROONE_MAX_STATES, ZEROONE_TIMEOUT_MS and
/// ZEROONE_MAX_POPULATION; command-line flags override both.
struct Limits {
  Budget budget;
  std::uint64_t max_population = 8;
};
Limits limits_from_env();

/// Runs one command. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zeroone::cli
