#pragma once

// Sweep front end: parses a subcommand with range flags, evaluates every
// tuple (in parallel, capped by AFL_CALC_THREADS) and writes one JSON report
// with rows in sorted tuple order.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace aflc::cli {

enum ExitCode : int { ok = 0, verification_failure = 1, config_error = 2 };

/// "3,5,7", "-8..8", "2..3,5"; ConfigError on malformed or empty input.
std::vector<long long> parse_int_list(const std::string& text);
/// "0,1", "true", "false,true", "both".
std::vector<bool> parse_bool_list(const std::string& text);

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Worker count: hardware concurrency capped by AFL_CALC_THREADS.
unsigned worker_count();

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aflc::cli
