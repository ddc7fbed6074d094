#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>

#include "bridgelab/rng.hpp"

namespace bridgelab::cli {

enum ExitCode : int { ok = 0, failure = 1, config_error = 2, io_error = 3, unsupported_regime = 4 };

struct CommandOptions {
  std::string config;
  std::optional<std::string> out;  // overrides [output] dir
  std::size_t threads = 0;         // 0: hardware concurrency
  std::optional<Seed> seed;        // overrides [mc] seed and [model] data_seed
};

int cmd_estimate(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_mc(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_check(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_limit(const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace bridgelab::cli
