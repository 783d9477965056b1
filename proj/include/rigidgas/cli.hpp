#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rigidgas/config.hpp"

namespace rigidgas {

// Parses "command [flags]" into a validated config: the JSON file named by
// --config is read first and flags override it. Throws ConfigError.
RunConfig parse_config(const std::vector<std::string>& args, std::vector<int>* only = nullptr);

// Runs a validated config, writing artifacts under cfg.out. Returns the exit
// status: 0 on success, 1 when a validation check fails.
int dispatch(const RunConfig& cfg, std::ostream& out, const std::vector<int>& only = {});

std::string usage();

// Full front end: exit 2 on usage or config errors, 1 on runtime errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rigidgas
