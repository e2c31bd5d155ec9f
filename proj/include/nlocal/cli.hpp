#pragma once

// Command front end. Every command takes one JSON run configuration and
// returns a machine-readable record, a human-readable table and any CSV
// attachments. The record embeds the configuration it ran with.
//
// Top-level keys: command, seed, threads, out, optimizer, network, family,
// bound, detect, certify, distribution, scan.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace nlocal {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitConsistency = 3;

struct CommandOutput {
    nlohmann::json record;
    std::string table;
    std::vector<std::pair<std::string, std::string>> files;  // name, contents
    int status = kExitOk;
};

CommandOutput cmd_bound(const nlohmann::json& cfg);
CommandOutput cmd_optimize(const nlohmann::json& cfg);
CommandOutput cmd_detect(const nlohmann::json& cfg);
CommandOutput cmd_certify(const nlohmann::json& cfg);
CommandOutput cmd_distribution(const nlohmann::json& cfg);
CommandOutput cmd_scan(const nlohmann::json& cfg);

// Dispatches on cfg["command"].
CommandOutput run_command(const nlohmann::json& cfg);

// Parses flags, merges them over the optional --config document, runs the
// command and writes outputs. Returns the process exit status.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace nlocal
