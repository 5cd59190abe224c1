#pragma once

// Config-driven subcommands. Each writes report.json (resolved config
// inline), CSV tables and metadata.json (timestamps) into the output directory.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "vwslab/serialization.hpp"

namespace vwslab {

inline constexpr int kReportFormatVersion = 1;

enum ExitCode : int { kExitPass = 0, kExitError = 1, kExitVerdictFail = 2 };

struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os) const;
};

struct CommandResult {
  Json config;  // resolved parameters
  Json result;
  bool passed = false;
  std::vector<CsvTable> tables;
};

std::vector<std::string> command_names();

/// Runs one subcommand on a parsed config; throws ConfigError on schema errors.
CommandResult run_command(const std::string& command, const Json& config, int jobs);

struct CliOptions {
  std::string command;
  std::filesystem::path config;
  int jobs = 1;
  std::filesystem::path out = "out";
  std::string format = "both";  // json, csv or both
};

/// Reads the config, runs the command, writes the outputs; returns the exit code.
int run(const CliOptions& opt, std::ostream& log, std::ostream& err);

/// argv entry point (CLI11 parsing).
int cli_main(int argc, char** argv);

}  // namespace vwslab
