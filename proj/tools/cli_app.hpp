// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <memory>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "cccp/pipeline.hpp"

namespace cccp::cli {

// Raw option state shared by the subcommands; enum-valued flags are parsed
// as validated strings and converted in finalize().
struct CliOptions {
  RunConfig run;

  std::string input;
  std::string out_dir = "cccp-out";
  std::string models_dir = "cccp-out";
  std::string report_dir;
  std::string synth_out;

  std::string metrics_csv = "all";
  std::string path_mode = "undirected";
  std::string rb_positives = "parent";
  std::string centrality_endpoints = "exclude";
  std::string agg = "twostage";
  std::string platform = "synthetic";

  std::string rb_config_file;
  std::string pb_config_file;
};

// Wires every flag onto a CLI11 app with subcommands: run, synth,
// ingest-check, train, score, report.
std::unique_ptr<CLI::App> build_cli(CliOptions& options);

// Converts parsed strings into the RunConfig and validates them.
void finalize(CliOptions& options);

// Executes whichever subcommand was selected; returns the exit code.
int dispatch(const CLI::App& app, CliOptions& options, std::ostream& log);

int cli_main(int argc, const char* const* argv);

}  // namespace cccp::cli
