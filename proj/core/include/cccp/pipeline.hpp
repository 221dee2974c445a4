// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>

#include "cccp/baseline.hpp"
#include "cccp/centrality.hpp"
#include "cccp/corpus.hpp"
#include "cccp/pb.hpp"
#include "cccp/rb.hpp"
#include "cccp/report.hpp"

namespace cccp {

inline const std::set<std::string> kAllMetrics{"baseline", "rb", "pb",
                                               "centrality"};

// Everything a reproducible run needs. The seed feeds the synthetic
// generator and both trainers; file outputs of two runs with equal configs
// are byte-identical except for the timestamp in the manifest.
struct RunConfig {
  std::optional<std::filesystem::path> input;
  bool synthetic = false;
  SynthConfig synth;
  std::optional<std::size_t> cap_per_platform;

  std::set<std::string> metrics = kAllMetrics;

  BaselineConfig baseline;
  RbConfig rb;
  PbConfig pb;
  EndpointRule centrality_endpoints = EndpointRule::exclude;
  Aggregation aggregation = Aggregation::two_stage;

  std::uint64_t seed = 42;
  int jobs = 1;
  bool export_pairs = false;
  bool export_contexts = false;
  std::filesystem::path out_dir;
};

// Full experiment: load or generate the corpus, compute the selected
// metrics (training where needed), then write score tables, models, report
// files and a manifest under out_dir. Returns the process exit code; on
// failure the files written by this run are removed.
int run_pipeline(const RunConfig& config, std::ostream& log);

// `ingest-check`: validation report only.
int run_ingest_check(const std::filesystem::path& input, std::ostream& log);

// `train`: persist rb_model.txt / pb_model.txt for the selected metrics.
int run_train(const RunConfig& config, std::ostream& log);

// `score`: apply persisted models, write score tables only.
int run_score(const RunConfig& config,
              const std::filesystem::path& model_dir, std::ostream& log);

// `report`: re-aggregate persisted score tables in a run directory;
// rewrites means.tsv, correlations.tsv, report.txt (and diagnostics.tsv when
// present, passed through).
int run_report(const std::filesystem::path& run_dir, Aggregation aggregation,
               std::ostream& log);

// Helpers shared by subcommands and tests.
Corpus acquire_corpus(const RunConfig& config, LoadReport* report);
std::string manifest_json(const RunConfig& config, const Corpus& corpus,
                          const std::string& timestamp);

}  // namespace cccp
