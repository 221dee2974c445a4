// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cccp/corpus.hpp"
#include "cccp/score_table.hpp"

namespace cccp {

// Two-stage averages authors within a conversation first, so large
// conversations do not dominate the platform mean; pooled averages all
// author rows directly.
enum class Aggregation { two_stage, pooled };

std::optional<Aggregation> aggregation_from_string(std::string_view name);
const char* to_string(Aggregation aggregation);

struct MetricPlatformMean {
  std::string metric;
  Platform platform = Platform::synthetic;
  double mean = 0.0;
  std::size_t conversations = 0;
};

class EmptyTableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MetricMissingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<MetricPlatformMean> aggregate(
    const std::vector<ScoreTable>& tables,
    Aggregation aggregation = Aggregation::two_stage);

class ZeroVarianceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Product-moment coefficient; throws std::invalid_argument on length
// mismatch or fewer than 2 points, ZeroVarianceError on a constant vector.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationCell {
  double r = 1.0;
  std::size_t n = 0;      // joined conversations
  bool defined = false;   // false when variance vanished or n < 2
};

struct Diagnostics {
  std::optional<double> rb_precision;
  std::optional<double> pb_precision;
  std::optional<double> pb_new_fraction;
  std::size_t pb_zero_repetition_skips = 0;
};

struct PlatformCount {
  Platform platform = Platform::synthetic;
  std::size_t conversations = 0;
  std::size_t posts = 0;
};

struct ComparisonReport {
  std::vector<std::string> metrics;  // order of the correlation matrix
  std::vector<MetricPlatformMean> means;
  std::vector<std::vector<CorrelationCell>> correlations;  // metric x metric
  Diagnostics diagnostics;
  std::vector<PlatformCount> counts;
  bool single_platform = false;
  Aggregation aggregation = Aggregation::two_stage;
};

// Cross-metric table: means per platform, the Pearson matrix over
// per-conversation means (platforms pooled, conversations joined by id), and
// classifier diagnostics. Throws MetricMissingError on an empty input table.
ComparisonReport build_report(const std::vector<ScoreTable>& tables,
                              const Diagnostics& diagnostics,
                              const std::vector<PlatformCount>& counts,
                              Aggregation aggregation = Aggregation::two_stage);

std::vector<PlatformCount> count_corpus(const Corpus& corpus);

// means.tsv, correlations.tsv, diagnostics.tsv. Regeneration from the same
// score tables is byte-identical.
void write_report_files(const ComparisonReport& report,
                        const std::filesystem::path& directory);

std::string render_report_text(const ComparisonReport& report);

}  // namespace cccp
