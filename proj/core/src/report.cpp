// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "cccp/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cccp/text.hpp"

namespace cccp {

std::optional<Aggregation> aggregation_from_string(std::string_view name) {
  if (name == "twostage" || name == "two-stage") return Aggregation::two_stage;
  if (name == "pooled") return Aggregation::pooled;
  return std::nullopt;
}

const char* to_string(Aggregation aggregation) {
  return aggregation == Aggregation::two_stage ? "twostage" : "pooled";
}

namespace {

// (platform, conversation) -> mean over author rows.
std::map<std::pair<Platform, std::string>, double> conversation_means(
    const ScoreTable& table) {
  std::map<std::pair<Platform, std::string>, std::pair<double, std::size_t>>
      sums;
  for (const ScoreRow& row : table.rows) {
    auto& slot = sums[{row.platform, row.conversation_id}];
    slot.first += row.score;
    ++slot.second;
  }
  std::map<std::pair<Platform, std::string>, double> means;
  for (const auto& [key, sum] : sums)
    means[key] = sum.first / static_cast<double>(sum.second);
  return means;
}

}  // namespace

std::vector<MetricPlatformMean> aggregate(const std::vector<ScoreTable>& tables,
                                          Aggregation aggregation) {
  if (tables.empty()) throw EmptyTableError("aggregate: no tables");
  std::vector<MetricPlatformMean> result;
  for (const ScoreTable& table : tables) {
    if (table.rows.empty())
      throw EmptyTableError("aggregate: table '" + table.metric + "' is empty");
    std::map<Platform, std::pair<double, std::size_t>> by_platform;
    std::map<Platform, std::set<std::string>> conversations;
    if (aggregation == Aggregation::two_stage) {
      for (const auto& [key, mean] : conversation_means(table)) {
        auto& slot = by_platform[key.first];
        slot.first += mean;
        ++slot.second;
        conversations[key.first].insert(key.second);
      }
    } else {
      for (const ScoreRow& row : table.rows) {
        auto& slot = by_platform[row.platform];
        slot.first += row.score;
        ++slot.second;
        conversations[row.platform].insert(row.conversation_id);
      }
    }
    for (const auto& [platform, sum] : by_platform) {
      result.push_back(MetricPlatformMean{
          table.metric, platform, sum.first / static_cast<double>(sum.second),
          conversations[platform].size()});
    }
  }
  return result;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2)
    throw std::invalid_argument("pearson: need at least 2 points");
  const double n = static_cast<double>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw ZeroVarianceError("pearson: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

std::vector<PlatformCount> count_corpus(const Corpus& corpus) {
  std::map<Platform, PlatformCount> counts;
  for (const auto& tree : corpus.trees) {
    auto& entry = counts[tree.platform()];
    entry.platform = tree.platform();
    entry.conversations += 1;
    entry.posts += tree.size();
  }
  std::vector<PlatformCount> result;
  for (const auto& [platform, entry] : counts) result.push_back(entry);
  return result;
}

ComparisonReport build_report(const std::vector<ScoreTable>& tables,
                              const Diagnostics& diagnostics,
                              const std::vector<PlatformCount>& counts,
                              Aggregation aggregation) {
  ComparisonReport report;
  report.aggregation = aggregation;
  report.diagnostics = diagnostics;
  report.counts = counts;
  for (const ScoreTable& table : tables) {
    if (table.rows.empty())
      throw MetricMissingError("metric table '" + table.metric + "' is empty");
    report.metrics.push_back(table.metric);
  }
  if (report.metrics.empty())
    throw MetricMissingError("no metric tables given");

  report.means = aggregate(tables, aggregation);

  std::set<Platform> platforms;
  for (const auto& mean : report.means) platforms.insert(mean.platform);
  report.single_platform = platforms.size() < 2;

  // Correlations over conversation-level means, conversations joined by id
  // across metric pairs (platforms pooled).
  std::vector<std::map<std::pair<Platform, std::string>, double>> means;
  means.reserve(tables.size());
  for (const ScoreTable& table : tables)
    means.push_back(conversation_means(table));

  const std::size_t m = tables.size();
  report.correlations.assign(m, std::vector<CorrelationCell>(m));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      CorrelationCell& cell = report.correlations[a][b];
      if (a == b) {
        cell.r = 1.0;
        cell.n = means[a].size();
        cell.defined = true;
        continue;
      }
      if (b < a) {
        cell = report.correlations[b][a];  // symmetry by construction
        continue;
      }
      std::vector<double> xs, ys;
      for (const auto& [key, value] : means[a]) {
        auto it = means[b].find(key);
        if (it == means[b].end()) continue;
        xs.push_back(value);
        ys.push_back(it->second);
      }
      cell.n = xs.size();
      if (xs.size() >= 2) {
        try {
          cell.r = pearson(xs, ys);
          cell.defined = true;
        } catch (const ZeroVarianceError&) {
          cell.defined = false;
        }
      } else {
        cell.defined = false;
      }
    }
  }
  return report;
}

namespace {

std::string platform_header(const ComparisonReport& report,
                            std::vector<Platform>& platforms) {
  std::set<Platform> seen;
  for (const auto& mean : report.means) seen.insert(mean.platform);
  platforms.assign(seen.begin(), seen.end());
  std::string header;
  for (Platform platform : platforms) {
    header += '\t';
    header += to_string(platform);
  }
  return header;
}

}  // namespace

void write_report_files(const ComparisonReport& report,
                        const std::filesystem::path& directory) {
  {
    std::ofstream out(directory / "means.tsv");
    out << "metric\tplatform\tmean\tconversations\n";
    for (const auto& mean : report.means) {
      out << mean.metric << '\t' << to_string(mean.platform) << '\t'
          << format_fixed6(mean.mean) << '\t' << mean.conversations << '\n';
    }
  }
  {
    std::ofstream out(directory / "correlations.tsv");
    out << "metric";
    for (const auto& metric : report.metrics) out << '\t' << metric;
    out << '\n';
    for (std::size_t a = 0; a < report.metrics.size(); ++a) {
      out << report.metrics[a];
      for (std::size_t b = 0; b < report.metrics.size(); ++b) {
        const CorrelationCell& cell = report.correlations[a][b];
        out << '\t' << (cell.defined ? format_fixed6(cell.r) : "nan");
      }
      out << '\n';
    }
  }
  {
    std::ofstream out(directory / "diagnostics.tsv");
    out << "key\tvalue\n";
    if (report.diagnostics.rb_precision)
      out << "rb_precision\t" << format_fixed6(*report.diagnostics.rb_precision)
          << '\n';
    if (report.diagnostics.pb_precision)
      out << "pb_precision\t" << format_fixed6(*report.diagnostics.pb_precision)
          << '\n';
    if (report.diagnostics.pb_new_fraction)
      out << "pb_new_fraction\t"
          << format_fixed6(*report.diagnostics.pb_new_fraction) << '\n';
    out << "pb_zero_repetition_skips\t"
        << report.diagnostics.pb_zero_repetition_skips << '\n';
    for (const PlatformCount& count : report.counts) {
      out << "conversations_" << to_string(count.platform) << '\t'
          << count.conversations << '\n';
      out << "posts_" << to_string(count.platform) << '\t' << count.posts
          << '\n';
    }
  }
}

std::string render_report_text(const ComparisonReport& report) {
  std::ostringstream out;
  out << "participation metrics by platform ("
      << to_string(report.aggregation) << " mean)\n";
  if (report.single_platform)
    out << "  [single-platform corpus: no cross-platform comparison]\n";

  std::vector<Platform> platforms;
  out << "metric" << platform_header(report, platforms) << '\n';
  for (const auto& metric : report.metrics) {
    out << metric;
    for (Platform platform : platforms) {
      bool found = false;
      for (const auto& mean : report.means) {
        if (mean.metric == metric && mean.platform == platform) {
          out << '\t' << format_fixed6(mean.mean);
          found = true;
          break;
        }
      }
      if (!found) out << "\t-";
    }
    out << '\n';
  }

  out << "\npearson correlations over per-conversation means (r, n)\n";
  for (std::size_t a = 0; a < report.metrics.size(); ++a) {
    for (std::size_t b = a + 1; b < report.metrics.size(); ++b) {
      const CorrelationCell& cell = report.correlations[a][b];
      out << "  " << report.metrics[a] << " ~ " << report.metrics[b] << ": ";
      if (cell.defined)
        out << format_fixed6(cell.r);
      else
        out << "undefined";
      out << " (n=" << cell.n << ")\n";
    }
  }

  out << "\ndiagnostics\n";
  if (report.diagnostics.rb_precision)
    out << "  rb precision: " << format_fixed6(*report.diagnostics.rb_precision)
        << '\n';
  if (report.diagnostics.pb_precision)
    out << "  pb precision: " << format_fixed6(*report.diagnostics.pb_precision)
        << '\n';
  if (report.diagnostics.pb_new_fraction)
    out << "  pb new-author fraction: "
        << format_fixed6(*report.diagnostics.pb_new_fraction) << '\n';
  out << "  pb zero-repetition conversations excluded: "
      << report.diagnostics.pb_zero_repetition_skips << '\n';
  for (const PlatformCount& count : report.counts) {
    out << "  " << to_string(count.platform) << ": " << count.conversations
        << " conversations, " << count.posts << " posts\n";
  }
  return out.str();
}

}  // namespace cccp
