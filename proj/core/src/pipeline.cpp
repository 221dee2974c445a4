// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "cccp/pipeline.hpp"

#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cccp/text.hpp"

namespace cccp {

namespace {

using nlohmann::json;

std::string utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

// Tracks files written by one run so a failed run leaves no partial output.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path directory)
      : directory_(std::move(directory)) {
    std::filesystem::create_directories(directory_);
  }

  std::filesystem::path path(const std::string& name) {
    created_.push_back(directory_ / name);
    return created_.back();
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(path(name), std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + name);
  }

  void discard_all() {
    for (const auto& file : created_) {
      std::error_code ec;
      std::filesystem::remove(file, ec);
    }
  }

  const std::filesystem::path& directory() const { return directory_; }

 private:
  std::filesystem::path directory_;
  std::vector<std::filesystem::path> created_;
};

void check_metrics(const std::set<std::string>& metrics) {
  if (metrics.empty())
    throw std::invalid_argument("at least one metric must be selected");
  for (const auto& metric : metrics) {
    if (!kAllMetrics.count(metric))
      throw std::invalid_argument("unknown metric '" + metric + "'");
  }
}

// Distinct deterministic streams per consumer.
std::uint64_t synth_seed(const RunConfig& c) { return c.seed; }
std::uint64_t rb_seed(const RunConfig& c) { return c.seed + 1; }
std::uint64_t pb_seed(const RunConfig& c) { return c.seed + 2; }

// The emitted 6-decimal table is the report's actual input: reports built
// now and reports rebuilt later from the persisted files must agree byte for
// byte, so scores round-trip through the serialized form first.
ScoreTable as_persisted(const ScoreTable& table) {
  std::istringstream in(score_table_to_string(table));
  return read_score_table(in, table.metric);
}

}  // namespace

Corpus acquire_corpus(const RunConfig& config, LoadReport* report) {
  Corpus corpus;
  if (config.input) {
    corpus = load_corpus(*config.input, report);
  } else if (config.synthetic) {
    SynthConfig synth = config.synth;
    synth.seed = synth_seed(config);
    corpus = generate_synthetic(synth);
  } else {
    throw std::invalid_argument("either --input or --synthetic is required");
  }
  if (config.cap_per_platform)
    cap_per_platform(corpus, *config.cap_per_platform);
  return corpus;
}

std::string manifest_json(const RunConfig& config, const Corpus& corpus,
                          const std::string& timestamp) {
  json manifest;
  manifest["created_at"] = timestamp;
  manifest["seed"] = config.seed;
  manifest["jobs"] = config.jobs;
  manifest["metrics"] = config.metrics;
  manifest["corpus"] = {
      {"source", corpus.source},
      {"conversations", corpus.trees.size()},
      {"posts", corpus.total_posts()},
      {"checksum_fnv1a64", to_hex(fnv1a64(corpus_to_string(corpus)))},
  };
  if (config.input) manifest["input"] = config.input->string();
  if (config.synthetic) {
    manifest["synthetic"] = {
        {"n_conversations", config.synth.n_conversations},
        {"min_size", config.synth.min_size},
        {"max_size", config.synth.max_size},
        {"root_attachment_bias", config.synth.root_attachment_bias},
        {"revisit_rate", config.synth.revisit_rate},
        {"platform", to_string(config.synth.platform)},
    };
  }
  manifest["flags"] = {
      {"path_mode", to_string(config.baseline.path_mode)},
      {"zeta_base", config.baseline.zeta_base},
      {"theta_base", config.baseline.theta_base},
      {"rb_positives", to_string(config.rb.positives)},
      {"centrality_endpoints", to_string(config.centrality_endpoints)},
      {"agg", to_string(config.aggregation)},
      {"cap_per_platform",
       config.cap_per_platform ? json(*config.cap_per_platform) : json()},
  };
  return manifest.dump(2) + "\n";
}

int run_pipeline(const RunConfig& config, std::ostream& log) {
  check_metrics(config.metrics);
  OutputSet outputs(config.out_dir);
  try {
    LoadReport load_report;
    Corpus corpus = acquire_corpus(config, &load_report);
    for (const auto& skip : load_report.skipped) {
      log << "skipped " << skip.conversation_id << " (" << skip.error_class
          << "): " << skip.message << '\n';
    }
    log << "corpus: " << corpus.trees.size() << " conversations, "
        << corpus.total_posts() << " posts\n";

    outputs.write("corpus.tsv", corpus_to_string(corpus));

    RbConfig rb_config = config.rb;
    rb_config.train.seed = rb_seed(config);
    PbConfig pb_config = config.pb;
    pb_config.train.seed = pb_seed(config);

    std::vector<ScoreTable> tables;
    Diagnostics diagnostics;

    if (config.metrics.count("baseline")) {
      tables.push_back(
          as_persisted(baseline_scores(corpus, config.baseline, config.jobs)));
      outputs.write("scores_baseline.tsv", score_table_to_string(tables.back()));
      log << "baseline: " << tables.back().rows.size() << " rows\n";
    }
    if (config.metrics.count("rb")) {
      RbEval eval;
      TrainedRb model = train_rb(corpus, rb_config, &eval);
      diagnostics.rb_precision = eval.precision;
      {
        std::ostringstream out;
        save_rb(model, out);
        outputs.write("rb_model.txt", out.str());
      }
      if (config.export_pairs) {
        std::ostringstream out;
        write_pairs(build_pair_dataset(corpus, rb_config).pairs, out);
        outputs.write("pairs.tsv", out.str());
      }
      {
        // The learned decay table; per-bucket curves are worth eyeballing
        // because they need not decay monotonically.
        std::ostringstream out;
        out << "reply_distance_bucket\tpredicted_probability\n";
        for (const auto& [bucket, weight] : distance_embedding(model, rb_config))
          out << bucket << '\t' << format_fixed6(weight) << '\n';
        outputs.write("rb_embedding.tsv", out.str());
      }
      tables.push_back(
          as_persisted(rb_scores(corpus, model, rb_config, config.jobs)));
      outputs.write("scores_rb.tsv", score_table_to_string(tables.back()));
      log << "rb: precision " << format_fixed6(eval.precision) << ", "
          << tables.back().rows.size() << " rows\n";
    }
    if (config.metrics.count("pb")) {
      PbEval eval;
      TrainedPb model = train_pb(corpus, pb_config, &eval);
      diagnostics.pb_precision = eval.precision;
      diagnostics.pb_new_fraction = eval.new_fraction;
      {
        std::ostringstream out;
        save_pb(model, out);
        outputs.write("pb_model.txt", out.str());
      }
      if (config.export_contexts) {
        std::ostringstream out;
        std::vector<PredictionContext> contexts;
        for (const auto& tree : corpus.trees) {
          auto more = build_contexts(tree, pb_config);
          contexts.insert(contexts.end(), more.begin(), more.end());
        }
        write_contexts(contexts, out);
        outputs.write("contexts.tsv", out.str());
      }
      PbScores scores = pb_scores(corpus, model, pb_config, config.jobs);
      diagnostics.pb_zero_repetition_skips = scores.zero_repetition_skips;
      tables.push_back(as_persisted(scores.table));
      outputs.write("scores_pb.tsv", score_table_to_string(scores.table));
      outputs.write("scores_pb_raw.tsv", score_table_to_string(scores.raw_table));
      log << "pb: precision " << format_fixed6(eval.precision)
          << ", new-author fraction " << format_fixed6(eval.new_fraction)
          << ", " << scores.table.rows.size() << " rows ("
          << scores.zero_repetition_skips
          << " zero-repetition conversations excluded)\n";
    }
    if (config.metrics.count("centrality")) {
      tables.push_back(as_persisted(
          centrality_scores(corpus, config.centrality_endpoints, config.jobs)));
      outputs.write("scores_centrality.tsv",
                    score_table_to_string(tables.back()));
      log << "centrality: " << tables.back().rows.size() << " rows\n";
    }

    ComparisonReport report = build_report(tables, diagnostics,
                                           count_corpus(corpus),
                                           config.aggregation);
    outputs.path("means.tsv");  // register report files for cleanup on error
    outputs.path("correlations.tsv");
    outputs.path("diagnostics.tsv");
    write_report_files(report, outputs.directory());
    const std::string text = render_report_text(report);
    outputs.write("report.txt", text);
    log << '\n' << text;

    outputs.write("manifest.json", manifest_json(config, corpus, utc_now()));
    return 0;
  } catch (const std::exception& error) {
    outputs.discard_all();
    log << "error: " << error.what() << '\n';
    return 1;
  }
}

int run_ingest_check(const std::filesystem::path& input, std::ostream& log) {
  try {
    LoadReport report;
    Corpus corpus = load_corpus(input, &report);
    log << "loaded " << report.loaded << " conversations ("
        << corpus.total_posts() << " posts), skipped "
        << report.skipped.size() << '\n';
    for (const auto& skip : report.skipped) {
      log << "  " << skip.conversation_id << '\t' << skip.error_class << '\t'
          << skip.message << '\n';
    }
    return 0;
  } catch (const std::exception& error) {
    log << "error: " << error.what() << '\n';
    return 1;
  }
}

int run_train(const RunConfig& config, std::ostream& log) {
  OutputSet outputs(config.out_dir);
  try {
    Corpus corpus = acquire_corpus(config, nullptr);
    RbConfig rb_config = config.rb;
    rb_config.train.seed = rb_seed(config);
    PbConfig pb_config = config.pb;
    pb_config.train.seed = pb_seed(config);

    if (config.metrics.count("rb")) {
      RbEval eval;
      TrainedRb model = train_rb(corpus, rb_config, &eval);
      std::ostringstream out;
      save_rb(model, out);
      outputs.write("rb_model.txt", out.str());
      log << "rb: precision " << format_fixed6(eval.precision) << " (tp "
          << eval.tp << ", fp " << eval.fp << ", tn " << eval.tn << ", fn "
          << eval.fn << ")\n";
    }
    if (config.metrics.count("pb")) {
      PbEval eval;
      TrainedPb model = train_pb(corpus, pb_config, &eval);
      std::ostringstream out;
      save_pb(model, out);
      outputs.write("pb_model.txt", out.str());
      log << "pb: precision " << format_fixed6(eval.precision)
          << ", new-author fraction " << format_fixed6(eval.new_fraction)
          << '\n';
    }
    return 0;
  } catch (const std::exception& error) {
    outputs.discard_all();
    log << "error: " << error.what() << '\n';
    return 1;
  }
}

int run_score(const RunConfig& config, const std::filesystem::path& model_dir,
              std::ostream& log) {
  OutputSet outputs(config.out_dir);
  try {
    Corpus corpus = acquire_corpus(config, nullptr);
    if (config.metrics.count("baseline")) {
      outputs.write("scores_baseline.tsv",
                    score_table_to_string(
                        baseline_scores(corpus, config.baseline, config.jobs)));
    }
    if (config.metrics.count("rb")) {
      std::ifstream in(model_dir / "rb_model.txt");
      if (!in)
        throw std::runtime_error("missing model file: " +
                                 (model_dir / "rb_model.txt").string());
      TrainedRb model = load_rb(in);
      outputs.write("scores_rb.tsv",
                    score_table_to_string(
                        rb_scores(corpus, model, config.rb, config.jobs)));
    }
    if (config.metrics.count("pb")) {
      std::ifstream in(model_dir / "pb_model.txt");
      if (!in)
        throw std::runtime_error("missing model file: " +
                                 (model_dir / "pb_model.txt").string());
      TrainedPb model = load_pb(in);
      PbConfig pb_config = config.pb;
      pb_config.max_slots = model.max_slots;
      PbScores scores = pb_scores(corpus, model, pb_config, config.jobs);
      outputs.write("scores_pb.tsv", score_table_to_string(scores.table));
      outputs.write("scores_pb_raw.tsv",
                    score_table_to_string(scores.raw_table));
    }
    if (config.metrics.count("centrality")) {
      outputs.write(
          "scores_centrality.tsv",
          score_table_to_string(centrality_scores(
              corpus, config.centrality_endpoints, config.jobs)));
    }
    log << "scores written to " << outputs.directory().string() << '\n';
    return 0;
  } catch (const std::exception& error) {
    outputs.discard_all();
    log << "error: " << error.what() << '\n';
    return 1;
  }
}

namespace {

Diagnostics read_diagnostics(const std::filesystem::path& file,
                             std::vector<PlatformCount>& counts) {
  Diagnostics diagnostics;
  std::ifstream in(file);
  if (!in) return diagnostics;
  std::map<Platform, PlatformCount> by_platform;
  std::string line;
  while (std::getline(in, line)) {
    auto fields = split_tab(line);
    if (fields.size() != 2 || fields[0] == "key") continue;
    const std::string key(fields[0]);
    double value = 0.0;
    if (!parse_double(fields[1], value)) continue;
    if (key == "rb_precision") diagnostics.rb_precision = value;
    else if (key == "pb_precision") diagnostics.pb_precision = value;
    else if (key == "pb_new_fraction") diagnostics.pb_new_fraction = value;
    else if (key == "pb_zero_repetition_skips")
      diagnostics.pb_zero_repetition_skips = static_cast<std::size_t>(value);
    else if (key.rfind("conversations_", 0) == 0 ||
             key.rfind("posts_", 0) == 0) {
      const bool is_posts = key.rfind("posts_", 0) == 0;
      auto platform = platform_from_string(
          key.substr(key.find('_') + 1));
      if (!platform) continue;
      auto& entry = by_platform[*platform];
      entry.platform = *platform;
      if (is_posts)
        entry.posts = static_cast<std::size_t>(value);
      else
        entry.conversations = static_cast<std::size_t>(value);
    }
  }
  for (const auto& [platform, entry] : by_platform) counts.push_back(entry);
  return diagnostics;
}

}  // namespace

int run_report(const std::filesystem::path& run_dir, Aggregation aggregation,
               std::ostream& log) {
  try {
    std::vector<ScoreTable> tables;
    for (const char* name : {"baseline", "rb", "pb", "centrality"}) {
      const std::string metric(name);
      const auto file = run_dir / ("scores_" + metric + ".tsv");
      std::ifstream in(file);
      if (!in) continue;
      tables.push_back(read_score_table(in, metric));
    }
    if (tables.empty()) {
      throw MetricMissingError("no scores_*.tsv found in " +
                               run_dir.string());
    }
    std::vector<PlatformCount> counts;
    Diagnostics diagnostics =
        read_diagnostics(run_dir / "diagnostics.tsv", counts);
    ComparisonReport report =
        build_report(tables, diagnostics, counts, aggregation);
    write_report_files(report, run_dir);
    const std::string text = render_report_text(report);
    std::ofstream out(run_dir / "report.txt", std::ios::binary);
    out << text;
    log << text;
    return 0;
  } catch (const std::exception& error) {
    log << "error: " << error.what() << '\n';
    return 1;
  }
}

}  // namespace cccp
