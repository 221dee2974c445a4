// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "cli_app.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "cccp/text.hpp"

namespace cccp::cli {

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

// key = value files for the training hyperparameters; the shipped
// configs/*.conf mirror the built-in defaults.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::map<std::string, std::string> values;
  std::string line;
  while (std::getline(in, line)) {
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const auto equals = line.find('=');
    if (equals == std::string::npos) continue;
    values[trim(line.substr(0, equals))] = trim(line.substr(equals + 1));
  }
  return values;
}

double to_double(const std::string& key, const std::string& value) {
  double parsed = 0.0;
  if (!parse_double(value, parsed))
    throw CLI::ValidationError(key, "not a number: " + value);
  return parsed;
}

std::int64_t to_int(const std::string& key, const std::string& value) {
  std::int64_t parsed = 0;
  if (!parse_int64(value, parsed))
    throw CLI::ValidationError(key, "not an integer: " + value);
  return parsed;
}

void apply_rb_config(const std::string& path, RbConfig& config) {
  for (const auto& [key, value] : read_config_file(path)) {
    if (key == "learning_rate")
      config.train.learning_rate = to_double(key, value);
    else if (key == "epochs")
      config.train.epochs = static_cast<int>(to_int(key, value));
    else if (key == "batch_size")
      config.train.batch_size = static_cast<int>(to_int(key, value));
    else if (key == "hidden_units")
      config.hidden_units = static_cast<std::size_t>(to_int(key, value));
    else if (key == "distance_buckets")
      config.distance_buckets = static_cast<int>(to_int(key, value));
    else if (key == "threshold")
      config.threshold = to_double(key, value);
    else
      throw CLI::ValidationError("--rb-config", "unknown key: " + key);
  }
}

void apply_pb_config(const std::string& path, PbConfig& config) {
  for (const auto& [key, value] : read_config_file(path)) {
    if (key == "learning_rate")
      config.train.learning_rate = to_double(key, value);
    else if (key == "epochs")
      config.train.epochs = static_cast<int>(to_int(key, value));
    else if (key == "batch_size")
      config.train.batch_size = static_cast<int>(to_int(key, value));
    else if (key == "max_slots")
      config.max_slots = static_cast<int>(to_int(key, value));
    else if (key == "hidden_widths") {
      config.hidden_widths.clear();
      std::istringstream widths(value);
      std::string token;
      while (std::getline(widths, token, ','))
        config.hidden_widths.push_back(
            static_cast<std::size_t>(to_int(key, trim(token))));
    } else {
      throw CLI::ValidationError("--pb-config", "unknown key: " + key);
    }
  }
}

void add_corpus_flags(CLI::App* cmd, CliOptions& options) {
  cmd->add_option("--input", options.input,
                  "conversation dump (tab-separated records)");
  cmd->add_flag("--synthetic", options.run.synthetic,
                "generate the corpus instead of reading one");
  cmd->add_option("--seed", options.run.seed, "seed for generation and training")
      ->envname("CCCP_SEED");
  cmd->add_option("--n-conversations", options.run.synth.n_conversations,
                  "synthetic: number of conversations");
  cmd->add_option("--size-min", options.run.synth.min_size,
                  "synthetic: minimum posts per conversation");
  cmd->add_option("--size-max", options.run.synth.max_size,
                  "synthetic: maximum posts per conversation");
  cmd->add_option("--revisit-rate", options.run.synth.revisit_rate,
                  "synthetic: probability the next post is by a returning author");
  cmd->add_option("--root-bias", options.run.synth.root_attachment_bias,
                  "synthetic: probability of replying to the root");
  cmd->add_option("--platform", options.platform,
                  "synthetic: platform label for generated posts")
      ->check(CLI::IsMember({"reddit", "twitter", "synthetic"}));
  cmd->add_option("--id-prefix", options.run.synth.id_prefix,
                  "synthetic: conversation id prefix");
  cmd->add_option("--cap-per-platform", options.run.cap_per_platform,
                  "keep at most N conversations per platform");
}

void add_metric_flags(CLI::App* cmd, CliOptions& options) {
  cmd->add_option("--metrics", options.metrics_csv,
                  "comma list of baseline,rb,pb,centrality or 'all'");
  cmd->add_option("--path-mode", options.path_mode,
                  "tree distance used by the baseline decay")
      ->check(CLI::IsMember({"undirected", "ancestor-only"}));
  cmd->add_option("--zeta-base", options.run.baseline.zeta_base,
                  "decay base for the reply-distance component");
  cmd->add_option("--theta-base", options.run.baseline.theta_base,
                  "decay base for the root-distance component");
  cmd->add_option("--rb-positives", options.rb_positives,
                  "which earlier posts count as read-for-sure")
      ->check(CLI::IsMember({"parent", "ancestors"}));
  cmd->add_option("--centrality-endpoints", options.centrality_endpoints,
                  "count flow endpoints towards author coverage")
      ->check(CLI::IsMember({"exclude", "include"}));
  cmd->add_option("--agg", options.agg, "platform aggregation of scores")
      ->check(CLI::IsMember({"twostage", "pooled"}));
  cmd->add_option("--jobs", options.run.jobs,
                  "worker threads for per-conversation computation");
  cmd->add_option("--rb-config", options.rb_config_file,
                  "rb training hyperparameters (key = value file)");
  cmd->add_option("--pb-config", options.pb_config_file,
                  "pb training hyperparameters (key = value file)");
  cmd->add_option("--rb-epochs", options.run.rb.train.epochs,
                  "override rb training epochs");
  cmd->add_option("--rb-lr", options.run.rb.train.learning_rate,
                  "override rb learning rate");
  cmd->add_option("--pb-epochs", options.run.pb.train.epochs,
                  "override pb training epochs");
  cmd->add_option("--pb-lr", options.run.pb.train.learning_rate,
                  "override pb learning rate");
  cmd->add_option("--max-slots", options.run.pb.max_slots,
                  "pb author slots before folding into NEW");
}

}  // namespace

std::unique_ptr<CLI::App> build_cli(CliOptions& options) {
  auto app = std::make_unique<CLI::App>(
      "participation metrics over conversation reply trees");
  app->require_subcommand(1);

  CLI::App* run = app->add_subcommand(
      "run", "load or generate a corpus, compute metrics, write the report");
  add_corpus_flags(run, options);
  add_metric_flags(run, options);
  run->add_option("--out", options.out_dir, "output directory");
  run->add_flag("--export-pairs", options.run.export_pairs,
                "also write the rb training pairs");
  run->add_flag("--export-contexts", options.run.export_contexts,
                "also write the pb prediction contexts");

  CLI::App* synth = app->add_subcommand(
      "synth", "generate a synthetic corpus and write it as records");
  add_corpus_flags(synth, options);
  synth->add_option("--out", options.synth_out,
                    "output file (default: stdout)");

  CLI::App* ingest = app->add_subcommand(
      "ingest-check", "validate a dump and report skipped conversations");
  ingest->add_option("--input", options.input, "conversation dump")
      ->required();

  CLI::App* train = app->add_subcommand(
      "train", "train the rb/pb classifiers and persist the models");
  add_corpus_flags(train, options);
  add_metric_flags(train, options);
  train->add_option("--out", options.out_dir, "model output directory");

  CLI::App* score = app->add_subcommand(
      "score", "apply persisted models and write score tables");
  add_corpus_flags(score, options);
  add_metric_flags(score, options);
  score->add_option("--models", options.models_dir,
                    "directory holding rb_model.txt / pb_model.txt");
  score->add_option("--out", options.out_dir, "score output directory");

  CLI::App* report = app->add_subcommand(
      "report", "re-aggregate persisted score tables in a run directory");
  report->add_option("--dir", options.report_dir, "run directory")->required();
  report->add_option("--agg", options.agg, "platform aggregation of scores")
      ->check(CLI::IsMember({"twostage", "pooled"}));

  return app;
}

void finalize(CliOptions& options) {
  RunConfig& run = options.run;
  if (!options.input.empty()) run.input = options.input;
  run.out_dir = options.out_dir;

  if (options.metrics_csv == "all") {
    run.metrics = kAllMetrics;
  } else {
    run.metrics.clear();
    std::istringstream csv(options.metrics_csv);
    std::string token;
    while (std::getline(csv, token, ',')) {
      token = trim(token);
      if (!token.empty()) run.metrics.insert(token);
    }
  }

  run.baseline.path_mode = *path_mode_from_string(options.path_mode);
  run.rb.positives = *rb_positives_from_string(options.rb_positives);
  run.centrality_endpoints =
      *endpoint_rule_from_string(options.centrality_endpoints);
  run.aggregation = *aggregation_from_string(options.agg);
  run.synth.platform = *platform_from_string(options.platform);

  if (!options.rb_config_file.empty())
    apply_rb_config(options.rb_config_file, run.rb);
  if (!options.pb_config_file.empty())
    apply_pb_config(options.pb_config_file, run.pb);
}

namespace {

int run_synth(const CliOptions& options, std::ostream& log) {
  SynthConfig config = options.run.synth;
  config.seed = options.run.seed;
  Corpus corpus = generate_synthetic(config);
  if (options.synth_out.empty()) {
    write_corpus(corpus, std::cout);
  } else {
    std::ofstream out(options.synth_out, std::ios::binary);
    if (!out) {
      log << "error: cannot write " << options.synth_out << '\n';
      return 1;
    }
    write_corpus(corpus, out);
  }
  log << "generated " << corpus.trees.size() << " conversations ("
      << corpus.total_posts() << " posts)\n";
  return 0;
}

}  // namespace

int dispatch(const CLI::App& app, CliOptions& options, std::ostream& log) {
  const CLI::App* sub = app.get_subcommands().front();
  const std::string& name = sub->get_name();
  if (name == "run") return run_pipeline(options.run, log);
  if (name == "synth") return run_synth(options, log);
  if (name == "ingest-check") return run_ingest_check(options.input, log);
  if (name == "train") return run_train(options.run, log);
  if (name == "score") return run_score(options.run, options.models_dir, log);
  if (name == "report")
    return run_report(options.report_dir,
                      *aggregation_from_string(options.agg), log);
  log << "error: unknown subcommand " << name << '\n';
  return 2;
}

int cli_main(int argc, const char* const* argv) {
  CliOptions options;
  auto app = build_cli(options);
  try {
    app->parse(argc, argv);
    finalize(options);
  } catch (const CLI::ParseError& error) {
    return app->exit(error);
  }
  try {
    return dispatch(*app, options, std::cout);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 1;
  }
}

}  // namespace cccp::cli
