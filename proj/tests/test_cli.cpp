#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "cli_app.hpp"

using namespace cccp;
namespace fs = std::filesystem;

namespace {

std::string run_help(const std::string& subcommand) {
  cli::CliOptions options;
  auto app = cli::build_cli(options);
  return app->get_subcommand(subcommand)->help();
}

}  // namespace

TEST_CASE("every documented decision flag appears in run --help") {
  const std::string help = run_help("run");
  for (const char* flag :
       {"--input", "--synthetic", "--seed", "--n-conversations",
        "--revisit-rate", "--root-bias", "--cap-per-platform", "--metrics",
        "--path-mode", "--zeta-base", "--theta-base", "--rb-positives",
        "--centrality-endpoints", "--agg", "--jobs", "--out"}) {
    INFO(flag);
    CHECK(help.find(flag) != std::string::npos);
  }
  CHECK(help.find("CCCP_SEED") != std::string::npos);
}

TEST_CASE("parsing converts enum flags and metric lists") {
  cli::CliOptions options;
  auto app = cli::build_cli(options);
  app->parse(
      "run --synthetic --seed 9 --metrics baseline,centrality "
      "--path-mode ancestor-only --rb-positives ancestors "
      "--centrality-endpoints include --agg pooled --platform reddit",
      false);
  cli::finalize(options);
  CHECK(options.run.seed == 9);
  CHECK(options.run.metrics == std::set<std::string>{"baseline", "centrality"});
  CHECK(options.run.baseline.path_mode == PathMode::ancestor_only);
  CHECK(options.run.rb.positives == RbPositives::ancestors);
  CHECK(options.run.centrality_endpoints == EndpointRule::include);
  CHECK(options.run.aggregation == Aggregation::pooled);
  CHECK(options.run.synth.platform == Platform::reddit);
}

TEST_CASE("invalid enum values are rejected at parse time") {
  cli::CliOptions options;
  auto app = cli::build_cli(options);
  CHECK_THROWS_AS(app->parse("run --synthetic --path-mode diagonal", false),
                  CLI::ParseError);
}

TEST_CASE("CCCP_SEED provides the seed fallback") {
  setenv("CCCP_SEED", "4242", 1);
  cli::CliOptions options;
  auto app = cli::build_cli(options);
  app->parse("run --synthetic", false);
  cli::finalize(options);
  CHECK(options.run.seed == 4242);

  // An explicit flag wins over the environment.
  cli::CliOptions explicit_options;
  auto app2 = cli::build_cli(explicit_options);
  app2->parse("run --synthetic --seed 5", false);
  cli::finalize(explicit_options);
  CHECK(explicit_options.run.seed == 5);
  unsetenv("CCCP_SEED");
}

TEST_CASE("training config files apply hyperparameters") {
  const fs::path dir = fs::temp_directory_path() / "cccp_cli_conf";
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "rb.conf");
    out << "# comment\nlearning_rate = 0.125\nepochs = 9\nhidden_units = 5\n";
  }
  {
    std::ofstream out(dir / "pb.conf");
    out << "max_slots = 7\nhidden_widths = 8,4\nepochs = 3\n";
  }
  cli::CliOptions options;
  auto app = cli::build_cli(options);
  app->parse("run --synthetic --rb-config " + (dir / "rb.conf").string() +
                 " --pb-config " + (dir / "pb.conf").string(),
             false);
  cli::finalize(options);
  CHECK(options.run.rb.train.learning_rate == 0.125);
  CHECK(options.run.rb.train.epochs == 9);
  CHECK(options.run.rb.hidden_units == 5);
  CHECK(options.run.pb.max_slots == 7);
  CHECK(options.run.pb.hidden_widths == std::vector<std::size_t>{8, 4});
  CHECK(options.run.pb.train.epochs == 3);
  fs::remove_all(dir);
}

TEST_CASE("the shipped default config files match the built-in defaults") {
  const fs::path configs = fs::path(CCCP_SOURCE_DIR) / "configs";
  cli::CliOptions options;
  auto app = cli::build_cli(options);
  app->parse("run --synthetic --rb-config " +
                 (configs / "rb_train.conf").string() + " --pb-config " +
                 (configs / "pb_train.conf").string(),
             false);
  cli::finalize(options);
  RbConfig rb_defaults;
  PbConfig pb_defaults;
  CHECK(options.run.rb.train.learning_rate == rb_defaults.train.learning_rate);
  CHECK(options.run.rb.train.epochs == rb_defaults.train.epochs);
  CHECK(options.run.rb.hidden_units == rb_defaults.hidden_units);
  CHECK(options.run.rb.distance_buckets == rb_defaults.distance_buckets);
  CHECK(options.run.pb.train.learning_rate == pb_defaults.train.learning_rate);
  CHECK(options.run.pb.train.epochs == pb_defaults.train.epochs);
  CHECK(options.run.pb.max_slots == pb_defaults.max_slots);
  CHECK(options.run.pb.hidden_widths == pb_defaults.hidden_widths);
}

TEST_CASE("synth subcommand writes a loadable corpus") {
  const fs::path out =
      fs::temp_directory_path() / "cccp_cli_synth" / "corpus.tsv";
  fs::create_directories(out.parent_path());
  const std::string out_str = out.string();
  const char* argv[] = {"cccp",           "synth",       "--seed",
                        "3",              "--n-conversations", "5",
                        "--platform",     "twitter",     "--out",
                        out_str.c_str()};
  CHECK(cli::cli_main(10, argv) == 0);
  Corpus corpus = load_corpus(out);
  CHECK(corpus.trees.size() == 5);
  CHECK(corpus.trees[0].platform() == Platform::twitter);
  fs::remove_all(out.parent_path());
}
