#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "cccp/corpus.hpp"
#include "oracles.hpp"

using namespace cccp;
using oracle::make_post;

namespace {

Corpus corpus_from(const std::string& text, LoadReport* report = nullptr) {
  std::istringstream in(text);
  return parse_corpus(in, "test", report);
}

const char* kTwoConversations =
    "id\tparent_id\tauthor\ttimestamp\tconversation_id\tplatform\n"
    "r1\t\talice\t100\tconv1\treddit\n"
    "a1\tr1\tbob\t110\tconv1\treddit\n"
    "r2\t\tcarol\t200\tconv2\ttwitter\n"
    "a2\tr2\tdan\t210\tconv2\ttwitter\n"
    "b2\ta2\tcarol\t220\tconv2\ttwitter\n";

}  // namespace

TEST_CASE("parse_corpus loads valid conversations") {
  LoadReport report;
  Corpus corpus = corpus_from(kTwoConversations, &report);
  CHECK(corpus.trees.size() == 2);
  CHECK(report.loaded == 2);
  CHECK(report.skipped.empty());
  CHECK(corpus.total_posts() == 5);
  CHECK(corpus.trees[0].platform() == Platform::reddit);
  CHECK(corpus.trees[1].platform() == Platform::twitter);
}

TEST_CASE("header line is optional") {
  Corpus corpus = corpus_from(
      "r1\t\talice\t100\tconv1\treddit\n"
      "a1\tr1\tbob\t110\tconv1\treddit\n");
  CHECK(corpus.trees.size() == 1);
}

TEST_CASE("invalid conversations are skipped with their error class") {
  LoadReport report;
  Corpus corpus = corpus_from(
      std::string(kTwoConversations) +
          "rx\t\teve\t300\tconv3\treddit\n"
          "ax\tmissing\teve\t310\tconv3\treddit\n",
      &report);
  CHECK(corpus.trees.size() == 2);
  REQUIRE(report.skipped.size() == 1);
  CHECK(report.skipped[0].conversation_id == "conv3");
  CHECK(report.skipped[0].error_class == "MissingParent");
}

TEST_CASE("oversized conversations are skipped as TooLarge") {
  std::ostringstream text;
  text << kTwoConversations;
  for (int i = 0; i < 150; ++i) {
    text << "n" << i << '\t' << (i == 0 ? "" : "n" + std::to_string(i - 1))
         << "\tu" << i << '\t' << 1000 + i << "\tbig\treddit\n";
  }
  LoadReport report;
  Corpus corpus = corpus_from(text.str(), &report);
  CHECK(corpus.trees.size() == 2);
  REQUIRE(report.skipped.size() == 1);
  CHECK(report.skipped[0].error_class == "TooLarge");
}

TEST_CASE("malformed records raise with the line number") {
  try {
    corpus_from("r1\t\talice\tnot_a_number\tconv1\treddit\n");
    FAIL("expected IngestError");
  } catch (const IngestError& error) {
    CHECK(error.kind() == IngestErrorKind::MalformedRecord);
    CHECK(error.line() == 1);
  }
  CHECK_THROWS_AS(corpus_from("too\tfew\tfields\n"), IngestError);
}

TEST_CASE("empty input and all-invalid input raise EmptyCorpus") {
  auto kind_of = [](const std::string& text) {
    try {
      corpus_from(text);
    } catch (const IngestError& error) {
      return error.kind();
    }
    return IngestErrorKind::FileNotFound;
  };
  CHECK(kind_of("") == IngestErrorKind::EmptyCorpus);
  CHECK(kind_of("r1\t\talice\t100\tconv1\treddit\n") ==
        IngestErrorKind::EmptyCorpus);  // singleton conversation only
}

TEST_CASE("load_corpus reports missing files") {
  CHECK_THROWS_AS((void)load_corpus("/nonexistent/corpus.tsv"), IngestError);
}

TEST_CASE("write/load round-trip preserves the corpus") {
  Corpus corpus = corpus_from(kTwoConversations);
  std::string serialized = corpus_to_string(corpus);
  Corpus reloaded = corpus_from(serialized);
  CHECK(corpus_to_string(reloaded) == serialized);
  CHECK(reloaded.trees.size() == corpus.trees.size());
}

TEST_CASE("generator is deterministic and produces valid trees") {
  SynthConfig config;
  config.n_conversations = 25;
  config.min_size = 2;
  config.max_size = 30;
  config.seed = 123;
  Corpus a = generate_synthetic(config);
  Corpus b = generate_synthetic(config);
  CHECK(corpus_to_string(a) == corpus_to_string(b));
  CHECK(a.trees.size() == 25);
  for (const auto& tree : a.trees) {
    CHECK(tree.size() >= 2);
    CHECK(tree.size() <= 30);
  }

  config.seed = 124;
  CHECK(corpus_to_string(generate_synthetic(config)) != corpus_to_string(a));
}

TEST_CASE("revisit_rate zero means every author is fresh") {
  SynthConfig config;
  config.n_conversations = 10;
  config.max_size = 20;
  config.revisit_rate = 0.0;
  config.seed = 5;
  for (const auto& tree : generate_synthetic(config).trees) {
    std::set<AuthorId> authors;
    for (const Post& post : tree.posts()) authors.insert(post.author);
    CHECK(authors.size() == tree.size());
  }
}

TEST_CASE("higher revisit_rate raises the repetition share") {
  auto mean_repetition = [](double rate) {
    SynthConfig config;
    config.n_conversations = 200;
    config.min_size = 4;
    config.max_size = 20;
    config.revisit_rate = rate;
    config.seed = 77;
    double total = 0.0;
    Corpus corpus = generate_synthetic(config);
    for (const auto& tree : corpus.trees) {
      std::set<AuthorId> seen;
      int repeats = 0;
      for (std::size_t i = 0; i < tree.size(); ++i) {
        if (i > 0 && seen.count(tree.post(i).author)) ++repeats;
        seen.insert(tree.post(i).author);
      }
      total += static_cast<double>(repeats) / (tree.size() - 1);
    }
    return total / corpus.trees.size();
  };
  CHECK(mean_repetition(0.7) > mean_repetition(0.2));
}

TEST_CASE("generator rejects invalid configs") {
  SynthConfig config;
  config.min_size = 1;
  CHECK_THROWS_AS(generate_synthetic(config), InvalidConfigError);
  config.min_size = 2;
  config.max_size = 101;
  CHECK_THROWS_AS(generate_synthetic(config), InvalidConfigError);
  config.max_size = 50;
  config.revisit_rate = 1.5;
  CHECK_THROWS_AS(generate_synthetic(config), InvalidConfigError);
}

TEST_CASE("merge_corpora rejects duplicate conversation ids") {
  SynthConfig config;
  config.n_conversations = 3;
  config.seed = 1;
  Corpus a = generate_synthetic(config);
  Corpus b = generate_synthetic(config);
  CHECK_THROWS_AS(merge_corpora({a, b}, "merged"), InvalidConfigError);
  config.id_prefix = "other";
  Corpus c = generate_synthetic(config);
  Corpus merged = merge_corpora({a, c}, "merged");
  CHECK(merged.trees.size() == 6);
}

TEST_CASE("cap_per_platform keeps the first ids per platform") {
  SynthConfig reddit_cfg;
  reddit_cfg.n_conversations = 5;
  reddit_cfg.platform = Platform::reddit;
  reddit_cfg.id_prefix = "r";
  reddit_cfg.seed = 9;
  SynthConfig twitter_cfg = reddit_cfg;
  twitter_cfg.platform = Platform::twitter;
  twitter_cfg.id_prefix = "t";
  Corpus merged = merge_corpora(
      {generate_synthetic(reddit_cfg), generate_synthetic(twitter_cfg)},
      "merged");
  cap_per_platform(merged, 2);
  std::map<Platform, int> counts;
  for (const auto& tree : merged.trees) ++counts[tree.platform()];
  CHECK(counts[Platform::reddit] == 2);
  CHECK(counts[Platform::twitter] == 2);
}

TEST_CASE("mixed platforms within one conversation are skipped") {
  LoadReport report;
  Corpus corpus = corpus_from(
      std::string(kTwoConversations) +
          "rm\t\teve\t300\tmixed\treddit\n"
          "am\trm\tfrank\t310\tmixed\ttwitter\n",
      &report);
  CHECK(corpus.trees.size() == 2);
  REQUIRE(report.skipped.size() == 1);
  CHECK(report.skipped[0].error_class == "MixedPlatform");
}
