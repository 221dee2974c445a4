#include <random>
#include <sstream>

#include <doctest.h>

#include "cccp/pb.hpp"
#include "oracles.hpp"

using namespace cccp;
using oracle::make_post;

namespace {

// (A,B)*rounds alternating chain.
std::vector<Post> alternating_chain(int rounds, const std::string& conv) {
  std::vector<Post> posts;
  for (int i = 0; i < 2 * rounds; ++i) {
    posts.push_back(make_post(conv + "-p" + std::to_string(i),
                              i == 0 ? "" : conv + "-p" + std::to_string(i - 1),
                              i % 2 == 0 ? "A" : "B", 10 * i, conv));
  }
  return posts;
}

TrainedPb untrained_model(const PbConfig& config, std::uint64_t seed = 5) {
  TrainedPb model;
  model.max_slots = config.max_slots;
  std::vector<std::size_t> widths = config.hidden_widths;
  widths.push_back(static_cast<std::size_t>(config.max_slots) + 1);
  model.net = nn::make_network(pb_feature_dim(config.max_slots), widths,
                               nn::Activation::relu, nn::Activation::softmax,
                               seed);
  return model;
}

}  // namespace

TEST_CASE("two distinct authors yield one NEW-target context") {
  auto tree = ConversationTree::validate(
      {make_post("r", "", "A", 0), make_post("x", "r", "B", 10)});
  PbConfig config;
  auto contexts = build_contexts(tree, config);
  REQUIRE(contexts.size() == 1);
  CHECK(contexts[0].prefix_len == 1);
  CHECK(contexts[0].slots == std::vector<AuthorId>{"A"});
  CHECK(contexts[0].target == config.max_slots);  // NEW
}

TEST_CASE("A,B,A chain targets NEW then slot zero") {
  auto tree = ConversationTree::validate({make_post("r", "", "A", 0),
                                          make_post("x", "r", "B", 10),
                                          make_post("y", "x", "A", 20)});
  PbConfig config;
  auto contexts = build_contexts(tree, config);
  REQUIRE(contexts.size() == 2);
  CHECK(contexts[0].target == config.max_slots);
  CHECK(contexts[1].target == 0);  // A holds slot 0
  CHECK(contexts[1].slots == std::vector<AuthorId>{"A", "B"});
}

TEST_CASE("authors beyond the slot cap always fold into NEW") {
  std::vector<Post> posts;
  // 22 distinct authors in a chain, then u21 (beyond a 20-slot cap) repeats.
  for (int i = 0; i < 22; ++i) {
    posts.push_back(make_post("p" + std::to_string(i),
                              i == 0 ? "" : "p" + std::to_string(i - 1),
                              "u" + std::to_string(i), 10 * i));
  }
  posts.push_back(make_post("p22", "p21", "u21", 1000));
  auto tree = ConversationTree::validate(posts);
  PbConfig config;
  auto contexts = build_contexts(tree, config);
  REQUIRE(contexts.size() == 22);
  for (const auto& context : contexts) {
    CHECK(context.slots.size() <= 20);
    CHECK(context.target == config.max_slots);  // including u21's repeat
  }
}

TEST_CASE("contexts count n-1 and features stay in bounds") {
  std::mt19937_64 rng(41);
  PbConfig config;
  for (int round = 0; round < 25; ++round) {
    auto posts = oracle::random_tree(rng, 2 + static_cast<int>(rng() % 18), 6);
    auto tree = ConversationTree::validate(posts);
    auto contexts = build_contexts(tree, config);
    CHECK(contexts.size() == tree.size() - 1);
    for (const auto& context : contexts) {
      REQUIRE(context.features.size() == pb_feature_dim(config.max_slots));
      for (double f : context.features) {
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
      }
      CHECK(context.target <= config.max_slots);
    }
  }
}

TEST_CASE("repetition probability endpoints and fractions") {
  CHECK(repetition_probability(ConversationTree::validate(
            {make_post("r", "", "A", 0), make_post("x", "r", "B", 1)})) ==
        doctest::Approx(0.0));
  CHECK(repetition_probability(ConversationTree::validate(
            {make_post("r", "", "A", 0), make_post("x", "r", "A", 1),
             make_post("y", "x", "A", 2)})) == doctest::Approx(1.0));
  // A, B, A, C: only the third post repeats.
  CHECK(repetition_probability(ConversationTree::validate(
            {make_post("r", "", "A", 0), make_post("x", "r", "B", 1),
             make_post("y", "x", "A", 2), make_post("z", "y", "C", 3)})) ==
        doctest::Approx(1.0 / 3.0));
}

TEST_CASE("masked probabilities renormalize over feasible classes") {
  PbConfig config;
  TrainedPb model = untrained_model(config);
  auto tree = ConversationTree::validate({make_post("r", "", "A", 0),
                                          make_post("x", "r", "B", 10),
                                          make_post("y", "x", "A", 20)});
  for (const auto& context : build_contexts(tree, config)) {
    auto probs = masked_probabilities(model, context);
    double sum = 0.0;
    for (std::size_t c = 0; c < probs.size(); ++c) {
      sum += probs[c];
      const bool feasible = c < context.slots.size() ||
                            c == static_cast<std::size_t>(config.max_slots);
      if (!feasible) CHECK(probs[c] == 0.0);
    }
    CHECK(std::fabs(sum - 1.0) <= 1e-9);
  }
}

TEST_CASE("raw scores plus NEW mass partition unity per conversation") {
  SynthConfig synth;
  synth.n_conversations = 15;
  synth.min_size = 3;
  synth.max_size = 25;
  synth.revisit_rate = 0.5;
  synth.seed = 31;
  Corpus corpus = generate_synthetic(synth);

  PbConfig config;
  TrainedPb model = untrained_model(config);  // algebra holds untrained
  PbScores scores = pb_scores(corpus, model, config);

  for (const auto& tree : corpus.trees) {
    auto contexts = build_contexts(tree, config);
    double new_mass = 0.0;
    for (const auto& context : contexts)
      new_mass +=
          masked_probabilities(model, context)[static_cast<std::size_t>(
              config.max_slots)];
    new_mass /= static_cast<double>(contexts.size());

    double author_mass = 0.0;
    for (const auto& row : scores.raw_table.rows)
      if (row.conversation_id == tree.conversation_id())
        author_mass += row.score;
    CHECK(author_mass + new_mass == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("zero-repetition conversations are excluded from normalization") {
  Corpus corpus;
  corpus.trees.push_back(ConversationTree::validate(alternating_chain(3, "rep")));
  corpus.trees.push_back(ConversationTree::validate(
      {make_post("d0", "", "X", 0, "distinct"),
       make_post("d1", "d0", "Y", 10, "distinct"),
       make_post("d2", "d1", "Z", 20, "distinct")}));
  PbConfig config;
  TrainedPb model = untrained_model(config);
  PbScores scores = pb_scores(corpus, model, config);
  CHECK(scores.zero_repetition_skips == 1);
  for (const auto& row : scores.table.rows)
    CHECK(row.conversation_id == "rep");
  bool raw_has_distinct = false;
  for (const auto& row : scores.raw_table.rows)
    raw_has_distinct |= row.conversation_id == "distinct";
  CHECK(raw_has_distinct);
}

TEST_CASE("alternating chains score near the next-post frequencies") {
  Corpus corpus;
  for (int c = 0; c < 50; ++c)
    corpus.trees.push_back(
        ConversationTree::validate(alternating_chain(5, "c" + std::to_string(c))));

  PbConfig config;
  config.train.epochs = 150;
  config.train.learning_rate = 0.05;
  config.train.seed = 7;
  PbEval eval;
  TrainedPb model = train_pb(corpus, config, &eval);
  PbScores scores = pb_scores(corpus, model, config);

  // 9 contexts per chain: NEW once, A next 4 times, B next 4 times.
  for (const auto& row : scores.raw_table.rows)
    CHECK(row.score == doctest::Approx(4.0 / 9.0).epsilon(0.2));
  CHECK(eval.precision > 0.6);
}

TEST_CASE("training on fresh-author corpora predicts NEW dominantly") {
  SynthConfig synth;
  synth.n_conversations = 50;
  synth.min_size = 3;
  synth.max_size = 15;
  synth.revisit_rate = 0.05;
  synth.seed = 13;
  Corpus corpus = generate_synthetic(synth);

  PbConfig config;
  config.train.epochs = 40;
  config.train.seed = 3;
  PbEval eval;
  train_pb(corpus, config, &eval);
  CHECK(eval.new_fraction >= 0.8);
}

TEST_CASE("training is deterministic and rejects empty corpora") {
  Corpus empty;
  CHECK_THROWS_AS(train_pb(empty), EmptyContextsError);

  Corpus corpus;
  for (int c = 0; c < 5; ++c)
    corpus.trees.push_back(
        ConversationTree::validate(alternating_chain(3, "c" + std::to_string(c))));
  PbConfig config;
  config.train.epochs = 10;
  auto run = [&] {
    std::ostringstream out;
    save_pb(train_pb(corpus, config), out);
    return out.str();
  };
  CHECK(run() == run());
}

TEST_CASE("pb model save/load round-trips") {
  Corpus corpus;
  corpus.trees.push_back(ConversationTree::validate(alternating_chain(4, "c0")));
  PbConfig config;
  config.train.epochs = 5;
  TrainedPb model = train_pb(corpus, config);
  std::ostringstream out;
  save_pb(model, out);
  std::istringstream in(out.str());
  TrainedPb reloaded = load_pb(in);
  CHECK(reloaded.max_slots == model.max_slots);
  std::ostringstream again;
  save_pb(reloaded, again);
  CHECK(again.str() == out.str());
}

TEST_CASE("context export marks NEW targets") {
  auto tree = ConversationTree::validate(
      {make_post("r", "", "A", 0), make_post("x", "r", "B", 10)});
  std::ostringstream out;
  write_contexts(build_contexts(tree), out);
  CHECK(out.str().find("\tNEW\t") != std::string::npos);
}
