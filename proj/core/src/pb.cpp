// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "cccp/pb.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "cccp/parallel.hpp"
#include "cccp/text.hpp"

namespace cccp {

namespace {

// Bounded transforms keep every feature in [0, 1] without corpus-level
// statistics, so contexts are self-contained.
double proximity(int distance) { return std::pow(0.5, distance); }

double recency(std::int64_t seconds) {
  return std::min(1.0, std::log1p(static_cast<double>(seconds)) / 20.0);
}

}  // namespace

std::vector<PredictionContext> build_contexts(const ConversationTree& tree,
                                              const PbConfig& config) {
  const int max_slots = config.max_slots;
  if (max_slots < 1)
    throw std::invalid_argument("build_contexts: max_slots must be >= 1");
  const std::size_t n = tree.size();
  std::vector<PredictionContext> contexts;
  contexts.reserve(n - 1);

  struct SlotState {
    std::size_t posts = 0;
    std::size_t last_index = 0;
  };
  std::vector<SlotState> slots;
  std::vector<AuthorId> slot_authors;
  std::map<AuthorId, int> slot_of;  // first-appearance order, capped

  // Incremental prefix state.
  std::size_t leaf_count = 0;
  int max_depth = 0;
  std::vector<std::size_t> children_in_prefix(n, 0);

  auto admit = [&](std::size_t index) {
    const Post& post = tree.post(index);
    auto it = slot_of.find(post.author);
    if (it == slot_of.end() && static_cast<int>(slots.size()) < max_slots) {
      it = slot_of.emplace(post.author, static_cast<int>(slots.size())).first;
      slots.push_back({});
      slot_authors.push_back(post.author);
    }
    if (it != slot_of.end()) {
      slots[static_cast<std::size_t>(it->second)].posts += 1;
      slots[static_cast<std::size_t>(it->second)].last_index = index;
    }
    std::size_t parent = tree.parent(index);
    if (parent == ConversationTree::npos) {
      leaf_count = 1;
    } else {
      if (children_in_prefix[parent] != 0) ++leaf_count;
      ++children_in_prefix[parent];
    }
    max_depth = std::max(max_depth, tree.root_distance(index));
  };

  admit(0);
  for (std::size_t k = 1; k < n; ++k) {
    const Post& upcoming = tree.post(k);
    // The reply target is known; only the author identity is hidden.
    const std::size_t reply_target = tree.parent(k);
    const std::int64_t now = tree.post(k - 1).timestamp;

    PredictionContext context;
    context.conversation_id = tree.conversation_id();
    context.prefix_len = static_cast<int>(k);
    context.slots = slot_authors;
    context.features.assign(pb_feature_dim(max_slots), 0.0);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const double count_share =
          static_cast<double>(slots[s].posts) / static_cast<double>(k);
      const int distance = tree.path_distance(slots[s].last_index, reply_target);
      const std::int64_t idle = now - tree.post(slots[s].last_index).timestamp;
      context.features[3 * s + 0] = count_share;
      context.features[3 * s + 1] = proximity(distance);
      context.features[3 * s + 2] = recency(idle);
    }
    const std::size_t base = static_cast<std::size_t>(3 * max_slots);
    context.features[base + 0] = static_cast<double>(k) / 100.0;
    context.features[base + 1] = static_cast<double>(max_depth) / 100.0;
    context.features[base + 2] =
        static_cast<double>(leaf_count) / static_cast<double>(k);

    auto it = slot_of.find(upcoming.author);
    context.target = it == slot_of.end() ? max_slots : it->second;
    contexts.push_back(std::move(context));

    admit(k);
  }
  return contexts;
}

double repetition_probability(const ConversationTree& tree) {
  if (tree.size() < 2)
    throw TreeError(TreeErrorKind::SingletonTree,
                    "repetition probability needs >= 2 posts");
  std::map<AuthorId, bool> seen;
  std::size_t repeats = 0;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const AuthorId& author = tree.post(i).author;
    if (i > 0 && seen.count(author)) ++repeats;
    seen[author] = true;
  }
  return static_cast<double>(repeats) / static_cast<double>(tree.size() - 1);
}

TrainedPb train_pb(const Corpus& corpus, const PbConfig& config, PbEval* eval) {
  std::vector<PredictionContext> contexts;
  for (const auto& tree : corpus.trees) {
    auto more = build_contexts(tree, config);
    contexts.insert(contexts.end(), std::make_move_iterator(more.begin()),
                    std::make_move_iterator(more.end()));
  }
  if (contexts.empty())
    throw EmptyContextsError("corpus yields no prediction contexts");

  const std::size_t classes = static_cast<std::size_t>(config.max_slots) + 1;
  std::vector<nn::Sample> samples;
  samples.reserve(contexts.size());
  for (const PredictionContext& context : contexts) {
    std::vector<double> y(classes, 0.0);
    y[static_cast<std::size_t>(context.target)] = 1.0;
    samples.push_back({context.features, std::move(y)});
  }

  TrainedPb model;
  model.max_slots = config.max_slots;
  std::vector<std::size_t> widths = config.hidden_widths;
  widths.push_back(classes);
  model.net =
      nn::make_network(pb_feature_dim(config.max_slots), widths,
                       nn::Activation::relu, nn::Activation::softmax,
                       config.train.seed);
  model.net = nn::train(std::move(model.net), samples, nn::Loss::cce,
                        config.train);

  if (eval) *eval = evaluate_pb(model, contexts);
  return model;
}

std::vector<double> masked_probabilities(const TrainedPb& model,
                                         const PredictionContext& context) {
  std::vector<double> probs = nn::forward(model.net, context.features);
  const std::size_t occupied = context.slots.size();
  const std::size_t new_class = static_cast<std::size_t>(model.max_slots);
  // Unoccupied slots are impossible outcomes for this context; renormalize
  // over the feasible ones so probabilities partition cleanly.
  double mass = probs[new_class];
  for (std::size_t s = 0; s < occupied; ++s) mass += probs[s];
  for (std::size_t c = 0; c < probs.size(); ++c) {
    if (c < occupied || c == new_class)
      probs[c] = probs[c] / mass;
    else
      probs[c] = 0.0;
  }
  return probs;
}

PbEval evaluate_pb(const TrainedPb& model,
                   const std::vector<PredictionContext>& contexts) {
  PbEval eval;
  eval.contexts = contexts.size();
  std::size_t correct = 0;
  std::size_t predicted_new = 0;
  for (const PredictionContext& context : contexts) {
    const std::vector<double> probs = masked_probabilities(model, context);
    const std::size_t argmax = static_cast<std::size_t>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
    if (argmax == static_cast<std::size_t>(context.target)) ++correct;
    if (argmax == static_cast<std::size_t>(model.max_slots)) ++predicted_new;
  }
  if (!contexts.empty()) {
    eval.precision = static_cast<double>(correct) / static_cast<double>(contexts.size());
    eval.new_fraction =
        static_cast<double>(predicted_new) / static_cast<double>(contexts.size());
  }
  return eval;
}

PbScores pb_scores(const Corpus& corpus, const TrainedPb& model,
                   const PbConfig& config, int jobs) {
  if (model.net.empty()) throw std::invalid_argument("pb_scores: no model");
  PbScores result;
  result.table.metric = "pb";
  result.raw_table.metric = "pb_raw";

  struct TreeScores {
    std::vector<ScoreRow> normalized;
    std::vector<ScoreRow> raw;
    bool zero_repetition = false;
  };
  std::vector<TreeScores> per_tree(corpus.trees.size());

  parallel_for(corpus.trees.size(), jobs, [&](std::size_t t) {
    const ConversationTree& tree = corpus.trees[t];
    const auto contexts = build_contexts(tree, config);
    const double total = static_cast<double>(contexts.size());

    std::map<AuthorId, double> sums;
    for (std::size_t i = 0; i < tree.size(); ++i)
      sums.emplace(tree.post(i).author, 0.0);
    for (const PredictionContext& context : contexts) {
      const std::vector<double> probs = masked_probabilities(model, context);
      for (std::size_t s = 0; s < context.slots.size(); ++s)
        sums[context.slots[s]] += probs[s];
    }

    const double repetition = repetition_probability(tree);
    per_tree[t].zero_repetition = repetition == 0.0;
    for (const auto& [author, sum] : sums) {
      const double raw = sum / total;
      per_tree[t].raw.push_back(
          ScoreRow{tree.platform(), tree.conversation_id(), author, raw});
      if (repetition > 0.0) {
        per_tree[t].normalized.push_back(ScoreRow{
            tree.platform(), tree.conversation_id(), author, raw / repetition});
      }
    }
  });

  for (auto& scores : per_tree) {
    if (scores.zero_repetition) ++result.zero_repetition_skips;
    result.raw_table.rows.insert(result.raw_table.rows.end(),
                                 scores.raw.begin(), scores.raw.end());
    result.table.rows.insert(result.table.rows.end(),
                             scores.normalized.begin(),
                             scores.normalized.end());
  }
  result.table.sort_rows();
  result.raw_table.sort_rows();
  return result;
}

void write_contexts(const std::vector<PredictionContext>& contexts,
                    std::ostream& out) {
  out << "conversation_id\tprefix_len\tslots\ttarget\tfeatures\n";
  for (const PredictionContext& context : contexts) {
    out << context.conversation_id << '\t' << context.prefix_len << '\t'
        << context.slots.size() << '\t';
    // A target is either one of the occupied slots or NEW.
    if (static_cast<std::size_t>(context.target) >= context.slots.size()) {
      out << "NEW";
    } else {
      out << context.target;
    }
    out << '\t';
    for (std::size_t i = 0; i < context.features.size(); ++i) {
      if (i) out << ',';
      out << format_fixed6(context.features[i]);
    }
    out << '\n';
  }
}

void save_pb(const TrainedPb& model, std::ostream& out) {
  out << "cccp-pb 1\n";
  out << "max_slots " << model.max_slots << '\n';
  nn::save(model.net, out);
}

TrainedPb load_pb(std::istream& in) {
  std::string magic, key;
  int version = 0;
  TrainedPb model;
  in >> magic >> version;
  if (!in || magic != "cccp-pb" || version != 1)
    throw std::runtime_error("pb model file: bad header");
  in >> key >> model.max_slots;
  if (!in || key != "max_slots")
    throw std::runtime_error("pb model file: missing max_slots");
  model.net = nn::load(in);
  return model;
}

}  // namespace cccp
