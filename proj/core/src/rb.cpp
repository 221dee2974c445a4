// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "cccp/rb.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "cccp/parallel.hpp"
#include "cccp/text.hpp"

namespace cccp {

std::optional<RbPositives> rb_positives_from_string(std::string_view name) {
  if (name == "parent") return RbPositives::parent;
  if (name == "ancestors") return RbPositives::ancestors;
  return std::nullopt;
}

const char* to_string(RbPositives positives) {
  return positives == RbPositives::parent ? "parent" : "ancestors";
}

std::vector<PairExample> build_pairs(const ConversationTree& tree,
                                     const RbConfig& config) {
  std::vector<PairExample> pairs;
  // Posts are chronological, so j < i means v_j was written before v_i.
  for (std::size_t i = 1; i < tree.size(); ++i) {
    const Post& later = tree.post(i);
    for (std::size_t j = 0; j < i; ++j) {
      const Post& earlier = tree.post(j);
      if (earlier.author == later.author) continue;
      PairExample pair;
      pair.conversation_id = tree.conversation_id();
      pair.author = later.author;
      pair.v_i = later.id;
      pair.v_j = earlier.id;
      pair.reply_distance = tree.path_distance(i, j);
      pair.root_distance = tree.root_distance(j);
      pair.time_delta = later.timestamp - earlier.timestamp;
      pair.label = config.positives == RbPositives::parent
                       ? (tree.parent(i) == j ? 1 : 0)
                       : (tree.is_ancestor(j, i) ? 1 : 0);
      pairs.push_back(std::move(pair));
    }
  }
  return pairs;
}

PairDataset build_pair_dataset(const Corpus& corpus, const RbConfig& config) {
  PairDataset dataset;
  for (const auto& tree : corpus.trees) {
    auto pairs = build_pairs(tree, config);
    dataset.pairs.insert(dataset.pairs.end(),
                         std::make_move_iterator(pairs.begin()),
                         std::make_move_iterator(pairs.end()));
  }
  for (const PairExample& pair : dataset.pairs) {
    dataset.max_log_delta =
        std::max(dataset.max_log_delta,
                 std::log1p(static_cast<double>(pair.time_delta)));
    if (pair.label == 1)
      ++dataset.positives;
    else
      ++dataset.negatives;
  }
  return dataset;
}

std::vector<double> encode_pair(const PairExample& pair, double max_log_delta,
                                int distance_buckets) {
  const int buckets = distance_buckets;
  const std::size_t group = static_cast<std::size_t>(buckets) + 1;
  std::vector<double> features(2 * group + 1, 0.0);
  auto bucket_index = [buckets](int distance) {
    // Distances start at 1; everything past the cap shares the overflow slot.
    return static_cast<std::size_t>(
        distance <= buckets ? distance - 1 : buckets);
  };
  features[bucket_index(pair.reply_distance)] = 1.0;
  features[group + bucket_index(pair.root_distance)] = 1.0;
  features[2 * group] =
      max_log_delta > 0.0
          ? std::log1p(static_cast<double>(pair.time_delta)) / max_log_delta
          : 0.0;
  return features;
}

TrainedRb train_rb(const Corpus& corpus, const RbConfig& config,
                   RbEval* eval) {
  PairDataset dataset = build_pair_dataset(corpus, config);
  if (dataset.positives == 0 || dataset.negatives == 0) {
    throw DegenerateLabelsError(
        "pair dataset needs both labels, got " +
        std::to_string(dataset.positives) + " positives and " +
        std::to_string(dataset.negatives) + " negatives");
  }

  std::vector<nn::Sample> samples;
  samples.reserve(dataset.pairs.size());
  for (const PairExample& pair : dataset.pairs) {
    samples.push_back(
        {encode_pair(pair, dataset.max_log_delta, config.distance_buckets),
         {static_cast<double>(pair.label)}});
  }

  TrainedRb model;
  model.max_log_delta = dataset.max_log_delta;
  model.distance_buckets = config.distance_buckets;
  model.net = nn::make_network(samples.front().x.size(),
                               {config.hidden_units, 1}, nn::Activation::relu,
                               nn::Activation::sigmoid, config.train.seed);
  model.net = nn::train(std::move(model.net), samples, nn::Loss::bce,
                        config.train);

  if (eval) {
    RbEval stats;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const bool predicted =
          nn::forward(model.net, samples[i].x)[0] >= config.threshold;
      const bool actual = dataset.pairs[i].label == 1;
      if (predicted && actual) ++stats.tp;
      else if (predicted && !actual) ++stats.fp;
      else if (!predicted && actual) ++stats.fn;
      else ++stats.tn;
    }
    stats.precision =
        stats.tp + stats.fp == 0
            ? 0.0
            : static_cast<double>(stats.tp) / static_cast<double>(stats.tp + stats.fp);
    stats.recall =
        stats.tp + stats.fn == 0
            ? 0.0
            : static_cast<double>(stats.tp) / static_cast<double>(stats.tp + stats.fn);
    stats.accuracy = static_cast<double>(stats.tp + stats.tn) /
                     static_cast<double>(samples.size());
    *eval = stats;
  }
  return model;
}

double predict_pair(const TrainedRb& model, const PairExample& pair,
                    const RbConfig&) {
  return nn::forward(
      model.net,
      encode_pair(pair, model.max_log_delta, model.distance_buckets))[0];
}

ScoreTable rb_scores(const Corpus& corpus, const TrainedRb& model,
                     const RbConfig& config, int jobs) {
  if (model.net.empty()) throw std::invalid_argument("rb_scores: no model");
  ScoreTable table;
  table.metric = "rb";
  std::vector<std::vector<ScoreRow>> per_tree(corpus.trees.size());
  parallel_for(corpus.trees.size(), jobs, [&](std::size_t t) {
    const ConversationTree& tree = corpus.trees[t];
    std::map<AuthorId, std::pair<double, std::size_t>> sums;
    for (const PairExample& pair : build_pairs(tree, config)) {
      auto& slot = sums[pair.author];
      slot.first += predict_pair(model, pair, config);
      ++slot.second;
    }
    for (const auto& [author, sum] : sums) {
      per_tree[t].push_back(ScoreRow{tree.platform(), tree.conversation_id(),
                                     author,
                                     sum.first / static_cast<double>(sum.second)});
    }
  });
  for (auto& rows : per_tree)
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  table.sort_rows();
  return table;
}

std::vector<std::pair<int, double>> distance_embedding(const TrainedRb& model,
                                                       const RbConfig&) {
  if (model.net.empty())
    throw std::invalid_argument("distance_embedding: no model");
  std::vector<std::pair<int, double>> curve;
  const int buckets = model.distance_buckets;
  for (int b = 1; b <= buckets + 1; ++b) {
    PairExample probe;
    probe.reply_distance = b;  // bucket buckets+1 lands in overflow
    probe.root_distance = 2;
    probe.time_delta = 0;
    auto features = encode_pair(probe, model.max_log_delta, buckets);
    features.back() = 0.5;  // reference time feature
    curve.emplace_back(b, nn::forward(model.net, features)[0]);
  }
  return curve;
}

void write_pairs(const std::vector<PairExample>& pairs, std::ostream& out) {
  out << "conversation_id\tauthor\tv_i\tv_j\treply_distance\troot_distance"
         "\ttime_delta\tlabel\n";
  for (const PairExample& pair : pairs) {
    out << pair.conversation_id << '\t' << pair.author << '\t' << pair.v_i
        << '\t' << pair.v_j << '\t' << pair.reply_distance << '\t'
        << pair.root_distance << '\t' << pair.time_delta << '\t' << pair.label
        << '\n';
  }
}

void save_rb(const TrainedRb& model, std::ostream& out) {
  out << "cccp-rb 1\n";
  out << "max_log_delta " << format_g17(model.max_log_delta) << '\n';
  out << "distance_buckets " << model.distance_buckets << '\n';
  nn::save(model.net, out);
}

TrainedRb load_rb(std::istream& in) {
  std::string magic, key;
  int version = 0;
  TrainedRb model;
  in >> magic >> version;
  if (!in || magic != "cccp-rb" || version != 1)
    throw std::runtime_error("rb model file: bad header");
  in >> key >> model.max_log_delta;
  if (!in || key != "max_log_delta")
    throw std::runtime_error("rb model file: missing max_log_delta");
  in >> key >> model.distance_buckets;
  if (!in || key != "distance_buckets")
    throw std::runtime_error("rb model file: missing distance_buckets");
  model.net = nn::load(in);
  return model;
}

}  // namespace cccp
