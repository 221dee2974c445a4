// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "cccp/baseline.hpp"

#include <cmath>
#include <map>

#include "cccp/parallel.hpp"

namespace cccp {

namespace {

// Chronological position comparison; posts are stored sorted, so indices
// order posts in time (ties already broken by id during validation).
inline bool later_than(std::size_t a, std::size_t b) { return a > b; }

double noisy_or(double a, double b) { return a + b - a * b; }

}  // namespace

double zeta(const ConversationTree& tree, const AuthorId& author,
            std::size_t node_j, const BaselineConfig& config) {
  if (node_j >= tree.size())
    throw std::out_of_range("zeta: node index out of range");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (!later_than(i, node_j)) continue;
    if (tree.post(i).author != author) continue;
    auto distance = tree.path_distance(node_j, i, config.path_mode);
    if (!distance) continue;  // unrelated under ancestor-only distance
    sum += std::pow(config.zeta_base, *distance - 1);
    ++count;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double theta(const ConversationTree& tree, std::size_t node_j,
             const BaselineConfig& config) {
  if (node_j >= tree.size())
    throw std::out_of_range("theta: node index out of range");
  return std::pow(config.theta_base, tree.root_distance(node_j) - 1);
}

SeenProbability seen_baseline(const ConversationTree& tree,
                              const AuthorId& author, std::size_t node_j,
                              const BaselineConfig& config) {
  SeenProbability seen;
  seen.author = author;
  seen.node = tree.post(node_j).id;
  seen.theta = theta(tree, node_j, config);
  seen.zeta = tree.post(node_j).author == author
                  ? 1.0
                  : zeta(tree, author, node_j, config);
  seen.combined = noisy_or(seen.zeta, seen.theta);
  return seen;
}

ScoreTable baseline_scores(const Corpus& corpus, const BaselineConfig& config,
                           int jobs) {
  ScoreTable table;
  table.metric = "baseline";
  std::vector<std::vector<ScoreRow>> per_tree(corpus.trees.size());

  parallel_for(corpus.trees.size(), jobs, [&](std::size_t t) {
    const ConversationTree& tree = corpus.trees[t];

    // Last post index per author; posts are chronological.
    std::map<AuthorId, std::size_t> last_post;
    for (std::size_t i = 0; i < tree.size(); ++i)
      last_post[tree.post(i).author] = i;

    for (const auto& [author, last] : last_post) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t j = 0; j < last; ++j) {
        if (tree.post(j).author == author) continue;
        sum += seen_baseline(tree, author, j, config).combined;
        ++count;
      }
      // No foreign post preceded the author's last one: vacuously seen all.
      double score = count == 0 ? 1.0 : sum / static_cast<double>(count);
      per_tree[t].push_back(
          ScoreRow{tree.platform(), tree.conversation_id(), author, score});
    }
  });

  for (auto& rows : per_tree)
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  table.sort_rows();
  return table;
}

}  // namespace cccp
