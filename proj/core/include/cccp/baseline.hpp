// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include "cccp/conversation.hpp"
#include "cccp/corpus.hpp"
#include "cccp/score_table.hpp"

namespace cccp {

// Decay bases are the published constants but stay configurable; the method
// itself treats them as assumptions rather than fitted values.
struct BaselineConfig {
  double zeta_base = 0.5;
  double theta_base = 0.25;
  PathMode path_mode = PathMode::undirected;
};

struct SeenProbability {
  AuthorId author;
  PostId node;
  double zeta = 0.0;
  double theta = 0.0;
  double combined = 0.0;
};

// Reply-distance component: the author's posts strictly after node_j in
// chronological order form the witness set; zeta is the mean of
// zeta_base^(distance-1) over that set, 0 when it is empty. In ancestor_only
// mode, posts unrelated to node_j are dropped from the witness set.
double zeta(const ConversationTree& tree, const AuthorId& author,
            std::size_t node_j, const BaselineConfig& config = {});

// Root-distance component: theta_base^(root_distance-1); 1 at the root.
double theta(const ConversationTree& tree, std::size_t node_j,
             const BaselineConfig& config = {});

// Noisy-OR of zeta and theta. An author's own post is seen with certainty
// (zeta forced to 1).
SeenProbability seen_baseline(const ConversationTree& tree,
                              const AuthorId& author, std::size_t node_j,
                              const BaselineConfig& config = {});

// Per (conversation, author): mean seen probability over the foreign posts
// preceding the author's last post. Authors with no such posts score 1.0
// (vacuously saw everything that was there).
ScoreTable baseline_scores(const Corpus& corpus,
                           const BaselineConfig& config = {}, int jobs = 1);

}  // namespace cccp
