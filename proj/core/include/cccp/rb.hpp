// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "cccp/conversation.hpp"
#include "cccp/corpus.hpp"
#include "cccp/nn.hpp"
#include "cccp/score_table.hpp"

namespace cccp {

// Which candidate pairs count as positives: the direct parent only, or every
// foreign ancestor of the replying post.
enum class RbPositives { parent, ancestors };

std::optional<RbPositives> rb_positives_from_string(std::string_view name);
const char* to_string(RbPositives positives);

struct RbConfig {
  RbPositives positives = RbPositives::parent;
  int distance_buckets = 10;  // one-hot 1..N plus an overflow bucket
  std::size_t hidden_units = 16;
  double threshold = 0.5;
  nn::TrainConfig train{0.05, 50, 32, 0};
};

// One candidate (v_i, v_j): v_i is the author's post, v_j an earlier post by
// someone else. Raw feature values; one-hot encoding happens at dataset
// build time because the time feature is scaled by a corpus-level maximum.
struct PairExample {
  std::string conversation_id;
  AuthorId author;
  PostId v_i;
  PostId v_j;
  int reply_distance = 0;          // path distance v_i..v_j
  int root_distance = 0;           // root distance of v_j
  std::int64_t time_delta = 0;     // t(v_i) - t(v_j), seconds
  int label = 0;
};

// Every ordered pair with v_j chronologically before v_i and a different
// author. Positives per config; same-author pairs are excluded entirely.
std::vector<PairExample> build_pairs(const ConversationTree& tree,
                                     const RbConfig& config = {});

struct PairDataset {
  std::vector<PairExample> pairs;
  double max_log_delta = 0.0;  // corpus max of log1p(time_delta)
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

PairDataset build_pair_dataset(const Corpus& corpus,
                               const RbConfig& config = {});

// reply one-hot | root one-hot | scaled time. Dimension 2*(buckets+1)+1.
std::vector<double> encode_pair(const PairExample& pair, double max_log_delta,
                                int distance_buckets);

struct TrainedRb {
  nn::ModelParams net;
  double max_log_delta = 0.0;
  int distance_buckets = 10;
};

struct RbEval {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 0.0;  // tp / (tp + fp), 0 when no predicted positives
  double recall = 0.0;
  double accuracy = 0.0;
};

class DegenerateLabelsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One-hidden-layer sigmoid classifier on the pair dataset; throws
// DegenerateLabelsError unless both labels are present. `eval`, when given,
// receives the training-set confusion at config.threshold.
TrainedRb train_rb(const Corpus& corpus, const RbConfig& config = {},
                   RbEval* eval = nullptr);

double predict_pair(const TrainedRb& model, const PairExample& pair,
                    const RbConfig& config = {});

// Per (conversation, author): mean predicted probability over the author's
// candidate pairs. Authors with no candidate pairs get no row.
ScoreTable rb_scores(const Corpus& corpus, const TrainedRb& model,
                     const RbConfig& config = {}, int jobs = 1);

// Model response per reply-distance bucket, probed with root bucket 2 and
// time feature 0.5: the learned analogue of the baseline's decay table.
std::vector<std::pair<int, double>> distance_embedding(
    const TrainedRb& model, const RbConfig& config = {});

// Audit export: conversation_id, author, v_i, v_j, reply_distance,
// root_distance, time_delta, label.
void write_pairs(const std::vector<PairExample>& pairs, std::ostream& out);

void save_rb(const TrainedRb& model, std::ostream& out);
TrainedRb load_rb(std::istream& in);

}  // namespace cccp
