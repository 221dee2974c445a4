// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cccp/conversation.hpp"
#include "cccp/corpus.hpp"
#include "cccp/nn.hpp"
#include "cccp/score_table.hpp"

namespace cccp {

struct PbConfig {
  int max_slots = 20;
  std::vector<std::size_t> hidden_widths{64, 64, 32, 32, 16};
  nn::TrainConfig train{0.01, 100, 32, 0};
};

// One next-author prediction task: the first k posts are known, the reply
// target of the (k+1)-th post is known, its author is hidden. Slots order
// participating authors by first appearance; authors beyond max_slots fold
// into NEW. target == max_slots means NEW.
struct PredictionContext {
  std::string conversation_id;
  int prefix_len = 0;
  std::vector<AuthorId> slots;
  std::vector<double> features;  // 3 per slot + 3 global
  int target = 0;
};

inline std::size_t pb_feature_dim(int max_slots) {
  return static_cast<std::size_t>(3 * max_slots + 3);
}

// One context per k in 1..n-1, chronological prefixes.
std::vector<PredictionContext> build_contexts(const ConversationTree& tree,
                                              const PbConfig& config = {});

// Fraction of posts after the first whose author already appeared; in [0,1].
double repetition_probability(const ConversationTree& tree);

struct TrainedPb {
  nn::ModelParams net;
  int max_slots = 20;
};

struct PbEval {
  std::size_t contexts = 0;
  double precision = 0.0;     // argmax class equals target
  double new_fraction = 0.0;  // contexts predicted NEW
};

class EmptyContextsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Six dense layers and a softmax head over max_slots+1 classes, categorical
// cross-entropy. Throws EmptyContextsError when the corpus yields nothing.
TrainedPb train_pb(const Corpus& corpus, const PbConfig& config = {},
                   PbEval* eval = nullptr);

// Class probabilities restricted to the feasible classes of the context (its
// occupied slots plus NEW) and renormalized; unoccupied slots cannot be the
// next author, so their mass is redistributed. Index max_slots is NEW.
std::vector<double> masked_probabilities(const TrainedPb& model,
                                         const PredictionContext& context);

PbEval evaluate_pb(const TrainedPb& model,
                   const std::vector<PredictionContext>& contexts);

struct PbScores {
  ScoreTable table;                       // normalized scores
  ScoreTable raw_table;                   // pre-normalization means
  std::size_t zero_repetition_skips = 0;  // conversations left out of `table`
};

// Raw score per (conversation, author): mean over the conversation's
// contexts of the probability on the author's slot (0 when not slotted).
// Normalized score divides by the conversation's repetition probability;
// conversations with repetition probability 0 are excluded and counted.
PbScores pb_scores(const Corpus& corpus, const TrainedPb& model,
                   const PbConfig& config = {}, int jobs = 1);

// Audit export: conversation_id, prefix_len, slot count, target, features.
void write_contexts(const std::vector<PredictionContext>& contexts,
                    std::ostream& out);

void save_pb(const TrainedPb& model, std::ostream& out);
TrainedPb load_pb(std::istream& in);

}  // namespace cccp
