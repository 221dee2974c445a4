// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "cccp/conversation.hpp"
#include "cccp/corpus.hpp"
#include "cccp/score_table.hpp"

namespace cccp {

// Whether a flow's first and last nodes count towards its author's coverage.
// Excluding them keeps the betweenness reading: a root author is on every
// flow but mediates none of them.
enum class EndpointRule { exclude, include };

std::optional<EndpointRule> endpoint_rule_from_string(std::string_view name);
const char* to_string(EndpointRule rule);

struct AuthorCentrality {
  AuthorId author;
  double value = 0.0;  // covered flows / total flows
};

// Per author, the fraction of conversation flows in which the author holds a
// qualifying node. Every participating author gets an entry; sorted by
// author id.
std::vector<AuthorCentrality> flow_centrality(
    const ConversationTree& tree, EndpointRule rule = EndpointRule::exclude);

ScoreTable centrality_scores(const Corpus& corpus,
                             EndpointRule rule = EndpointRule::exclude,
                             int jobs = 1);

}  // namespace cccp
