// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "cccp/centrality.hpp"

#include <map>
#include <set>

#include "cccp/parallel.hpp"

namespace cccp {

std::optional<EndpointRule> endpoint_rule_from_string(std::string_view name) {
  if (name == "exclude") return EndpointRule::exclude;
  if (name == "include") return EndpointRule::include;
  return std::nullopt;
}

const char* to_string(EndpointRule rule) {
  return rule == EndpointRule::exclude ? "exclude" : "include";
}

std::vector<AuthorCentrality> flow_centrality(const ConversationTree& tree,
                                              EndpointRule rule) {
  const std::vector<Flow> flows = enumerate_flows(tree);

  std::map<AuthorId, std::size_t> covered;
  for (std::size_t i = 0; i < tree.size(); ++i)
    covered.emplace(tree.post(i).author, 0);

  for (const Flow& flow : flows) {
    std::set<AuthorId> authors_on_flow;
    const std::size_t begin = rule == EndpointRule::exclude ? 1 : 0;
    const std::size_t end = rule == EndpointRule::exclude
                                ? (flow.nodes.size() > 1 ? flow.nodes.size() - 1 : 0)
                                : flow.nodes.size();
    for (std::size_t p = begin; p < end; ++p)
      authors_on_flow.insert(tree.post(flow.nodes[p]).author);
    for (const AuthorId& author : authors_on_flow) ++covered[author];
  }

  std::vector<AuthorCentrality> result;
  result.reserve(covered.size());
  const double total = static_cast<double>(flows.size());
  for (const auto& [author, count] : covered)
    result.push_back({author, static_cast<double>(count) / total});
  return result;
}

ScoreTable centrality_scores(const Corpus& corpus, EndpointRule rule,
                             int jobs) {
  ScoreTable table;
  table.metric = "centrality";
  std::vector<std::vector<ScoreRow>> per_tree(corpus.trees.size());
  parallel_for(corpus.trees.size(), jobs, [&](std::size_t t) {
    const ConversationTree& tree = corpus.trees[t];
    for (const AuthorCentrality& entry : flow_centrality(tree, rule)) {
      per_tree[t].push_back(ScoreRow{tree.platform(), tree.conversation_id(),
                                     entry.author, entry.value});
    }
  });
  for (auto& rows : per_tree)
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  table.sort_rows();
  return table;
}

}  // namespace cccp
