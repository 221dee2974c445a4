// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "cccp/conversation.hpp"

#include <algorithm>
#include <set>

namespace cccp {

namespace {
constexpr std::size_t kMaxTreeSize = 100;
}

const char* to_string(Platform platform) {
  switch (platform) {
    case Platform::reddit: return "reddit";
    case Platform::twitter: return "twitter";
    case Platform::synthetic: return "synthetic";
  }
  return "unknown";
}

std::optional<Platform> platform_from_string(std::string_view name) {
  if (name == "reddit") return Platform::reddit;
  if (name == "twitter") return Platform::twitter;
  if (name == "synthetic") return Platform::synthetic;
  return std::nullopt;
}

const char* to_string(TreeErrorKind kind) {
  switch (kind) {
    case TreeErrorKind::MissingParent: return "MissingParent";
    case TreeErrorKind::MultipleRoots: return "MultipleRoots";
    case TreeErrorKind::Cycle: return "Cycle";
    case TreeErrorKind::TooLarge: return "TooLarge";
    case TreeErrorKind::TimestampOrderViolation:
      return "TimestampOrderViolation";
    case TreeErrorKind::SingletonTree: return "SingletonTree";
    case TreeErrorKind::DuplicateId: return "DuplicateId";
    case TreeErrorKind::NegativeTimestamp: return "NegativeTimestamp";
  }
  return "unknown";
}

std::optional<PathMode> path_mode_from_string(std::string_view name) {
  if (name == "undirected") return PathMode::undirected;
  if (name == "ancestor-only" || name == "ancestor_only")
    return PathMode::ancestor_only;
  return std::nullopt;
}

const char* to_string(PathMode mode) {
  return mode == PathMode::undirected ? "undirected" : "ancestor-only";
}

ConversationTree ConversationTree::validate(std::vector<Post> posts) {
  if (posts.size() < 2) {
    throw TreeError(TreeErrorKind::SingletonTree,
                    "conversation has fewer than 2 posts");
  }
  if (posts.size() > kMaxTreeSize) {
    throw TreeError(TreeErrorKind::TooLarge,
                    "conversation has " + std::to_string(posts.size()) +
                        " posts, limit is " + std::to_string(kMaxTreeSize));
  }
  const std::string& conversation_id = posts.front().conversation_id;
  for (const Post& post : posts) {
    if (post.conversation_id != conversation_id) {
      throw std::invalid_argument(
          "validate: posts from different conversations ('" + conversation_id +
          "' vs '" + post.conversation_id + "')");
    }
  }

  // Canonical chronological order; ties broken by id so any permutation of
  // the input produces the same tree (or the same error).
  std::sort(posts.begin(), posts.end(), [](const Post& a, const Post& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.id < b.id;
  });

  {
    std::set<PostId> seen;
    std::set<PostId> duplicates;
    for (const Post& post : posts) {
      if (!seen.insert(post.id).second) duplicates.insert(post.id);
    }
    if (!duplicates.empty()) {
      throw TreeError(TreeErrorKind::DuplicateId,
                      "duplicate post id: " + *duplicates.begin());
    }
  }
  for (const Post& post : posts) {
    if (post.timestamp < 0) {
      throw TreeError(TreeErrorKind::NegativeTimestamp,
                      "post " + post.id + " has a negative timestamp");
    }
  }

  ConversationTree tree;
  tree.conversation_id_ = conversation_id;
  tree.platform_ = posts.front().platform;
  tree.posts_ = std::move(posts);
  const std::size_t n = tree.posts_.size();
  tree.index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) tree.index_[tree.posts_[i].id] = i;

  {
    std::set<PostId> missing;
    for (const Post& post : tree.posts_) {
      if (post.parent_id && !tree.index_.count(*post.parent_id))
        missing.insert(*post.parent_id);
    }
    if (!missing.empty()) {
      throw TreeError(TreeErrorKind::MissingParent,
                      "parent not in conversation: " + *missing.begin());
    }
  }

  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (!tree.posts_[i].parent_id) roots.push_back(i);
  }
  if (roots.empty()) {
    // Every post has a resolving parent, so the parent edges close a loop.
    throw TreeError(TreeErrorKind::Cycle, "no root post");
  }
  if (roots.size() > 1) {
    std::string ids;
    for (std::size_t r : roots) {
      if (!ids.empty()) ids += ", ";
      ids += tree.posts_[r].id;
    }
    throw TreeError(TreeErrorKind::MultipleRoots,
                    "multiple parentless posts: " + ids);
  }
  tree.root_ = roots.front();

  tree.parent_.assign(n, npos);
  tree.children_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    if (!tree.posts_[i].parent_id) continue;
    std::size_t p = tree.index_.at(*tree.posts_[i].parent_id);
    tree.parent_[i] = p;
    tree.children_[p].push_back(i);
  }
  // Children arrive in chronological order because posts are sorted.

  tree.depth_.assign(n, 0);
  tree.depth_[tree.root_] = 1;
  std::vector<std::size_t> stack{tree.root_};
  std::size_t reached = 0;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    ++reached;
    for (std::size_t c : tree.children_[v]) {
      tree.depth_[c] = tree.depth_[v] + 1;
      stack.push_back(c);
    }
  }
  if (reached != n) {
    throw TreeError(TreeErrorKind::Cycle,
                    "detached reply loop: " + std::to_string(n - reached) +
                        " posts unreachable from root");
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (tree.parent_[i] == npos) continue;
    const Post& child = tree.posts_[i];
    const Post& parent = tree.posts_[tree.parent_[i]];
    if (child.timestamp <= parent.timestamp) {
      throw TreeError(TreeErrorKind::TimestampOrderViolation,
                      "post " + child.id + " is not later than its parent " +
                          parent.id);
    }
  }
  return tree;
}

std::size_t ConversationTree::index_of(const PostId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw UnknownNodeError(id);
  return it->second;
}

std::size_t ConversationTree::leaf_count() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < posts_.size(); ++i)
    if (children_[i].empty()) ++count;
  return count;
}

int ConversationTree::path_distance(std::size_t u, std::size_t v) const {
  if (u >= posts_.size() || v >= posts_.size())
    throw std::out_of_range("path_distance: node index out of range");
  // Walk the deeper node up until the two meet; depth_ is 1-based.
  std::size_t a = u, b = v;
  int distance = 0;
  while (depth_[a] > depth_[b]) {
    a = parent_[a];
    ++distance;
  }
  while (depth_[b] > depth_[a]) {
    b = parent_[b];
    ++distance;
  }
  while (a != b) {
    a = parent_[a];
    b = parent_[b];
    distance += 2;
  }
  return distance;
}

std::optional<int> ConversationTree::path_distance(std::size_t u,
                                                   std::size_t v,
                                                   PathMode mode) const {
  int d = path_distance(u, v);
  if (mode == PathMode::undirected) return d;
  if (u == v || is_ancestor(u, v) || is_ancestor(v, u)) return d;
  return std::nullopt;
}

bool ConversationTree::is_ancestor(std::size_t ancestor,
                                   std::size_t node) const {
  std::size_t v = node;
  while (parent_[v] != npos) {
    v = parent_[v];
    if (v == ancestor) return true;
  }
  return false;
}

std::span<const Post> ConversationTree::chronological_prefix(
    std::size_t k) const {
  if (k > posts_.size())
    throw std::out_of_range("chronological_prefix: k exceeds tree size");
  return std::span<const Post>(posts_.data(), k);
}

std::vector<Flow> enumerate_flows(const ConversationTree& tree) {
  std::vector<Flow> flows;
  std::vector<std::size_t> path;
  // Iterative DFS keeping the current root path; children are visited in
  // chronological order so the flow list is deterministic.
  struct Frame {
    std::size_t node;
    std::size_t next_child;
  };
  std::vector<Frame> stack{{tree.root_index(), 0}};
  path.push_back(tree.root_index());
  while (!stack.empty()) {
    Frame& frame = stack.back();
    const auto& children = tree.children(frame.node);
    if (children.empty() && frame.next_child == 0) {
      flows.push_back(Flow{path});
      frame.next_child = 1;  // mark emitted
    }
    if (frame.next_child < children.size()) {
      std::size_t child = children[frame.next_child++];
      stack.push_back({child, 0});
      path.push_back(child);
    } else {
      stack.pop_back();
      path.pop_back();
    }
  }
  return flows;
}

}  // namespace cccp
