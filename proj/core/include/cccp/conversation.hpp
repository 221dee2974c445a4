// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cccp {

using AuthorId = std::string;
using PostId = std::string;

enum class Platform { reddit, twitter, synthetic };

const char* to_string(Platform platform);
std::optional<Platform> platform_from_string(std::string_view name);

// One message in a conversation. parent_id is empty only for the root.
struct Post {
  PostId id;
  std::optional<PostId> parent_id;
  AuthorId author;
  std::int64_t timestamp = 0;  // seconds since epoch, UTC
  std::string conversation_id;
  Platform platform = Platform::synthetic;
};

enum class TreeErrorKind {
  MissingParent,
  MultipleRoots,
  Cycle,
  TooLarge,
  TimestampOrderViolation,
  SingletonTree,
  DuplicateId,
  NegativeTimestamp,
};

const char* to_string(TreeErrorKind kind);

class TreeError : public std::runtime_error {
 public:
  TreeError(TreeErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  TreeErrorKind kind() const { return kind_; }

 private:
  TreeErrorKind kind_;
};

// Thrown by node lookups that receive an id not present in the tree.
class UnknownNodeError : public std::out_of_range {
 public:
  explicit UnknownNodeError(const PostId& id)
      : std::out_of_range("unknown node id: " + id) {}
};

// Path distance semantics. `undirected` is the tree metric (edge count of the
// unique path); `ancestor_only` is defined only when one endpoint is an
// ancestor of the other and reports "unrelated" otherwise.
enum class PathMode { undirected, ancestor_only };

std::optional<PathMode> path_mode_from_string(std::string_view name);
const char* to_string(PathMode mode);

// A validated reply tree. Posts are stored in chronological order (timestamp
// ascending, ties broken by id), which fixes one total order used everywhere
// "before"/"after" appears in this library. Immutable after validation and
// safe to share across threads.
class ConversationTree {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  // Checks all structural invariants and builds the index structures.
  // Throws TreeError; the error for a given post set does not depend on the
  // input order (offenders are reported by smallest id).
  static ConversationTree validate(std::vector<Post> posts);

  const std::string& conversation_id() const { return conversation_id_; }
  Platform platform() const { return platform_; }
  std::size_t size() const { return posts_.size(); }

  // Chronological order.
  const std::vector<Post>& posts() const { return posts_; }
  const Post& post(std::size_t index) const { return posts_[index]; }

  std::size_t root_index() const { return root_; }
  const Post& root() const { return posts_[root_]; }

  bool contains(const PostId& id) const { return index_.count(id) > 0; }
  // Throws UnknownNodeError.
  std::size_t index_of(const PostId& id) const;

  // Child indices in chronological order; parent index (npos for root).
  const std::vector<std::size_t>& children(std::size_t index) const {
    return children_[index];
  }
  std::size_t parent(std::size_t index) const { return parent_[index]; }
  bool is_leaf(std::size_t index) const { return children_[index].empty(); }
  std::size_t leaf_count() const;

  // Edge count from root plus one: the root itself is at distance 1.
  int root_distance(std::size_t index) const { return depth_[index]; }
  int root_distance(const PostId& id) const { return depth_[index_of(id)]; }

  // Undirected tree distance in edges; 0 iff u == v.
  int path_distance(std::size_t u, std::size_t v) const;
  int path_distance(const PostId& u, const PostId& v) const {
    return path_distance(index_of(u), index_of(v));
  }

  // Mode-aware variant: nullopt when mode is ancestor_only and neither node
  // is an ancestor of the other.
  std::optional<int> path_distance(std::size_t u, std::size_t v,
                                   PathMode mode) const;

  // True iff `ancestor` lies on the root path of `node` (a node is not its
  // own ancestor).
  bool is_ancestor(std::size_t ancestor, std::size_t node) const;

  // First k posts in chronological order.
  std::span<const Post> chronological_prefix(std::size_t k) const;

 private:
  ConversationTree() = default;

  std::string conversation_id_;
  Platform platform_ = Platform::synthetic;
  std::vector<Post> posts_;
  std::unordered_map<PostId, std::size_t> index_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> parent_;
  std::vector<int> depth_;
  std::size_t root_ = npos;
};

// A root-to-leaf path ("conversation flow"); entries index into tree.posts().
struct Flow {
  std::vector<std::size_t> nodes;
};

// Every root-to-leaf path exactly once, in depth-first order with children
// visited chronologically. The result size equals the tree's leaf count.
std::vector<Flow> enumerate_flows(const ConversationTree& tree);

}  // namespace cccp
