// Test-only reference implementations, deliberately independent of the
// library's index structures: everything here works from raw Post lists via
// breadth-first search and exhaustive enumeration.

#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cccp/conversation.hpp"

namespace oracle {

using cccp::AuthorId;
using cccp::Post;
using cccp::PostId;

inline Post make_post(const std::string& id, const std::string& parent,
                      const std::string& author, std::int64_t t,
                      const std::string& conversation = "c1",
                      cccp::Platform platform = cccp::Platform::synthetic) {
  Post post;
  post.id = id;
  if (!parent.empty()) post.parent_id = parent;
  post.author = author;
  post.timestamp = t;
  post.conversation_id = conversation;
  post.platform = platform;
  return post;
}

// Undirected adjacency over post ids.
inline std::map<PostId, std::vector<PostId>> adjacency(
    const std::vector<Post>& posts) {
  std::map<PostId, std::vector<PostId>> adj;
  for (const Post& post : posts) {
    adj[post.id];
    if (post.parent_id) {
      adj[post.id].push_back(*post.parent_id);
      adj[*post.parent_id].push_back(post.id);
    }
  }
  return adj;
}

// Single-source BFS distances in edges.
inline std::map<PostId, int> bfs_distances(const std::vector<Post>& posts,
                                           const PostId& source) {
  auto adj = adjacency(posts);
  std::map<PostId, int> distance{{source, 0}};
  std::deque<PostId> queue{source};
  while (!queue.empty()) {
    PostId v = queue.front();
    queue.pop_front();
    for (const PostId& w : adj.at(v)) {
      if (distance.count(w)) continue;
      distance[w] = distance[v] + 1;
      queue.push_back(w);
    }
  }
  return distance;
}

inline PostId find_root(const std::vector<Post>& posts) {
  for (const Post& post : posts)
    if (!post.parent_id) return post.id;
  return {};
}

// Recursive depth-first root-to-leaf path enumeration over raw posts, with
// children ordered by (timestamp, id).
inline std::vector<std::vector<PostId>> all_flows(
    const std::vector<Post>& posts) {
  std::map<PostId, std::vector<const Post*>> children;
  for (const Post& post : posts)
    if (post.parent_id) children[*post.parent_id].push_back(&post);
  for (auto& [id, kids] : children) {
    std::sort(kids.begin(), kids.end(), [](const Post* a, const Post* b) {
      if (a->timestamp != b->timestamp) return a->timestamp < b->timestamp;
      return a->id < b->id;
    });
  }
  std::vector<std::vector<PostId>> flows;
  std::vector<PostId> path;
  auto dfs = [&](auto&& self, const PostId& node) -> void {
    path.push_back(node);
    auto it = children.find(node);
    if (it == children.end()) {
      flows.push_back(path);
    } else {
      for (const Post* child : it->second) self(self, child->id);
    }
    path.pop_back();
  };
  dfs(dfs, find_root(posts));
  return flows;
}

// Chronological comparison: (timestamp, id).
inline bool chrono_before(const Post& a, const Post& b) {
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  return a.id < b.id;
}

// Straight-line re-evaluation of the baseline equations by BFS path
// enumeration. zeta: mean of zeta_base^(d-1) over the author's posts after
// node_j; theta: theta_base^(bfs(root, j)); combined: probabilistic union;
// own posts seen with certainty.
struct BaselineOracle {
  double zeta_base = 0.5;
  double theta_base = 0.25;

  double seen(const std::vector<Post>& posts, const AuthorId& author,
              const Post& node_j) const {
    auto distances = bfs_distances(posts, node_j.id);
    double th =
        std::pow(theta_base, distances.at(find_root(posts)));  // rootdist-1
    if (node_j.author == author) return 1.0 + th - 1.0 * th;
    double sum = 0.0;
    int count = 0;
    for (const Post& post : posts) {
      if (post.author != author) continue;
      if (!chrono_before(node_j, post)) continue;
      sum += std::pow(zeta_base, distances.at(post.id) - 1);
      ++count;
    }
    double z = count == 0 ? 0.0 : sum / count;
    return z + th - z * th;
  }

  // mean over foreign posts before the author's last post; 1.0 when none.
  double author_score(const std::vector<Post>& posts,
                      const AuthorId& author) const {
    const Post* last = nullptr;
    for (const Post& post : posts) {
      if (post.author != author) continue;
      if (!last || chrono_before(*last, post)) last = &post;
    }
    double sum = 0.0;
    int count = 0;
    for (const Post& post : posts) {
      if (post.author == author) continue;
      if (!chrono_before(post, *last)) continue;
      sum += seen(posts, author, post);
      ++count;
    }
    return count == 0 ? 1.0 : sum / count;
  }
};

// Interior-coverage flow centrality by explicit flow scan.
inline std::map<AuthorId, double> centrality_oracle(
    const std::vector<Post>& posts, bool include_endpoints = false) {
  auto flows = all_flows(posts);
  std::map<PostId, AuthorId> author_of;
  std::map<AuthorId, int> covered;
  for (const Post& post : posts) {
    author_of[post.id] = post.author;
    covered[post.author];
  }
  for (const auto& flow : flows) {
    std::set<AuthorId> on_flow;
    std::size_t begin = include_endpoints ? 0 : 1;
    std::size_t end = include_endpoints
                          ? flow.size()
                          : (flow.size() > 1 ? flow.size() - 1 : 0);
    for (std::size_t i = begin; i < end; ++i)
      on_flow.insert(author_of.at(flow[i]));
    for (const AuthorId& author : on_flow) ++covered[author];
  }
  std::map<AuthorId, double> result;
  for (const auto& [author, count] : covered)
    result[author] = static_cast<double>(count) / flows.size();
  return result;
}

// Random valid reply trees for property tests. Parent is drawn uniformly
// from existing posts, author from a small pool, timestamps strictly grow.
inline std::vector<Post> random_tree(std::mt19937_64& rng, int size,
                                     int author_pool,
                                     const std::string& conversation = "c1") {
  std::vector<Post> posts;
  std::int64_t t = 1000;
  for (int i = 0; i < size; ++i) {
    std::string author =
        "u" + std::to_string(rng() % static_cast<unsigned>(author_pool));
    std::string parent =
        i == 0 ? "" : "p" + std::to_string(rng() % static_cast<unsigned>(i));
    posts.push_back(
        make_post("p" + std::to_string(i), parent, author, t, conversation));
    t += 1 + static_cast<std::int64_t>(rng() % 100);
  }
  return posts;
}

}  // namespace oracle
