// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "cccp/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "cccp/rng.hpp"
#include "cccp/text.hpp"

namespace cccp {

std::size_t Corpus::total_posts() const {
  std::size_t total = 0;
  for (const auto& tree : trees) total += tree.size();
  return total;
}

const char* to_string(IngestErrorKind kind) {
  switch (kind) {
    case IngestErrorKind::FileNotFound: return "FileNotFound";
    case IngestErrorKind::MalformedRecord: return "MalformedRecord";
    case IngestErrorKind::EmptyCorpus: return "EmptyCorpus";
  }
  return "unknown";
}

namespace {

Post parse_record(const std::vector<std::string_view>& fields,
                  std::size_t line_no) {
  auto malformed = [line_no](const std::string& what) {
    return IngestError(
        IngestErrorKind::MalformedRecord,
        "line " + std::to_string(line_no) + ": " + what, line_no);
  };
  if (fields.size() != 6) {
    throw malformed("expected 6 tab-separated fields, got " +
                    std::to_string(fields.size()));
  }
  Post post;
  post.id = std::string(fields[0]);
  if (post.id.empty()) throw malformed("empty id");
  if (!fields[1].empty()) post.parent_id = std::string(fields[1]);
  post.author = std::string(fields[2]);
  if (post.author.empty()) throw malformed("empty author");
  if (!parse_int64(fields[3], post.timestamp) || post.timestamp < 0) {
    throw malformed("bad timestamp '" + std::string(fields[3]) + "'");
  }
  post.conversation_id = std::string(fields[4]);
  if (post.conversation_id.empty()) throw malformed("empty conversation_id");
  auto platform = platform_from_string(fields[5]);
  if (!platform) {
    throw malformed("unknown platform '" + std::string(fields[5]) + "'");
  }
  post.platform = *platform;
  return post;
}

}  // namespace

Corpus parse_corpus(std::istream& in, const std::string& source,
                    LoadReport* report) {
  // Group records by conversation, preserving first-appearance order so the
  // loaded corpus does not depend on anything but file content.
  std::vector<std::string> order;
  std::map<std::string, std::vector<Post>> groups;

  std::string line;
  std::size_t line_no = 0;
  bool any_record = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tab(line);
    if (line_no == 1 && !fields.empty() && fields[0] == "id") continue;
    Post post = parse_record(fields, line_no);
    auto [it, inserted] = groups.try_emplace(post.conversation_id);
    if (inserted) order.push_back(post.conversation_id);
    it->second.push_back(std::move(post));
    any_record = true;
  }
  if (!any_record) {
    throw IngestError(IngestErrorKind::EmptyCorpus,
                      source + ": no records found");
  }

  Corpus corpus;
  corpus.source = source;
  LoadReport local;
  for (const std::string& conversation_id : order) {
    auto& posts = groups[conversation_id];
    bool mixed = false;
    for (const Post& post : posts) {
      if (post.platform != posts.front().platform) mixed = true;
    }
    if (mixed) {
      local.skipped.push_back({conversation_id, "MixedPlatform",
                               "records disagree on the platform"});
      continue;
    }
    try {
      corpus.trees.push_back(ConversationTree::validate(std::move(posts)));
      ++local.loaded;
    } catch (const TreeError& error) {
      local.skipped.push_back(
          {conversation_id, to_string(error.kind()), error.what()});
    }
  }
  if (corpus.trees.empty()) {
    throw IngestError(IngestErrorKind::EmptyCorpus,
                      source + ": all " + std::to_string(order.size()) +
                          " conversations failed validation");
  }
  if (report) *report = std::move(local);
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, LoadReport* report) {
  std::ifstream in(path);
  if (!in) {
    throw IngestError(IngestErrorKind::FileNotFound,
                      "cannot open " + path.string());
  }
  return parse_corpus(in, path.string(), report);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  out << "id\tparent_id\tauthor\ttimestamp\tconversation_id\tplatform\n";
  for (const auto& tree : corpus.trees) {
    for (const Post& post : tree.posts()) {
      out << post.id << '\t' << (post.parent_id ? *post.parent_id : "") << '\t'
          << post.author << '\t' << post.timestamp << '\t'
          << post.conversation_id << '\t' << to_string(post.platform) << '\n';
    }
  }
}

std::string corpus_to_string(const Corpus& corpus) {
  std::ostringstream out;
  write_corpus(corpus, out);
  return out.str();
}

namespace {

void check_config(const SynthConfig& config) {
  if (config.n_conversations < 1)
    throw InvalidConfigError("n_conversations must be positive");
  if (config.min_size < 2 || config.max_size > 100 ||
      config.min_size > config.max_size)
    throw InvalidConfigError("size range must satisfy 2 <= min <= max <= 100");
  if (config.root_attachment_bias < 0.0 || config.root_attachment_bias > 1.0 ||
      config.revisit_rate < 0.0 || config.revisit_rate > 1.0)
    throw InvalidConfigError("probabilities must lie in [0, 1]");
}

}  // namespace

Corpus generate_synthetic(const SynthConfig& config) {
  check_config(config);
  Rng rng(config.seed);
  Corpus corpus;
  corpus.source = "synthetic(seed=" + std::to_string(config.seed) + ")";
  corpus.trees.reserve(static_cast<std::size_t>(config.n_conversations));

  for (int c = 0; c < config.n_conversations; ++c) {
    char conv_id[64];
    std::snprintf(conv_id, sizeof(conv_id), "%s%05d", config.id_prefix.c_str(),
                  c);
    const int size =
        static_cast<int>(rng.next_int(config.min_size, config.max_size));

    std::vector<Post> posts;
    posts.reserve(static_cast<std::size_t>(size));
    std::vector<AuthorId> participants;
    std::int64_t timestamp =
        1'500'000'000 + static_cast<std::int64_t>(c) * 100'000;
    int next_author = 0;

    auto fresh_author = [&]() {
      char name[32];
      std::snprintf(name, sizeof(name), "a%03d", next_author++);
      participants.emplace_back(name);
      return participants.back();
    };

    // Root by a fresh author.
    Post root;
    root.id = std::string(conv_id) + "-000";
    root.author = fresh_author();
    root.timestamp = timestamp;
    root.conversation_id = conv_id;
    root.platform = config.platform;
    posts.push_back(root);

    for (int k = 1; k < size; ++k) {
      timestamp += rng.next_int(5, 600);
      Post post;
      char pid[80];
      std::snprintf(pid, sizeof(pid), "%s-%03d", conv_id, k);
      post.id = pid;
      post.conversation_id = conv_id;
      post.platform = config.platform;
      post.timestamp = timestamp;
      post.author = rng.next_bernoulli(config.revisit_rate)
                        ? participants[rng.next_index(participants.size())]
                        : fresh_author();
      if (rng.next_bernoulli(config.root_attachment_bias)) {
        post.parent_id = posts.front().id;
      } else {
        // One of the 5 most recent posts.
        std::size_t window = std::min<std::size_t>(5, posts.size());
        std::size_t pick = posts.size() - 1 - rng.next_index(window);
        post.parent_id = posts[pick].id;
      }
      posts.push_back(std::move(post));
    }
    corpus.trees.push_back(ConversationTree::validate(std::move(posts)));
  }
  return corpus;
}

Corpus merge_corpora(std::vector<Corpus> parts, const std::string& source) {
  Corpus merged;
  merged.source = source;
  std::set<std::string> ids;
  for (auto& part : parts) {
    for (auto& tree : part.trees) {
      if (!ids.insert(tree.conversation_id()).second) {
        throw InvalidConfigError("duplicate conversation id across corpora: " +
                                 tree.conversation_id());
      }
      merged.trees.push_back(std::move(tree));
    }
  }
  return merged;
}

void cap_per_platform(Corpus& corpus, std::size_t cap) {
  std::map<Platform, std::size_t> kept;
  std::vector<ConversationTree> trees;
  // Deterministic regardless of corpus order: keep the lexicographically
  // first `cap` conversation ids per platform.
  std::vector<std::size_t> indices(corpus.trees.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  std::stable_sort(indices.begin(), indices.end(),
                   [&](std::size_t a, std::size_t b) {
                     return corpus.trees[a].conversation_id() <
                            corpus.trees[b].conversation_id();
                   });
  std::set<std::size_t> selected;
  for (std::size_t i : indices) {
    if (kept[corpus.trees[i].platform()] < cap) {
      ++kept[corpus.trees[i].platform()];
      selected.insert(i);
    }
  }
  for (std::size_t i = 0; i < corpus.trees.size(); ++i) {
    if (selected.count(i)) trees.push_back(std::move(corpus.trees[i]));
  }
  corpus.trees = std::move(trees);
}

}  // namespace cccp
