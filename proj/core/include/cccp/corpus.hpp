// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cccp/conversation.hpp"

namespace cccp {

struct Corpus {
  std::vector<ConversationTree> trees;
  std::string source;

  std::size_t total_posts() const;
};

enum class IngestErrorKind { FileNotFound, MalformedRecord, EmptyCorpus };

const char* to_string(IngestErrorKind kind);

class IngestError : public std::runtime_error {
 public:
  IngestError(IngestErrorKind kind, const std::string& message,
              std::size_t line = 0)
      : std::runtime_error(message), kind_(kind), line_(line) {}
  IngestErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  IngestErrorKind kind_;
  std::size_t line_;
};

struct SkippedConversation {
  std::string conversation_id;
  std::string error_class;  // TreeErrorKind name, or "MixedPlatform"
  std::string message;
};

struct LoadReport {
  std::size_t loaded = 0;
  std::vector<SkippedConversation> skipped;
};

// Line format: id, parent_id (empty for root), author, timestamp,
// conversation_id, platform — tab-separated, optional header detected by a
// literal "id" in the first field. Conversations failing validation are
// skipped and recorded in the report; an input whose conversations all fail
// raises EmptyCorpus.
Corpus load_corpus(const std::filesystem::path& path,
                   LoadReport* report = nullptr);
Corpus parse_corpus(std::istream& in, const std::string& source,
                    LoadReport* report = nullptr);

// Writer for the same format (always emits the header). load_corpus of the
// output reproduces the corpus exactly.
void write_corpus(const Corpus& corpus, std::ostream& out);
std::string corpus_to_string(const Corpus& corpus);

// Synthetic conversation generator: a seeded preferential-attachment process
// with two dials, the probability that the next post comes from an existing
// participant (revisit_rate) and the probability that it replies to the root
// rather than to one of the 5 most recent posts (root_attachment_bias).
struct SynthConfig {
  int n_conversations = 10;
  int min_size = 2;    // >= 2
  int max_size = 20;   // <= 100
  double root_attachment_bias = 0.3;
  double revisit_rate = 0.3;
  std::uint64_t seed = 0;
  Platform platform = Platform::synthetic;
  std::string id_prefix = "syn";
};

class InvalidConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Deterministic given the config (byte-identical corpora from equal seeds).
// Every generated tree satisfies ConversationTree::validate.
Corpus generate_synthetic(const SynthConfig& config);

// Concatenates corpora; throws InvalidConfigError on duplicate
// conversation ids.
Corpus merge_corpora(std::vector<Corpus> parts, const std::string& source);

// Keeps at most `cap` conversations per platform (first by conversation id).
void cap_per_platform(Corpus& corpus, std::size_t cap);

}  // namespace cccp
