// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cccp/conversation.hpp"

namespace cccp {

struct ScoreRow {
  Platform platform = Platform::synthetic;
  std::string conversation_id;
  AuthorId author;
  double score = 0.0;
};

// Per (platform, conversation, author) values for one measure. Rows are kept
// in canonical order (platform, conversation_id, author) so that emitted
// tables are byte-stable regardless of computation order.
struct ScoreTable {
  std::string metric;
  std::vector<ScoreRow> rows;

  void sort_rows();
};

// Tab-separated with a header line; scores at 6 decimal places.
void write_score_table(const ScoreTable& table, std::ostream& out);
std::string score_table_to_string(const ScoreTable& table);

// Reads the format produced by write_score_table (header optional).
ScoreTable read_score_table(std::istream& in, const std::string& metric);

}  // namespace cccp
