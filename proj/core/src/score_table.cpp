// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "cccp/score_table.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "cccp/text.hpp"

namespace cccp {

void ScoreTable::sort_rows() {
  std::sort(rows.begin(), rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
    return std::tie(a.platform, a.conversation_id, a.author) <
           std::tie(b.platform, b.conversation_id, b.author);
  });
}

void write_score_table(const ScoreTable& table, std::ostream& out) {
  out << "platform\tconversation_id\tauthor\tscore\n";
  for (const ScoreRow& row : table.rows) {
    out << to_string(row.platform) << '\t' << row.conversation_id << '\t'
        << row.author << '\t' << format_fixed6(row.score) << '\n';
  }
}

std::string score_table_to_string(const ScoreTable& table) {
  std::ostringstream out;
  write_score_table(table, out);
  return out.str();
}

ScoreTable read_score_table(std::istream& in, const std::string& metric) {
  ScoreTable table;
  table.metric = metric;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_tab(line);
    if (line_no == 1 && !fields.empty() && fields[0] == "platform") continue;
    if (fields.size() != 4) {
      throw std::runtime_error("score table line " + std::to_string(line_no) +
                               ": expected 4 fields");
    }
    auto platform = platform_from_string(fields[0]);
    double score = 0.0;
    if (!platform || !parse_double(fields[3], score)) {
      throw std::runtime_error("score table line " + std::to_string(line_no) +
                               ": bad platform or score");
    }
    table.rows.push_back(ScoreRow{*platform, std::string(fields[1]),
                                  std::string(fields[2]), score});
  }
  return table;
}

}  // namespace cccp
