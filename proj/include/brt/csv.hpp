#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "brt/error.hpp"
#include "brt/numfmt.hpp"

namespace brt {

struct CsvRow {
  std::size_t line = 0;  // 1-based line in the source
  std::vector<std::string> cells;
};

// Splits one CSV record. Double-quoted cells may contain commas; a doubled
// quote inside quotes is a literal quote. Cells are whitespace-trimmed.
inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back(trim(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.emplace_back(trim(cell));
  return cells;
}

// All non-blank records, header first. Strips a UTF-8 byte-order mark.
inline std::vector<CsvRow> read_csv(std::istream& in) {
  std::vector<CsvRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    rows.push_back({line_no, split_csv_line(line)});
  }
  return rows;
}

inline bool is_missing_token(std::string_view cell) { return cell.empty() || cell == "NA"; }

}  // namespace brt
