#pragma once

// CSV ingestion for the model table and for raw annual series.
//
// Model table: `year,FCPI,MonsDev,MSP,FAO,FD,FWI,AgrilInput,ProteinExp`, one
// row per fiscal year keyed by the calendar year in which it ends (FY07 is the
// year ending March 2007). Missing cells are empty or NA. The response may not
// be missing.
//
// Raw series: one file per source. Annual files start with a `year` column
// followed by named value columns; weight files have the header `item,weight`.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "brt/csv.hpp"
#include "brt/dataset.hpp"
#include "brt/error.hpp"
#include "brt/numfmt.hpp"

namespace brt {

inline const std::vector<std::string>& food_inflation_predictors() {
  static const std::vector<std::string> names = {"MonsDev", "MSP", "FAO", "FD",
                                                 "FWI", "AgrilInput", "ProteinExp"};
  return names;
}

inline std::string fy_label(int year) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "FY%02d", ((year % 100) + 100) % 100);
  return buf;
}

// Column contract for a model table.
struct TableSchema {
  std::string response = "FCPI";
  // Exactly these predictors must appear (any order). Empty means open:
  // every column other than year and the response is a predictor.
  std::vector<std::string> predictors;
  bool contiguous_years = true;

  static TableSchema food_inflation() { return {"FCPI", food_inflation_predictors(), true}; }
  static TableSchema open(std::string response) { return {std::move(response), {}, true}; }
};

inline Dataset load_model_table(std::istream& in,
                                const TableSchema& schema = TableSchema::food_inflation()) {
  const std::vector<CsvRow> rows = read_csv(in);
  if (rows.empty()) throw DataError("missing header row");
  const std::vector<std::string>& header = rows.front().cells;
  if (std::find(header.begin(), header.end(), "year") == header.end()) {
    throw DataError("missing header row: no 'year' column");
  }
  {
    std::set<std::string> seen;
    for (const std::string& h : header) {
      if (!seen.insert(h).second) throw DataError("duplicate column '" + h + "'");
    }
  }
  if (std::find(header.begin(), header.end(), schema.response) == header.end()) {
    throw DataError("missing response column '" + schema.response + "'");
  }

  Dataset d;
  d.response_name = schema.response;
  std::vector<std::size_t> predictor_cols;
  std::size_t year_col = 0;
  std::size_t response_col = 0;
  std::vector<std::string> unknown;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& h = header[c];
    if (h == "year") {
      year_col = c;
    } else if (h == schema.response) {
      response_col = c;
    } else if (schema.predictors.empty() ||
               std::find(schema.predictors.begin(), schema.predictors.end(), h) !=
                   schema.predictors.end()) {
      predictor_cols.push_back(c);
      d.feature_names.push_back(h);
    } else {
      unknown.push_back(h);
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown columns:";
    for (const std::string& u : unknown) msg += " " + u;
    throw DataError(msg);
  }
  std::vector<std::string> absent;
  for (const std::string& p : schema.predictors) {
    if (std::find(d.feature_names.begin(), d.feature_names.end(), p) == d.feature_names.end()) {
      absent.push_back(p);
    }
  }
  if (!absent.empty()) {
    std::string msg = "missing columns:";
    for (const std::string& a : absent) msg += " " + a;
    throw DataError(msg);
  }
  if (d.feature_names.empty()) throw DataError("no predictor columns");

  auto cell_value = [&](const CsvRow& row, std::size_t c) -> double {
    const std::string& cell = row.cells[c];
    if (is_missing_token(cell)) return kMissing;
    auto v = parse_double(cell);
    if (!v || !std::isfinite(*v)) {
      throw DataError("non-numeric value '" + cell + "' at line " + std::to_string(row.line) +
                      ", column " + header[c]);
    }
    return *v;
  };

  std::vector<double> feature_row(predictor_cols.size());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.cells.size() != header.size()) {
      throw DataError("line " + std::to_string(row.line) + " has " +
                      std::to_string(row.cells.size()) + " cells, header has " +
                      std::to_string(header.size()));
    }
    auto year = parse_integer<int>(row.cells[year_col]);
    if (!year) {
      throw DataError("non-numeric value '" + row.cells[year_col] + "' at line " +
                      std::to_string(row.line) + ", column year");
    }
    if (std::find(d.years.begin(), d.years.end(), *year) != d.years.end()) {
      throw DataError("duplicate year " + fy_label(*year) + " at line " + std::to_string(row.line));
    }
    const double y = cell_value(row, response_col);
    if (is_missing(y)) throw DataError("response missing at " + fy_label(*year));
    for (std::size_t c = 0; c < predictor_cols.size(); ++c) {
      feature_row[c] = cell_value(row, predictor_cols[c]);
    }
    d.years.push_back(*year);
    d.response.push_back(y);
    d.features.append_row(feature_row);
  }
  if (d.response.empty()) throw DataError("empty learn sample");

  for (std::size_t i = 1; i < d.years.size(); ++i) {
    const bool ok = schema.contiguous_years ? d.years[i] == d.years[i - 1] + 1
                                            : d.years[i] > d.years[i - 1];
    if (!ok) {
      throw DataError("years must be increasing and contiguous: " + fy_label(d.years[i]) +
                      " follows " + fy_label(d.years[i - 1]));
    }
  }
  return d;
}

inline Dataset load_model_table_file(const std::string& path,
                                     const TableSchema& schema = TableSchema::food_inflation()) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return load_model_table(in, schema);
}

inline void write_model_table(const Dataset& d, std::ostream& out) {
  out << "year," << d.response_name;
  for (const std::string& name : d.feature_names) out << ',' << name;
  out << '\n';
  auto cell = [](double v) { return is_missing(v) ? std::string("NA") : format_double(v); };
  for (std::size_t i = 0; i < d.rows(); ++i) {
    out << (d.years.empty() ? static_cast<int>(i + 1) : d.years[i]) << ',' << cell(d.response[i]);
    for (std::size_t j = 0; j < d.n_features(); ++j) out << ',' << cell(d.features(i, j));
    out << '\n';
  }
}

// Annual values keyed by fiscal year.
using AnnualSeries = std::map<int, double>;

struct AnnualTable {
  std::vector<std::string> columns;
  std::map<int, std::vector<double>> rows;  // year -> one value per column, NaN if missing

  bool has_column(const std::string& name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
  }

  // Non-missing values of one column.
  AnnualSeries column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw DataError("no column '" + name + "'");
    const auto c = static_cast<std::size_t>(it - columns.begin());
    AnnualSeries s;
    for (const auto& [year, values] : rows) {
      if (!is_missing(values[c])) s[year] = values[c];
    }
    return s;
  }
};

// Raw inputs to the feature pipeline, keyed by series name.
struct SeriesTable {
  std::map<std::string, AnnualTable> annual;
  std::map<std::string, std::map<std::string, double>> weights;

  bool contains(const std::string& name) const {
    return annual.count(name) != 0 || weights.count(name) != 0;
  }
};

// Reads one raw series file into `table` under `name`.
inline void load_series_csv(std::istream& in, const std::string& name, SeriesTable& table) {
  const std::vector<CsvRow> rows = read_csv(in);
  if (rows.empty()) throw DataError("series " + name + ": missing header row");
  const std::vector<std::string>& header = rows.front().cells;
  auto where = [&](const CsvRow& row) {
    return "series " + name + ", line " + std::to_string(row.line);
  };
  auto number = [&](const CsvRow& row, std::size_t c) -> double {
    const std::string& cell = row.cells[c];
    if (is_missing_token(cell)) return kMissing;
    auto v = parse_double(cell);
    if (!v || !std::isfinite(*v)) {
      throw DataError("non-numeric value '" + cell + "' at " + where(row) + ", column " + header[c]);
    }
    return *v;
  };

  if (header.size() == 2 && header[0] == "item" && header[1] == "weight") {
    std::map<std::string, double> w;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const CsvRow& row = rows[r];
      if (row.cells.size() != 2) throw DataError(where(row) + ": expected 2 cells");
      const double v = number(row, 1);
      if (is_missing(v) || v < 0.0) throw DataError(where(row) + ": weight must be >= 0");
      if (!w.emplace(row.cells[0], v).second) {
        throw DataError(where(row) + ": duplicate item '" + row.cells[0] + "'");
      }
    }
    table.weights[name] = std::move(w);
    return;
  }

  if (header.empty() || header[0] != "year" || header.size() < 2) {
    throw DataError("series " + name + ": missing header row (expected 'year,...' or 'item,weight')");
  }
  AnnualTable t;
  t.columns.assign(header.begin() + 1, header.end());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.cells.size() != header.size()) {
      throw DataError(where(row) + ": expected " + std::to_string(header.size()) + " cells");
    }
    auto year = parse_integer<int>(row.cells[0]);
    if (!year) throw DataError("non-numeric value '" + row.cells[0] + "' at " + where(row) + ", column year");
    std::vector<double> values;
    for (std::size_t c = 1; c < header.size(); ++c) values.push_back(number(row, c));
    if (!t.rows.emplace(*year, std::move(values)).second) {
      throw DataError("duplicate year " + fy_label(*year) + " in series " + name);
    }
  }
  table.annual[name] = std::move(t);
}

// Every *.csv in `dir`, named by file stem.
inline SeriesTable load_series_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("'" + dir.string() + "' is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  SeriesTable table;
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    load_series_csv(in, path.stem().string(), table);
  }
  return table;
}

}  // namespace brt
