#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace l2t {

// Calendar date; the year is always known, month and day may be absent
// ("june 2008" carries no day).
struct Date {
  int year = 0;
  std::optional<int> month;
  std::optional<int> day;

  bool operator==(const Date&) const = default;
};

enum class CellKind { Number, Date, Text };

std::string_view cell_kind_name(CellKind kind) noexcept;

// Parsed facets of one cell. `text` is always present (lowercased, trimmed,
// whitespace collapsed); `number`/`date` are present for their kinds, and
// `first_number` whenever the raw text contains a digit.
struct CellValue {
  CellKind kind = CellKind::Text;
  std::optional<double> number;
  std::optional<Date> date;
  std::string text;
  std::optional<double> first_number;

  bool operator==(const CellValue&) const = default;
};

// Total, pure classification of raw cell text: Date, then Number, then Text.
CellValue parse_cell(std::string_view raw);

CellValue make_number(double value);

std::optional<Date> parse_date(std::string_view normalized);
std::optional<double> parse_number(std::string_view normalized);
std::optional<double> extract_first_number(std::string_view normalized);

struct Cell {
  std::string raw;
  CellValue value;
};

// Unvalidated table content as it arrives from a file or request body.
struct TableSource {
  std::string table_id;
  std::string caption;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::optional<std::size_t> subject_column;
};

// Immutable captioned grid. Construct through load_table.
class Table {
 public:
  const std::string& id() const noexcept { return id_; }
  const std::string& caption() const noexcept { return caption_; }
  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t row_count() const noexcept { return row_count_; }
  std::size_t col_count() const noexcept { return columns_.size(); }

  const Cell& cell(std::size_t row, std::size_t col) const {
    return cells_[row * columns_.size() + col];
  }

  // Column used to name rows in built programs (first column by default).
  std::size_t subject_column() const noexcept { return subject_column_; }

  // Matches a header-string argument against the column names: exact
  // normalized match first, then punctuation-insensitive equality, then
  // token containment. Earliest column wins among equal-rank matches.
  std::optional<std::size_t> resolve_column(std::string_view name) const;

  // FNV-1a over caption, header and raw cells; used to deduplicate tables.
  std::uint64_t content_hash() const noexcept { return hash_; }

  TableSource to_source() const;

 private:
  friend Table load_table(TableSource source);
  Table() = default;

  std::string id_;
  std::string caption_;
  std::vector<std::string> columns_;
  std::vector<Cell> cells_;
  std::size_t row_count_ = 0;
  std::size_t subject_column_ = 0;
  std::uint64_t hash_ = 0;
};

// Errors: RaggedRows, EmptyTable.
Table load_table(TableSource source);

// Delimited text: the first non-empty line is the header, every following
// non-empty line a row. The caption comes from a sidecar.
Table load_table_delimited(std::string_view text, std::string caption,
                           std::string table_id, char delimiter = '#');

// An ordered subset of one table's rows. Non-owning: the table must outlive
// the view.
class View {
 public:
  View(const Table& table, std::vector<std::size_t> rows);

  const Table& table() const noexcept { return *table_; }
  const std::vector<std::size_t>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }

  bool operator==(const View& other) const noexcept {
    return table_ == other.table_ && rows_ == other.rows_;
  }

 private:
  const Table* table_;
  std::vector<std::size_t> rows_;
};

View all_rows(const Table& table);

enum class Comparison { Less, Equal, Greater, FuzzyEqual, Incomparable };

std::string_view comparison_name(Comparison c) noexcept;

// Orders two cell values: numbers numerically, dates chronologically (a
// date against a year-like integer compares by year), mixed text against a
// number through its first number; otherwise only (fuzzy) equality is
// decidable and unequal pairs are Incomparable.
Comparison compare_cells(const CellValue& a, const CellValue& b);

// Lowercased tokens with ASCII punctuation removed.
std::vector<std::string> fuzzy_tokens(std::string_view s);

// Equal, FuzzyEqual (contiguous token containment) or Incomparable.
Comparison fuzzy_compare_text(std::string_view a, std::string_view b);

}  // namespace l2t
