#include "l2t/table.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>

#include "l2t/error.hpp"
#include "l2t/text_util.hpp"

namespace l2t {

namespace {

constexpr std::array<std::string_view, 12> kMonthNames = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

std::optional<int> month_from_name(std::string_view tok) {
  if (!tok.empty() && tok.back() == '.') tok.remove_suffix(1);
  if (tok.size() < 3) return std::nullopt;
  for (std::size_t i = 0; i < kMonthNames.size(); ++i) {
    if (tok == kMonthNames[i]) return static_cast<int>(i + 1);
    if (tok.size() <= kMonthNames[i].size() && kMonthNames[i].substr(0, tok.size()) == tok &&
        (tok.size() == 3 || tok == "sept")) {
      return static_cast<int>(i + 1);
    }
  }
  return std::nullopt;
}

std::optional<int> parse_uint(std::string_view s, std::size_t min_len, std::size_t max_len) {
  if (s.size() < min_len || s.size() > max_len) return std::nullopt;
  int v = 0;
  for (char c : s) {
    if (!text::is_digit(c)) return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

std::optional<int> parse_day(std::string_view s) {
  for (std::string_view suffix : {"st", "nd", "rd", "th"}) {
    if (s.size() > 2 && s.substr(s.size() - 2) == suffix) {
      s.remove_suffix(2);
      break;
    }
  }
  auto d = parse_uint(s, 1, 2);
  if (!d || *d < 1 || *d > 31) return std::nullopt;
  return d;
}

std::optional<Date> make_date(int year, std::optional<int> month, std::optional<int> day) {
  if (year < 1 || year > 9999) return std::nullopt;
  if (month && (*month < 1 || *month > 12)) return std::nullopt;
  if (day) {
    if (!month) return std::nullopt;
    std::chrono::year_month_day ymd{std::chrono::year{year},
                                    std::chrono::month{static_cast<unsigned>(*month)},
                                    std::chrono::day{static_cast<unsigned>(*day)}};
    if (!ymd.ok()) return std::nullopt;
  }
  return Date{year, month, day};
}

std::optional<Date> parse_numeric_date(std::string_view s) {
  // year - mm - dd
  if (auto dash1 = s.find('-'); dash1 == 4) {
    auto dash2 = s.find('-', dash1 + 1);
    if (dash2 == std::string_view::npos) return std::nullopt;
    auto y = parse_uint(s.substr(0, 4), 4, 4);
    auto m = parse_uint(s.substr(dash1 + 1, dash2 - dash1 - 1), 1, 2);
    auto d = parse_uint(s.substr(dash2 + 1), 1, 2);
    if (y && m && d) return make_date(*y, *m, *d);
    return std::nullopt;
  }
  // mm / dd / yyyy
  auto slash1 = s.find('/');
  if (slash1 == std::string_view::npos) return std::nullopt;
  auto slash2 = s.find('/', slash1 + 1);
  if (slash2 == std::string_view::npos) return std::nullopt;
  auto m = parse_uint(s.substr(0, slash1), 1, 2);
  auto d = parse_uint(s.substr(slash1 + 1, slash2 - slash1 - 1), 1, 2);
  auto y = parse_uint(s.substr(slash2 + 1), 4, 4);
  if (y && m && d) return make_date(*y, *m, *d);
  return std::nullopt;
}

bool is_ascii_punct(unsigned char c) noexcept {
  return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) ||
         (c >= 123 && c <= 126);
}

bool is_alnum(char c) noexcept {
  return text::is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Removes commas that sit between two digits ("37,100,000" -> "37100000").
std::string strip_digit_separators(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == ',' && i > 0 && i + 1 < s.size() && text::is_digit(s[i - 1]) &&
        text::is_digit(s[i + 1])) {
      continue;
    }
    out.push_back(s[i]);
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  h ^= 0xff;
  h *= kFnvPrime;
}

int three_way(double a, double b) {
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  if (std::fabs(a - b) <= 1e-9 * scale) return 0;
  return a < b ? -1 : 1;
}

Comparison from_int(int c) {
  return c < 0 ? Comparison::Less : (c > 0 ? Comparison::Greater : Comparison::Equal);
}

Comparison flip(Comparison c) {
  switch (c) {
    case Comparison::Less: return Comparison::Greater;
    case Comparison::Greater: return Comparison::Less;
    default: return c;
  }
}

int compare_dates(const Date& a, const Date& b) {
  if (a.year != b.year) return a.year < b.year ? -1 : 1;
  if (!a.month || !b.month) return 0;
  if (*a.month != *b.month) return *a.month < *b.month ? -1 : 1;
  if (!a.day || !b.day) return 0;
  if (*a.day != *b.day) return *a.day < *b.day ? -1 : 1;
  return 0;
}

bool year_like(double v) { return v == std::floor(v) && v >= 1000 && v <= 2999; }

// Non-symmetric core; callers normalize the operand order.
Comparison compare_ordered(const CellValue& a, const CellValue& b) {
  using K = CellKind;
  if (a.kind == K::Number && b.kind == K::Number) {
    return from_int(three_way(*a.number, *b.number));
  }
  if (a.kind == K::Date && b.kind == K::Date) {
    return from_int(compare_dates(*a.date, *b.date));
  }
  if (a.kind == K::Date && b.kind == K::Number) {
    if (year_like(*b.number)) {
      int y = static_cast<int>(*b.number);
      return from_int(a.date->year == y ? 0 : (a.date->year < y ? -1 : 1));
    }
    return fuzzy_compare_text(a.text, b.text);
  }
  if (a.kind == K::Number && b.kind == K::Text) {
    Comparison c = fuzzy_compare_text(a.text, b.text);
    if (c != Comparison::Incomparable) return c;
    if (b.first_number) return from_int(three_way(*a.number, *b.first_number));
    return Comparison::Incomparable;
  }
  return fuzzy_compare_text(a.text, b.text);
}

int kind_rank(CellKind k) {
  switch (k) {
    case CellKind::Date: return 0;
    case CellKind::Number: return 1;
    case CellKind::Text: return 2;
  }
  return 3;
}

}  // namespace

std::string_view cell_kind_name(CellKind kind) noexcept {
  switch (kind) {
    case CellKind::Number: return "number";
    case CellKind::Date: return "date";
    case CellKind::Text: return "text";
  }
  return "text";
}

std::string_view comparison_name(Comparison c) noexcept {
  switch (c) {
    case Comparison::Less: return "Less";
    case Comparison::Equal: return "Equal";
    case Comparison::Greater: return "Greater";
    case Comparison::FuzzyEqual: return "FuzzyEqual";
    case Comparison::Incomparable: return "Incomparable";
  }
  return "Incomparable";
}

std::optional<Date> parse_date(std::string_view normalized) {
  // Numeric forms may be tokenized with spaces around the separators.
  std::string compact;
  bool only_numeric = true;
  for (char c : normalized) {
    if (c == ' ') continue;
    if (!text::is_digit(c) && c != '-' && c != '/') only_numeric = false;
    compact.push_back(c);
  }
  if (only_numeric && !compact.empty()) return parse_numeric_date(compact);

  std::string spaced;
  for (char c : normalized) {
    if (c == ',') {
      spaced += ' ';
    } else {
      spaced += c;
    }
  }
  auto toks = text::split_ws(spaced);
  if (toks.size() == 3) {
    if (auto m = month_from_name(toks[0])) {
      auto d = parse_day(toks[1]);
      auto y = parse_uint(toks[2], 4, 4);
      if (d && y) return make_date(*y, *m, *d);
    }
    if (auto m = month_from_name(toks[1])) {
      auto d = parse_day(toks[0]);
      auto y = parse_uint(toks[2], 4, 4);
      if (d && y) return make_date(*y, *m, *d);
    }
  } else if (toks.size() == 2) {
    if (auto m = month_from_name(toks[0])) {
      if (auto y = parse_uint(toks[1], 4, 4)) return make_date(*y, *m, std::nullopt);
    }
  }
  return std::nullopt;
}

std::optional<double> parse_number(std::string_view normalized) {
  std::string_view s = normalized;
  for (std::string_view sym : {"$", "\xc2\xa3", "\xe2\x82\xac", "\xc2\xa5"}) {
    if (s.substr(0, sym.size()) == sym) {
      s.remove_prefix(sym.size());
      break;
    }
  }
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  if (!s.empty() && s.back() == '%') {
    s.remove_suffix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  }
  if (s.empty()) return std::nullopt;

  std::string digits;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    if (s[0] == '-') digits.push_back('-');
    ++i;
  }
  bool seen_digit = false, seen_point = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (text::is_digit(c)) {
      seen_digit = true;
      digits.push_back(c);
    } else if (c == ',') {
      // Thousands separator: must sit between digits.
      if (!seen_digit || seen_point || i + 1 >= s.size() || !text::is_digit(s[i + 1])) {
        return std::nullopt;
      }
    } else if (c == '.' && !seen_point) {
      seen_point = true;
      digits.push_back(c);
    } else {
      return std::nullopt;
    }
  }
  if (!seen_digit) return std::nullopt;
  if (digits.back() == '.') digits.pop_back();
  if (digits.front() == '.') digits.insert(digits.begin(), '0');
  if (digits.size() > 1 && digits[0] == '-' && digits[1] == '.') digits.insert(1, "0");
  return to_double(digits);
}

std::optional<double> extract_first_number(std::string_view normalized) {
  std::string s = strip_digit_separators(normalized);
  std::size_t i = 0;
  while (i < s.size() && !text::is_digit(s[i])) ++i;
  if (i == s.size()) return std::nullopt;
  std::size_t start = i;
  if (start > 0 && (s[start - 1] == '-' || s[start - 1] == '+') &&
      (start == 1 || !is_alnum(s[start - 2]))) {
    --start;
  }
  while (i < s.size() && text::is_digit(s[i])) ++i;
  if (i + 1 < s.size() && s[i] == '.' && text::is_digit(s[i + 1])) {
    ++i;
    while (i < s.size() && text::is_digit(s[i])) ++i;
  }
  std::string_view num(s.data() + start, i - start);
  if (!num.empty() && num.front() == '+') num.remove_prefix(1);
  return to_double(num);
}

CellValue parse_cell(std::string_view raw) {
  CellValue v;
  v.text = text::collapse_ws(text::to_lower(raw));
  v.first_number = extract_first_number(v.text);
  if (auto d = parse_date(v.text)) {
    v.kind = CellKind::Date;
    v.date = d;
  } else if (auto n = parse_number(v.text)) {
    v.kind = CellKind::Number;
    v.number = n;
  }
  return v;
}

CellValue make_number(double value) {
  CellValue v;
  v.kind = CellKind::Number;
  v.number = value;
  v.text = text::format_number(value);
  v.first_number = value;
  return v;
}

std::vector<std::string> fuzzy_tokens(std::string_view s) {
  std::string cleaned = text::to_lower(s);
  for (char& c : cleaned) {
    if (is_ascii_punct(static_cast<unsigned char>(c))) c = ' ';
  }
  return text::split_ws(cleaned);
}

Comparison fuzzy_compare_text(std::string_view a, std::string_view b) {
  auto ta = fuzzy_tokens(a);
  auto tb = fuzzy_tokens(b);
  if (ta.empty() || tb.empty()) {
    return text::collapse_ws(text::to_lower(a)) == text::collapse_ws(text::to_lower(b))
               ? Comparison::Equal
               : Comparison::Incomparable;
  }
  if (ta == tb) return Comparison::Equal;
  const auto& longer = ta.size() >= tb.size() ? ta : tb;
  const auto& shorter = ta.size() >= tb.size() ? tb : ta;
  auto it = std::search(longer.begin(), longer.end(), shorter.begin(), shorter.end());
  return it != longer.end() ? Comparison::FuzzyEqual : Comparison::Incomparable;
}

Comparison compare_cells(const CellValue& a, const CellValue& b) {
  if (kind_rank(a.kind) <= kind_rank(b.kind)) return compare_ordered(a, b);
  return flip(compare_ordered(b, a));
}

// ---------------------------------------------------------------- Table

std::optional<std::size_t> Table::resolve_column(std::string_view name) const {
  const std::string wanted = text::collapse_ws(text::to_lower(name));
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (text::collapse_ws(text::to_lower(columns_[i])) == wanted) return i;
  }
  std::optional<std::size_t> fuzzy;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    Comparison c = fuzzy_compare_text(columns_[i], name);
    if (c == Comparison::Equal) return i;
    if (c == Comparison::FuzzyEqual && !fuzzy) fuzzy = i;
  }
  return fuzzy;
}

TableSource Table::to_source() const {
  TableSource src;
  src.table_id = id_;
  src.caption = caption_;
  src.columns = columns_;
  src.subject_column = subject_column_;
  src.rows.resize(row_count_);
  for (std::size_t r = 0; r < row_count_; ++r) {
    for (std::size_t c = 0; c < columns_.size(); ++c) src.rows[r].push_back(cell(r, c).raw);
  }
  return src;
}

Table load_table(TableSource source) {
  if (source.rows.empty()) {
    throw Error(ErrorCode::EmptyTable, "table '" + source.table_id + "' has no rows");
  }
  if (source.columns.empty()) {
    throw Error(ErrorCode::EmptyTable, "table '" + source.table_id + "' has no columns");
  }
  const std::size_t cols = source.columns.size();
  for (std::size_t r = 0; r < source.rows.size(); ++r) {
    if (source.rows[r].size() != cols) {
      throw Error(ErrorCode::RaggedRows,
                  "row " + std::to_string(r) + " has " + std::to_string(source.rows[r].size()) +
                      " cells, expected " + std::to_string(cols));
    }
  }
  Table t;
  t.id_ = std::move(source.table_id);
  t.caption_ = text::collapse_ws(source.caption);
  t.columns_.reserve(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    std::string name = text::collapse_ws(source.columns[c]);
    if (name.empty()) name = "column " + std::to_string(c + 1);
    t.columns_.push_back(std::move(name));
  }
  t.row_count_ = source.rows.size();
  t.cells_.reserve(t.row_count_ * cols);
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, t.caption_);
  for (const auto& name : t.columns_) fnv_mix(h, name);
  for (auto& row : source.rows) {
    for (auto& raw : row) {
      std::string cleaned = text::collapse_ws(raw);
      fnv_mix(h, cleaned);
      CellValue value = parse_cell(cleaned);
      t.cells_.push_back(Cell{std::move(cleaned), std::move(value)});
    }
  }
  t.hash_ = h;
  if (source.subject_column && *source.subject_column < cols) {
    t.subject_column_ = *source.subject_column;
  }
  return t;
}

Table load_table_delimited(std::string_view text, std::string caption, std::string table_id,
                           char delimiter) {
  auto split_line = [delimiter](std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      auto pos = line.find(delimiter, start);
      out.push_back(text::trim(line.substr(start, pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    return out;
  };
  TableSource src;
  src.table_id = std::move(table_id);
  src.caption = std::move(caption);
  bool have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line = text::trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty()) continue;
    if (!have_header) {
      src.columns = split_line(line);
      have_header = true;
    } else {
      src.rows.push_back(split_line(line));
    }
  }
  return load_table(std::move(src));
}

// ---------------------------------------------------------------- View

View::View(const Table& table, std::vector<std::size_t> rows)
    : table_(&table), rows_(std::move(rows)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i] >= table.row_count() || (i > 0 && rows_[i - 1] >= rows_[i])) {
      throw std::invalid_argument("view rows must be ascending and in range");
    }
  }
}

View all_rows(const Table& table) {
  std::vector<std::size_t> rows(table.row_count());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return View(table, std::move(rows));
}

}  // namespace l2t
