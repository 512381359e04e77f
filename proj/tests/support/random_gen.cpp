#include "random_gen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <regex>

namespace l2t::testing {

std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& choose(Rng& rng, const std::vector<T>& v) {
  return v[pick(rng, v.size())];
}

// ------------------------------------------------------------ untyped

namespace {

const std::vector<std::string> kNamePool = {"eq",     "count", "filter_eq", "hop", "and",
                                            "argmax", "f",     "g_2",       "nth_max"};
const std::vector<std::string> kTokenPool = {"all_rows", "africa", "middle", "east", "1962",
                                             "3.5",      "(a)",    "-",      "$5",   "45%",
                                             "o'neil",   "x/y",    "n/a",    "1,000", "true"};

Node random_node(Rng& rng, int depth) {
  if (depth <= 1 || coin(rng, 0.35)) {
    std::size_t n = 1 + pick(rng, 3);
    std::string text;
    for (std::size_t i = 0; i < n; ++i) text += (i ? " " : "") + choose(rng, kTokenPool);
    return Node::text(text);
  }
  std::size_t arity = 1 + pick(rng, 3);
  std::vector<Node> kids;
  for (std::size_t i = 0; i < arity; ++i) kids.push_back(random_node(rng, depth - 1));
  return Node::function(choose(rng, kNamePool), std::move(kids));
}

}  // namespace

Ast random_ast(Rng& rng, int max_depth) {
  std::size_t arity = 1 + pick(rng, 3);
  std::vector<Node> kids;
  for (std::size_t i = 0; i < arity; ++i) kids.push_back(random_node(rng, max_depth - 1));
  return Ast{Node::function(choose(rng, kNamePool), std::move(kids))};
}

// ------------------------------------------------------------ tables

namespace {

const std::vector<std::string> kRowNames = {"alpha", "bravo", "charlie", "delta", "echo",
                                            "foxtrot", "golf", "hotel", "india", "juliet"};
const std::vector<std::string> kColumnNames = {"score", "date", "color", "points", "place", "shade"};
const std::vector<std::string> kColors = {"red", "green", "blue", "red green", "dark blue",
                                          "green red"};
const char* kMonths[] = {"january", "february", "march",     "april",   "may",      "june",
                         "july",    "august",   "september", "october", "november", "december"};

std::string format_num(double v) {
  char buf[32];
  if (v == std::floor(v)) {
    std::snprintf(buf, sizeof buf, "%d", static_cast<int>(v));
  } else {
    std::snprintf(buf, sizeof buf, "%.1f", v);
  }
  return buf;
}

std::string iso_date(int y, int m, int d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
  return buf;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + " ") {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

TypedCell num_cell(double v) {
  TypedCell c;
  c.kind = Kind::Num;
  c.num = v;
  c.raw = format_num(v);
  return c;
}

TypedCell date_cell(int y, int m, int d, bool iso) {
  TypedCell c;
  c.kind = Kind::Date;
  c.year = y;
  c.month = m;
  c.day = d;
  c.raw = iso ? iso_date(y, m, d)
              : std::string(kMonths[m - 1]) + " " + std::to_string(d) + " , " + std::to_string(y);
  return c;
}

TypedCell text_cell(const std::string& s) {
  TypedCell c;
  c.kind = Kind::Text;
  c.tokens = split(s);
  c.raw = s;
  return c;
}

TypedCell random_cell(Rng& rng, Kind k) {
  switch (k) {
    case Kind::Num: {
      double v = static_cast<double>(pick(rng, 31));
      if (coin(rng, 0.2)) v += 0.5;
      return num_cell(v);
    }
    case Kind::Date:
      return date_cell(1990 + static_cast<int>(pick(rng, 6)), 1 + static_cast<int>(pick(rng, 12)),
                       1 + static_cast<int>(pick(rng, 28)), coin(rng));
    case Kind::Text: return text_cell(choose(rng, kColors));
  }
  return text_cell("red");
}

}  // namespace

GenTable random_table(Rng& rng, std::size_t max_rows, std::size_t max_cols) {
  GenTable g;
  std::size_t rows = 1 + pick(rng, max_rows);
  std::size_t cols = 2 + pick(rng, std::max<std::size_t>(1, max_cols - 1));
  std::vector<std::string> names = kRowNames;
  std::shuffle(names.begin(), names.end(), rng);
  std::vector<std::string> colnames = kColumnNames;
  std::shuffle(colnames.begin(), colnames.end(), rng);

  g.columns.push_back("name");
  g.kinds.push_back(Kind::Text);
  for (std::size_t c = 1; c < cols; ++c) {
    g.columns.push_back(colnames[c - 1]);
    g.kinds.push_back(static_cast<Kind>(pick(rng, 3)));
  }
  TableSource src;
  src.table_id = "random";
  src.caption = "random table";
  src.columns = g.columns;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<TypedCell> row;
    std::vector<std::string> raw;
    row.push_back(text_cell(names[r]));
    for (std::size_t c = 1; c < cols; ++c) row.push_back(random_cell(rng, g.kinds[c]));
    for (const auto& cell : row) raw.push_back(cell.raw);
    g.cells.push_back(std::move(row));
    src.rows.push_back(std::move(raw));
  }
  g.table = std::make_shared<const Table>(load_table(std::move(src)));
  return g;
}

TypedCell random_literal(Rng& rng, const GenTable& t, std::size_t col) {
  if (col == 0) return text_cell(choose(rng, kRowNames));
  TypedCell lit = coin(rng, 0.6) ? t.cells[pick(rng, t.cells.size())][col] : random_cell(rng, t.kinds[col]);
  if (lit.kind == Kind::Date) lit.raw = iso_date(lit.year, lit.month, lit.day);
  return lit;
}

std::vector<std::size_t> columns_of(const GenTable& t, Kind k) {
  std::vector<std::size_t> out;
  for (std::size_t c = 1; c < t.kinds.size(); ++c) {
    if (t.kinds[c] == k) out.push_back(c);
  }
  return out;
}

// ------------------------------------------------------------ oracle

namespace {

enum class Cmp { Less, Equal, Fuzzy, Greater, Incomparable };

bool contains_run(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > hay.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + i)) return true;
  }
  return false;
}

long days(const TypedCell& c) {
  using namespace std::chrono;
  return sys_days(year{c.year} / month{static_cast<unsigned>(c.month)} / day{static_cast<unsigned>(c.day)})
      .time_since_epoch()
      .count();
}

Cmp compare(const TypedCell& a, const TypedCell& b) {
  if (a.kind != b.kind) return Cmp::Incomparable;
  switch (a.kind) {
    case Kind::Num: {
      double tol = 1e-9 * std::max(std::fabs(a.num), std::fabs(b.num));
      if (std::fabs(a.num - b.num) <= tol) return Cmp::Equal;
      return a.num < b.num ? Cmp::Less : Cmp::Greater;
    }
    case Kind::Date: {
      long x = days(a), y = days(b);
      return x == y ? Cmp::Equal : x < y ? Cmp::Less : Cmp::Greater;
    }
    case Kind::Text:
      if (a.tokens == b.tokens) return Cmp::Equal;
      if (contains_run(a.tokens, b.tokens) || contains_run(b.tokens, a.tokens)) return Cmp::Fuzzy;
      return Cmp::Incomparable;
  }
  return Cmp::Incomparable;
}

bool equalish(Cmp c) { return c == Cmp::Equal || c == Cmp::Fuzzy; }

TypedCell literal_of(const std::string& s) {
  static const std::regex iso(R"((\d{4})-(\d{2})-(\d{2}))");
  static const std::regex number(R"(-?\d+(\.\d+)?)");
  std::smatch m;
  if (std::regex_match(s, m, iso)) {
    return date_cell(std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]), true);
  }
  if (std::regex_match(s, number)) {
    TypedCell c = num_cell(std::stod(s));
    c.raw = s;
    return c;
  }
  return text_cell(s);
}

struct Fail {
  ErrorCode code;
};

class Oracle {
 public:
  explicit Oracle(const GenTable& t) : t_(t) {}

  OracleValue run(const Node& n) {
    try {
      return eval(n);
    } catch (const Fail& f) {
      return OracleError{f.code};
    }
  }

 private:
  using V = std::variant<bool, TypedCell, std::size_t, std::vector<std::size_t>>;

  std::size_t column(const Node& n) const {
    for (std::size_t c = 0; c < t_.columns.size(); ++c) {
      if (t_.columns[c] == n.label) return c;
    }
    throw Fail{ErrorCode::ColumnNotFound};
  }

  std::vector<std::size_t> view(const Node& n) {
    if (n.is_text()) {
      std::vector<std::size_t> all(t_.cells.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      return all;
    }
    return std::get<std::vector<std::size_t>>(to_v(eval(n)));
  }

  TypedCell scalar(const Node& n) {
    if (n.is_text()) return literal_of(n.label);
    return std::get<TypedCell>(to_v(eval(n)));
  }

  static V to_v(OracleValue v) {
    return std::visit(
        [](auto&& x) -> V {
          if constexpr (std::is_same_v<std::decay_t<decltype(x)>, OracleError>) {
            throw Fail{x.code};
          } else {
            return x;
          }
        },
        std::move(v));
  }

  bool satisfies(const std::string& k, const TypedCell& cell, const TypedCell& x) const {
    Cmp c = compare(cell, x);
    if (k == "eq" || k == "str_eq") return equalish(c);
    if (k == "not_eq" || k == "str_not_eq") return !equalish(c);
    if (k == "greater") return c == Cmp::Greater;
    if (k == "less") return c == Cmp::Less;
    if (k == "greater_eq") return c == Cmp::Greater || equalish(c);
    if (k == "less_eq") return c == Cmp::Less || equalish(c);
    throw Fail{ErrorCode::UnknownFunction};
  }

  // (key, row) pairs of orderable cells in view order.
  std::vector<std::pair<double, std::size_t>> keyed(const std::vector<std::size_t>& rows,
                                                    std::size_t col) const {
    std::vector<std::pair<double, std::size_t>> out;
    for (auto r : rows) {
      const TypedCell& c = t_.cells[r][col];
      if (c.kind == Kind::Num) out.emplace_back(c.num, r);
      if (c.kind == Kind::Date) out.emplace_back(static_cast<double>(days(c)), r);
    }
    return out;
  }

  std::size_t ordinal(const Node& n) {
    TypedCell c = scalar(n);
    if (c.kind != Kind::Num || c.num < 1 || c.num != std::floor(c.num)) {
      throw Fail{ErrorCode::OrdinalOutOfRange};
    }
    return static_cast<std::size_t>(c.num);
  }

  std::vector<std::pair<double, std::size_t>> ranked(const std::vector<std::size_t>& rows,
                                                     std::size_t col, bool desc) const {
    auto k = keyed(rows, col);
    std::stable_sort(k.begin(), k.end(), [desc](const auto& a, const auto& b) {
      return desc ? a.first > b.first : a.first < b.first;
    });
    return k;
  }

  OracleValue eval(const Node& n) {
    if (n.is_text()) {
      if (n.label == "all_rows") return view(n);
      return literal_of(n.label);
    }
    const std::string& f = n.label;
    const auto& a = n.children;
    if (f == "count") return num_cell(static_cast<double>(view(a[0]).size()));
    if (f == "only") return view(a[0]).size() == 1;
    if (f == "and") {
      bool x = std::get<bool>(to_v(eval(a[0])));
      bool y = std::get<bool>(to_v(eval(a[1])));
      return x && y;
    }
    if (f == "hop" || f == "str_hop" || f == "num_hop") {
      V target = a[0].is_text() ? V{view(a[0])} : to_v(eval(a[0]));
      std::size_t col = column(a[1]);
      std::size_t row;
      if (auto* r = std::get_if<std::size_t>(&target)) {
        row = *r;
      } else {
        const auto& rows = std::get<std::vector<std::size_t>>(target);
        if (rows.empty()) throw Fail{ErrorCode::EmptyViewError};
        row = rows.front();
      }
      return t_.cells[row][col];
    }
    if (f == "max" || f == "min" || f == "avg" || f == "sum") {
      auto rows = view(a[0]);
      std::size_t col = column(a[1]);
      auto k = keyed(rows, col);
      if (f == "sum") {
        double s = 0;
        for (auto& [key, r] : k) s += t_.cells[r][col].num;
        return num_cell(s);
      }
      if (k.empty()) throw Fail{ErrorCode::EmptyViewError};
      if (f == "avg") {
        double s = 0;
        for (auto& [key, r] : k) s += t_.cells[r][col].num;
        return num_cell(s / static_cast<double>(k.size()));
      }
      auto best = ranked(rows, col, f == "max").front();
      return t_.cells[best.second][col];
    }
    if (f == "nth_max" || f == "nth_min" || f == "nth_argmax" || f == "nth_argmin") {
      auto rows = view(a[0]);
      std::size_t col = column(a[1]);
      bool desc = f.find("max") != std::string::npos;
      auto order = ranked(rows, col, desc);
      if (order.empty()) throw Fail{ErrorCode::EmptyViewError};
      std::size_t k = ordinal(a[2]);
      if (k > order.size()) throw Fail{ErrorCode::OrdinalOutOfRange};
      std::size_t row = order[k - 1].second;
      if (f.find("arg") != std::string::npos) return row;
      return t_.cells[row][col];
    }
    if (f == "argmax" || f == "argmin") {
      auto rows = view(a[0]);
      std::size_t col = column(a[1]);
      auto order = ranked(rows, col, f == "argmax");
      if (order.empty()) throw Fail{ErrorCode::EmptyViewError};
      return order.front().second;
    }
    if (f == "diff") {
      TypedCell x = scalar(a[0]);
      TypedCell y = scalar(a[1]);
      if (x.kind == Kind::Num && y.kind == Kind::Num) return num_cell(x.num - y.num);
      if (x.kind == Kind::Date && y.kind == Kind::Date) return num_cell(static_cast<double>(days(x) - days(y)));
      throw Fail{ErrorCode::IncomparableOperands};
    }
    static const std::vector<std::string> compares = {"eq", "not_eq", "round_eq", "greater", "less",
                                                      "str_eq", "not_str_eq", "str_not_eq"};
    if (std::find(compares.begin(), compares.end(), f) != compares.end()) {
      TypedCell x = scalar(a[0]);
      TypedCell y = scalar(a[1]);
      Cmp c = compare(x, y);
      if (f == "eq" || f == "str_eq") return equalish(c);
      if (f == "not_eq" || f == "not_str_eq" || f == "str_not_eq") return !equalish(c);
      if (f == "round_eq") {
        if (equalish(c)) return true;
        if (x.kind != Kind::Num || y.kind != Kind::Num) return false;
        auto dot = y.raw.find('.');
        double decimals = dot == std::string::npos ? 0 : static_cast<double>(y.raw.size() - dot - 1);
        double tol = std::max(0.05 * std::fabs(y.num), 0.5 * std::pow(10.0, -decimals));
        return std::fabs(x.num - y.num) <= tol;
      }
      if (c == Cmp::Incomparable) throw Fail{ErrorCode::IncomparableOperands};
      return f == "greater" ? c == Cmp::Greater : c == Cmp::Less;
    }
    if (f == "filter_all") return view(a[0]);
    auto us = f.find('_');
    std::string family = f.substr(0, us);
    std::string pred = f.substr(us + 1);
    if (family == "filter" || family == "all" || family == "most") {
      auto rows = view(a[0]);
      std::size_t col = column(a[1]);
      TypedCell x = scalar(a[2]);
      std::vector<std::size_t> kept;
      for (auto r : rows) {
        if (satisfies(pred, t_.cells[r][col], x)) kept.push_back(r);
      }
      if (family == "filter") return kept;
      if (family == "all") return kept.size() == rows.size();
      if (rows.empty()) return false;
      return static_cast<double>(kept.size()) > 0.5 * static_cast<double>(rows.size());
    }
    throw Fail{ErrorCode::UnknownFunction};
  }

  const GenTable& t_;
};

}  // namespace

OracleValue oracle_eval(const Node& node, const GenTable& t) { return Oracle(t).run(node); }

std::string describe(const OracleValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, TypedCell>) {
          return x.kind == Kind::Num ? format_num(x.num) : x.raw;
        } else if constexpr (std::is_same_v<T, std::size_t>) {
          return "row " + std::to_string(x);
        } else if constexpr (std::is_same_v<T, std::vector<std::size_t>>) {
          std::string s = "view [";
          for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + std::to_string(x[i]);
          return s + "]";
        } else {
          return std::string("error ") + std::string(error_code_name(x.code));
        }
      },
      v);
}

bool agrees(const std::variant<Value, ErrorCode>& actual, const OracleValue& expected, std::string* why) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (const auto* err = std::get_if<OracleError>(&expected)) {
    if (const auto* code = std::get_if<ErrorCode>(&actual); code && *code == err->code) return true;
    return fail("expected error " + std::string(error_code_name(err->code)));
  }
  if (const auto* code = std::get_if<ErrorCode>(&actual)) {
    return fail("unexpected error " + std::string(error_code_name(*code)));
  }
  const Value& v = std::get<Value>(actual);
  if (const auto* b = std::get_if<bool>(&expected)) {
    if (v.kind() == ValueKind::Bool && v.as_bool() == *b) return true;
    return fail("bool mismatch, got " + format_value(v));
  }
  if (const auto* r = std::get_if<std::size_t>(&expected)) {
    if (v.kind() == ValueKind::Row && v.as_row().index == *r) return true;
    return fail("row mismatch, got " + format_value(v));
  }
  if (const auto* rows = std::get_if<std::vector<std::size_t>>(&expected)) {
    if (v.kind() == ValueKind::View && v.as_view().rows() == *rows) return true;
    return fail("view mismatch, got " + format_value(v));
  }
  const TypedCell& c = std::get<TypedCell>(expected);
  if (v.kind() == ValueKind::Row || v.kind() == ValueKind::View || v.kind() == ValueKind::Bool) {
    return fail("expected a scalar, got " + format_value(v));
  }
  const CellValue& cell = v.as_cell();
  switch (c.kind) {
    case Kind::Num:
      if (cell.kind == CellKind::Number && std::fabs(*cell.number - c.num) <= 1e-6 * std::max(1.0, std::fabs(c.num))) {
        return true;
      }
      break;
    case Kind::Date:
      if (cell.kind == CellKind::Date && cell.date->year == c.year && cell.date->month == c.month &&
          cell.date->day == c.day) {
        return true;
      }
      break;
    case Kind::Text:
      if (cell.kind == CellKind::Text && cell.text == c.raw) return true;
      break;
  }
  return fail("scalar mismatch, got " + format_value(v));
}

// ------------------------------------------------------------ typed programs

namespace {

class ProgramGen {
 public:
  ProgramGen(Rng& rng, const GenTable& t) : rng_(rng), t_(t) {}

  Node view(int depth) {
    if (depth <= 1 || coin(rng_, 0.35)) return Node::text("all_rows");
    if (coin(rng_, 0.15)) return Node::function("filter_all", {view(depth - 1), column_any()});
    return filter(depth);
  }

  Node filter(int depth) {
    std::size_t col = pick(rng_, t_.columns.size());
    std::string pred = predicate(col);
    return Node::function("filter_" + pred, {view(depth - 1), header(col), literal(col)});
  }

  Node row(int depth) {
    std::size_t col = ordered_column();
    if (coin(rng_)) {
      return Node::function(coin(rng_) ? "argmax" : "argmin", {view(depth - 1), header(col)});
    }
    return Node::function(coin(rng_) ? "nth_argmax" : "nth_argmin",
                          {view(depth - 1), header(col), Node::text(std::to_string(1 + pick(rng_, 4)))});
  }

  Node row_or_view(int depth) { return coin(rng_, 0.6) ? row(depth) : view(depth); }

  // Scalar of kind k (Num is always available through count).
  Node scalar(Kind k, int depth) {
    auto cols = columns_of(t_, k);
    if (k == Kind::Text) cols.push_back(0);
    if (cols.empty()) k = Kind::Num, cols = columns_of(t_, Kind::Num);
    if (depth <= 1) return k == Kind::Num && cols.empty() ? Node::text(std::to_string(pick(rng_, 8)))
                                                          : Node::text(literal_raw(cols));
    std::size_t choice = pick(rng_, 5);
    if (k == Kind::Num && (cols.empty() || choice == 0)) return Node::function("count", {view(depth - 1)});
    if (cols.empty()) return Node::text(std::to_string(pick(rng_, 8)));
    std::size_t col = choose(rng_, cols);
    switch (choice) {
      case 1:
        if (k != Kind::Text) {
          std::vector<std::string> fns = {"max", "min"};
          if (k == Kind::Num) fns.insert(fns.end(), {"avg", "sum"});
          return Node::function(choose(rng_, fns), {view(depth - 1), header(col)});
        }
        break;
      case 2:
        if (k != Kind::Text) {
          return Node::function(coin(rng_) ? "nth_max" : "nth_min",
                                {view(depth - 1), header(col), Node::text(std::to_string(1 + pick(rng_, 4)))});
        }
        break;
      case 3:
        if (k == Kind::Num && coin(rng_, 0.3)) {
          Kind dk = coin(rng_) ? Kind::Num : Kind::Date;
          if (!columns_of(t_, dk).empty()) {
            return Node::function("diff", {scalar(dk, depth - 1), scalar(dk, depth - 1)});
          }
        }
        break;
      default: break;
    }
    return Node::function("hop", {row_or_view(depth - 1), header(col)});
  }

  Node boolean(int depth) {
    if (depth <= 1) return compare(2);
    switch (pick(rng_, 5)) {
      case 0: return Node::function("only", {view(depth - 1)});
      case 1: return Node::function("and", {boolean(depth - 1), boolean(depth - 1)});
      case 2: return quantifier(coin(rng_) ? "all" : "most", depth);
      default: return compare(depth);
    }
  }

  Node compare(int depth) {
    Kind k = static_cast<Kind>(pick(rng_, 3));
    std::vector<std::string> fns = {"eq", "not_eq"};
    if (k == Kind::Num) fns.push_back("round_eq");
    if (k != Kind::Text || coin(rng_, 0.2)) fns.insert(fns.end(), {"greater", "less"});
    if (k == Kind::Text) fns.insert(fns.end(), {"str_eq", "not_str_eq", "str_not_eq"});
    std::string f = choose(rng_, fns);
    Node lhs = scalar(k, depth - 1);
    Kind actual = kind_of_scalar(lhs, k);
    Node rhs = f == "round_eq" || coin(rng_, 0.6) ? literal_node(actual) : scalar(actual, depth - 1);
    return Node::function(f, {std::move(lhs), std::move(rhs)});
  }

  Node quantifier(const std::string& q, int depth) {
    std::size_t col = pick(rng_, t_.columns.size());
    return Node::function(q + "_" + predicate(col), {view(depth - 1), header(col), literal(col)});
  }

  Node family(Family f, int depth) {
    switch (f) {
      case Family::Count: return Node::function("count", {view(depth - 1)});
      case Family::Only: return Node::function("only", {view(depth - 1)});
      case Family::Hop:
        return Node::function(choose(rng_, std::vector<std::string>{"hop", "str_hop", "num_hop"}),
                              {row_or_view(depth - 1), column_any()});
      case Family::And: return Node::function("and", {boolean(depth - 1), boolean(depth - 1)});
      case Family::Aggregate: {
        std::string fn = choose(rng_, std::vector<std::string>{"max", "min", "avg", "sum"});
        auto nums = columns_of(t_, Kind::Num);
        std::size_t col = fn == "avg" || fn == "sum"
                              ? (nums.empty() || coin(rng_, 0.1) ? pick(rng_, t_.columns.size()) : choose(rng_, nums))
                              : ordered_column();
        if ((fn == "avg" || fn == "sum") && t_.kinds[col] == Kind::Date) col = 0;
        return Node::function(fn, {view(depth - 1), header(col)});
      }
      case Family::NthValue:
        return Node::function(coin(rng_) ? "nth_max" : "nth_min",
                              {view(depth - 1), header(ordered_column()),
                               Node::text(std::to_string(1 + pick(rng_, 5)))});
      case Family::ArgExtreme:
        return Node::function(coin(rng_) ? "argmax" : "argmin", {view(depth - 1), header(ordered_column())});
      case Family::NthArgExtreme:
        return Node::function(coin(rng_) ? "nth_argmax" : "nth_argmin",
                              {view(depth - 1), header(ordered_column()),
                               Node::text(std::to_string(1 + pick(rng_, 5)))});
      case Family::Compare: return compare(depth);
      case Family::Diff: {
        Kind k = coin(rng_) || columns_of(t_, Kind::Date).empty() ? Kind::Num : Kind::Date;
        return Node::function("diff", {scalar(k, depth - 1), scalar(k, depth - 1)});
      }
      case Family::Filter: return filter(depth);
      case Family::FilterAll: return Node::function("filter_all", {view(depth - 1), column_any()});
      case Family::AllQuantifier: return quantifier("all", depth);
      case Family::MostQuantifier: return quantifier("most", depth);
    }
    return compare(depth);
  }

 private:
  Node header(std::size_t col) const { return Node::text(t_.columns[col]); }
  Node column_any() { return header(pick(rng_, t_.columns.size())); }

  std::size_t ordered_column() {
    std::vector<std::size_t> cols = columns_of(t_, Kind::Num);
    auto dates = columns_of(t_, Kind::Date);
    cols.insert(cols.end(), dates.begin(), dates.end());
    if (cols.empty() || coin(rng_, 0.05)) return pick(rng_, t_.columns.size());
    return choose(rng_, cols);
  }

  std::string predicate(std::size_t col) {
    std::vector<std::string> preds = {"eq", "not_eq", "greater", "less", "greater_eq", "less_eq"};
    if (t_.kinds[col] == Kind::Text) preds.insert(preds.end(), {"str_eq", "str_not_eq"});
    return choose(rng_, preds);
  }

  Node literal(std::size_t col) { return Node::text(random_literal(rng_, t_, col).raw); }

  std::string literal_raw(const std::vector<std::size_t>& cols) {
    return random_literal(rng_, t_, choose(rng_, cols)).raw;
  }

  Node literal_node(Kind k) {
    auto cols = columns_of(t_, k);
    if (k == Kind::Text) cols.push_back(0);
    if (cols.empty() || (k == Kind::Num && coin(rng_, 0.3))) return Node::text(std::to_string(pick(rng_, 8)));
    return Node::text(literal_raw(cols));
  }

  // The kind a scalar subprogram produces (a fallback may have switched to Num).
  Kind kind_of_scalar(const Node& n, Kind requested) const {
    if (n.is_text()) {
      const auto& l = n.label;
      if (l.size() == 10 && l[4] == '-') return Kind::Date;
      bool numeric = !l.empty() && std::all_of(l.begin(), l.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.'; });
      return numeric ? Kind::Num : Kind::Text;
    }
    if (n.label == "count" || n.label == "diff" || n.label == "avg" || n.label == "sum") return Kind::Num;
    if (n.label == "hop" || n.label.find("max") != std::string::npos || n.label.find("min") != std::string::npos) {
      for (std::size_t c = 0; c < t_.columns.size(); ++c) {
        if (t_.columns[c] == n.children[1].label) return c == 0 ? Kind::Text : t_.kinds[c];
      }
    }
    return requested;
  }

  Rng& rng_;
  const GenTable& t_;
};

}  // namespace

Node random_family_program(Rng& rng, const GenTable& t, Family family, int max_depth) {
  return ProgramGen(rng, t).family(family, max_depth);
}

Node random_bool_program(Rng& rng, const GenTable& t, int max_depth) {
  return ProgramGen(rng, t).boolean(max_depth);
}

Node random_view(Rng& rng, const GenTable& t, int depth) { return ProgramGen(rng, t).view(depth); }

// ------------------------------------------------------------ answers

AnswerRecord random_answer_record(Rng& rng, const GenTable& t, LogicType type) {
  AnswerRecord rec;
  rec.logic_type = type;
  auto& a = rec.answers;
  const std::size_t ncols = t.columns.size();
  auto any_col = [&] { return 1 + pick(rng, ncols - 1); };
  auto colname = [&](std::size_t c) { return t.columns[c]; };
  auto row = [&] { return pick(rng, t.cells.size()); };
  auto others = [&] {
    std::vector<std::string> out;
    for (std::size_t c = 1; c < ncols; ++c) {
      if (coin(rng, 0.3)) out.push_back(t.columns[c]);
    }
    return out;
  };
  auto value_for = [&](std::size_t c) { return random_literal(rng, t, c).raw; };
  const std::vector<std::string> scope_criteria = {"equal", "not equal", "less than",
                                                   "less than or equal to", "greater than",
                                                   "greater than or equal to", "fuzzily match"};
  auto scope = [&] {
    if (coin(rng)) {
      a["Q1"] = std::string("all");
      return;
    }
    a["Q1"] = std::string("subset");
    std::size_t c = any_col();
    a["Q1.1"] = colname(c);
    a["Q1.2"] = choose(rng, scope_criteria);
    a["Q1.3"] = value_for(c);
  };

  switch (type) {
    case LogicType::Count: {
      scope();
      std::size_t c = any_col();
      a["Q2"] = colname(c);
      std::vector<std::string> crit = scope_criteria;
      crit.push_back("all");
      a["Q3"] = choose(rng, crit);
      if (std::get<std::string>(a["Q3"]) != "all") a["Q4"] = value_for(c);
      a["Q5"] = std::to_string(pick(rng, 8));
      break;
    }
    case LogicType::Superlative:
    case LogicType::Ordinal: {
      const bool ord = type == LogicType::Ordinal;
      scope();
      a["Q2"] = colname(any_col());
      a["Q3"] = ord ? std::string(coin(rng) ? "max to min" : "min to max")
                    : std::string(coin(rng) ? "maximum" : "minimum");
      if (ord) a["Q4"] = std::to_string(1 + pick(rng, 3));
      a[ord ? "Q5" : "Q4"] = row();
      a[ord ? "Q6" : "Q5"] = others();
      a[ord ? "Q7" : "Q6"] = coin(rng);
      break;
    }
    case LogicType::Comparative: {
      std::size_t c = any_col();
      a["Q1"] = colname(c);
      std::size_t r1 = row();
      std::size_t r2 = row();
      if (t.cells.size() > 1) {
        while (r2 == r1) r2 = row();
      }
      a["Q2"] = r1;
      a["Q3"] = r2;
      std::vector<std::string> rel = {"greater", "less", "equal", "not equal"};
      if (t.kinds[c] != Kind::Text) rel.push_back("difference value");
      a["Q4"] = choose(rng, rel);
      a["Q5"] = coin(rng);
      a["Q6"] = others();
      break;
    }
    case LogicType::Aggregation:
      scope();
      a["Q2"] = colname(any_col());
      a["Q3"] = std::string(coin(rng) ? "sum" : "average");
      a["Q4"] = std::to_string(pick(rng, 100));
      break;
    case LogicType::Majority: {
      scope();
      std::size_t c = any_col();
      a["Q2"] = colname(c);
      a["Q3"] = std::string(coin(rng) ? "all" : "most");
      a["Q4"] = choose(rng, scope_criteria);
      a["Q5"] = value_for(c);
      break;
    }
    case LogicType::Unique: {
      scope();
      std::size_t c = any_col();
      a["Q2"] = row();
      a["Q3"] = colname(c);
      a["Q4"] = choose(rng, std::vector<std::string>{"equal", "not equal", "less than", "greater than",
                                                      "fuzzily match"});
      a["Q5"] = value_for(c);
      a["Q6"] = others();
      break;
    }
  }
  return rec;
}

}  // namespace l2t::testing
