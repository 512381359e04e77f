#include <doctest.h>

#include <optional>
#include <string>
#include <vector>

#include "l2t/error.hpp"
#include "l2t/table.hpp"

using namespace l2t;

namespace {

struct DateCase {
  const char* raw;
  int year;
  std::optional<int> month;
  std::optional<int> day;
};

TableSource f1_source() {
  TableSource s;
  s.table_id = "opec_2012";
  s.caption = "opec member countries in 2012";
  s.columns = {"country", "region", "joined", "population", "area"};
  s.rows = {{"algeria", "africa", "1969", "37,100,000", "2,381,740"},
            {"angola", "africa", "2007", "20,600,000", "1,246,700"},
            {"libya", "africa", "1962", "6,400,000", "1,759,540"},
            {"nigeria", "africa", "1971", "170,100,000", "923,768"},
            {"iraq", "middle east", "1960", "33,300,000", "435,244"},
            {"kuwait", "middle east", "1960", "3,100,000", "17,818"},
            {"qatar", "middle east", "1961", "1,900,000", "11,437"}};
  return s;
}

ErrorCode code_of(TableSource s) {
  try {
    load_table(std::move(s));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("parse_cell classifies plain numbers") {
  CellValue v = parse_cell("12");
  CHECK(v.kind == CellKind::Number);
  CHECK(*v.number == 12);
}

TEST_CASE("parse_cell strips thousands separators, currency and percent") {
  CHECK(*parse_cell("37,100,000").number == 37100000);
  CHECK(*parse_cell("2,381,740").number == 2381740);
  CHECK(*parse_cell("$5").number == 5);
  CHECK(*parse_cell("45%").number == 45);
  CHECK(*parse_cell("-3.25").number == doctest::Approx(-3.25));
}

TEST_CASE("parse_cell keeps mixed text with its first number") {
  CellValue v = parse_cell("l 4 - 2");
  CHECK(v.kind == CellKind::Text);
  CHECK(v.text == "l 4 - 2");
  REQUIRE(v.first_number);
  CHECK(*v.first_number == 4);
  CHECK_FALSE(parse_cell("angola").first_number);
}

TEST_CASE("parse_cell normalizes text") {
  CellValue v = parse_cell("  Middle   East ");
  CHECK(v.kind == CellKind::Text);
  CHECK(v.text == "middle east");
}

TEST_CASE("a bare four digit year parses as a number") {
  CellValue v = parse_cell("1962");
  CHECK(v.kind == CellKind::Number);
  CHECK(*v.number == 1962);
}

TEST_CASE("parse_cell recognizes the listed date formats") {
  // Expected fields written out by hand for each string.
  const std::vector<DateCase> cases = {
      {"january 2 , 1975", 1975, 1, 2},     {"february 15 , 1987", 1987, 2, 15},
      {"march 1 , 1987", 1987, 3, 1},       {"april 30 , 2001", 2001, 4, 30},
      {"may 9 , 1945", 1945, 5, 9},         {"june 21 , 2010", 2010, 6, 21},
      {"july 4 , 1776", 1776, 7, 4},        {"august 31 , 1999", 1999, 8, 31},
      {"september 11 , 2001", 2001, 9, 11}, {"october 3 , 1990", 1990, 10, 3},
      {"november 22 , 1963", 1963, 11, 22}, {"december 25 , 2005", 2005, 12, 25},
      {"jan 5 , 2003", 2003, 1, 5},         {"sept 14 , 2014", 2014, 9, 14},
      {"dec 7 , 1941", 1941, 12, 7},        {"12 march 2004", 2004, 3, 12},
      {"1 january 2000", 2000, 1, 1},       {"28 february 1996", 1996, 2, 28},
      {"7 october 2015", 2015, 10, 7},      {"2008 - 06 - 15", 2008, 6, 15},
      {"1999-12-31", 1999, 12, 31},         {"2012 - 1 - 9", 2012, 1, 9},
      {"06 / 15 / 2008", 2008, 6, 15},      {"12/31/1999", 1999, 12, 31},
      {"1/2/2003", 2003, 1, 2},             {"june 2008", 2008, 6, std::nullopt},
      {"march 1987", 1987, 3, std::nullopt}, {"October 12, 1492", 1492, 10, 12},
      {"August 3rd , 1958", 1958, 8, 3},    {"21st july 1969", 1969, 7, 21},
  };
  REQUIRE(cases.size() == 30);
  for (const auto& c : cases) {
    INFO(c.raw);
    CellValue v = parse_cell(c.raw);
    REQUIRE(v.kind == CellKind::Date);
    CHECK(v.date->year == c.year);
    CHECK(v.date->month == c.month);
    CHECK(v.date->day == c.day);
  }
}

TEST_CASE("strings that look almost like dates stay text or numbers") {
  CHECK(parse_cell("march madness").kind == CellKind::Text);
  CHECK(parse_cell("13 / 45 / 2001").kind == CellKind::Text);
  CHECK(parse_cell("may").kind == CellKind::Text);
}

TEST_CASE("load_table on the fixture") {
  Table t = load_table(f1_source());
  CHECK(t.row_count() == 7);
  CHECK(t.col_count() == 5);
  CHECK(t.id() == "opec_2012");
  CHECK(t.cell(3, 3).value.number == 170100000);
  CHECK(t.subject_column() == 0);
  CHECK(t.cell(4, 1).value.text == "middle east");
}

TEST_CASE("load_table rejects ragged and empty grids") {
  TableSource ragged = f1_source();
  ragged.rows[2].pop_back();
  CHECK(code_of(ragged) == ErrorCode::RaggedRows);

  TableSource empty = f1_source();
  empty.rows.clear();
  CHECK(code_of(empty) == ErrorCode::EmptyTable);
}

TEST_CASE("delimited tables") {
  Table t = load_table_delimited("name#score\nann#3\nbob#4\n", "a caption", "t1");
  CHECK(t.row_count() == 2);
  CHECK(t.columns() == std::vector<std::string>{"name", "score"});
  CHECK(t.caption() == "a caption");
}

TEST_CASE("all_rows") {
  Table t = load_table(f1_source());
  View v = all_rows(t);
  CHECK(v.rows() == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
  CHECK(all_rows(v.table()) == v);

  TableSource one = f1_source();
  one.rows.resize(1);
  Table single = load_table(one);
  CHECK(all_rows(single).rows() == std::vector<std::size_t>{0});
}

TEST_CASE("compare_cells") {
  CHECK(compare_cells(parse_cell("1962"), parse_cell("1960")) == Comparison::Greater);
  CHECK(compare_cells(parse_cell("1960"), parse_cell("1962")) == Comparison::Less);
  CHECK(compare_cells(parse_cell("middle east"), parse_cell("middle east")) == Comparison::Equal);
  CHECK(compare_cells(parse_cell("angola ( africa )"), parse_cell("angola")) == Comparison::FuzzyEqual);
  CHECK(compare_cells(parse_cell("angola"), parse_cell("nigeria")) == Comparison::Incomparable);
  CHECK(compare_cells(parse_cell("march 1 , 1987"), parse_cell("february 15 , 1987")) == Comparison::Greater);
  CHECK(compare_cells(parse_cell("1,000"), parse_cell("1000")) == Comparison::Equal);
}

TEST_CASE("resolve_column") {
  Table t = load_table(f1_source());
  CHECK(t.resolve_column("joined") == 2u);
  CHECK(t.resolve_column("Population") == 3u);
  CHECK_FALSE(t.resolve_column("continent"));
}

TEST_CASE("content hash tracks content") {
  Table a = load_table(f1_source());
  Table b = load_table(f1_source());
  CHECK(a.content_hash() == b.content_hash());
  TableSource changed = f1_source();
  changed.rows[0][1] = "asia";
  CHECK(load_table(changed).content_hash() != a.content_hash());
}
