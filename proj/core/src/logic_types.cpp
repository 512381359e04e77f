#include "l2t/logic_types.hpp"

#include <algorithm>
#include <functional>

#include "l2t/error.hpp"
#include "l2t/text_util.hpp"

namespace l2t {

namespace {

const std::vector<std::string> kScopeChoices = {"all", "subset"};
const std::vector<std::string> kCountCriteria = {
    "equal",        "not equal",     "less than", "less than or equal to", "greater than",
    "greater than or equal to", "fuzzily match", "all", "other"};
const std::vector<std::string> kMajorityCriteria = {
    "equal",        "not equal",     "less than", "less than or equal to", "greater than",
    "greater than or equal to", "fuzzily match", "other"};
const std::vector<std::string> kUniqueCriteria = {"equal",        "not equal", "less than",
                                                  "greater than", "fuzzily match", "other"};
const std::vector<std::string> kScopeCriteria = kMajorityCriteria;

Question q(std::string id, LogicType t, std::string prompt, AnswerKind kind,
           std::vector<std::string> choices = {}, std::optional<Dependency> dep = std::nullopt) {
  return Question{std::move(id), t, std::move(prompt), kind, std::move(choices), std::move(dep)};
}

std::optional<std::string> scope_id(LogicType t) {
  if (t == LogicType::Comparative) return std::nullopt;
  return "Q1";
}

// ------------------------------------------------------------ answer access

class Answers {
 public:
  Answers(const AnswerRecord& rec, const Table& table) : rec_(rec), table_(table) {}

  const Answer& raw(const std::string& id) const {
    auto it = rec_.answers.find(id);
    if (it == rec_.answers.end()) {
      throw Error(ErrorCode::IncompleteAnswers, "unanswered: " + id);
    }
    return it->second;
  }

  std::string text(const std::string& id) const {
    const Answer& a = raw(id);
    if (const auto* s = std::get_if<std::string>(&a)) return *s;
    throw Error(ErrorCode::WrongAnswerType, id + ": expected text");
  }

  std::string value(const std::string& id) const {
    std::string v = text::collapse_ws(text(id));
    if (v.empty() || v.find_first_of("{};") != std::string::npos) {
      throw Error(ErrorCode::WrongAnswerType, id + ": value must be non-empty without '{', '}' or ';'");
    }
    return v;
  }

  bool flag(const std::string& id) const {
    const Answer& a = raw(id);
    if (const auto* b = std::get_if<bool>(&a)) return *b;
    throw Error(ErrorCode::WrongAnswerType, id + ": expected yes/no");
  }

  std::size_t row(const std::string& id) const {
    const Answer& a = raw(id);
    const auto* r = std::get_if<std::size_t>(&a);
    if (!r) throw Error(ErrorCode::WrongAnswerType, id + ": expected a row index");
    if (*r >= table_.row_count()) {
      throw Error(ErrorCode::WrongAnswerType, id + ": row " + std::to_string(*r) + " out of range");
    }
    return *r;
  }

  // Canonical column name as it appears in the table header.
  std::string column(const std::string& id) const {
    return table_.columns()[resolve_column_or_throw(table_, text(id))];
  }

  std::vector<std::string> columns(const std::string& id) const {
    const Answer& a = raw(id);
    std::vector<std::string> names;
    if (const auto* list = std::get_if<std::vector<std::string>>(&a)) {
      names = *list;
    } else if (const auto* s = std::get_if<std::string>(&a)) {
      if (text::to_lower(text::trim(*s)) != "n/a" && !text::trim(*s).empty()) names.push_back(*s);
    } else {
      throw Error(ErrorCode::WrongAnswerType, id + ": expected a column list");
    }
    std::vector<std::string> out;
    for (const auto& n : names) {
      std::string canon = table_.columns()[resolve_column_or_throw(table_, n)];
      if (std::find(out.begin(), out.end(), canon) == out.end()) out.push_back(canon);
    }
    return out;
  }

  Criterion criterion(const std::string& id) const {
    auto c = parse_criterion(text(id));
    if (!c) throw Error(ErrorCode::WrongAnswerType, id + ": unknown criterion");
    return *c;
  }

 private:
  const AnswerRecord& rec_;
  const Table& table_;
};

// ------------------------------------------------------------ program pieces

Node txt(std::string s) { return Node::text(std::move(s)); }
Node fn(std::string name, std::vector<Node> args) {
  return Node::function(std::move(name), std::move(args));
}

std::string predicate_suffix(Criterion c) {
  switch (c) {
    case Criterion::Equal: return "eq";
    case Criterion::NotEqual: return "not_eq";
    case Criterion::Less: return "less";
    case Criterion::LessEq: return "less_eq";
    case Criterion::Greater: return "greater";
    case Criterion::GreaterEq: return "greater_eq";
    case Criterion::FuzzyMatch: return "str_eq";
    case Criterion::All: return "all";
    case Criterion::Other: break;
  }
  throw Error(ErrorCode::UnbuildableCriterion, "criterion 'other' cannot be expressed");
}

Node filter_node(Criterion c, Node view, const std::string& column, const std::string& value) {
  if (c == Criterion::All) return fn("filter_all", {std::move(view), txt(column)});
  return fn("filter_" + predicate_suffix(c), {std::move(view), txt(column), txt(value)});
}

Node and_chain(std::vector<Node> conjuncts) {
  Node acc = std::move(conjuncts.back());
  for (std::size_t i = conjuncts.size() - 1; i-- > 0;) {
    acc = fn("and", {std::move(conjuncts[i]), std::move(acc)});
  }
  return acc;
}

Node eq_node(Node a, std::string value) { return fn("eq", {std::move(a), txt(std::move(value))}); }

Node hop_node(Node row, const std::string& column) { return fn("hop", {std::move(row), txt(column)}); }

Node build_scope(const Answers& a, LogicType t) {
  if (auto id = scope_id(t); id) {
    std::string scope = text::to_lower(a.text(*id));
    if (scope == "all") return txt("all_rows");
    if (scope != "subset") throw Error(ErrorCode::WrongAnswerType, *id + ": expected all or subset");
    std::string column = a.column(*id + ".1");
    Criterion c = a.criterion(*id + ".2");
    if (c == Criterion::Other) {
      throw Error(ErrorCode::UnbuildableCriterion, "scope criterion 'other' cannot be expressed");
    }
    if (c == Criterion::All) return txt("all_rows");
    return filter_node(c, txt("all_rows"), column, a.value(*id + ".3"));
  }
  return txt("all_rows");
}

std::string cell_raw(const Table& t, std::size_t row, const std::string& column) {
  return t.cell(row, resolve_column_or_throw(t, column)).raw;
}

// Values become text nodes; make sure an empty cell still yields a literal.
std::string literal(std::string raw) {
  raw = text::collapse_ws(raw);
  for (char& c : raw) {
    if (c == '{' || c == '}' || c == ';') c = ' ';
  }
  raw = text::collapse_ws(raw);
  return raw.empty() ? std::string("-") : raw;
}

std::size_t parse_ordinal_answer(const std::string& s) {
  static const std::vector<std::string> words = {"first",   "second", "third", "fourth",
                                                 "fifth",   "sixth",  "seventh", "eighth",
                                                 "ninth",   "tenth"};
  std::string lower = text::to_lower(text::trim(s));
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (lower == words[i]) return i + 1;
  }
  auto n = extract_first_number(lower);
  if (!n || *n < 1 || *n != static_cast<double>(static_cast<long>(*n))) {
    throw Error(ErrorCode::WrongAnswerType, "ordinal '" + s + "' is not a positive integer");
  }
  return static_cast<std::size_t>(*n);
}

Ast build_count(const Answers& a, const Table&) {
  Node scope = build_scope(a, LogicType::Count);
  std::string column = a.column("Q2");
  Criterion c = a.criterion("Q3");
  std::string value = c == Criterion::All ? std::string() : a.value("Q4");
  Node counted = filter_node(c, std::move(scope), column, value);
  return Ast{eq_node(fn("count", {std::move(counted)}), a.value("Q5"))};
}

Ast build_row_focused(const Answers& a, const Table& t, LogicType type) {
  // Superlative and ordinal share one prototype: a selected row, its
  // subject, optional value mention and other mentioned columns.
  const bool ordinal = type == LogicType::Ordinal;
  Node scope = build_scope(a, type);
  std::string column = a.column("Q2");
  std::string direction = text::to_lower(a.text("Q3"));
  bool is_max;
  if (ordinal) {
    is_max = direction == "max to min";
    if (!is_max && direction != "min to max") {
      throw Error(ErrorCode::WrongAnswerType, "Q3: expected 'max to min' or 'min to max'");
    }
  } else {
    is_max = direction == "maximum" || direction == "max";
    if (!is_max && direction != "minimum" && direction != "min") {
      throw Error(ErrorCode::WrongAnswerType, "Q3: expected maximum or minimum");
    }
  }
  std::string n;
  if (ordinal) n = std::to_string(parse_ordinal_answer(a.text("Q4")));
  std::size_t row = a.row(ordinal ? "Q5" : "Q4");
  std::vector<std::string> others = a.columns(ordinal ? "Q6" : "Q5");
  bool mentioned = a.flag(ordinal ? "Q7" : "Q6");

  auto selected = [&] {
    std::vector<Node> args{scope, txt(column)};
    if (ordinal) args.push_back(txt(n));
    std::string name = std::string(ordinal ? "nth_arg" : "arg") + (is_max ? "max" : "min");
    return fn(name, std::move(args));
  };
  const std::string subject = t.columns()[t.subject_column()];
  std::vector<Node> conjuncts;
  conjuncts.push_back(eq_node(hop_node(selected(), subject), literal(cell_raw(t, row, subject))));
  if (mentioned) {
    std::vector<Node> args{scope, txt(column)};
    if (ordinal) args.push_back(txt(n));
    std::string name = std::string(ordinal ? "nth_" : "") + (is_max ? "max" : "min");
    conjuncts.push_back(eq_node(fn(name, std::move(args)), literal(cell_raw(t, row, column))));
  }
  for (const auto& other : others) {
    if (other == subject) continue;
    conjuncts.push_back(eq_node(hop_node(selected(), other), literal(cell_raw(t, row, other))));
  }
  return Ast{and_chain(std::move(conjuncts))};
}

Ast build_comparative(const Answers& a, const Table& t) {
  std::string column = a.column("Q1");
  std::size_t r1 = a.row("Q2");
  std::size_t r2 = a.row("Q3");
  if (r1 == r2) throw Error(ErrorCode::WrongAnswerType, "Q3: the compared rows must differ");
  std::string relation = text::to_lower(text::collapse_ws(a.text("Q4")));
  bool mentioned = a.flag("Q5");
  std::vector<std::string> others = a.columns("Q6");

  const std::string subject = t.columns()[t.subject_column()];
  auto select = [&](std::size_t r) {
    return fn("filter_eq", {txt("all_rows"), txt(subject), txt(literal(cell_raw(t, r, subject)))});
  };
  auto hop_at = [&](std::size_t r, const std::string& c) { return hop_node(select(r), c); };

  std::vector<Node> conjuncts;
  if (relation == "greater" || relation == "less" || relation == "equal" ||
      relation == "not equal") {
    std::string name = relation == "greater" ? "greater"
                       : relation == "less"  ? "less"
                       : relation == "equal" ? "eq"
                                             : "not_eq";
    conjuncts.push_back(fn(name, {hop_at(r1, column), hop_at(r2, column)}));
  } else if (relation == "difference value" || relation == "diff") {
    CellValue d = eval_diff(t.cell(r1, resolve_column_or_throw(t, column)).value,
                            t.cell(r2, resolve_column_or_throw(t, column)).value);
    conjuncts.push_back(eq_node(fn("diff", {hop_at(r1, column), hop_at(r2, column)}), d.text));
  } else if (relation == "other") {
    throw Error(ErrorCode::UnbuildableCriterion, "comparative relation 'other' cannot be expressed");
  } else {
    throw Error(ErrorCode::WrongAnswerType, "Q4: unknown relation '" + relation + "'");
  }
  if (mentioned) {
    conjuncts.push_back(eq_node(hop_at(r1, column), literal(cell_raw(t, r1, column))));
    conjuncts.push_back(eq_node(hop_at(r2, column), literal(cell_raw(t, r2, column))));
  }
  for (const auto& other : others) {
    if (other == subject) continue;
    conjuncts.push_back(eq_node(hop_at(r1, other), literal(cell_raw(t, r1, other))));
    conjuncts.push_back(eq_node(hop_at(r2, other), literal(cell_raw(t, r2, other))));
  }
  return Ast{and_chain(std::move(conjuncts))};
}

Ast build_aggregation(const Answers& a, const Table&) {
  Node scope = build_scope(a, LogicType::Aggregation);
  std::string column = a.column("Q2");
  std::string kind = text::to_lower(a.text("Q3"));
  std::string fname;
  if (kind == "average" || kind == "avg") {
    fname = "avg";
  } else if (kind == "sum") {
    fname = "sum";
  } else {
    throw Error(ErrorCode::WrongAnswerType, "Q3: expected sum or average");
  }
  return Ast{fn("round_eq", {fn(fname, {std::move(scope), txt(column)}), txt(a.value("Q4"))})};
}

Ast build_majority(const Answers& a, const Table&) {
  Node scope = build_scope(a, LogicType::Majority);
  std::string column = a.column("Q2");
  std::string quant = text::to_lower(a.text("Q3"));
  if (quant != "all" && quant != "most") {
    throw Error(ErrorCode::WrongAnswerType, "Q3: expected all or most");
  }
  Criterion c = a.criterion("Q4");
  if (c == Criterion::All || c == Criterion::Other) {
    throw Error(ErrorCode::UnbuildableCriterion, "majority criterion cannot be expressed");
  }
  return Ast{fn(quant + "_" + predicate_suffix(c), {std::move(scope), txt(column), txt(a.value("Q5"))})};
}

Ast build_unique(const Answers& a, const Table& t) {
  Node scope = build_scope(a, LogicType::Unique);
  std::size_t row = a.row("Q2");
  std::string column = a.column("Q3");
  Criterion c = a.criterion("Q4");
  if (c == Criterion::All || c == Criterion::Other) {
    throw Error(ErrorCode::UnbuildableCriterion, "unique criterion cannot be expressed");
  }
  std::string value = a.value("Q5");
  std::vector<std::string> others = a.columns("Q6");
  const std::string subject = t.columns()[t.subject_column()];
  Node selection = filter_node(c, scope, column, value);
  std::vector<Node> conjuncts;
  conjuncts.push_back(fn("only", {selection}));
  conjuncts.push_back(eq_node(hop_node(selection, subject), literal(cell_raw(t, row, subject))));
  for (const auto& other : others) {
    if (other == subject) continue;
    conjuncts.push_back(eq_node(hop_node(selection, other), literal(cell_raw(t, row, other))));
  }
  return Ast{and_chain(std::move(conjuncts))};
}

// ------------------------------------------------------------ classification

void flatten_and(const Node& n, std::vector<const Node*>& out) {
  if (n.is_function() && n.label == "and") {
    for (const auto& c : n.children) flatten_and(c, out);
  } else {
    out.push_back(&n);
  }
}

bool any_node(const Node& n, const std::function<bool(const Node&)>& pred) {
  if (pred(n)) return true;
  for (const auto& c : n.children) {
    if (any_node(c, pred)) return true;
  }
  return false;
}

Family family_of(const Node& n) {
  const Signature* s = n.is_function() ? find_signature(n.label) : nullptr;
  return s ? s->family : Family::Count;
}

bool is_family(const Node& n, Family f) {
  return n.is_function() && find_signature(n.label) && family_of(n) == f;
}

void collect_row_selections(const Node& n, std::vector<const Node*>& out) {
  if (n.is_function() && (n.label == "hop" || n.label == "str_hop" || n.label == "num_hop") &&
      !n.children.empty() && n.children[0].is_function() &&
      (is_family(n.children[0], Family::Filter))) {
    out.push_back(&n.children[0]);
  }
  for (const auto& c : n.children) collect_row_selections(c, out);
}

bool compares_two_selections(const Node& conjunct) {
  if (!is_family(conjunct, Family::Compare) && !is_family(conjunct, Family::Diff)) return false;
  std::vector<const Node*> selections;
  collect_row_selections(conjunct, selections);
  for (std::size_t i = 0; i < selections.size(); ++i) {
    for (std::size_t j = i + 1; j < selections.size(); ++j) {
      if (!(*selections[i] == *selections[j])) return true;
    }
  }
  return false;
}

bool direct_child_named(const Node& n, std::initializer_list<std::string_view> names) {
  for (const auto& c : n.children) {
    if (c.is_function() && std::find(names.begin(), names.end(), c.label) != names.end()) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::string_view logic_type_name(LogicType t) noexcept {
  switch (t) {
    case LogicType::Count: return "count";
    case LogicType::Superlative: return "superlative";
    case LogicType::Comparative: return "comparative";
    case LogicType::Aggregation: return "aggregation";
    case LogicType::Majority: return "majority";
    case LogicType::Unique: return "unique";
    case LogicType::Ordinal: return "ordinal";
  }
  return "?";
}

std::optional<LogicType> parse_logic_type(std::string_view name) {
  std::string lower = text::to_lower(text::trim(name));
  for (auto t : kAllLogicTypes) {
    if (lower == logic_type_name(t)) return t;
  }
  return std::nullopt;
}

std::string_view logic_type_definition(LogicType t) noexcept {
  switch (t) {
    case LogicType::Count:
      return "how many rows, over all rows or a filtered subset, meet a condition on one column";
    case LogicType::Superlative:
      return "the row holding the largest or smallest value of a column, optionally within a "
             "subset, and other values on that row";
    case LogicType::Comparative:
      return "two rows compared on one column, optionally with other values on those rows";
    case LogicType::Aggregation:
      return "the sum or average of a column over all rows or a subset";
    case LogicType::Majority:
      return "whether all or most rows in a scope meet a condition on one column";
    case LogicType::Unique:
      return "the single row in a scope that meets a condition on one column";
    case LogicType::Ordinal:
      return "the row holding the n-th largest or smallest value of a column, optionally "
             "within a subset";
  }
  return "";
}

std::string_view answer_kind_name(AnswerKind k) noexcept {
  switch (k) {
    case AnswerKind::Choice: return "choice";
    case AnswerKind::Column: return "column";
    case AnswerKind::Columns: return "columns";
    case AnswerKind::Row: return "row";
    case AnswerKind::Value: return "value";
    case AnswerKind::Bool: return "bool";
  }
  return "?";
}

std::vector<Question> question_set(LogicType t) {
  using K = AnswerKind;
  const auto L = t;
  switch (t) {
    case LogicType::Count:
      return {
          q("Q1", L, "Choose whether the counting is performed on the scope of all table rows, or on a subset of all rows.", K::Choice, kScopeChoices),
          q("Q2", L, "Select the table column that the counting is performed on.", K::Column),
          q("Q3", L, "Select the criterion, based on which we filter the table records to be counted. Here we consider the following criterion: \"equal\", \"not equal\", \"less than\", \"less than or equal to\", \"greater than\", \"greater than or equal to\", \"fuzzily match\", \"all\" (or \"other\" if none of the above is correct).", K::Choice, kCountCriteria),
          q("Q4", L, "Based on the selected criterion, write the value to be filtered for counting.", K::Value, {}, Dependency{"Q3", "all", true}),
          q("Q5", L, "Write down the result of the counting.", K::Value),
      };
    case LogicType::Superlative:
      return {
          q("Q1", L, "Is the superlative action performed on the scope of all table rows, or on a subset of all rows?", K::Choice, kScopeChoices),
          q("Q2", L, "What is the table column that the superlative action is performed on?", K::Column),
          q("Q3", L, "Is the superlative action taking the numerical maximum, or minimum value among the records?", K::Choice, {"maximum", "minimum"}),
          q("Q4", L, "What is the table row containing this superlative value?", K::Row),
          q("Q5", L, "On this row with the superlative value, what are the other column(s) mentioned? If not any other column is mentioned, write 'n/a'.", K::Columns),
          q("Q6", L, "Is this superlative value itself mentioned in the statement?", K::Bool),
      };
    case LogicType::Aggregation:
      return {
          q("Q1", L, "Choose whether the aggregation is performed on the scope of all table rows, or on a subset of all rows.", K::Choice, kScopeChoices),
          q("Q2", L, "Select the table column that the aggregation is performed on.", K::Column),
          q("Q3", L, "What is the type of this aggregation, sum or average?", K::Choice, {"sum", "average"}),
          q("Q4", L, "What is the result of this aggregation?", K::Value),
      };
    case LogicType::Comparative:
      return {
          q("Q1", L, "Which column is the statement comparing?", K::Column),
          q("Q2", L, "What is the first row to be compared?", K::Row),
          q("Q3", L, "What is the second row to be compared?", K::Row),
          q("Q4", L, "What is the relationship comparing the records numerically in the first row with the second? (choose from \"greater\", \"less\", \"equal\", \"not equal\", \"difference value\", or \"other\" if not any of the above. Here we consider the relationship between actual numerical values between two records, NOT the relationship expressed in the statement )", K::Choice, {"greater", "less", "equal", "not equal", "difference value", "other"}),
          q("Q5", L, "Is the compared records itself mentioned in the statement?", K::Bool),
          q("Q6", L, "What are the other column(s) of these two rows mentioned in the statement?", K::Columns),
      };
    case LogicType::Majority:
      return {
          q("Q1", L, "What is the scope of this majority?", K::Choice, kScopeChoices),
          q("Q2", L, "Which column the statement is describing?", K::Column),
          q("Q3", L, "Is the statement describing all the records or most frequent records within the scope?", K::Choice, {"all", "most"}),
          q("Q4", L, "Select the criterion, based on which we filter records to describe the majority. Here we consider the following criterion: \"equal\", \"not equal\", \"less than\", \"less than or equal to\", \"greater than\", \"greater than or equal to\", \"fuzzily match\" (or \"other\" if none of the above is correct).", K::Choice, kMajorityCriteria),
          q("Q5", L, "Based on the selected criterion, write the value to be filtered for describing the majority.", K::Value),
      };
    case LogicType::Ordinal:
      return {
          q("Q1", L, "What is the scope that the ordinal description is performed on? (all rows or a subset of rows)", K::Choice, kScopeChoices),
          q("Q2", L, "What is the table column that the ordinal description is based on?", K::Column),
          q("Q3", L, "Is the ordinal description based on a numerically max to min or min to max ranking of the column records?", K::Choice, {"max to min", "min to max"}),
          q("Q4", L, "What is the order described in the statement, based on this ranking?", K::Value),
          q("Q5", L, "What is the table row containing this n-th record ?", K::Row),
          q("Q6", L, "On this row, what are the other column(s) mentioned? If not any other column is mentioned, write 'n/a'.", K::Columns),
          q("Q7", L, "Is this n-th record itself mentioned in the statement?", K::Bool),
      };
    case LogicType::Unique:
      return {
          q("Q1", L, "What is the scope of this statement describing unique row?", K::Choice, kScopeChoices),
          q("Q2", L, "What is this unique row?", K::Row),
          q("Q3", L, "Write the table column that shows the uniqueness of this row", K::Column),
          q("Q4", L, "Select the criterion, based on which we filter records in this column to find the unique row. Here we consider the following criterion: \"equal\", \"not equal\", \"less than\", \"greater than\", \"fuzzily match\" (or \"other\" if none of the above is correct).", K::Choice, kUniqueCriteria),
          q("Q5", L, "Based on the selected criterion, write the value to be filtered for the unqiue row.", K::Value),
          q("Q6", L, "On this unique row, what are the other column(s) mentioned (except the column describing the scope)? If not any other column is mentioned, write 'n/a'.", K::Columns),
      };
  }
  return {};
}

std::vector<Question> scope_questions(LogicType t) {
  auto id = scope_id(t);
  if (!id) return {};
  Dependency dep{*id, "subset", false};
  return {
      q(*id + ".1", t, "Which table column defines the subset of rows in the scope?",
        AnswerKind::Column, {}, dep),
      q(*id + ".2", t, "Select the criterion that selects the rows of the scope.",
        AnswerKind::Choice, kScopeCriteria, dep),
      q(*id + ".3", t, "Write the value that the scope criterion is applied with.",
        AnswerKind::Value, {}, dep),
  };
}

std::vector<Question> full_question_set(LogicType t) {
  std::vector<Question> out;
  auto scope = scope_questions(t);
  auto sid = scope_id(t);
  for (auto& question : question_set(t)) {
    bool is_scope = sid && question.id == *sid;
    out.push_back(std::move(question));
    if (is_scope) {
      for (auto& s : scope) out.push_back(std::move(s));
    }
  }
  return out;
}

void apply_prompt_overrides(std::vector<Question>& questions, const KeyValues& prompts) {
  for (auto& question : questions) {
    std::string key = std::string(logic_type_name(question.logic_type)) + "." + question.id;
    if (auto it = prompts.find(key); it != prompts.end()) question.prompt = it->second;
  }
}

std::string_view criterion_name(Criterion c) noexcept {
  switch (c) {
    case Criterion::Equal: return "equal";
    case Criterion::NotEqual: return "not equal";
    case Criterion::Less: return "less than";
    case Criterion::LessEq: return "less than or equal to";
    case Criterion::Greater: return "greater than";
    case Criterion::GreaterEq: return "greater than or equal to";
    case Criterion::FuzzyMatch: return "fuzzily match";
    case Criterion::All: return "all";
    case Criterion::Other: return "other";
  }
  return "other";
}

std::optional<Criterion> parse_criterion(std::string_view s) {
  std::string norm = text::to_lower(text::collapse_ws(s));
  std::replace(norm.begin(), norm.end(), '_', ' ');
  static const std::pair<std::string_view, Criterion> aliases[] = {
      {"eq", Criterion::Equal},          {"not eq", Criterion::NotEqual},
      {"less", Criterion::Less},         {"less eq", Criterion::LessEq},
      {"greater", Criterion::Greater},   {"greater eq", Criterion::GreaterEq},
      {"fuzzy match", Criterion::FuzzyMatch}, {"fuzzy", Criterion::FuzzyMatch},
      {"not equal to", Criterion::NotEqual}, {"equal to", Criterion::Equal}};
  for (auto c : {Criterion::Equal, Criterion::NotEqual, Criterion::Less, Criterion::LessEq,
                 Criterion::Greater, Criterion::GreaterEq, Criterion::FuzzyMatch, Criterion::All,
                 Criterion::Other}) {
    if (norm == criterion_name(c)) return c;
  }
  for (auto [alias, c] : aliases) {
    if (norm == alias) return c;
  }
  return std::nullopt;
}

namespace {

bool answer_equals(const Answer& a, const std::string& value) {
  if (const auto* s = std::get_if<std::string>(&a)) {
    return text::to_lower(text::collapse_ws(*s)) == value;
  }
  return false;
}

bool dependency_holds(const Question& question, const AnswerRecord& rec) {
  if (!question.depends_on) return true;
  const auto& dep = *question.depends_on;
  auto it = rec.answers.find(dep.question_id);
  if (it == rec.answers.end()) return dep.negate;
  bool eq = answer_equals(it->second, dep.value);
  return dep.negate ? !eq : eq;
}

}  // namespace

std::vector<Question> applicable_questions(const AnswerRecord& rec) {
  std::vector<Question> out;
  for (auto& question : full_question_set(rec.logic_type)) {
    if (dependency_holds(question, rec)) out.push_back(std::move(question));
  }
  return out;
}

Answer normalize_answer(const Question& question, const Answer& a) {
  auto wrong = [&](const std::string& what) {
    return Error(ErrorCode::WrongAnswerType,
                 question.id + ": expected " + what + " (" +
                     std::string(answer_kind_name(question.answer_kind)) + ")");
  };
  switch (question.answer_kind) {
    case AnswerKind::Choice: {
      const auto* s = std::get_if<std::string>(&a);
      if (!s) throw wrong("one of the listed choices");
      std::string norm = text::to_lower(text::collapse_ws(*s));
      std::replace(norm.begin(), norm.end(), '_', ' ');
      for (const auto& choice : question.choices) {
        if (norm == choice) return Answer{choice};
      }
      if (auto c = parse_criterion(norm)) {
        std::string canon(criterion_name(*c));
        if (std::find(question.choices.begin(), question.choices.end(), canon) !=
            question.choices.end()) {
          return Answer{canon};
        }
      }
      static const std::pair<std::string_view, std::string_view> synonyms[] = {
          {"max", "maximum"}, {"min", "minimum"}, {"avg", "average"}, {"diff", "difference value"}};
      for (auto [from, to] : synonyms) {
        if (norm == from && std::find(question.choices.begin(), question.choices.end(),
                                      std::string(to)) != question.choices.end()) {
          return Answer{std::string(to)};
        }
      }
      throw wrong("one of the listed choices");
    }
    case AnswerKind::Column:
    case AnswerKind::Value: {
      const auto* s = std::get_if<std::string>(&a);
      if (!s || text::trim(*s).empty()) throw wrong("non-empty text");
      return Answer{text::collapse_ws(*s)};
    }
    case AnswerKind::Columns: {
      if (const auto* list = std::get_if<std::vector<std::string>>(&a)) return *list;
      if (const auto* s = std::get_if<std::string>(&a)) {
        std::string t = text::trim(*s);
        if (t.empty() || text::to_lower(t) == "n/a") return Answer{std::vector<std::string>{}};
        return Answer{std::vector<std::string>{t}};
      }
      throw wrong("a list of columns");
    }
    case AnswerKind::Row: {
      if (const auto* r = std::get_if<std::size_t>(&a)) return *r;
      throw wrong("a row index");
    }
    case AnswerKind::Bool: {
      if (const auto* b = std::get_if<bool>(&a)) return *b;
      if (const auto* s = std::get_if<std::string>(&a)) {
        std::string t = text::to_lower(text::trim(*s));
        if (t == "yes" || t == "true") return true;
        if (t == "no" || t == "false") return false;
      }
      throw wrong("yes or no");
    }
  }
  throw wrong("an answer");
}

Ast build_from_answers(const AnswerRecord& rec, const Table& table) {
  for (const auto& question : applicable_questions(rec)) {
    if (!rec.answers.count(question.id)) {
      throw Error(ErrorCode::IncompleteAnswers, "unanswered: " + question.id);
    }
  }
  Answers a(rec, table);
  switch (rec.logic_type) {
    case LogicType::Count: return build_count(a, table);
    case LogicType::Superlative: return build_row_focused(a, table, LogicType::Superlative);
    case LogicType::Ordinal: return build_row_focused(a, table, LogicType::Ordinal);
    case LogicType::Comparative: return build_comparative(a, table);
    case LogicType::Aggregation: return build_aggregation(a, table);
    case LogicType::Majority: return build_majority(a, table);
    case LogicType::Unique: return build_unique(a, table);
  }
  throw Error(ErrorCode::IncompleteAnswers, "unknown logic type");
}

LogicType classify(const Ast& ast) {
  const Node& root = ast.root;
  std::vector<const Node*> conjuncts;
  flatten_and(root, conjuncts);

  if (any_node(root, [](const Node& n) {
        return n.is_function() && n.label.rfind("nth_", 0) == 0;
      })) {
    return LogicType::Ordinal;
  }
  for (const Node* c : conjuncts) {
    if (c->is_function() && c->label == "only") return LogicType::Unique;
  }
  for (const Node* c : conjuncts) {
    if (is_family(*c, Family::AllQuantifier) || is_family(*c, Family::MostQuantifier)) {
      return LogicType::Majority;
    }
  }
  for (const Node* c : conjuncts) {
    if (is_family(*c, Family::Compare) && direct_child_named(*c, {"avg", "sum"})) {
      return LogicType::Aggregation;
    }
  }
  for (const Node* c : conjuncts) {
    if (is_family(*c, Family::Compare) && direct_child_named(*c, {"count"})) {
      return LogicType::Count;
    }
  }
  for (const Node* c : conjuncts) {
    if (compares_two_selections(*c)) return LogicType::Comparative;
  }
  if (any_node(root, [](const Node& n) { return n.is_function() && n.label == "diff"; })) {
    return LogicType::Comparative;
  }
  if (any_node(root, [](const Node& n) {
        return n.is_function() &&
               (n.label == "argmax" || n.label == "argmin" || n.label == "max" || n.label == "min");
      })) {
    return LogicType::Superlative;
  }
  throw Error(ErrorCode::Unclassifiable, "no prototype matches '" + print_logic_str(ast) + "'");
}

std::vector<std::string> validate_answers(const AnswerRecord& rec, const Table& table,
                                          const ExecConfig& cfg) {
  std::vector<std::string> issues;
  auto questions = applicable_questions(rec);
  bool buildable = true;
  for (const auto& question : questions) {
    auto it = rec.answers.find(question.id);
    if (it == rec.answers.end()) {
      issues.push_back("unanswered: " + question.id);
      buildable = false;
      continue;
    }
    Answer norm;
    try {
      norm = normalize_answer(question, it->second);
    } catch (const Error& e) {
      issues.push_back("wrong answer type: " + std::string(e.what()));
      buildable = false;
      continue;
    }
    if (question.answer_kind == AnswerKind::Column) {
      const auto& name = std::get<std::string>(norm);
      if (!table.resolve_column(name)) {
        issues.push_back("column not found: " + question.id + " '" + name + "'");
        buildable = false;
      }
    } else if (question.answer_kind == AnswerKind::Columns) {
      for (const auto& name : std::get<std::vector<std::string>>(norm)) {
        if (!table.resolve_column(name)) {
          issues.push_back("column not found: " + question.id + " '" + name + "'");
          buildable = false;
        }
      }
    } else if (question.answer_kind == AnswerKind::Row) {
      if (std::get<std::size_t>(norm) >= table.row_count()) {
        issues.push_back("row out of range: " + question.id);
        buildable = false;
      }
    } else if (question.answer_kind == AnswerKind::Choice) {
      if (auto c = parse_criterion(std::get<std::string>(norm)); c && *c == Criterion::Other) {
        issues.push_back("unbuildable criterion: " + question.id);
        buildable = false;
      }
    }
  }

  // Ordering criteria need a value with a numeric or date facet.
  for (const auto& question : questions) {
    if (question.answer_kind != AnswerKind::Choice) continue;
    auto it = rec.answers.find(question.id);
    if (it == rec.answers.end()) continue;
    const auto* s = std::get_if<std::string>(&it->second);
    if (!s) continue;
    auto c = parse_criterion(*s);
    if (!c || !(*c == Criterion::Less || *c == Criterion::LessEq || *c == Criterion::Greater ||
                *c == Criterion::GreaterEq)) {
      continue;
    }
    // The value question follows its criterion question.
    auto pos = std::find_if(questions.begin(), questions.end(),
                            [&](const Question& x) { return x.id == question.id; });
    if (pos == questions.end() || pos + 1 == questions.end()) continue;
    const Question& value_q = *(pos + 1);
    if (value_q.answer_kind != AnswerKind::Value) continue;
    auto vit = rec.answers.find(value_q.id);
    if (vit == rec.answers.end()) continue;
    if (const auto* v = std::get_if<std::string>(&vit->second)) {
      CellValue cv = parse_cell(*v);
      if (cv.kind == CellKind::Text && !cv.first_number) {
        issues.push_back("type-incompatible value: " + value_q.id + " '" + *v + "' for " +
                         std::string(criterion_name(*c)));
        buildable = false;
      }
    }
  }

  if (!buildable) return issues;
  try {
    Ast ast = build_from_answers(rec, table);
    Value v = evaluate(ast, table, cfg);
    if (!v.as_bool()) issues.push_back("execution mismatch: program evaluates to false");
  } catch (const Error& e) {
    issues.push_back(std::string(e.code_name()) + ": " + e.what());
  }
  return issues;
}

}  // namespace l2t
