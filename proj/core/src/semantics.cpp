#include "l2t/semantics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "l2t/error.hpp"
#include "l2t/text_util.hpp"

namespace l2t {

namespace {

using S = SemType;

Signature sig(std::string name, std::vector<SemType> args, SemType result, Family f) {
  return Signature{std::move(name), std::move(args), result, f};
}

std::vector<Signature> build_signatures() {
  std::vector<Signature> out;
  out.push_back(sig("count", {S::View}, S::Number, Family::Count));
  out.push_back(sig("only", {S::View}, S::Bool, Family::Only));
  for (auto name : {"hop", "str_hop", "num_hop"}) {
    out.push_back(sig(name, {S::Row, S::HeaderStr}, S::Obj, Family::Hop));
  }
  out.push_back(sig("and", {S::Bool, S::Bool}, S::Bool, Family::And));

  const std::pair<std::string_view, AggregateKind> aggregates[] = {
      {"max", AggregateKind::Max}, {"min", AggregateKind::Min},
      {"avg", AggregateKind::Avg}, {"sum", AggregateKind::Sum}};
  for (auto [name, kind] : aggregates) {
    auto s = sig(std::string(name), {S::View, S::HeaderStr}, S::Number, Family::Aggregate);
    s.aggregate = kind;
    out.push_back(s);
  }
  for (auto [suffix, kind] : {std::pair{"max", ExtremeKind::Max}, std::pair{"min", ExtremeKind::Min}}) {
    auto nth = sig(std::string("nth_") + suffix, {S::View, S::HeaderStr, S::Number}, S::Number,
                   Family::NthValue);
    nth.extreme = kind;
    out.push_back(nth);
    auto arg = sig(std::string("arg") + suffix, {S::View, S::HeaderStr}, S::Row, Family::ArgExtreme);
    arg.extreme = kind;
    out.push_back(arg);
    auto nth_arg = sig(std::string("nth_arg") + suffix, {S::View, S::HeaderStr, S::Number}, S::Row,
                       Family::NthArgExtreme);
    nth_arg.extreme = kind;
    out.push_back(nth_arg);
  }

  const std::pair<std::string_view, CompareKind> compares[] = {
      {"eq", CompareKind::Eq},           {"not_eq", CompareKind::NotEq},
      {"round_eq", CompareKind::RoundEq}, {"greater", CompareKind::Greater},
      {"less", CompareKind::Less},       {"str_eq", CompareKind::StrEq},
      {"not_str_eq", CompareKind::StrNotEq}, {"str_not_eq", CompareKind::StrNotEq}};
  for (auto [name, kind] : compares) {
    auto s = sig(std::string(name), {S::Obj, S::Obj}, S::Bool, Family::Compare);
    s.compare = kind;
    out.push_back(s);
  }
  out.push_back(sig("diff", {S::Obj, S::Obj}, S::Obj, Family::Diff));

  const std::pair<std::string_view, PredicateKind> predicates[] = {
      {"eq", PredicateKind::Eq},
      {"not_eq", PredicateKind::NotEq},
      {"greater", PredicateKind::Greater},
      {"less", PredicateKind::Less},
      {"greater_eq", PredicateKind::GreaterEq},
      {"less_eq", PredicateKind::LessEq},
      {"str_eq", PredicateKind::StrEq},
      {"str_not_eq", PredicateKind::StrNotEq}};
  for (auto [suffix, kind] : predicates) {
    for (auto [prefix, family, result] :
         {std::tuple{"filter_", Family::Filter, S::View},
          std::tuple{"all_", Family::AllQuantifier, S::Bool},
          std::tuple{"most_", Family::MostQuantifier, S::Bool}}) {
      auto s = sig(std::string(prefix) + std::string(suffix), {S::View, S::HeaderStr, S::Obj}, result, family);
      s.predicate = kind;
      out.push_back(s);
    }
  }
  out.push_back(sig("filter_all", {S::View, S::HeaderStr}, S::View, Family::FilterAll));
  return out;
}

std::string path_string(const std::vector<std::size_t>& path) {
  if (path.empty()) return "/";
  std::string out;
  for (auto i : path) out += "/" + std::to_string(i);
  return out;
}

bool accepts(SemType expected, SemType actual) {
  if (expected == actual) return true;
  if (expected == S::Obj && actual == S::Number) return true;
  if (expected == S::Row && actual == S::View) return true;
  return false;
}

TypedNode check_node(const Node& node, SemType expected, std::vector<std::size_t>& path) {
  if (node.is_text()) {
    switch (expected) {
      case S::HeaderStr:
      case S::Obj:
        return TypedNode{expected, {}};
      case S::View:
        if (node.label == "all_rows") return TypedNode{S::View, {}};
        break;
      case S::Row:
        if (node.label == "all_rows") return TypedNode{S::View, {}};
        break;
      case S::Number:
        if (parse_cell(node.label).first_number) return TypedNode{S::Number, {}};
        break;
      case S::Bool:
        break;
    }
    throw Error(ErrorCode::TypeMismatch, "text '" + node.label + "' at " + path_string(path) +
                                             " cannot be " +
                                             std::string(sem_type_name(expected)));
  }
  const Signature* s = find_signature(node.label);
  if (!s) {
    throw Error(ErrorCode::UnknownFunction,
                "unknown function '" + node.label + "' at " + path_string(path));
  }
  if (node.children.size() != s->args.size()) {
    throw Error(ErrorCode::ArityMismatch,
                "'" + node.label + "' at " + path_string(path) + " takes " +
                    std::to_string(s->args.size()) + " arguments, got " +
                    std::to_string(node.children.size()));
  }
  if (!accepts(expected, s->result)) {
    throw Error(ErrorCode::TypeMismatch, "'" + node.label + "' at " + path_string(path) +
                                             " returns " + std::string(sem_type_name(s->result)) +
                                             ", expected " +
                                             std::string(sem_type_name(expected)));
  }
  TypedNode typed{s->result, {}};
  typed.children.reserve(node.children.size());
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    path.push_back(i);
    typed.children.push_back(check_node(node.children[i], s->args[i], path));
    path.pop_back();
  }
  return typed;
}

// ------------------------------------------------------------ ordering keys

struct Keyed {
  std::size_t row;
  double key;
};

struct KeyedColumn {
  std::vector<Keyed> items;
  bool date_mode = false;
};

double date_key(const Date& d) {
  return d.year * 10000.0 + d.month.value_or(0) * 100.0 + d.day.value_or(0);
}

std::optional<double> numeric_facet(const CellValue& v) {
  if (v.kind == CellKind::Number) return v.number;
  if (v.kind == CellKind::Text) return v.first_number;
  return std::nullopt;
}

bool year_like(double v) { return v == std::floor(v) && v >= 1000 && v <= 2999; }

void note(EvalLog* log, std::string msg) {
  if (log) log->note(std::move(msg));
}

// Date mode applies when dates are at least as common as other numeric cells.
KeyedColumn keyed_values(const View& view, std::size_t col, bool allow_dates, EvalLog* log) {
  const Table& t = view.table();
  std::size_t n_date = 0, n_numeric = 0;
  for (auto r : view.rows()) {
    const auto& v = t.cell(r, col).value;
    if (v.kind == CellKind::Date) {
      ++n_date;
    } else if (numeric_facet(v)) {
      ++n_numeric;
    }
  }
  KeyedColumn out;
  out.date_mode = allow_dates && n_date > 0 && n_date >= n_numeric;
  for (auto r : view.rows()) {
    const auto& v = t.cell(r, col).value;
    std::optional<double> key;
    if (out.date_mode) {
      if (v.kind == CellKind::Date) {
        key = date_key(*v.date);
      } else if (v.kind == CellKind::Number && year_like(*v.number)) {
        key = *v.number * 10000.0;
      }
    } else {
      key = numeric_facet(v);
    }
    if (key) {
      out.items.push_back({r, *key});
    } else {
      note(log, "skipped non-numeric cell '" + t.cell(r, col).raw + "' in row " +
                    std::to_string(r) + ", column '" + t.columns()[col] + "'");
    }
  }
  return out;
}

// Stable ranking: descending for Max, ascending for Min; ties keep table order.
std::vector<Keyed> ranked(KeyedColumn column, ExtremeKind kind) {
  auto& items = column.items;
  if (kind == ExtremeKind::Max) {
    std::stable_sort(items.begin(), items.end(),
                     [](const Keyed& a, const Keyed& b) { return a.key > b.key; });
  } else {
    std::stable_sort(items.begin(), items.end(),
                     [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
  }
  return std::move(items);
}

std::size_t ordinal_of(const CellValue& n) {
  auto v = n.kind == CellKind::Number ? n.number : n.first_number;
  if (!v || *v < 1 || *v != std::floor(*v)) {
    throw Error(ErrorCode::OrdinalOutOfRange, "ordinal '" + n.text + "' is not a positive integer");
  }
  return static_cast<std::size_t>(*v);
}

CellValue value_at(const View& view, std::size_t col, const Keyed& k, bool date_mode) {
  if (date_mode) return view.table().cell(k.row, col).value;
  return make_number(k.key);
}

std::size_t decimals_of(std::string_view s) {
  auto dot = s.find('.');
  if (dot == std::string_view::npos) return 0;
  std::size_t n = 0;
  for (std::size_t i = dot + 1; i < s.size() && text::is_digit(s[i]); ++i) ++n;
  return n;
}

long days_from_civil(const Date& d) {
  using namespace std::chrono;
  year_month_day ymd{year{d.year}, month{static_cast<unsigned>(d.month.value_or(1))},
                     day{static_cast<unsigned>(d.day.value_or(1))}};
  return sys_days{ymd}.time_since_epoch().count();
}

std::string predicate_name(PredicateKind k) {
  switch (k) {
    case PredicateKind::Eq: return "eq";
    case PredicateKind::NotEq: return "not_eq";
    case PredicateKind::Greater: return "greater";
    case PredicateKind::Less: return "less";
    case PredicateKind::GreaterEq: return "greater_eq";
    case PredicateKind::LessEq: return "less_eq";
    case PredicateKind::StrEq: return "str_eq";
    case PredicateKind::StrNotEq: return "str_not_eq";
  }
  return "?";
}

bool is_ordering(PredicateKind k) {
  return k == PredicateKind::Greater || k == PredicateKind::Less ||
         k == PredicateKind::GreaterEq || k == PredicateKind::LessEq;
}

std::size_t count_satisfying(PredicateKind kind, const View& view, std::size_t col,
                             const CellValue& value, EvalLog* log) {
  const Table& t = view.table();
  std::size_t n = 0;
  for (auto r : view.rows()) {
    const auto& cell = t.cell(r, col).value;
    if (cell_satisfies(kind, cell, value)) {
      ++n;
    } else if (is_ordering(kind) && compare_cells(cell, value) == Comparison::Incomparable) {
      note(log, "row " + std::to_string(r) + ": '" + t.cell(r, col).raw +
                    "' is incomparable with '" + value.text + "'");
    }
  }
  return n;
}

// ------------------------------------------------------------ evaluator

class Evaluator {
 public:
  Evaluator(const Table& table, const ExecConfig& cfg, EvalLog* log)
      : table_(table), cfg_(cfg), log_(log) {}

  Value eval(const Node& node, const TypedNode& typed) {
    if (node.is_text()) {
      if (typed.type == S::View) return Value{all_rows(table_)};
      return Value{parse_cell(node.label)};
    }
    const Signature& s = *find_signature(node.label);
    Value result = dispatch(node, typed, s);
    if (log_ && log_->record_trace) log_->trace.emplace_back(print_node(node), format_value(result));
    return result;
  }

 private:
  View view_arg(const Node& node, const TypedNode& typed, std::size_t i) {
    Value v = eval(node.children[i], typed.children[i]);
    return std::get<View>(std::move(v.data));
  }

  CellValue cell_arg(const Node& node, const TypedNode& typed, std::size_t i) {
    Value v = eval(node.children[i], typed.children[i]);
    if (auto* c = std::get_if<CellValue>(&v.data)) return *c;
    throw Error(ErrorCode::TypeMismatch, "argument " + std::to_string(i) + " of '" + node.label +
                                             "' is not a scalar");
  }

  static std::string_view header_arg(const Node& node, std::size_t i) {
    return node.children[i].label;
  }

  Value dispatch(const Node& node, const TypedNode& typed, const Signature& s) {
    switch (s.family) {
      case Family::Count:
        return Value{eval_count(view_arg(node, typed, 0))};
      case Family::Only:
        return Value{eval_only(view_arg(node, typed, 0))};
      case Family::Hop: {
        Value target = eval(node.children[0], typed.children[0]);
        std::variant<RowRef, View> rv;
        if (auto* row = std::get_if<RowRef>(&target.data)) {
          rv = *row;
        } else {
          rv = std::get<View>(std::move(target.data));
        }
        return Value{eval_hop(rv, header_arg(node, 1), cfg_)};
      }
      case Family::And: {
        bool a = eval(node.children[0], typed.children[0]).as_bool();
        bool b = eval(node.children[1], typed.children[1]).as_bool();
        return Value{a && b};
      }
      case Family::Aggregate:
        return Value{eval_aggregate(s.aggregate, view_arg(node, typed, 0), header_arg(node, 1), log_)};
      case Family::NthValue: {
        View v = view_arg(node, typed, 0);
        CellValue n = cell_arg(node, typed, 2);
        return Value{eval_nth_value(s.extreme, v, header_arg(node, 1), n, log_)};
      }
      case Family::ArgExtreme:
        return Value{eval_arg_extreme(s.extreme, view_arg(node, typed, 0), header_arg(node, 1), log_)};
      case Family::NthArgExtreme: {
        View v = view_arg(node, typed, 0);
        CellValue n = cell_arg(node, typed, 2);
        return Value{eval_nth_arg_extreme(s.extreme, v, header_arg(node, 1), n, log_)};
      }
      case Family::Compare: {
        CellValue a = cell_arg(node, typed, 0);
        CellValue b = cell_arg(node, typed, 1);
        return Value{eval_compare(s.compare, a, b, cfg_)};
      }
      case Family::Diff: {
        CellValue a = cell_arg(node, typed, 0);
        CellValue b = cell_arg(node, typed, 1);
        return Value{eval_diff(a, b)};
      }
      case Family::Filter: {
        View v = view_arg(node, typed, 0);
        CellValue x = cell_arg(node, typed, 2);
        return Value{eval_filter(s.predicate, v, header_arg(node, 1), &x, log_)};
      }
      case Family::FilterAll:
        return Value{eval_filter(std::nullopt, view_arg(node, typed, 0), header_arg(node, 1),
                                 nullptr, log_)};
      case Family::AllQuantifier: {
        View v = view_arg(node, typed, 0);
        CellValue x = cell_arg(node, typed, 2);
        return Value{eval_all_quantifier(s.predicate, v, header_arg(node, 1), x, log_)};
      }
      case Family::MostQuantifier: {
        View v = view_arg(node, typed, 0);
        CellValue x = cell_arg(node, typed, 2);
        return Value{eval_most_quantifier(s.predicate, v, header_arg(node, 1), x, cfg_, log_)};
      }
    }
    throw Error(ErrorCode::UnknownFunction, "unhandled function '" + node.label + "'");
  }

  const Table& table_;
  const ExecConfig& cfg_;
  EvalLog* log_;
};

}  // namespace

std::string_view sem_type_name(SemType t) noexcept {
  switch (t) {
    case S::Bool: return "Bool";
    case S::Number: return "Number";
    case S::Row: return "Row";
    case S::View: return "View";
    case S::Obj: return "Obj";
    case S::HeaderStr: return "HeaderStr";
  }
  return "?";
}

const std::vector<Signature>& signatures() {
  static const std::vector<Signature> table = build_signatures();
  return table;
}

const Signature* find_signature(std::string_view name) {
  for (const auto& s : signatures()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

void ExecConfig::validate() const {
  if (!(most_threshold > 0.0 && most_threshold < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "most_threshold must lie in (0, 1)");
  }
  if (!(round_eq_relative_tol >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "round_eq_relative_tol must be >= 0");
  }
  if (round_eq_absolute_floor && !(*round_eq_absolute_floor >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "round_eq_absolute_floor must be >= 0");
  }
}

ExecConfig exec_config_from(const KeyValues& kv) {
  ExecConfig cfg;
  auto number = [](const std::string& key, const std::string& v) {
    auto parsed = parse_number(text::to_lower(v));
    if (!parsed) throw Error(ErrorCode::InvalidConfig, key + ": not a number: '" + v + "'");
    return *parsed;
  };
  for (const auto& [key, value] : kv) {
    if (key == "round_eq_relative_tol") {
      cfg.round_eq_relative_tol = number(key, value);
    } else if (key == "round_eq_absolute_floor") {
      if (value == "auto") {
        cfg.round_eq_absolute_floor.reset();
      } else {
        cfg.round_eq_absolute_floor = number(key, value);
      }
    } else if (key == "most_threshold") {
      cfg.most_threshold = number(key, value);
    } else if (key == "hop_view_policy") {
      if (value == "first_row") {
        cfg.hop_view_policy = HopViewPolicy::FirstRow;
      } else if (value == "require_singleton") {
        cfg.hop_view_policy = HopViewPolicy::RequireSingleton;
      } else {
        throw Error(ErrorCode::InvalidConfig, "hop_view_policy: unknown policy '" + value + "'");
      }
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExecConfig load_exec_config(const std::filesystem::path& path) {
  return exec_config_from(load_key_values(path));
}

std::string to_key_values(const ExecConfig& cfg) {
  std::ostringstream out;
  out << "round_eq_relative_tol = " << text::format_number(cfg.round_eq_relative_tol) << "\n";
  out << "round_eq_absolute_floor = "
      << (cfg.round_eq_absolute_floor ? text::format_number(*cfg.round_eq_absolute_floor)
                                      : std::string("auto"))
      << "\n";
  out << "most_threshold = " << text::format_number(cfg.most_threshold) << "\n";
  out << "hop_view_policy = "
      << (cfg.hop_view_policy == HopViewPolicy::FirstRow ? "first_row" : "require_singleton")
      << "\n";
  return out.str();
}

TypedAst typecheck(const Ast& ast) {
  std::vector<std::size_t> path;
  if (!ast.root.is_function()) {
    throw Error(ErrorCode::TypeMismatch, "program root must be a function");
  }
  TypedNode root = check_node(ast.root, S::Bool, path);
  return TypedAst{ast, std::move(root)};
}

ValueKind Value::kind() const noexcept {
  switch (data.index()) {
    case 0: return ValueKind::Bool;
    case 1:
      switch (std::get<CellValue>(data).kind) {
        case CellKind::Number: return ValueKind::Number;
        case CellKind::Date: return ValueKind::Date;
        case CellKind::Text: return ValueKind::Text;
      }
      return ValueKind::Text;
    case 2: return ValueKind::Row;
    default: return ValueKind::View;
  }
}

std::string_view value_kind_name(ValueKind k) noexcept {
  switch (k) {
    case ValueKind::Bool: return "bool";
    case ValueKind::Number: return "number";
    case ValueKind::Date: return "date";
    case ValueKind::Text: return "text";
    case ValueKind::Row: return "row";
    case ValueKind::View: return "view";
  }
  return "?";
}

bool value_has_type(const Value& v, SemType t) noexcept {
  switch (t) {
    case S::Bool: return v.kind() == ValueKind::Bool;
    case S::Number: return v.kind() == ValueKind::Number || v.kind() == ValueKind::Date;
    case S::Obj:
      return v.kind() == ValueKind::Number || v.kind() == ValueKind::Date ||
             v.kind() == ValueKind::Text;
    case S::Row: return v.kind() == ValueKind::Row;
    case S::View: return v.kind() == ValueKind::View;
    case S::HeaderStr: return v.kind() == ValueKind::Text;
  }
  return false;
}

std::string format_value(const Value& v) {
  switch (v.kind()) {
    case ValueKind::Bool: return v.as_bool() ? "true" : "false";
    case ValueKind::Number: return text::format_number(*v.as_cell().number);
    case ValueKind::Date:
    case ValueKind::Text: return v.as_cell().text;
    case ValueKind::Row: return "row " + std::to_string(v.as_row().index);
    case ValueKind::View: {
      std::string out = "view [";
      const auto& rows = v.as_view().rows();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(rows[i]);
      }
      return out + "]";
    }
  }
  return "?";
}

Value evaluate(const TypedAst& typed, const Table& table, const ExecConfig& cfg, EvalLog* log) {
  cfg.validate();
  Evaluator ev(table, cfg, log);
  return ev.eval(typed.ast.root, typed.root);
}

Value evaluate(const Ast& ast, const Table& table, const ExecConfig& cfg, EvalLog* log) {
  return evaluate(typecheck(ast), table, cfg, log);
}

Value evaluate_subprogram(const Node& node, const Table& table, const ExecConfig& cfg) {
  if (node.is_text()) {
    if (node.label == "all_rows") return Value{all_rows(table)};
    return Value{parse_cell(node.label)};
  }
  const Signature* s = find_signature(node.label);
  if (!s) throw Error(ErrorCode::UnknownFunction, "unknown function '" + node.label + "'");
  std::vector<std::size_t> path;
  TypedNode typed = check_node(node, s->result, path);
  cfg.validate();
  Evaluator ev(table, cfg, nullptr);
  return ev.eval(node, typed);
}

// ------------------------------------------------------------ families

std::size_t resolve_column_or_throw(const Table& table, std::string_view header) {
  if (auto c = table.resolve_column(header)) return *c;
  throw Error(ErrorCode::ColumnNotFound, "no column matches '" + std::string(header) + "'");
}

CellValue eval_count(const View& view) { return make_number(static_cast<double>(view.size())); }

bool eval_only(const View& view) { return view.size() == 1; }

CellValue eval_hop(const std::variant<RowRef, View>& target, std::string_view column,
                   const ExecConfig& cfg) {
  if (const auto* row = std::get_if<RowRef>(&target)) {
    std::size_t col = resolve_column_or_throw(*row->table, column);
    return row->table->cell(row->index, col).value;
  }
  const View& view = std::get<View>(target);
  std::size_t col = resolve_column_or_throw(view.table(), column);
  if (view.empty()) throw Error(ErrorCode::EmptyViewError, "hop over an empty view");
  if (cfg.hop_view_policy == HopViewPolicy::RequireSingleton && view.size() != 1) {
    throw Error(ErrorCode::NonSingletonView,
                "hop over a view of " + std::to_string(view.size()) + " rows");
  }
  return view.table().cell(view.rows().front(), col).value;
}

CellValue eval_aggregate(AggregateKind kind, const View& view, std::string_view column,
                         EvalLog* log) {
  std::size_t col = resolve_column_or_throw(view.table(), column);
  const bool ordering = kind == AggregateKind::Max || kind == AggregateKind::Min;
  KeyedColumn values = keyed_values(view, col, ordering, log);
  if (kind == AggregateKind::Sum) {
    double total = 0;
    for (const auto& k : values.items) total += k.key;
    return make_number(total);
  }
  if (values.items.empty()) {
    throw Error(ErrorCode::EmptyViewError,
                "no numeric values under '" + view.table().columns()[col] + "'");
  }
  if (kind == AggregateKind::Avg) {
    double total = 0;
    for (const auto& k : values.items) total += k.key;
    return make_number(total / static_cast<double>(values.items.size()));
  }
  const Keyed* best = &values.items.front();
  for (const auto& k : values.items) {
    if (kind == AggregateKind::Max ? k.key > best->key : k.key < best->key) best = &k;
  }
  return value_at(view, col, *best, values.date_mode);
}

CellValue eval_nth_value(ExtremeKind kind, const View& view, std::string_view column,
                         const CellValue& n, EvalLog* log) {
  std::size_t col = resolve_column_or_throw(view.table(), column);
  KeyedColumn values = keyed_values(view, col, true, log);
  bool date_mode = values.date_mode;
  if (values.items.empty()) {
    throw Error(ErrorCode::EmptyViewError,
                "no numeric values under '" + view.table().columns()[col] + "'");
  }
  std::size_t k = ordinal_of(n);
  auto order = ranked(std::move(values), kind);
  if (k > order.size()) {
    throw Error(ErrorCode::OrdinalOutOfRange, "ordinal " + std::to_string(k) + " exceeds " +
                                                  std::to_string(order.size()) + " values");
  }
  return value_at(view, col, order[k - 1], date_mode);
}

RowRef eval_arg_extreme(ExtremeKind kind, const View& view, std::string_view column,
                        EvalLog* log) {
  std::size_t col = resolve_column_or_throw(view.table(), column);
  KeyedColumn values = keyed_values(view, col, true, log);
  if (values.items.empty()) {
    throw Error(ErrorCode::EmptyViewError,
                "no numeric values under '" + view.table().columns()[col] + "'");
  }
  const Keyed* best = &values.items.front();
  for (const auto& k : values.items) {
    if (kind == ExtremeKind::Max ? k.key > best->key : k.key < best->key) best = &k;
  }
  return RowRef{&view.table(), best->row};
}

RowRef eval_nth_arg_extreme(ExtremeKind kind, const View& view, std::string_view column,
                            const CellValue& n, EvalLog* log) {
  std::size_t col = resolve_column_or_throw(view.table(), column);
  KeyedColumn values = keyed_values(view, col, true, log);
  if (values.items.empty()) {
    throw Error(ErrorCode::EmptyViewError,
                "no numeric values under '" + view.table().columns()[col] + "'");
  }
  std::size_t k = ordinal_of(n);
  auto order = ranked(std::move(values), kind);
  if (k > order.size()) {
    throw Error(ErrorCode::OrdinalOutOfRange, "ordinal " + std::to_string(k) + " exceeds " +
                                                  std::to_string(order.size()) + " values");
  }
  return RowRef{&view.table(), order[k - 1].row};
}

bool eval_compare(CompareKind kind, const CellValue& a, const CellValue& b,
                  const ExecConfig& cfg) {
  auto equalish = [](Comparison c) {
    return c == Comparison::Equal || c == Comparison::FuzzyEqual;
  };
  switch (kind) {
    case CompareKind::Eq: return equalish(compare_cells(a, b));
    case CompareKind::NotEq: return !equalish(compare_cells(a, b));
    case CompareKind::StrEq: return equalish(fuzzy_compare_text(a.text, b.text));
    case CompareKind::StrNotEq: return !equalish(fuzzy_compare_text(a.text, b.text));
    case CompareKind::RoundEq: {
      if (equalish(compare_cells(a, b))) return true;
      auto x = numeric_facet(a);
      auto y = numeric_facet(b);
      if (!x || !y) return false;
      double floor = cfg.round_eq_absolute_floor
                         ? *cfg.round_eq_absolute_floor
                         : 0.5 * std::pow(10.0, -static_cast<double>(decimals_of(b.text)));
      double tol = std::max(cfg.round_eq_relative_tol * std::fabs(*y), floor);
      return std::fabs(*x - *y) <= tol;
    }
    case CompareKind::Greater:
    case CompareKind::Less: {
      Comparison c = compare_cells(a, b);
      if (c == Comparison::Incomparable) {
        throw Error(ErrorCode::IncomparableOperands,
                    "cannot order '" + a.text + "' and '" + b.text + "'");
      }
      return kind == CompareKind::Greater ? c == Comparison::Greater : c == Comparison::Less;
    }
  }
  return false;
}

CellValue eval_diff(const CellValue& a, const CellValue& b) {
  if (a.kind == CellKind::Date && b.kind == CellKind::Date) {
    if (!a.date->month && !b.date->month) {
      return make_number(static_cast<double>(a.date->year - b.date->year));
    }
    return make_number(static_cast<double>(days_from_civil(*a.date) - days_from_civil(*b.date)));
  }
  if (a.kind == CellKind::Date && b.kind == CellKind::Number && year_like(*b.number)) {
    return make_number(a.date->year - *b.number);
  }
  if (b.kind == CellKind::Date && a.kind == CellKind::Number && year_like(*a.number)) {
    return make_number(*a.number - b.date->year);
  }
  auto x = numeric_facet(a);
  auto y = numeric_facet(b);
  if (x && y) return make_number(*x - *y);
  throw Error(ErrorCode::IncomparableOperands,
              "cannot subtract '" + b.text + "' from '" + a.text + "'");
}

bool cell_satisfies(PredicateKind kind, const CellValue& cell, const CellValue& value) {
  auto equalish = [](Comparison c) {
    return c == Comparison::Equal || c == Comparison::FuzzyEqual;
  };
  switch (kind) {
    case PredicateKind::Eq: return equalish(compare_cells(cell, value));
    case PredicateKind::NotEq: return !equalish(compare_cells(cell, value));
    case PredicateKind::StrEq: return equalish(fuzzy_compare_text(cell.text, value.text));
    case PredicateKind::StrNotEq: return !equalish(fuzzy_compare_text(cell.text, value.text));
    case PredicateKind::Greater: return compare_cells(cell, value) == Comparison::Greater;
    case PredicateKind::Less: return compare_cells(cell, value) == Comparison::Less;
    case PredicateKind::GreaterEq: {
      Comparison c = compare_cells(cell, value);
      return c == Comparison::Greater || equalish(c);
    }
    case PredicateKind::LessEq: {
      Comparison c = compare_cells(cell, value);
      return c == Comparison::Less || equalish(c);
    }
  }
  return false;
}

View eval_filter(std::optional<PredicateKind> predicate, const View& view,
                 std::string_view column, const CellValue* value, EvalLog* log) {
  // filter_all ignores its header argument.
  if (!predicate) return view;
  if (!value) throw Error(ErrorCode::ArityMismatch, "filter requires a value");
  std::size_t col = resolve_column_or_throw(view.table(), column);
  const Table& t = view.table();
  std::vector<std::size_t> kept;
  for (auto r : view.rows()) {
    const auto& cell = t.cell(r, col).value;
    if (cell_satisfies(*predicate, cell, *value)) {
      kept.push_back(r);
    } else if (is_ordering(*predicate) &&
               compare_cells(cell, *value) == Comparison::Incomparable) {
      note(log, "filter_" + predicate_name(*predicate) + ": row " + std::to_string(r) + " '" +
                    t.cell(r, col).raw + "' is incomparable with '" + value->text + "'");
    }
  }
  return View(t, std::move(kept));
}

bool eval_all_quantifier(PredicateKind kind, const View& view, std::string_view column,
                         const CellValue& value, EvalLog* log) {
  std::size_t col = resolve_column_or_throw(view.table(), column);
  if (view.empty()) {
    note(log, "all_" + predicate_name(kind) + " over an empty view is vacuously true");
    return true;
  }
  return count_satisfying(kind, view, col, value, log) == view.size();
}

bool eval_most_quantifier(PredicateKind kind, const View& view, std::string_view column,
                          const CellValue& value, const ExecConfig& cfg, EvalLog* log) {
  std::size_t col = resolve_column_or_throw(view.table(), column);
  if (view.empty()) return false;
  std::size_t n = count_satisfying(kind, view, col, value, log);
  return static_cast<double>(n) > cfg.most_threshold * static_cast<double>(view.size());
}

}  // namespace l2t
