#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "l2t/ast.hpp"
#include "l2t/kv_config.hpp"
#include "l2t/table.hpp"

namespace l2t {

// Static types of logical-form positions. Obj is any scalar cell value;
// HeaderStr is a text node that has to name a column.
enum class SemType { Bool, Number, Row, View, Obj, HeaderStr };

std::string_view sem_type_name(SemType t) noexcept;

enum class AggregateKind { Max, Min, Avg, Sum };
enum class ExtremeKind { Max, Min };
enum class CompareKind { Eq, NotEq, RoundEq, Greater, Less, StrEq, StrNotEq };
enum class PredicateKind { Eq, NotEq, Greater, Less, GreaterEq, LessEq, StrEq, StrNotEq };

// Dispatch group of a function; the parameters below select the variant.
enum class Family {
  Count,
  Only,
  Hop,
  And,
  Aggregate,
  NthValue,
  ArgExtreme,
  NthArgExtreme,
  Compare,
  Diff,
  Filter,
  FilterAll,
  AllQuantifier,
  MostQuantifier,
};

struct Signature {
  std::string name;
  std::vector<SemType> args;
  SemType result;
  Family family;
  AggregateKind aggregate = AggregateKind::Max;
  ExtremeKind extreme = ExtremeKind::Max;
  CompareKind compare = CompareKind::Eq;
  PredicateKind predicate = PredicateKind::Eq;
};

const std::vector<Signature>& signatures();
const Signature* find_signature(std::string_view name);

enum class HopViewPolicy { FirstRow, RequireSingleton };

struct ExecConfig {
  double round_eq_relative_tol = 0.05;
  // Absent: half a unit in the last decimal place of the reference operand.
  std::optional<double> round_eq_absolute_floor;
  // most_* holds when the satisfying fraction is strictly above this.
  double most_threshold = 0.5;
  HopViewPolicy hop_view_policy = HopViewPolicy::FirstRow;

  void validate() const;  // throws InvalidConfig
};

// Keys: round_eq_relative_tol, round_eq_absolute_floor (number or "auto"),
// most_threshold, hop_view_policy (first_row | require_singleton).
ExecConfig exec_config_from(const KeyValues& kv);
ExecConfig load_exec_config(const std::filesystem::path& path);
std::string to_key_values(const ExecConfig& cfg);

// ------------------------------------------------------------ type checking

struct TypedNode {
  SemType type;
  std::vector<TypedNode> children;
};

struct TypedAst {
  Ast ast;
  TypedNode root;
};

// Errors: UnknownFunction, ArityMismatch, TypeMismatch; messages carry the
// node path ("/0/1" = second argument of the first argument of the root).
TypedAst typecheck(const Ast& ast);

// ------------------------------------------------------------ values

struct RowRef {
  const Table* table = nullptr;
  std::size_t index = 0;

  bool operator==(const RowRef&) const = default;
};

enum class ValueKind { Bool, Number, Date, Text, Row, View };

std::string_view value_kind_name(ValueKind k) noexcept;

struct Value {
  std::variant<bool, CellValue, RowRef, View> data;

  ValueKind kind() const noexcept;
  bool as_bool() const { return std::get<bool>(data); }
  const CellValue& as_cell() const { return std::get<CellValue>(data); }
  const RowRef& as_row() const { return std::get<RowRef>(data); }
  const View& as_view() const { return std::get<View>(data); }
};

bool value_has_type(const Value& v, SemType t) noexcept;

// Human-readable rendering: "true", "58550000", "angola", "row 1", "view [0, 2]".
std::string format_value(const Value& v);

// Per-call diagnostics: skipped cells, vacuous quantifiers, and an optional
// trace of every function node's result.
struct EvalLog {
  bool record_trace = false;
  std::vector<std::string> notes;
  std::vector<std::pair<std::string, std::string>> trace;  // (subprogram, value)

  void note(std::string message) { notes.push_back(std::move(message)); }
};

// Typechecks, then evaluates bottom-up. Errors: ColumnNotFound,
// EmptyViewError, IncomparableOperands, NonSingletonView, OrdinalOutOfRange,
// plus the typecheck errors.
Value evaluate(const Ast& ast, const Table& table, const ExecConfig& cfg = {},
               EvalLog* log = nullptr);
Value evaluate(const TypedAst& typed, const Table& table, const ExecConfig& cfg = {},
               EvalLog* log = nullptr);

// Evaluates a function node at its own result type (no Bool root required).
// A text node yields its parsed cell, or the full view for "all_rows".
Value evaluate_subprogram(const Node& node, const Table& table, const ExecConfig& cfg = {});

// ------------------------------------------------------------ function families
//
// Column arguments are header strings resolved with Table::resolve_column.

std::size_t resolve_column_or_throw(const Table& table, std::string_view header);

CellValue eval_count(const View& view);
bool eval_only(const View& view);
CellValue eval_hop(const std::variant<RowRef, View>& target, std::string_view column,
                   const ExecConfig& cfg = {});
CellValue eval_aggregate(AggregateKind kind, const View& view, std::string_view column,
                         EvalLog* log = nullptr);
CellValue eval_nth_value(ExtremeKind kind, const View& view, std::string_view column,
                         const CellValue& n, EvalLog* log = nullptr);
RowRef eval_arg_extreme(ExtremeKind kind, const View& view, std::string_view column,
                        EvalLog* log = nullptr);
RowRef eval_nth_arg_extreme(ExtremeKind kind, const View& view, std::string_view column,
                            const CellValue& n, EvalLog* log = nullptr);
bool eval_compare(CompareKind kind, const CellValue& a, const CellValue& b,
                  const ExecConfig& cfg = {});
CellValue eval_diff(const CellValue& a, const CellValue& b);
// `predicate` absent means filter_all.
View eval_filter(std::optional<PredicateKind> predicate, const View& view,
                 std::string_view column, const CellValue* value, EvalLog* log = nullptr);
bool eval_all_quantifier(PredicateKind kind, const View& view, std::string_view column,
                         const CellValue& value, EvalLog* log = nullptr);
bool eval_most_quantifier(PredicateKind kind, const View& view, std::string_view column,
                          const CellValue& value, const ExecConfig& cfg = {},
                          EvalLog* log = nullptr);

// Row-level predicate shared by filters and quantifiers.
bool cell_satisfies(PredicateKind kind, const CellValue& cell, const CellValue& value);

}  // namespace l2t
