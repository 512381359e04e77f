#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "l2t/ast.hpp"
#include "l2t/kv_config.hpp"
#include "l2t/semantics.hpp"
#include "l2t/table.hpp"

namespace l2t {

enum class LogicType { Count, Superlative, Comparative, Aggregation, Majority, Unique, Ordinal };

inline constexpr std::array<LogicType, 7> kAllLogicTypes = {
    LogicType::Count,    LogicType::Superlative, LogicType::Comparative, LogicType::Aggregation,
    LogicType::Majority, LogicType::Unique,      LogicType::Ordinal};

std::string_view logic_type_name(LogicType t) noexcept;
std::optional<LogicType> parse_logic_type(std::string_view name);
std::string_view logic_type_definition(LogicType t) noexcept;

enum class AnswerKind { Choice, Column, Columns, Row, Value, Bool };

std::string_view answer_kind_name(AnswerKind k) noexcept;

// A question is asked only when `question_id`'s answer equals (or, with
// `negate`, differs from) `value`. A negated dependency holds while the other
// question is still unanswered.
struct Dependency {
  std::string question_id;
  std::string value;
  bool negate = false;
};

struct Question {
  std::string id;
  LogicType logic_type;
  std::string prompt;
  AnswerKind answer_kind;
  std::vector<std::string> choices;
  std::optional<Dependency> depends_on;
};

// The per-type annotation questions, in asking order. Scope follow-ups are
// not included; see scope_questions.
std::vector<Question> question_set(LogicType t);

// Follow-up round that pins down a subset scope (column, criterion, value).
// Empty for comparative, which has no scope question.
std::vector<Question> scope_questions(LogicType t);

// question_set with the scope follow-ups spliced in after the scope question.
std::vector<Question> full_question_set(LogicType t);

// Overrides prompts from `<type>.<question id> = text` entries.
void apply_prompt_overrides(std::vector<Question>& questions, const KeyValues& prompts);

enum class Criterion { Equal, NotEqual, Less, LessEq, Greater, GreaterEq, FuzzyMatch, All, Other };

std::string_view criterion_name(Criterion c) noexcept;
std::optional<Criterion> parse_criterion(std::string_view text);

// Typed answer: choice/column/value text, row index, yes/no, or a column list.
using Answer = std::variant<std::string, std::size_t, bool, std::vector<std::string>>;

struct AnswerRecord {
  LogicType logic_type = LogicType::Count;
  std::map<std::string, Answer> answers;
};

// The questions that apply given the answers so far, in asking order.
// Unanswered dependencies make their dependents inapplicable.
std::vector<Question> applicable_questions(const AnswerRecord& rec);

// Checks an answer against a question's kind and choice list; returns the
// normalized answer or throws WrongAnswerType.
Answer normalize_answer(const Question& q, const Answer& a);

// Instantiates the logic type's prototype. Errors: IncompleteAnswers,
// UnbuildableCriterion, ColumnNotFound, WrongAnswerType.
Ast build_from_answers(const AnswerRecord& rec, const Table& table);

// Structural classification, most specific first: ordinal, unique,
// majority, aggregation, count, comparative, superlative. Throws
// Unclassifiable.
LogicType classify(const Ast& ast);

// Problems with an answer record as human-readable issues; empty when the
// record is complete and its program evaluates true on `table`.
std::vector<std::string> validate_answers(const AnswerRecord& rec, const Table& table,
                                          const ExecConfig& cfg = {});

}  // namespace l2t
