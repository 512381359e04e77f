#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace l2t {

// Machine-readable error taxonomy shared by the library, the CLI and the
// HTTP service. The string form of each code is stable.
enum class ErrorCode {
  // table model
  RaggedRows,
  EmptyTable,
  // logical forms
  SyntaxError,
  UnknownFunction,
  ArityMismatch,
  TypeMismatch,
  // evaluation
  ColumnNotFound,
  EmptyViewError,
  IncomparableOperands,
  NonSingletonView,
  OrdinalOutOfRange,
  // logic types
  IncompleteAnswers,
  UnbuildableCriterion,
  Unclassifiable,
  // realization
  SlotExtractionFailure,
  // dataset
  MissingField,
  ParseFailure,
  EmptyCorpus,
  // service
  UnknownTable,
  UnknownSession,
  WrongAnswerType,
  QuestionNotAskable,
  IncompleteSession,
  ExecutionFalse,
  SessionConflict,
  BadRequest,
  // plumbing
  InvalidConfig,
  IoError,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view code_name() const noexcept { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

// Parse errors additionally carry the byte offset into the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& message)
      : Error(ErrorCode::SyntaxError,
              message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace l2t
