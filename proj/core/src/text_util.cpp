#include "l2t/text_util.hpp"

#include <cmath>
#include <cstdio>

#include "l2t/error.hpp"

namespace l2t {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::ColumnNotFound: return "ColumnNotFound";
    case ErrorCode::EmptyViewError: return "EmptyViewError";
    case ErrorCode::IncomparableOperands: return "IncomparableOperands";
    case ErrorCode::NonSingletonView: return "NonSingletonView";
    case ErrorCode::OrdinalOutOfRange: return "OrdinalOutOfRange";
    case ErrorCode::IncompleteAnswers: return "IncompleteAnswers";
    case ErrorCode::UnbuildableCriterion: return "UnbuildableCriterion";
    case ErrorCode::Unclassifiable: return "Unclassifiable";
    case ErrorCode::SlotExtractionFailure: return "SlotExtractionFailure";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::UnknownTable: return "UnknownTable";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::WrongAnswerType: return "WrongAnswerType";
    case ErrorCode::QuestionNotAskable: return "QuestionNotAskable";
    case ErrorCode::IncompleteSession: return "IncompleteSession";
    case ErrorCode::ExecutionFalse: return "ExecutionFalse";
    case ErrorCode::SessionConflict: return "SessionConflict";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace text {

namespace {
bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
}  // namespace

bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string collapse_ws(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  for (char c : s) {
    if (is_space(c)) {
      pending = !out.empty();
    } else {
      if (pending) out.push_back(' ');
      pending = false;
      out.push_back(c);
    }
  }
  return out;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::string format_number(double value) {
  if (std::isfinite(value) && value == std::floor(value) && std::fabs(value) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", value);
    std::string s(buf);
    return s == "-0" ? "0" : s;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", value);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
  }
  return s;
}

std::string ordinal(long n) {
  long tens = n % 100;
  const char* suffix = "th";
  if (tens < 11 || tens > 13) {
    switch (n % 10) {
      case 1: suffix = "st"; break;
      case 2: suffix = "nd"; break;
      case 3: suffix = "rd"; break;
      default: break;
    }
  }
  return std::to_string(n) + suffix;
}

}  // namespace text
}  // namespace l2t
