#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "l2t/ast.hpp"
#include "l2t/error.hpp"
#include "l2t/kv_config.hpp"
#include "l2t/logic_types.hpp"
#include "l2t/semantics.hpp"
#include "l2t/table.hpp"

namespace l2t {

enum class Split { Train, Dev, Test, Unknown };

std::string_view split_name(Split s) noexcept;
std::optional<Split> parse_split(std::string_view name);
// "train.json" -> Train, "valid.json" / "dev.jsonl" -> Dev, "test.json" -> Test.
Split split_from_filename(const std::filesystem::path& path);

struct Example {
  std::shared_ptr<const Table> table;
  LogicType logic_type = LogicType::Count;
  std::string logic_str;
  Ast ast;
  std::string sentence;
  std::optional<std::string> interpretation;
  Split split = Split::Unknown;
  std::string source;  // "file:index" for arrays, "file:line" for JSON lines
};

// Canonical field -> candidate source field names, tried in order.
struct FieldMap {
  std::map<std::string, std::vector<std::string>> fields;

  static FieldMap defaults();
  // Keys "field.<canonical> = name1, name2" replace the candidate list.
  static FieldMap from(const KeyValues& kv);
  const std::vector<std::string>& candidates(const std::string& canonical) const;
};

struct LoadFailure {
  std::string source;
  ErrorCode code;
  std::string message;
};

struct LoadResult {
  std::vector<Example> examples;
  std::vector<LoadFailure> failures;
  std::size_t distinct_tables = 0;
};

// A directory loads every *.json / *.jsonl file in name order; a file loads
// alone. A file holds a JSON array of records, a single record, or one
// record per line.
// Records failing MissingField / ParseFailure / table errors are collected,
// never fatal. Errors: IoError for an unreadable path.
LoadResult load_dataset(const std::filesystem::path& path, const FieldMap& map = FieldMap::defaults());

// Same, from in-memory text.
LoadResult load_dataset_text(std::string_view text, const std::string& source_name, Split split,
                             const FieldMap& map = FieldMap::defaults());

// ------------------------------------------------------------ validation

enum class Outcome { ParseError, TypecheckError, ExecTrue, ExecFalse, ExecError };

std::string_view outcome_name(Outcome o) noexcept;

struct Tally {
  std::size_t total = 0;
  std::size_t parse_ok = 0;
  std::size_t typecheck_ok = 0;
  std::size_t exec_true = 0;
  std::size_t exec_false = 0;
  std::size_t exec_error = 0;

  void add(Outcome o);
  Tally& operator+=(const Tally& o);
  bool operator==(const Tally&) const = default;
  double exec_true_rate() const { return total ? double(exec_true) / double(total) : 0.0; }
};

struct ValidationFailure {
  std::size_t index = 0;  // position in the input sequence
  std::string source;
  LogicType logic_type = LogicType::Count;
  Outcome outcome = Outcome::ExecFalse;
  std::string error_code;  // empty for ExecFalse
  std::string message;
  std::string diagnostic;  // knob or cell-parse attribution

  bool operator==(const ValidationFailure&) const = default;
};

struct ValidationReport {
  Tally overall;
  std::map<LogicType, Tally> per_type;
  std::vector<ValidationFailure> failures;  // ordered by index
};

// Outcome of one example plus a diagnostic when it is not ExecTrue.
std::pair<Outcome, std::optional<ValidationFailure>> validate_example(const Example& example,
                                                                      const ExecConfig& cfg);

// threads = 0 uses the hardware concurrency.
ValidationReport validate_dataset(const std::vector<Example>& examples, const ExecConfig& cfg,
                                  unsigned threads = 0);

// ------------------------------------------------------------ statistics

struct TypeStats {
  std::size_t count = 0;
  double avg_sentence_len = 0;
  double avg_total_nodes = 0;
  double avg_function_nodes = 0;
  double avg_linearized_len = 0;
};

struct DatasetStats {
  std::size_t n_examples = 0;
  std::size_t n_tables = 0;
  std::size_t vocab_size = 0;         // case-folded sentence tokens
  std::size_t vocab_size_cased = 0;
  double avg_sentence_len = 0;
  double avg_total_nodes = 0;
  double avg_function_nodes = 0;
  double avg_linearized_len = 0;
  std::size_t min_total_nodes = 0;
  std::size_t max_total_nodes = 0;
  std::map<LogicType, TypeStats> per_type;
  // Total-node histogram per type; bins run from min(5, observed min) to the max.
  std::map<LogicType, std::map<std::size_t, std::size_t>> node_histogram;
};

DatasetStats compute_stats(const std::vector<Example>& examples);

// Delimited rows "type,total_nodes,count" for plotting.
std::string histogram_csv(const DatasetStats& stats);

// ------------------------------------------------------------ splits

struct SplitOverlap {
  std::uint64_t table_hash = 0;
  std::string table_id;
  std::vector<Split> splits;
};

struct SplitReport {
  std::map<Split, std::size_t> examples;
  std::map<Split, std::size_t> tables;
  std::vector<SplitOverlap> overlaps;

  bool ok() const noexcept { return overlaps.empty(); }
};

SplitReport check_splits(const std::vector<Example>& examples);

// ------------------------------------------------------------ model input

struct ModelInput {
  std::vector<std::string> caption;
  std::vector<std::string> headers;  // one entry per column
  std::vector<std::string> content;  // row-major cell tokens, truncated at the cap
  std::vector<std::string> logic;    // linearized program

  // "<caption> ... <headers> h1 | h2 <content> ... <logic> ..."
  std::string serialize() const;
};

inline constexpr std::size_t kDefaultContentCap = 200;

ModelInput export_model_input(const Example& example, std::size_t content_cap = kDefaultContentCap);

}  // namespace l2t
