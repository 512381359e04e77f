#include "l2t/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "l2t/error.hpp"
#include "l2t/text_util.hpp"

namespace l2t {

using nlohmann::json;

std::string_view split_name(Split s) noexcept {
  switch (s) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
    case Split::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<Split> parse_split(std::string_view name) {
  std::string n = text::to_lower(text::trim(name));
  if (n == "train") return Split::Train;
  if (n == "dev" || n == "valid" || n == "validation") return Split::Dev;
  if (n == "test") return Split::Test;
  return std::nullopt;
}

Split split_from_filename(const std::filesystem::path& path) {
  std::string stem = text::to_lower(path.stem().string());
  for (const auto& [key, split] : {std::pair{"train", Split::Train}, std::pair{"valid", Split::Dev},
                                   std::pair{"dev", Split::Dev}, std::pair{"test", Split::Test}}) {
    if (stem.find(key) != std::string::npos) return split;
  }
  return Split::Unknown;
}

FieldMap FieldMap::defaults() {
  FieldMap m;
  m.fields = {
      {"table_id", {"table_id", "url"}},
      {"caption", {"caption", "topic"}},
      {"columns", {"columns", "table_header"}},
      {"rows", {"rows", "table_cont"}},
      {"logic_type", {"logic_type", "action"}},
      {"logic_str", {"logic_str"}},
      {"sentence", {"sentence", "sent"}},
      {"interpretation", {"interpretation", "interpret"}},
      {"split", {"split"}},
  };
  return m;
}

FieldMap FieldMap::from(const KeyValues& kv) {
  FieldMap m = defaults();
  for (const auto& [key, value] : kv) {
    if (key.rfind("field.", 0) != 0) continue;
    std::string canonical = key.substr(6);
    if (!m.fields.count(canonical)) {
      throw Error(ErrorCode::InvalidConfig, "unknown canonical field '" + canonical + "'");
    }
    std::vector<std::string> names;
    std::string item;
    for (char c : value + ",") {
      if (c == ',') {
        if (auto t = text::trim(item); !t.empty()) names.push_back(t);
        item.clear();
      } else {
        item += c;
      }
    }
    m.fields[canonical] = std::move(names);
  }
  return m;
}

const std::vector<std::string>& FieldMap::candidates(const std::string& canonical) const {
  static const std::vector<std::string> none;
  auto it = fields.find(canonical);
  return it == fields.end() ? none : it->second;
}

// ------------------------------------------------------------ loading

namespace {

class Loader {
 public:
  Loader(const FieldMap& map, LoadResult& out) : map_(map), out_(out) {}

  void load_text(std::string_view text, const std::string& name, Split split) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return;
    if (text[first] == '[') {
      json doc;
      try {
        doc = json::parse(text);
      } catch (const json::exception& e) {
        fail(name, ErrorCode::ParseFailure, std::string("malformed JSON: ") + e.what());
        return;
      }
      for (std::size_t i = 0; i < doc.size(); ++i) record(doc[i], name + ":" + std::to_string(i), split);
      return;
    }
    if (text[first] == '{') {
      // A lone record may span several lines.
      json doc = json::parse(text, nullptr, false);
      if (!doc.is_discarded()) {
        record(doc, name + ":0", split);
        return;
      }
    }
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (text::trim(line).empty()) continue;
      std::string source = name + ":" + std::to_string(line_no);
      try {
        record(json::parse(line), source, split);
      } catch (const json::exception& e) {
        fail(source, ErrorCode::ParseFailure, std::string("malformed JSON: ") + e.what());
      }
    }
  }

 private:
  const json* field(const json& rec, const std::string& canonical) const {
    if (!rec.is_object()) return nullptr;
    for (const auto& name : map_.candidates(canonical)) {
      if (auto it = rec.find(name); it != rec.end() && !it->is_null()) return &*it;
    }
    return nullptr;
  }

  const json& required(const json& rec, const std::string& canonical) const {
    if (const json* f = field(rec, canonical)) return *f;
    throw Error(ErrorCode::MissingField, "record has no '" + canonical + "' field");
  }

  static std::string as_text(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_null()) return "";
    return j.dump();
  }

  std::shared_ptr<const Table> intern(TableSource src) {
    auto table = std::make_shared<const Table>(load_table(std::move(src)));
    auto [it, inserted] = tables_.emplace(table->content_hash(), table);
    return it->second;
  }

  void record(const json& rec, const std::string& source, Split split) {
    try {
      TableSource src;
      src.caption = as_text(required(rec, "caption"));
      const json& columns = required(rec, "columns");
      const json& rows = required(rec, "rows");
      if (!columns.is_array() || !rows.is_array()) {
        throw Error(ErrorCode::ParseFailure, "columns and rows must be arrays");
      }
      for (const auto& c : columns) src.columns.push_back(as_text(c));
      for (const auto& r : rows) {
        if (!r.is_array()) throw Error(ErrorCode::ParseFailure, "row is not an array");
        std::vector<std::string> cells;
        for (const auto& c : r) cells.push_back(as_text(c));
        src.rows.push_back(std::move(cells));
      }
      if (const json* id = field(rec, "table_id")) src.table_id = as_text(*id);

      Example ex;
      std::string type_name = as_text(required(rec, "logic_type"));
      auto type = parse_logic_type(type_name);
      if (!type) throw Error(ErrorCode::ParseFailure, "unknown logic type '" + type_name + "'");
      ex.logic_type = *type;
      ex.logic_str = as_text(required(rec, "logic_str"));
      ex.sentence = as_text(required(rec, "sentence"));
      if (const json* interp = field(rec, "interpretation")) ex.interpretation = as_text(*interp);
      ex.split = split;
      if (const json* s = field(rec, "split")) {
        if (auto parsed = parse_split(as_text(*s))) ex.split = *parsed;
      }
      try {
        ex.ast = parse_logic_str(ex.logic_str);
      } catch (const SyntaxError& e) {
        throw Error(ErrorCode::ParseFailure, e.what());
      }
      if (src.table_id.empty()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "t%016llx",
                      static_cast<unsigned long long>(load_table(src).content_hash()));
        src.table_id = buf;
      }
      ex.table = intern(std::move(src));
      ex.source = source;
      out_.examples.push_back(std::move(ex));
    } catch (const Error& e) {
      fail(source, e.code(), e.what());
    }
  }

  void fail(const std::string& source, ErrorCode code, std::string message) {
    out_.failures.push_back(LoadFailure{source, code, std::move(message)});
  }

 public:
  std::size_t distinct_tables() const { return tables_.size(); }

 private:
  const FieldMap& map_;
  LoadResult& out_;
  std::unordered_map<std::uint64_t, std::shared_ptr<const Table>> tables_;
};

}  // namespace

LoadResult load_dataset(const std::filesystem::path& path, const FieldMap& map) {
  LoadResult result;
  Loader loader(map, result);
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      auto ext = entry.path().extension().string();
      if (entry.is_regular_file() && (ext == ".json" || ext == ".jsonl")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else if (std::filesystem::is_regular_file(path, ec)) {
    files.push_back(path);
  } else {
    throw Error(ErrorCode::IoError, "no such dataset path: " + path.string());
  }
  for (const auto& f : files) {
    loader.load_text(read_file(f), f.filename().string(), split_from_filename(f));
  }
  result.distinct_tables = loader.distinct_tables();
  return result;
}

LoadResult load_dataset_text(std::string_view text, const std::string& source_name, Split split,
                             const FieldMap& map) {
  LoadResult result;
  Loader loader(map, result);
  loader.load_text(text, source_name, split);
  result.distinct_tables = loader.distinct_tables();
  return result;
}

// ------------------------------------------------------------ validation

std::string_view outcome_name(Outcome o) noexcept {
  switch (o) {
    case Outcome::ParseError: return "parse_error";
    case Outcome::TypecheckError: return "typecheck_error";
    case Outcome::ExecTrue: return "exec_true";
    case Outcome::ExecFalse: return "exec_false";
    case Outcome::ExecError: return "exec_error";
  }
  return "?";
}

void Tally::add(Outcome o) {
  ++total;
  if (o == Outcome::ParseError) return;
  ++parse_ok;
  if (o == Outcome::TypecheckError) return;
  ++typecheck_ok;
  if (o == Outcome::ExecTrue) ++exec_true;
  if (o == Outcome::ExecFalse) ++exec_false;
  if (o == Outcome::ExecError) ++exec_error;
}

Tally& Tally::operator+=(const Tally& o) {
  total += o.total;
  parse_ok += o.parse_ok;
  typecheck_ok += o.typecheck_ok;
  exec_true += o.exec_true;
  exec_false += o.exec_false;
  exec_error += o.exec_error;
  return *this;
}

namespace {

bool mentions(const Node& n, std::string_view prefix) {
  if (n.is_function() && n.label.rfind(prefix, 0) == 0) return true;
  return std::any_of(n.children.begin(), n.children.end(),
                     [&](const Node& c) { return mentions(c, prefix); });
}

std::optional<bool> try_eval(const TypedAst& typed, const Table& table, const ExecConfig& cfg) {
  try {
    return evaluate(typed, table, cfg).as_bool();
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string cell_gap(const TypedAst& typed, const Table& table, const ExecConfig& cfg) {
  EvalLog log;
  log.record_trace = true;
  try {
    evaluate(typed, table, cfg, &log);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ColumnNotFound) return std::string("header-resolution gap: ") + e.what();
    std::string last = log.trace.empty() ? std::string("(start)") : log.trace.back().first;
    return "cell-parse gap: " + std::string(e.code_name()) + " (" + e.what() + ") after " + last;
  }
  for (const auto& [program, value] : log.trace) {
    if (value != "false") continue;
    std::string detail;
    for (const auto& [sub, v] : log.trace) {
      if (&sub == &program) break;
      if (program.find(sub) != std::string::npos && sub.rfind("hop", 0) == 0) {
        detail += " ; " + sub + " = " + v;
      }
    }
    return "cell-parse gap: " + program + " is false" + detail;
  }
  return "cell-parse gap: no false subprogram recorded";
}

std::string attribute(const Example& ex, const TypedAst& typed, const ExecConfig& cfg,
                      std::optional<ErrorCode> error) {
  const Table& table = *ex.table;
  const Node& root = typed.ast.root;
  if (error == ErrorCode::NonSingletonView && cfg.hop_view_policy != HopViewPolicy::FirstRow) {
    ExecConfig alt = cfg;
    alt.hop_view_policy = HopViewPolicy::FirstRow;
    if (try_eval(typed, table, alt) == true) return "knob hop_view_policy: true under first_row";
  }
  if (mentions(root, "round_eq")) {
    for (double tol : {0.1, 0.2, 0.5}) {
      ExecConfig alt = cfg;
      alt.round_eq_relative_tol = tol;
      if (try_eval(typed, table, alt) == true) {
        return "knob round_eq_relative_tol: true at " + text::format_number(tol);
      }
    }
  }
  if (mentions(root, "most_")) {
    for (double th : {0.49, 0.4, 0.6}) {
      ExecConfig alt = cfg;
      alt.most_threshold = th;
      if (try_eval(typed, table, alt) == true) {
        return "knob most_threshold: true at " + text::format_number(th);
      }
    }
  }
  return cell_gap(typed, table, cfg);
}

}  // namespace

std::pair<Outcome, std::optional<ValidationFailure>> validate_example(const Example& ex,
                                                                      const ExecConfig& cfg) {
  ValidationFailure f;
  f.source = ex.source;
  f.logic_type = ex.logic_type;
  auto failed = [&](Outcome o, std::string code, std::string message, std::string diag) {
    f.outcome = o;
    f.error_code = std::move(code);
    f.message = std::move(message);
    f.diagnostic = std::move(diag);
    return std::pair{o, std::optional<ValidationFailure>(f)};
  };
  Ast ast;
  try {
    ast = parse_logic_str(ex.logic_str);
  } catch (const Error& e) {
    return failed(Outcome::ParseError, std::string(e.code_name()), e.what(), "syntax");
  }
  TypedAst typed;
  try {
    typed = typecheck(ast);
  } catch (const Error& e) {
    return failed(Outcome::TypecheckError, std::string(e.code_name()), e.what(), "signature table");
  }
  try {
    if (evaluate(typed, *ex.table, cfg).as_bool()) return {Outcome::ExecTrue, std::nullopt};
  } catch (const Error& e) {
    return failed(Outcome::ExecError, std::string(e.code_name()), e.what(),
                  attribute(ex, typed, cfg, e.code()));
  }
  return failed(Outcome::ExecFalse, "", "program evaluates to false",
                attribute(ex, typed, cfg, std::nullopt));
}

ValidationReport validate_dataset(const std::vector<Example>& examples, const ExecConfig& cfg,
                                  unsigned threads) {
  cfg.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, examples.size())));

  std::vector<Outcome> outcomes(examples.size());
  std::vector<std::optional<ValidationFailure>> failures(examples.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto [o, f] = validate_example(examples[i], cfg);
      outcomes[i] = o;
      if (f) {
        f->index = i;
        failures[i] = std::move(f);
      }
    }
  };
  std::vector<std::thread> pool;
  std::size_t chunk = (examples.size() + threads - 1) / std::max(1u, threads);
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t b = t * chunk;
    std::size_t e = std::min(examples.size(), b + chunk);
    if (b >= e) break;
    pool.emplace_back(work, b, e);
  }
  for (auto& th : pool) th.join();

  ValidationReport report;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    report.overall.add(outcomes[i]);
    report.per_type[examples[i].logic_type].add(outcomes[i]);
    if (failures[i]) report.failures.push_back(std::move(*failures[i]));
  }
  return report;
}

// ------------------------------------------------------------ statistics

DatasetStats compute_stats(const std::vector<Example>& examples) {
  DatasetStats s;
  s.n_examples = examples.size();
  std::unordered_set<std::uint64_t> tables;
  std::unordered_set<std::string> cased, folded;
  struct Sums {
    double sentence = 0, total = 0, function = 0, linear = 0;
  };
  Sums all;
  std::map<LogicType, Sums> per;
  std::size_t min_nodes = SIZE_MAX, max_nodes = 0;
  for (const auto& ex : examples) {
    tables.insert(ex.table->content_hash());
    auto tokens = text::split_ws(ex.sentence);
    for (const auto& t : tokens) {
      cased.insert(t);
      folded.insert(text::to_lower(t));
    }
    NodeStats ns = node_stats(ex.ast);
    Sums one{double(tokens.size()), double(ns.total_nodes), double(ns.function_nodes),
             double(ns.linearized_length)};
    for (Sums* target : {&all, &per[ex.logic_type]}) {
      target->sentence += one.sentence;
      target->total += one.total;
      target->function += one.function;
      target->linear += one.linear;
    }
    ++s.per_type[ex.logic_type].count;
    ++s.node_histogram[ex.logic_type][ns.total_nodes];
    min_nodes = std::min(min_nodes, ns.total_nodes);
    max_nodes = std::max(max_nodes, ns.total_nodes);
  }
  s.n_tables = tables.size();
  s.vocab_size = folded.size();
  s.vocab_size_cased = cased.size();
  if (examples.empty()) return s;
  double n = double(examples.size());
  s.avg_sentence_len = all.sentence / n;
  s.avg_total_nodes = all.total / n;
  s.avg_function_nodes = all.function / n;
  s.avg_linearized_len = all.linear / n;
  s.min_total_nodes = min_nodes;
  s.max_total_nodes = max_nodes;
  for (auto& [type, ts] : s.per_type) {
    const Sums& sum = per[type];
    double c = double(ts.count);
    ts.avg_sentence_len = sum.sentence / c;
    ts.avg_total_nodes = sum.total / c;
    ts.avg_function_nodes = sum.function / c;
    ts.avg_linearized_len = sum.linear / c;
  }
  std::size_t lo = std::min<std::size_t>(5, min_nodes);
  for (auto& [type, hist] : s.node_histogram) {
    for (std::size_t b = lo; b <= max_nodes; ++b) hist.emplace(b, 0);
  }
  return s;
}

std::string histogram_csv(const DatasetStats& stats) {
  std::string out = "type,total_nodes,count\n";
  for (const auto& [type, hist] : stats.node_histogram) {
    for (const auto& [bin, count] : hist) {
      out += std::string(logic_type_name(type)) + "," + std::to_string(bin) + "," +
             std::to_string(count) + "\n";
    }
  }
  return out;
}

// ------------------------------------------------------------ splits

SplitReport check_splits(const std::vector<Example>& examples) {
  SplitReport r;
  std::map<std::uint64_t, std::set<Split>> seen;
  std::map<std::uint64_t, std::string> ids;
  for (const auto& ex : examples) {
    ++r.examples[ex.split];
    std::uint64_t h = ex.table->content_hash();
    seen[h].insert(ex.split);
    ids.emplace(h, ex.table->id());
  }
  for (const auto& [h, splits] : seen) {
    for (Split s : splits) ++r.tables[s];
    if (splits.size() > 1) {
      r.overlaps.push_back(SplitOverlap{h, ids[h], std::vector<Split>(splits.begin(), splits.end())});
    }
  }
  return r;
}

// ------------------------------------------------------------ model input

std::string ModelInput::serialize() const {
  std::string out = "<caption>";
  for (const auto& t : caption) out += " " + t;
  out += " <headers>";
  for (std::size_t i = 0; i < headers.size(); ++i) out += (i ? " | " : " ") + headers[i];
  out += " <content>";
  for (const auto& t : content) out += " " + t;
  out += " <logic>";
  for (const auto& t : logic) out += " " + t;
  return out;
}

ModelInput export_model_input(const Example& ex, std::size_t content_cap) {
  ModelInput m;
  const Table& t = *ex.table;
  m.caption = text::split_ws(t.caption());
  m.headers = t.columns();
  for (std::size_t r = 0; r < t.row_count() && m.content.size() < content_cap; ++r) {
    for (std::size_t c = 0; c < t.col_count() && m.content.size() < content_cap; ++c) {
      for (auto& tok : text::split_ws(t.cell(r, c).raw)) {
        if (m.content.size() >= content_cap) break;
        m.content.push_back(std::move(tok));
      }
    }
  }
  m.logic = linearize(ex.ast);
  return m;
}

}  // namespace l2t
