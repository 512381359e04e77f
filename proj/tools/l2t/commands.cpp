#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "l2t/error.hpp"
#include "l2t/kv_config.hpp"
#include "l2t/json_io.hpp"
#include "l2t/text_util.hpp"

namespace l2t::cli {

Table read_table(const std::string& path, const std::string& caption) {
  std::string body = read_file(path);
  if (std::filesystem::path(path).extension() == ".json") {
    Json j = Json::parse(body, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::ParseFailure, path + " is not valid JSON");
    TableSource src = table_source_from_json(j);
    if (src.table_id.empty()) src.table_id = std::filesystem::path(path).stem().string();
    return load_table(std::move(src));
  }
  return load_table_delimited(body, caption, std::filesystem::path(path).stem().string());
}

ExecConfig read_config(const std::string& path) {
  return path.empty() ? ExecConfig{} : load_exec_config(path);
}

PhraseTable read_phrases(const std::string& path) {
  return path.empty() ? PhraseTable::defaults() : PhraseTable::load(path);
}

FieldMap read_field_map(const std::string& path) {
  return path.empty() ? FieldMap::defaults() : FieldMap::from(load_key_values(path));
}

namespace {

std::optional<Answer> read_answer(const Question& q, const Table& table, const std::string& line) {
  std::string t = text::trim(line);
  switch (q.answer_kind) {
    case AnswerKind::Row: {
      if (!t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return text::is_digit(c); })) {
        return Answer{static_cast<std::size_t>(std::stoul(t))};
      }
      for (std::size_t r = 0; r < table.row_count(); ++r) {
        if (text::to_lower(table.cell(r, table.subject_column()).raw) == text::to_lower(t)) {
          return Answer{r};
        }
      }
      return std::nullopt;
    }
    case AnswerKind::Columns: {
      std::vector<std::string> cols;
      if (text::to_lower(t) == "n/a" || t.empty()) return Answer{cols};
      std::string item;
      for (char c : t + ",") {
        if (c == ',') {
          if (auto s = text::trim(item); !s.empty()) cols.push_back(s);
          item.clear();
        } else {
          item += c;
        }
      }
      return Answer{cols};
    }
    case AnswerKind::Bool:
    case AnswerKind::Choice:
    case AnswerKind::Column:
    case AnswerKind::Value: return Answer{t};
  }
  return std::nullopt;
}

}  // namespace

int run_derive(const Table& table, LogicType type, const ExecConfig& cfg,
               const std::string& prompts_path, std::istream& in, std::ostream& out) {
  KeyValues prompts;
  if (!prompts_path.empty()) prompts = load_key_values(prompts_path);
  AnswerRecord rec;
  rec.logic_type = type;
  out << "table " << table.id() << ": " << table.caption() << "\ncolumns: "
      << text::join(table.columns(), " | ") << "\n";
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    out << "  row " << r << ": " << table.cell(r, table.subject_column()).raw << "\n";
  }
  while (true) {
    auto questions = applicable_questions(rec);
    apply_prompt_overrides(questions, prompts);
    const Question* next = nullptr;
    for (const auto& q : questions) {
      if (!rec.answers.count(q.id)) {
        next = &q;
        break;
      }
    }
    if (!next) break;
    out << next->id << ". " << next->prompt << "\n";
    if (!next->choices.empty()) out << "   [" << text::join(next->choices, " / ") << "]\n";
    out << "> " << std::flush;
    std::string line;
    if (!std::getline(in, line)) {
      out << "\ninput ended before all questions were answered\n";
      return 1;
    }
    auto answer = read_answer(*next, table, line);
    if (!answer) {
      out << "   not understood; try again\n";
      continue;
    }
    try {
      Answer norm = normalize_answer(*next, *answer);
      if (next->answer_kind == AnswerKind::Column) {
        resolve_column_or_throw(table, std::get<std::string>(norm));
      }
      rec.answers[next->id] = std::move(norm);
    } catch (const Error& e) {
      out << "   " << e.what() << "\n";
    }
  }
  Ast ast = build_from_answers(rec, table);
  out << "logic_str: " << print_logic_str(ast) << "\n";
  out << "interpretation: " << interpret(ast) << "\n";
  bool ok = false;
  try {
    ok = evaluate(ast, table, cfg).as_bool();
  } catch (const Error& e) {
    out << "execution error: " << e.code_name() << ": " << e.what() << "\n";
  }
  out << "exec_result: " << (ok ? "true" : "false") << "\n";
  return ok ? 0 : 1;
}

ServeOptions serve_options_from_env(ServeOptions opts) {
  auto env = [](const char* name) -> std::string {
    const char* v = std::getenv(name);
    return v ? v : "";
  };
  if (std::string bind = env("L2T_BIND"); !bind.empty()) {
    auto colon = bind.rfind(':');
    if (colon == std::string::npos) {
      opts.host = bind;
    } else {
      opts.host = bind.substr(0, colon);
      opts.port = std::stoi(bind.substr(colon + 1));
    }
  }
  if (opts.data_dir.empty()) opts.data_dir = env("L2T_DATA_DIR");
  if (opts.exec_config.empty()) opts.exec_config = env("L2T_EXEC_CONFIG");
  if (opts.session_dir.empty()) opts.session_dir = env("L2T_SESSION_DIR");
  if (opts.annotations.empty()) opts.annotations = env("L2T_ANNOTATIONS");
  return opts;
}

}  // namespace l2t::cli
