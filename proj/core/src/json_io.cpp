#include "l2t/json_io.hpp"

#include "l2t/text_util.hpp"

namespace l2t {

namespace {

const Json* member(const Json& j, std::initializer_list<const char*> names) {
  if (!j.is_object()) return nullptr;
  for (const char* n : names) {
    if (auto it = j.find(n); it != j.end() && !it->is_null()) return &*it;
  }
  return nullptr;
}

std::string cell_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "";
  return j.dump();
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::BadRequest, what); }

Json tally_json(const Tally& t) {
  return Json{{"total", t.total},           {"parse_ok", t.parse_ok},
              {"typecheck_ok", t.typecheck_ok}, {"exec_true", t.exec_true},
              {"exec_false", t.exec_false},   {"exec_error", t.exec_error},
              {"exec_true_rate", t.exec_true_rate()}};
}

}  // namespace

TableSource table_source_from_json(const Json& j) {
  if (!j.is_object()) bad("table must be an object");
  TableSource src;
  if (const Json* id = member(j, {"table_id", "id", "url"})) src.table_id = cell_text(*id);
  if (const Json* cap = member(j, {"caption", "topic"})) src.caption = cell_text(*cap);
  const Json* cols = member(j, {"columns", "table_header"});
  const Json* rows = member(j, {"rows", "table_cont"});
  if (!cols || !cols->is_array()) bad("table needs a 'columns' array");
  if (!rows || !rows->is_array()) bad("table needs a 'rows' array");
  for (const auto& c : *cols) src.columns.push_back(cell_text(c));
  for (const auto& r : *rows) {
    if (!r.is_array()) bad("each row must be an array");
    std::vector<std::string> cells;
    for (const auto& c : r) cells.push_back(cell_text(c));
    src.rows.push_back(std::move(cells));
  }
  if (const Json* s = member(j, {"subject_column"})) {
    if (!s->is_number_unsigned()) bad("subject_column must be a column index");
    src.subject_column = s->get<std::size_t>();
  }
  return src;
}

Json table_to_json(const Table& table) {
  TableSource src = table.to_source();
  return Json{{"table_id", src.table_id},
              {"caption", src.caption},
              {"columns", src.columns},
              {"rows", src.rows},
              {"subject_column", table.subject_column()}};
}

Json table_summary_json(const Table& table) {
  return Json{{"table_id", table.id()},
              {"caption", table.caption()},
              {"columns", table.columns()},
              {"row_count", table.row_count()}};
}

Json node_to_json(const Node& node) {
  if (node.is_text()) return Json{{"type", "text"}, {"value", node.label}};
  Json args = Json::array();
  for (const auto& c : node.children) args.push_back(node_to_json(c));
  return Json{{"type", "function"}, {"name", node.label}, {"args", std::move(args)}};
}

Node node_from_json(const Json& j) {
  if (!j.is_object()) bad("node must be an object");
  std::string type = j.value("type", "");
  if (type == "text") return Node::text(j.value("value", ""));
  if (type != "function") bad("node type must be 'function' or 'text'");
  std::vector<Node> args;
  if (auto it = j.find("args"); it != j.end()) {
    for (const auto& a : *it) args.push_back(node_from_json(a));
  }
  return Node::function(j.value("name", ""), std::move(args));
}

Json node_stats_to_json(const NodeStats& s) {
  return Json{{"total_nodes", s.total_nodes},
              {"function_nodes", s.function_nodes},
              {"text_nodes", s.text_nodes},
              {"linearized_length", s.linearized_length}};
}

Json value_to_json(const Value& v) {
  Json out{{"kind", value_kind_name(v.kind())}, {"text", format_value(v)}};
  switch (v.kind()) {
    case ValueKind::Bool: out["value"] = v.as_bool(); break;
    case ValueKind::Number: out["value"] = *v.as_cell().number; break;
    case ValueKind::Date:
    case ValueKind::Text: out["value"] = v.as_cell().text; break;
    case ValueKind::Row: out["value"] = v.as_row().index; break;
    case ValueKind::View: out["value"] = v.as_view().rows(); break;
  }
  return out;
}

Json answer_to_json(const Answer& a) {
  return std::visit([](const auto& x) { return Json(x); }, a);
}

Answer answer_from_json(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer()) bad("row index must be non-negative");
  if (j.is_array()) {
    std::vector<std::string> cols;
    for (const auto& c : j) {
      if (!c.is_string()) bad("column list must hold strings");
      cols.push_back(c.get<std::string>());
    }
    return cols;
  }
  bad("answer must be a string, row index, boolean or column list");
}

Json answer_record_to_json(const AnswerRecord& rec) {
  Json answers = Json::object();
  for (const auto& [id, a] : rec.answers) answers[id] = answer_to_json(a);
  return Json{{"logic_type", logic_type_name(rec.logic_type)}, {"answers", std::move(answers)}};
}

AnswerRecord answer_record_from_json(const Json& j) {
  if (!j.is_object()) bad("answer record must be an object");
  auto type = parse_logic_type(j.value("logic_type", ""));
  if (!type) bad("unknown logic_type");
  AnswerRecord rec;
  rec.logic_type = *type;
  if (auto it = j.find("answers"); it != j.end()) {
    if (!it->is_object()) bad("answers must be an object");
    for (const auto& [id, a] : it->items()) rec.answers[id] = answer_from_json(a);
  }
  return rec;
}

Json question_to_json(const Question& q) {
  Json out{{"id", q.id},
           {"logic_type", logic_type_name(q.logic_type)},
           {"prompt", q.prompt},
           {"answer_kind", answer_kind_name(q.answer_kind)},
           {"choices", q.choices}};
  if (q.depends_on) {
    out["depends_on"] = Json{{"question_id", q.depends_on->question_id},
                             {"value", q.depends_on->value},
                             {"negate", q.depends_on->negate}};
  }
  return out;
}

Json logic_types_json() {
  Json out = Json::array();
  for (auto t : kAllLogicTypes) {
    Json qs = Json::array();
    for (const auto& q : full_question_set(t)) qs.push_back(question_to_json(q));
    out.push_back(Json{{"name", logic_type_name(t)},
                       {"definition", logic_type_definition(t)},
                       {"questions", std::move(qs)}});
  }
  return out;
}

Json exec_config_to_json(const ExecConfig& cfg) {
  Json out{{"round_eq_relative_tol", cfg.round_eq_relative_tol},
           {"most_threshold", cfg.most_threshold},
           {"hop_view_policy",
            cfg.hop_view_policy == HopViewPolicy::FirstRow ? "first_row" : "require_singleton"}};
  out["round_eq_absolute_floor"] =
      cfg.round_eq_absolute_floor ? Json(*cfg.round_eq_absolute_floor) : Json("auto");
  return out;
}

ExecConfig exec_config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be an object");
  KeyValues kv;
  for (const auto& [k, v] : j.items()) kv[k] = v.is_string() ? v.get<std::string>() : v.dump();
  return exec_config_from(kv);
}

Json validation_report_to_json(const ValidationReport& r) {
  Json per = Json::object();
  for (const auto& [t, tally] : r.per_type) per[std::string(logic_type_name(t))] = tally_json(tally);
  Json failures = Json::array();
  for (const auto& f : r.failures) {
    failures.push_back(Json{{"index", f.index},
                            {"source", f.source},
                            {"logic_type", logic_type_name(f.logic_type)},
                            {"outcome", outcome_name(f.outcome)},
                            {"error", f.error_code},
                            {"message", f.message},
                            {"diagnostic", f.diagnostic}});
  }
  return Json{{"overall", tally_json(r.overall)}, {"per_type", per}, {"failures", failures}};
}

Json stats_to_json(const DatasetStats& s) {
  Json per = Json::object();
  for (const auto& [t, ts] : s.per_type) {
    per[std::string(logic_type_name(t))] = Json{{"count", ts.count},
                                                {"avg_sentence_len", ts.avg_sentence_len},
                                                {"avg_total_nodes", ts.avg_total_nodes},
                                                {"avg_function_nodes", ts.avg_function_nodes},
                                                {"avg_linearized_len", ts.avg_linearized_len}};
  }
  Json hist = Json::object();
  for (const auto& [t, h] : s.node_histogram) {
    Json bins = Json::object();
    for (const auto& [b, c] : h) bins[std::to_string(b)] = c;
    hist[std::string(logic_type_name(t))] = bins;
  }
  return Json{{"n_examples", s.n_examples},
              {"n_tables", s.n_tables},
              {"vocab_size", s.vocab_size},
              {"vocab_size_cased", s.vocab_size_cased},
              {"avg_sentence_len", s.avg_sentence_len},
              {"avg_total_nodes", s.avg_total_nodes},
              {"avg_function_nodes", s.avg_function_nodes},
              {"avg_linearized_len", s.avg_linearized_len},
              {"min_total_nodes", s.min_total_nodes},
              {"max_total_nodes", s.max_total_nodes},
              {"per_type", per},
              {"node_histogram", hist}};
}

Json split_report_to_json(const SplitReport& r) {
  Json ex = Json::object(), tb = Json::object(), ov = Json::array();
  for (const auto& [s, n] : r.examples) ex[std::string(split_name(s))] = n;
  for (const auto& [s, n] : r.tables) tb[std::string(split_name(s))] = n;
  for (const auto& o : r.overlaps) {
    Json splits = Json::array();
    for (Split s : o.splits) splits.push_back(split_name(s));
    ov.push_back(Json{{"table_id", o.table_id}, {"splits", splits}});
  }
  return Json{{"examples", ex}, {"tables", tb}, {"overlaps", ov}, {"ok", r.ok()}};
}

Json model_input_to_json(const ModelInput& m) {
  return Json{{"caption", m.caption},
              {"headers", m.headers},
              {"content", m.content},
              {"logic", m.logic},
              {"serialized", m.serialize()}};
}

Json slot_fill_to_json(const TemplateSlotFill& f) {
  return Json{{"logic_type", logic_type_name(f.logic_type)},
              {"template", f.template_key},
              {"slots", f.slots}};
}

Json error_to_json(const Error& e) {
  return Json{{"error", e.code_name()}, {"message", e.what()}};
}

}  // namespace l2t
