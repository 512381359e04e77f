#include "l2t/service.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <sstream>

#include "l2t/text_util.hpp"

namespace l2t {

struct Service::Session {
  std::string id;
  std::string table_id;
  std::shared_ptr<const Table> table;
  AnswerRecord record;
  std::chrono::steady_clock::time_point last_used;
  std::mutex mutex;
};

// Exclusive ownership of one session for the duration of a mutation.
class Service::SessionLock {
 public:
  explicit SessionLock(Session& s) : lock_(s.mutex, std::try_to_lock) {
    if (!lock_.owns_lock()) {
      throw Error(ErrorCode::SessionConflict, "session " + s.id + " is being modified");
    }
  }

 private:
  std::unique_lock<std::mutex> lock_;
};

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownTable:
    case ErrorCode::UnknownSession: return 404;
    case ErrorCode::SessionConflict: return 409;
    case ErrorCode::IncompleteSession:
    case ErrorCode::ExecutionFalse:
    case ErrorCode::IncompleteAnswers:
    case ErrorCode::UnbuildableCriterion:
    case ErrorCode::ColumnNotFound:
    case ErrorCode::EmptyViewError:
    case ErrorCode::IncomparableOperands:
    case ErrorCode::NonSingletonView:
    case ErrorCode::OrdinalOutOfRange:
    case ErrorCode::Unclassifiable:
    case ErrorCode::SlotExtractionFailure: return 422;
    case ErrorCode::IoError: return 500;
    default: return 400;
  }
}

namespace {

std::string new_session_id() {
  static std::mutex m;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(m);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

bool valid_session_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); });
}

std::vector<std::string> split_path(const std::string& path) {
  std::string p = path.substr(0, path.find('?'));
  std::vector<std::string> parts;
  std::string cur;
  for (char c : p) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

const std::string& required_string(const Json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string()) {
    throw Error(ErrorCode::BadRequest, std::string("missing string field '") + key + "'");
  }
  return it->get_ref<const std::string&>();
}

Json typed_to_json(const Node& n, const TypedNode& t) {
  Json out{{"label", n.label}, {"type", sem_type_name(t.type)}};
  if (n.is_function()) {
    Json kids = Json::array();
    for (std::size_t i = 0; i < n.children.size(); ++i) kids.push_back(typed_to_json(n.children[i], t.children[i]));
    out["args"] = std::move(kids);
  }
  return out;
}

}  // namespace

Service::Service(ServiceOptions options) : options_(std::move(options)) {
  options_.exec_config.validate();
  if (options_.session_dir) std::filesystem::create_directories(*options_.session_dir);
}

Service::~Service() = default;

void Service::add_table(Table table) {
  auto ptr = std::make_shared<const Table>(std::move(table));
  std::lock_guard lock(tables_mutex_);
  tables_[ptr->id()] = std::move(ptr);
}

std::size_t Service::load_tables(const std::filesystem::path& dir) {
  std::size_t n = 0;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    Json doc;
    try {
      doc = Json::parse(read_file(f));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::IoError, f.string() + ": " + e.what());
    }
    std::vector<Json> items;
    if (doc.is_array()) {
      items.assign(doc.begin(), doc.end());
    } else {
      items.push_back(doc);
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      TableSource src = table_source_from_json(items[i]);
      if (src.table_id.empty() || doc.is_array()) {
        std::string base = f.stem().string();
        src.table_id = doc.is_array() ? (src.table_id.empty() ? base + "-" + std::to_string(i)
                                                              : src.table_id)
                                      : base;
      }
      add_table(load_table(std::move(src)));
      ++n;
    }
  }
  return n;
}

std::shared_ptr<const Table> Service::find_table(const std::string& id) const {
  std::lock_guard lock(tables_mutex_);
  auto it = tables_.find(id);
  return it == tables_.end() ? nullptr : it->second;
}

std::shared_ptr<const Table> Service::table_from_request(const Json& body) const {
  if (auto it = body.find("table"); it != body.end()) {
    return std::make_shared<const Table>(load_table(table_source_from_json(*it)));
  }
  const std::string& id = required_string(body, "table_id");
  auto t = find_table(id);
  if (!t) throw Error(ErrorCode::UnknownTable, "unknown table '" + id + "'");
  return t;
}

// ------------------------------------------------------------ sessions

std::size_t Service::session_count() const {
  std::lock_guard lock(sessions_mutex_);
  return sessions_.size();
}

std::size_t Service::expire_idle(std::chrono::steady_clock::time_point now) {
  std::vector<std::string> dropped;
  {
    std::lock_guard lock(sessions_mutex_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      std::unique_lock session_lock(it->second->mutex, std::try_to_lock);
      if (session_lock.owns_lock() && now - it->second->last_used > options_.idle_expiry) {
        dropped.push_back(it->first);
        session_lock.unlock();
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
  }
  if (options_.session_dir) {
    for (const auto& id : dropped) {
      std::error_code ec;
      std::filesystem::remove(*options_.session_dir / (id + ".json"), ec);
    }
  }
  return dropped.size();
}

void Service::persist(const Session& s) const {
  if (!options_.session_dir) return;
  Json doc{{"session_id", s.id}, {"table_id", s.table_id}, {"record", answer_record_to_json(s.record)}};
  auto path = *options_.session_dir / (s.id + ".json");
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out << doc.dump();
  }
  std::filesystem::rename(tmp, path);
}

std::shared_ptr<Service::Session> Service::restore_session(const std::string& id) {
  if (!options_.session_dir || !valid_session_id(id)) return nullptr;
  auto path = *options_.session_dir / (id + ".json");
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) return nullptr;
  Json doc = Json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) return nullptr;
  auto table = find_table(doc.value("table_id", ""));
  if (!table) return nullptr;
  auto s = std::make_shared<Session>();
  s->id = id;
  s->table_id = table->id();
  s->table = table;
  s->record = answer_record_from_json(doc.at("record"));
  s->last_used = std::chrono::steady_clock::now();
  return s;
}

std::shared_ptr<Service::Session> Service::session(const std::string& id) {
  expire_idle();
  {
    std::lock_guard lock(sessions_mutex_);
    if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
  }
  if (auto restored = restore_session(id)) {
    std::lock_guard lock(sessions_mutex_);
    auto [it, inserted] = sessions_.emplace(id, restored);
    return it->second;
  }
  throw Error(ErrorCode::UnknownSession, "unknown session '" + id + "'");
}

Json Service::session_json(const Session& s) const {
  Json answered = Json::object();
  for (const auto& [qid, a] : s.record.answers) answered[qid] = answer_to_json(a);
  Json pending = Json::array();
  Json current = nullptr;
  for (const auto& q : applicable_questions(s.record)) {
    if (s.record.answers.count(q.id)) continue;
    if (current.is_null()) current = question_to_json(q);
    pending.push_back(q.id);
  }
  Json out{{"session_id", s.id},
           {"table_id", s.table_id},
           {"logic_type", logic_type_name(s.record.logic_type)},
           {"answers", std::move(answered)},
           {"pending", std::move(pending)},
           {"current_question", std::move(current)}};
  if (out["pending"].empty()) {
    try {
      Ast ast = build_from_answers(s.record, *s.table);
      Json preview{{"ast", node_to_json(ast.root)},
                   {"logic_str", print_logic_str(ast)},
                   {"interpretation", interpret(ast)},
                   {"node_stats", node_stats_to_json(node_stats(ast))}};
      try {
        preview["exec_result"] = evaluate(ast, *s.table, options_.exec_config).as_bool();
      } catch (const Error& e) {
        preview["exec_result"] = false;
        preview["exec_error"] = error_to_json(e);
      }
      out["preview"] = std::move(preview);
    } catch (const Error& e) {
      out["build_error"] = error_to_json(e);
    }
  }
  return out;
}

Json Service::create_session(const std::string& table_id, LogicType type) {
  auto table = find_table(table_id);
  if (!table) throw Error(ErrorCode::UnknownTable, "unknown table '" + table_id + "'");
  auto s = std::make_shared<Session>();
  s->id = new_session_id();
  s->table_id = table_id;
  s->table = std::move(table);
  s->record.logic_type = type;
  s->last_used = std::chrono::steady_clock::now();
  expire_idle();
  {
    std::lock_guard lock(sessions_mutex_);
    sessions_[s->id] = s;
  }
  persist(*s);
  return session_json(*s);
}

Json Service::get_session(const std::string& id) {
  auto s = session(id);
  std::lock_guard lock(s->mutex);
  s->last_used = std::chrono::steady_clock::now();
  return session_json(*s);
}

Json Service::answer_question(const std::string& id, const std::string& question_id,
                              const Answer& answer) {
  auto s = session(id);
  SessionLock lock(*s);
  s->last_used = std::chrono::steady_clock::now();
  auto applicable = applicable_questions(s->record);
  const Question* target = nullptr;
  const Question* next = nullptr;
  for (const auto& q : applicable) {
    if (!next && !s->record.answers.count(q.id)) next = &q;
    if (q.id == question_id) target = &q;
  }
  bool askable = target && (s->record.answers.count(question_id) || target == next);
  if (!askable) {
    throw Error(ErrorCode::QuestionNotAskable, "question " + question_id + " is not askable now");
  }
  Answer normalized = normalize_answer(*target, answer);
  if (target->answer_kind == AnswerKind::Column) {
    resolve_column_or_throw(*s->table, std::get<std::string>(normalized));
  }
  if (target->answer_kind == AnswerKind::Row && std::get<std::size_t>(normalized) >= s->table->row_count()) {
    throw Error(ErrorCode::WrongAnswerType, question_id + ": row out of range");
  }
  s->record.answers[question_id] = std::move(normalized);
  // Answers to questions that are no longer applicable are dropped.
  auto now_applicable = applicable_questions(s->record);
  for (auto it = s->record.answers.begin(); it != s->record.answers.end();) {
    bool keep = std::any_of(now_applicable.begin(), now_applicable.end(),
                            [&](const Question& q) { return q.id == it->first; });
    it = keep ? std::next(it) : s->record.answers.erase(it);
  }
  persist(*s);
  return session_json(*s);
}

Json Service::finalize_session(const std::string& id, const std::string& sentence) {
  auto s = session(id);
  SessionLock lock(*s);
  s->last_used = std::chrono::steady_clock::now();
  for (const auto& q : applicable_questions(s->record)) {
    if (!s->record.answers.count(q.id)) {
      throw Error(ErrorCode::IncompleteSession, "unanswered: " + q.id);
    }
  }
  Ast ast = build_from_answers(s->record, *s->table);
  bool ok = false;
  try {
    ok = evaluate(ast, *s->table, options_.exec_config).as_bool();
  } catch (const Error& e) {
    throw Error(ErrorCode::ExecutionFalse, std::string("program does not execute: ") + e.what());
  }
  if (!ok) throw Error(ErrorCode::ExecutionFalse, "program evaluates to false");
  Json out{{"logic_str", print_logic_str(ast)},
           {"logic_type", logic_type_name(s->record.logic_type)},
           {"interpretation", interpret(ast)},
           {"exec_result", true}};
  if (options_.annotations_file) {
    Json line = out;
    line["table_id"] = s->table_id;
    line["session_id"] = s->id;
    line["sentence"] = sentence;
    line["answers"] = answer_record_to_json(s->record)["answers"];
    std::lock_guard alock(annotations_mutex_);
    std::ofstream file(*options_.annotations_file, std::ios::app);
    if (!file) throw Error(ErrorCode::IoError, "cannot append to " + options_.annotations_file->string());
    file << line.dump() << '\n';
  }
  return out;
}

// ------------------------------------------------------------ routing

Response Service::handle(const std::string& method, const std::string& path, const std::string& body) {
  try {
    Json parsed = Json::object();
    if (!text::trim(body).empty()) {
      parsed = Json::parse(body, nullptr, false);
      if (parsed.is_discarded()) throw Error(ErrorCode::BadRequest, "request body is not valid JSON");
    }
    if (method == "POST" && !parsed.is_object()) {
      throw Error(ErrorCode::BadRequest, "request body must be a JSON object");
    }
    return route(method, path, parsed);
  } catch (const Error& e) {
    return Response{http_status(e.code()), error_to_json(e)};
  } catch (const Json::exception& e) {
    return Response{400, Json{{"error", "BadRequest"}, {"message", e.what()}}};
  } catch (const std::exception& e) {
    return Response{500, Json{{"error", "Internal"}, {"message", e.what()}}};
  }
}

Response Service::route(const std::string& method, const std::string& path, const Json& body) {
  auto parts = split_path(path);
  auto is = [&](const char* m, std::initializer_list<const char*> segs) {
    if (method != m || parts.size() != segs.size()) return false;
    std::size_t i = 0;
    for (const char* s : segs) {
      if (std::string_view(s) != "*" && parts[i] != s) return false;
      ++i;
    }
    return true;
  };

  if (is("POST", {"parse"})) {
    Ast ast = parse_logic_str(required_string(body, "logic_str"));
    return {200, Json{{"ast", node_to_json(ast.root)},
                      {"logic_str", print_logic_str(ast)},
                      {"node_stats", node_stats_to_json(node_stats(ast))}}};
  }
  if (is("POST", {"typecheck"})) {
    TypedAst typed = typecheck(parse_logic_str(required_string(body, "logic_str")));
    return {200, Json{{"ok", true}, {"typed", typed_to_json(typed.ast.root, typed.root)}}};
  }
  if (is("POST", {"execute"})) {
    auto table = table_from_request(body);
    ExecConfig cfg = options_.exec_config;
    if (auto it = body.find("config"); it != body.end()) {
      Json merged = exec_config_to_json(cfg);
      merged.update(*it);
      cfg = exec_config_from_json(merged);
    }
    EvalLog log;
    log.record_trace = body.value("trace", false);
    Value v = evaluate(parse_logic_str(required_string(body, "logic_str")), *table, cfg, &log);
    Json out{{"value", value_to_json(v)}, {"notes", log.notes}};
    if (log.record_trace) {
      Json trace = Json::array();
      for (const auto& [program, value] : log.trace) trace.push_back(Json{{"program", program}, {"value", value}});
      out["trace"] = std::move(trace);
    }
    return {200, out};
  }
  if (is("GET", {"tables"})) {
    Json list = Json::array();
    std::lock_guard lock(tables_mutex_);
    for (const auto& [id, t] : tables_) list.push_back(table_summary_json(*t));
    return {200, list};
  }
  if (is("GET", {"tables", "*"})) {
    auto t = find_table(parts[1]);
    if (!t) throw Error(ErrorCode::UnknownTable, "unknown table '" + parts[1] + "'");
    return {200, table_to_json(*t)};
  }
  if (is("POST", {"sessions"})) {
    auto type = parse_logic_type(required_string(body, "logic_type"));
    if (!type) throw Error(ErrorCode::BadRequest, "unknown logic_type");
    return {201, create_session(required_string(body, "table_id"), *type)};
  }
  if (is("GET", {"sessions", "*"})) return {200, get_session(parts[1])};
  if (is("POST", {"sessions", "*", "answers"})) {
    auto it = body.find("answer");
    if (it == body.end()) throw Error(ErrorCode::BadRequest, "missing field 'answer'");
    return {200, answer_question(parts[1], required_string(body, "question_id"), answer_from_json(*it))};
  }
  if (is("POST", {"sessions", "*", "finalize"})) {
    return {200, finalize_session(parts[1], body.value("sentence", ""))};
  }
  if (is("GET", {"logic-types"})) return {200, logic_types_json()};
  if (is("POST", {"realize"})) {
    auto table = table_from_request(body);
    Ast ast = parse_logic_str(required_string(body, "logic_str"));
    TemplateSlotFill fill = extract_slots(ast, *table);
    Json out = slot_fill_to_json(fill);
    out["text"] = fill_template(fill);
    return {200, out};
  }
  if (is("POST", {"interpret"})) {
    Ast ast = parse_logic_str(required_string(body, "logic_str"));
    typecheck(ast);
    return {200, Json{{"interpretation", interpret(ast)}}};
  }
  if (is("POST", {"classify"})) {
    Ast ast = parse_logic_str(required_string(body, "logic_str"));
    return {200, Json{{"logic_type", logic_type_name(classify(ast))}}};
  }
  return {404, Json{{"error", "NotFound"}, {"message", method + " " + path + " is not an endpoint"}}};
}

}  // namespace l2t
