#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "l2t/json_io.hpp"

namespace l2t {

struct ServiceOptions {
  ExecConfig exec_config;
  std::chrono::seconds idle_expiry{30 * 60};
  std::optional<std::filesystem::path> session_dir;       // file-backed sessions
  std::optional<std::filesystem::path> annotations_file;  // finalized records, one JSON per line
};

struct Response {
  int status = 200;
  Json body;
};

// HTTP status for a domain error.
int http_status(ErrorCode code) noexcept;

// Request handler behind the HTTP front end. Thread-safe; tables are
// read-only after registration.
class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  void add_table(Table table);
  // Every *.json file under dir: a table object, or an array of table or
  // dataset records. Returns the number of tables registered.
  std::size_t load_tables(const std::filesystem::path& dir);
  std::shared_ptr<const Table> find_table(const std::string& id) const;

  // Dispatches one request; never throws.
  Response handle(const std::string& method, const std::string& path, const std::string& body);

  // Typed session API; errors as documented per operation.
  Json create_session(const std::string& table_id, LogicType type);       // UnknownTable
  Json get_session(const std::string& id);                                // UnknownSession
  Json answer_question(const std::string& id, const std::string& question_id,
                       const Answer& answer);  // WrongAnswerType, QuestionNotAskable, SessionConflict
  Json finalize_session(const std::string& id, const std::string& sentence = "");
  // IncompleteSession, ExecutionFalse, SessionConflict

  std::size_t session_count() const;
  // Drops sessions idle longer than the expiry; returns how many.
  std::size_t expire_idle(std::chrono::steady_clock::time_point now = std::chrono::steady_clock::now());

 private:
  struct Session;
  class SessionLock;

  std::shared_ptr<Session> session(const std::string& id);
  Json session_json(const Session& s) const;
  void persist(const Session& s) const;
  std::shared_ptr<Session> restore_session(const std::string& id);
  std::shared_ptr<const Table> table_from_request(const Json& body) const;
  Response route(const std::string& method, const std::string& path, const Json& body);

  ServiceOptions options_;
  mutable std::mutex tables_mutex_;
  std::map<std::string, std::shared_ptr<const Table>> tables_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex annotations_mutex_;
};

}  // namespace l2t
