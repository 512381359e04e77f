#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "l2t/dataset.hpp"
#include "l2t/realization.hpp"
#include "l2t/semantics.hpp"
#include "l2t/service.hpp"
#include "l2t/table.hpp"

namespace l2t::cli {

// A .json file holds a structured table record; anything else is delimited
// text whose caption comes from `caption`.
Table read_table(const std::string& path, const std::string& caption = "");

ExecConfig read_config(const std::string& path);
PhraseTable read_phrases(const std::string& path);
FieldMap read_field_map(const std::string& path);

// Terminal question-and-answer loop over in/out; returns the process status.
int run_derive(const Table& table, LogicType type, const ExecConfig& cfg,
               const std::string& prompts_path, std::istream& in, std::ostream& out);

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir;
  std::string exec_config;
  std::string session_dir;
  std::string annotations;
};

// Reads L2T_BIND (host:port), L2T_DATA_DIR, L2T_EXEC_CONFIG, L2T_SESSION_DIR
// and L2T_ANNOTATIONS; explicit fields win over the environment.
ServeOptions serve_options_from_env(ServeOptions explicit_opts);
int run_server(const ServeOptions& opts);

}  // namespace l2t::cli
