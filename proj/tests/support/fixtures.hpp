#pragma once

// Shared fixture loading for test executables; L2T_TEST_DATA_DIR is set per target.

#include <string>

#include "l2t/ast.hpp"
#include "l2t/json_io.hpp"
#include "l2t/kv_config.hpp"
#include "l2t/semantics.hpp"
#include "l2t/table.hpp"

namespace l2t::testing {

inline std::string data_path(const std::string& name) { return std::string(L2T_TEST_DATA_DIR) + "/" + name; }

inline const Table& f1() {
  static const Table t = load_table(table_source_from_json(Json::parse(read_file(data_path("f1.json")))));
  return t;
}

inline Value eval_on_f1(const std::string& logic, const ExecConfig& cfg = {}) {
  return evaluate(parse_logic_str(logic), f1(), cfg);
}

inline Value sub_on_f1(const std::string& logic, const ExecConfig& cfg = {}) {
  return evaluate_subprogram(parse_logic_str(logic).root, f1(), cfg);
}

}  // namespace l2t::testing
