#pragma once

#include <nlohmann/json.hpp>

#include "l2t/ast.hpp"
#include "l2t/dataset.hpp"
#include "l2t/error.hpp"
#include "l2t/logic_types.hpp"
#include "l2t/realization.hpp"
#include "l2t/semantics.hpp"
#include "l2t/table.hpp"

namespace l2t {

using Json = nlohmann::json;

// {table_id, caption, columns, rows, subject_column?}; also accepts the
// released names topic / table_header / table_cont. Errors: BadRequest.
TableSource table_source_from_json(const Json& j);
Json table_to_json(const Table& table);
Json table_summary_json(const Table& table);

// {"type":"function","name":..,"args":[..]} or {"type":"text","value":..}
Json node_to_json(const Node& node);
Node node_from_json(const Json& j);
Json node_stats_to_json(const NodeStats& s);

// {"kind": "bool"|"number"|..., "value": ..., "text": ...}
Json value_to_json(const Value& v);

// Text -> string, row -> integer, yes/no -> boolean, columns -> string array.
Json answer_to_json(const Answer& a);
Answer answer_from_json(const Json& j);
Json answer_record_to_json(const AnswerRecord& rec);
AnswerRecord answer_record_from_json(const Json& j);

Json question_to_json(const Question& q);
Json logic_types_json();

Json exec_config_to_json(const ExecConfig& cfg);
// Missing keys keep the defaults. Errors: InvalidConfig.
ExecConfig exec_config_from_json(const Json& j);

Json validation_report_to_json(const ValidationReport& r);
Json stats_to_json(const DatasetStats& s);
Json split_report_to_json(const SplitReport& r);
Json model_input_to_json(const ModelInput& m);
Json slot_fill_to_json(const TemplateSlotFill& f);

Json error_to_json(const Error& e);

}  // namespace l2t
