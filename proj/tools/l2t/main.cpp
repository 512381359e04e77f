#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "l2t/error.hpp"
#include "l2t/json_io.hpp"
#include "l2t/metrics.hpp"
#include "l2t/text_util.hpp"

namespace {

using namespace l2t;

std::vector<std::string> read_lines(const std::string& path) {
  std::string body = read_file(path);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t end = body.find('\n', pos);
    if (end == std::string::npos) end = body.size();
    std::string line = body.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = end + 1;
  }
  return lines;
}

LoadResult load_or_report(const std::string& data, const std::string& fields) {
  LoadResult r = load_dataset(data, cli::read_field_map(fields));
  for (const auto& f : r.failures) {
    std::cerr << "load failure " << f.source << ": " << error_code_name(f.code) << ": " << f.message << "\n";
  }
  return r;
}

void print_tally(const std::string& label, const Tally& t) {
  std::printf("%-12s %7zu  parse %7zu  typecheck %7zu  true %7zu  false %6zu  error %6zu  (%.2f%%)\n",
              label.c_str(), t.total, t.parse_ok, t.typecheck_ok, t.exec_true, t.exec_false,
              t.exec_error, 100.0 * t.exec_true_rate());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Logical-form toolkit over semi-structured tables"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  std::string logic, table_path, caption, config_path, phrases_path, data, fields, out_path;
  bool as_json = false, trace = false;

  auto add_logic = [&](CLI::App* c) { c->add_option("--logic,-l", logic, "logical form")->required(); };
  auto add_table = [&](CLI::App* c) {
    c->add_option("--table,-t", table_path, "table file (.json record or delimited text)")
        ->required()
        ->check(CLI::ExistingFile);
    c->add_option("--caption", caption, "caption for delimited tables");
  };
  auto add_data = [&](CLI::App* c) {
    c->add_option("--data,-d", data, "dataset directory or file")->required()->check(CLI::ExistingPath);
    c->add_option("--fields", fields, "field map file (field.<name> = source names)")
        ->check(CLI::ExistingFile);
  };

  auto* parse = app.add_subcommand("parse", "parse and print canonically");
  add_logic(parse);
  parse->add_flag("--json", as_json, "emit the tree as JSON");

  auto* check = app.add_subcommand("check", "typecheck a logical form");
  add_logic(check);

  auto* exec = app.add_subcommand("exec", "execute a logical form against a table");
  add_logic(exec);
  add_table(exec);
  exec->add_option("--config,-c", config_path, "exec config file")->check(CLI::ExistingFile);
  exec->add_flag("--trace", trace, "print every function node's value");

  auto* classify_cmd = app.add_subcommand("classify", "logic type of a program");
  add_logic(classify_cmd);

  auto* realize = app.add_subcommand("realize", "template realization");
  add_logic(realize);
  add_table(realize);
  realize->add_option("--phrases", phrases_path, "phrase table overrides")->check(CLI::ExistingFile);

  auto* interp = app.add_subcommand("interpret", "natural-language interpretation");
  add_logic(interp);
  interp->add_option("--phrases", phrases_path, "phrase table overrides")->check(CLI::ExistingFile);

  auto* lin = app.add_subcommand("linearize", "token sequence and node statistics");
  add_logic(lin);

  unsigned threads = 0;
  std::size_t max_failures = 20;
  auto* validate = app.add_subcommand("validate", "parse, typecheck and execute a dataset");
  add_data(validate);
  validate->add_option("--config,-c", config_path, "exec config file")->check(CLI::ExistingFile);
  validate->add_option("--threads", threads, "worker threads (0 = all cores)");
  validate->add_option("--show", max_failures, "failures to list");
  validate->add_flag("--json", as_json, "emit the full report as JSON");

  std::string histogram_path;
  auto* stats = app.add_subcommand("stats", "dataset statistics");
  add_data(stats);
  stats->add_flag("--json", as_json, "emit JSON");
  stats->add_option("--histogram-csv", histogram_path, "write node-count histograms");

  auto* splits = app.add_subcommand("splits", "check table overlap across splits");
  add_data(splits);

  std::size_t cap = kDefaultContentCap;
  auto* export_cmd = app.add_subcommand("export-inputs", "serialize model inputs as JSON lines");
  add_data(export_cmd);
  export_cmd->add_option("--cap", cap, "content token cap");
  export_cmd->add_option("--out,-o", out_path, "output file (default stdout)");

  std::string metric, cand_path, ref_path;
  auto* score = app.add_subcommand("score", "BLEU-4 / ROUGE between line-aligned files");
  score->add_option("--metric,-m", metric, "bleu4 | rouge1 | rouge2 | rouge4 | rougeL")
      ->required()
      ->check(CLI::IsMember({"bleu4", "rouge1", "rouge2", "rouge4", "rougeL"}));
  score->add_option("--cand", cand_path, "candidate file")->required()->check(CLI::ExistingFile);
  score->add_option("--ref", ref_path, "reference file")->required()->check(CLI::ExistingFile);

  std::string type_name, prompts_path;
  auto* derive = app.add_subcommand("derive", "answer the annotation questions interactively");
  add_table(derive);
  derive->add_option("--type", type_name, "logic type")->required();
  derive->add_option("--config,-c", config_path, "exec config file")->check(CLI::ExistingFile);
  derive->add_option("--prompts", prompts_path, "prompt overrides (<type>.<id> = text)")
      ->check(CLI::ExistingFile);

  cli::ServeOptions serve_opts;
  std::string bind;
  auto* serve = app.add_subcommand("serve", "run the HTTP annotation service");
  serve->add_option("--bind", bind, "host:port (env L2T_BIND)");
  serve->add_option("--data-dir", serve_opts.data_dir, "table directory (env L2T_DATA_DIR)");
  serve->add_option("--config,-c", serve_opts.exec_config, "exec config (env L2T_EXEC_CONFIG)");
  serve->add_option("--session-dir", serve_opts.session_dir, "session persistence directory");
  serve->add_option("--annotations", serve_opts.annotations, "finalized annotations file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : 2;
  }

  try {
    if (*parse) {
      Ast ast = parse_logic_str(logic);
      if (as_json) {
        std::cout << Json{{"ast", node_to_json(ast.root)}, {"node_stats", node_stats_to_json(node_stats(ast))}}.dump(2)
                  << "\n";
      } else {
        std::cout << print_logic_str(ast) << "\n";
      }
    } else if (*check) {
      TypedAst typed = typecheck(parse_logic_str(logic));
      std::cout << "ok: " << sem_type_name(typed.root.type) << "\n";
    } else if (*exec) {
      Table table = cli::read_table(table_path, caption);
      EvalLog log;
      log.record_trace = trace;
      Value v = evaluate(parse_logic_str(logic), table, cli::read_config(config_path), &log);
      for (const auto& [program, value] : log.trace) std::cout << "  " << program << " => " << value << "\n";
      for (const auto& note : log.notes) std::cerr << "note: " << note << "\n";
      std::cout << format_value(v) << "\n";
    } else if (*classify_cmd) {
      std::cout << logic_type_name(classify(parse_logic_str(logic))) << "\n";
    } else if (*realize) {
      Table table = cli::read_table(table_path, caption);
      std::cout << realize_template(parse_logic_str(logic), table, cli::read_phrases(phrases_path)) << "\n";
    } else if (*interp) {
      Ast ast = parse_logic_str(logic);
      typecheck(ast);
      std::cout << interpret(ast, cli::read_phrases(phrases_path)) << "\n";
    } else if (*lin) {
      Ast ast = parse_logic_str(logic);
      NodeStats s = node_stats(ast);
      std::cout << text::join(linearize(ast), " ") << "\n"
                << "total_nodes " << s.total_nodes << " function_nodes " << s.function_nodes
                << " text_nodes " << s.text_nodes << " linearized_length " << s.linearized_length << "\n";
    } else if (*validate) {
      LoadResult loaded = load_or_report(data, fields);
      ValidationReport report = validate_dataset(loaded.examples, cli::read_config(config_path), threads);
      if (as_json) {
        Json j = validation_report_to_json(report);
        j["load_failures"] = loaded.failures.size();
        std::cout << j.dump(2) << "\n";
      } else {
        print_tally("overall", report.overall);
        for (const auto& [t, tally] : report.per_type) print_tally(std::string(logic_type_name(t)), tally);
        std::size_t shown = 0;
        for (const auto& f : report.failures) {
          if (shown++ >= max_failures) break;
          std::cout << f.source << " [" << logic_type_name(f.logic_type) << "] " << outcome_name(f.outcome)
                    << (f.error_code.empty() ? "" : " " + f.error_code) << ": " << f.diagnostic << "\n";
        }
        if (!loaded.failures.empty()) std::cout << loaded.failures.size() << " records failed to load\n";
      }
      if (!report.failures.empty() || !loaded.failures.empty()) return 3;
    } else if (*stats) {
      LoadResult loaded = load_or_report(data, fields);
      DatasetStats s = compute_stats(loaded.examples);
      if (!histogram_path.empty()) {
        std::ofstream(histogram_path) << histogram_csv(s);
      }
      if (as_json) {
        std::cout << stats_to_json(s).dump(2) << "\n";
      } else {
        std::printf("examples %zu\ntables %zu\nvocab %zu (cased %zu)\n", s.n_examples, s.n_tables,
                    s.vocab_size, s.vocab_size_cased);
        std::printf("avg sentence length %.2f\navg nodes %.2f\navg function nodes %.2f\n"
                    "avg linearized length %.2f\nnode range [%zu, %zu]\n",
                    s.avg_sentence_len, s.avg_total_nodes, s.avg_function_nodes,
                    s.avg_linearized_len, s.min_total_nodes, s.max_total_nodes);
        for (const auto& [t, ts] : s.per_type) {
          std::printf("  %-12s %6zu  nodes %.2f  functions %.2f  sentence %.2f\n",
                      std::string(logic_type_name(t)).c_str(), ts.count, ts.avg_total_nodes,
                      ts.avg_function_nodes, ts.avg_sentence_len);
        }
      }
    } else if (*splits) {
      LoadResult loaded = load_or_report(data, fields);
      SplitReport r = check_splits(loaded.examples);
      for (const auto& [s, n] : r.examples) {
        std::cout << split_name(s) << " " << n << " examples, " << r.tables[s] << " tables\n";
      }
      std::cout << r.overlaps.size() << " tables shared across splits\n";
      for (const auto& o : r.overlaps) std::cout << "  " << o.table_id << "\n";
      return r.ok() ? 0 : 1;
    } else if (*export_cmd) {
      LoadResult loaded = load_or_report(data, fields);
      std::ofstream file;
      if (!out_path.empty()) file.open(out_path);
      std::ostream& out = out_path.empty() ? std::cout : file;
      for (const auto& ex : loaded.examples) {
        Json j = model_input_to_json(export_model_input(ex, cap));
        j["source"] = ex.source;
        j["sentence"] = ex.sentence;
        out << j.dump() << "\n";
      }
    } else if (*score) {
      auto cands = read_lines(cand_path);
      auto refs = read_lines(ref_path);
      double value = 0;
      if (metric == "bleu4") {
        value = bleu4(cands, refs);
      } else {
        RougeVariant v = metric == "rouge1"   ? RougeVariant::R1
                         : metric == "rouge2" ? RougeVariant::R2
                         : metric == "rouge4" ? RougeVariant::R4
                                              : RougeVariant::L;
        value = rouge(cands, refs, v);
      }
      std::printf("%.2f\n", value);
    } else if (*derive) {
      Table table = cli::read_table(table_path, caption);
      auto type = parse_logic_type(type_name);
      if (!type) {
        std::cerr << "unknown logic type '" << type_name << "'\n";
        return 2;
      }
      return cli::run_derive(table, *type, cli::read_config(config_path), prompts_path, std::cin, std::cout);
    } else if (*serve) {
      if (!bind.empty()) {
        auto colon = bind.rfind(':');
        serve_opts.host = bind.substr(0, colon);
        if (colon != std::string::npos) serve_opts.port = std::stoi(bind.substr(colon + 1));
      }
      cli::ServeOptions merged = cli::serve_options_from_env(serve_opts);
      if (!bind.empty()) {
        merged.host = serve_opts.host;
        merged.port = serve_opts.port;
      }
      return cli::run_server(merged);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.code_name() << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
