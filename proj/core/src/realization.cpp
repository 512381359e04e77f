#include "l2t/realization.hpp"

#include <algorithm>
#include <functional>

#include "l2t/error.hpp"
#include "l2t/semantics.hpp"
#include "l2t/text_util.hpp"

namespace l2t {

namespace detail {
extern const std::string_view kDefaultPhrases;
}

std::string_view default_phrase_resource() noexcept { return detail::kDefaultPhrases; }

const PhraseTable& PhraseTable::defaults() {
  static const PhraseTable table = [] {
    PhraseTable t;
    t.entries_ = parse_key_values(detail::kDefaultPhrases);
    return t;
  }();
  return table;
}

PhraseTable PhraseTable::with_overrides(const KeyValues& overrides) {
  PhraseTable t = defaults();
  for (const auto& [k, v] : overrides) t.entries_[k] = v;
  return t;
}

PhraseTable PhraseTable::load(const std::filesystem::path& path) {
  return with_overrides(load_key_values(path));
}

const std::string* PhraseTable::find(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

const std::string& PhraseTable::get(std::string_view key) const {
  if (const auto* v = find(key)) return *v;
  throw Error(ErrorCode::InvalidConfig, "phrase table has no entry '" + std::string(key) + "'");
}

std::string substitute(std::string_view pattern, const std::map<std::string, std::string>& slots) {
  std::string out;
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] == '{') {
      auto close = pattern.find('}', i);
      if (close != std::string_view::npos) {
        std::string name(pattern.substr(i + 1, close - i - 1));
        if (auto it = slots.find(name); it != slots.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += pattern[i++];
  }
  return out;
}

std::string number_word(std::size_t n) {
  static const char* small[] = {"zero",    "one",     "two",       "three",    "four",
                                "five",    "six",     "seven",     "eight",    "nine",
                                "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
                                "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
  static const char* tens[] = {"", "", "twenty", "thirty", "forty", "fifty",
                               "sixty", "seventy", "eighty", "ninety"};
  if (n < 20) return small[n];
  if (n < 100) {
    std::string w = tens[n / 10];
    if (n % 10) w += std::string("-") + small[n % 10];
    return w;
  }
  return std::to_string(n);
}

// ------------------------------------------------------------ interpret

namespace {

class Interpreter {
 public:
  explicit Interpreter(const PhraseTable& p) : p_(p) {}

  std::string run(const Node& root) {
    visit(root);
    std::string out;
    for (const auto& c : clauses_) {
      if (!out.empty()) out += " ";
      out += c + " .";
    }
    return text::collapse_ws(out);
  }

 private:
  struct Ref {
    std::string text;
    std::optional<std::size_t> step;
    bool all_rows = false;
  };

  std::string render(const Ref& r, std::size_t current) const {
    if (!r.step || *r.step + 1 == current) return r.text;
    return substitute(p_.get("interpret.earlier"),
                      {{"ref", r.text}, {"step", number_word(*r.step + 1)}});
  }

  std::string reference_phrase(const Node& n) const {
    if (const auto* r = p_.find("ref." + n.label)) return *r;
    if (const Signature* s = find_signature(n.label)) {
      switch (s->family) {
        case Family::Filter:
        case Family::FilterAll: return p_.get("ref.filter");
        case Family::AllQuantifier:
        case Family::MostQuantifier: return p_.get("ref.quantifier");
        default: break;
      }
    }
    return "the result";
  }

  Ref visit(const Node& n) {
    if (n.is_text()) {
      if (n.label == "all_rows") return Ref{p_.get("interpret.all_rows"), std::nullopt, true};
      return Ref{n.label, std::nullopt, false};
    }
    std::vector<Ref> kids;
    kids.reserve(n.children.size());
    for (const auto& c : n.children) kids.push_back(visit(c));

    const std::size_t current = clauses_.size();
    std::map<std::string, std::string> slots;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      std::string r = render(kids[i], current);
      std::string idx = std::to_string(i);
      slots[idx] = r;
      slots["from" + idx] = kids[i].all_rows ? "" : " from " + r;
      slots["in" + idx] = kids[i].all_rows ? "" : " in " + r;
    }
    std::string clause;
    if (const auto* phrase = p_.find("phrase." + n.label)) {
      clause = substitute(*phrase, slots);
    } else {
      std::vector<std::string> args;
      for (std::size_t i = 0; i < kids.size(); ++i) args.push_back(slots[std::to_string(i)]);
      clause = substitute(p_.get("interpret.fallback"),
                          {{"name", n.label}, {"args", text::join(args, " , ")}});
    }
    clauses_.push_back(text::collapse_ws(clause));
    return Ref{reference_phrase(n), current, false};
  }

  const PhraseTable& p_;
  std::vector<std::string> clauses_;
};

}  // namespace

std::string interpret(const Ast& ast, const PhraseTable& phrases) {
  return Interpreter(phrases).run(ast.root);
}

// ------------------------------------------------------------ templates

namespace {

using Slots = std::map<std::string, std::string>;

[[noreturn]] void slot_failure(const std::string& what) {
  throw Error(ErrorCode::SlotExtractionFailure, what);
}

void flatten_and(const Node& n, std::vector<const Node*>& out) {
  if (n.is_function() && n.label == "and") {
    for (const auto& c : n.children) flatten_and(c, out);
  } else {
    out.push_back(&n);
  }
}

const Node* find_first(const Node& n, const std::function<bool(const Node&)>& pred) {
  if (pred(n)) return &n;
  for (const auto& c : n.children) {
    if (const Node* hit = find_first(c, pred)) return hit;
  }
  return nullptr;
}

const Signature* sig(const Node& n) {
  return n.is_function() ? find_signature(n.label) : nullptr;
}

bool in_family(const Node& n, Family f) {
  const Signature* s = sig(n);
  return s && s->family == f;
}

bool is_hop(const Node& n) { return in_family(n, Family::Hop); }

// Suffix naming the predicate of filter_*, all_* and most_* functions.
std::string predicate_suffix(const Node& n) {
  auto us = n.label.find('_');
  return us == std::string::npos ? std::string() : n.label.substr(us + 1);
}

class Extractor {
 public:
  Extractor(const Ast& ast, const Table& table, const PhraseTable& p)
      : ast_(ast), table_(table), p_(p) {
    flatten_and(ast.root, conjuncts_);
    subject_ = table.columns()[table.subject_column()];
  }

  TemplateSlotFill run() {
    TemplateSlotFill fill;
    fill.logic_type = classify(ast_);
    fill.slots["caption"] = table_.caption();
    switch (fill.logic_type) {
      case LogicType::Count: count(fill); break;
      case LogicType::Superlative: row_focused(fill, false); break;
      case LogicType::Ordinal: row_focused(fill, true); break;
      case LogicType::Comparative: comparative(fill); break;
      case LogicType::Unique: unique(fill); break;
      case LogicType::Aggregation: aggregation(fill); break;
      case LogicType::Majority: majority(fill); break;
    }
    return fill;
  }

 private:
  std::string criterion(const Node& n) const {
    const auto* phrase = p_.find("criterion." + predicate_suffix(n));
    if (!phrase) slot_failure("no criterion phrase for '" + n.label + "'");
    return *phrase;
  }

  bool same_column(std::string_view a, std::string_view b) const {
    auto ca = table_.resolve_column(a);
    auto cb = table_.resolve_column(b);
    return ca && cb && *ca == *cb;
  }

  std::string evaluated(const Node& n) const {
    try {
      Value v = evaluate_subprogram(n, table_);
      if (const auto* row = std::get_if<RowRef>(&v.data)) {
        return table_.cell(row->index, table_.subject_column()).raw;
      }
      if (const auto* view = std::get_if<View>(&v.data)) {
        if (view->empty()) slot_failure("empty selection in '" + print_node(n) + "'");
        return table_.cell(view->rows().front(), table_.subject_column()).raw;
      }
      return format_value(v);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SlotExtractionFailure) throw;
      slot_failure("cannot evaluate '" + print_node(n) + "': " + e.what());
    }
  }

  std::string literal(const Node& n) const { return n.is_text() ? n.label : evaluated(n); }

  // The other operand of a comparison conjunct that has `target` as an operand.
  const Node* compared_with(const Node& target) const {
    for (const Node* c : conjuncts_) {
      if (!in_family(*c, Family::Compare) || c->children.size() != 2) continue;
      if (c->children[0] == target) return &c->children[1];
      if (c->children[1] == target) return &c->children[0];
    }
    return nullptr;
  }

  std::string value_of(const Node& n) const {
    if (const Node* other = compared_with(n)) return literal(*other);
    return evaluated(n);
  }

  // Scope clause for a view subtree: a predicate filter yields the clause.
  std::string scope(const Node& view) const {
    if (in_family(view, Family::FilterAll)) return scope(view.children[0]);
    if (!in_family(view, Family::Filter)) return "";
    return substitute(p_.get("template.scope"), {{"scope_column", view.children[1].label},
                                                 {"scope_criterion", criterion(view)},
                                                 {"scope_value", view.children[2].label}});
  }

  // Hop conjuncts over `selection`: (column, value) pairs.
  std::vector<std::pair<std::string, std::string>> hops_on(const Node& selection) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const Node* c : conjuncts_) {
      if (!in_family(*c, Family::Compare) || c->children.size() != 2) continue;
      for (int side = 0; side < 2; ++side) {
        const Node& h = c->children[side];
        if (is_hop(h) && h.children[0] == selection) {
          out.emplace_back(h.children[1].label, literal(c->children[1 - side]));
          break;
        }
      }
    }
    return out;
  }

  std::string others_phrase(const std::vector<std::pair<std::string, std::string>>& hops,
                            const std::vector<std::string>& exclude, const std::string& key) const {
    std::vector<std::string> parts;
    for (const auto& [col, val] : hops) {
      bool skip = std::any_of(exclude.begin(), exclude.end(),
                              [&](const std::string& e) { return same_column(col, e); });
      if (skip) continue;
      parts.push_back(substitute(p_.get("template.other"), {{"column", col}, {"value", val}}));
    }
    if (parts.empty()) return "";
    std::string sep = " " + p_.get("template.other_separator") + " ";
    return substitute(p_.get(key), {{"others", text::join(parts, sep)}});
  }

  std::string subject_of(const Node& selection,
                         const std::vector<std::pair<std::string, std::string>>& hops) const {
    for (const auto& [col, val] : hops) {
      if (same_column(col, subject_)) return val;
    }
    if (in_family(selection, Family::Filter) && same_column(selection.children[1].label, subject_)) {
      return selection.children[2].label;
    }
    return evaluated(selection);
  }

  void count(TemplateSlotFill& fill) {
    const Node* cnt = find_first(ast_.root, [](const Node& n) { return in_family(n, Family::Count); });
    if (!cnt) slot_failure("count program without a count node");
    const Node& counted = cnt->children[0];
    fill.slots["result"] = value_of(*cnt);
    if (in_family(counted, Family::Filter)) {
      fill.template_key = "template.count";
      fill.slots["scope"] = scope(counted.children[0]);
      fill.slots["column"] = counted.children[1].label;
      fill.slots["criterion"] = criterion(counted);
      fill.slots["value"] = counted.children[2].label;
    } else {
      fill.template_key = "template.count.all";
      fill.slots["scope"] = scope(counted);
    }
  }

  void row_focused(TemplateSlotFill& fill, bool ordinal) {
    const std::string prefix = ordinal ? "nth_" : "";
    const std::string type = ordinal ? "ordinal" : "superlative";
    auto named = [&](std::initializer_list<std::string_view> names) {
      return find_first(ast_.root, [&](const Node& n) {
        if (!n.is_function() || n.label.rfind(prefix, 0) != 0) return false;
        std::string_view base = std::string_view(n.label).substr(prefix.size());
        return std::find(names.begin(), names.end(), base) != names.end();
      });
    };
    const Node* selection = named({"argmax", "argmin"});
    const Node* extreme_value = named({"max", "min"});
    const Node* anchor = selection ? selection : extreme_value;
    if (!anchor) slot_failure(type + " program without an extreme");

    bool is_max = anchor->label.find("max") != std::string::npos;
    std::string extreme = p_.get(is_max ? "word.max" : "word.min");
    if (ordinal) {
      auto n = extract_first_number(anchor->children[2].label);
      std::string nth = n ? text::ordinal(static_cast<long>(*n)) : anchor->children[2].label;
      extreme = substitute(p_.get("template.nth"), {{"n", nth}, {"extreme", extreme}});
    }
    const std::string column = anchor->children[1].label;
    fill.slots["scope"] = scope(anchor->children[0]);
    fill.slots["extreme"] = extreme;
    fill.slots["column"] = column;

    if (!selection) {
      fill.template_key = "template." + type + ".value";
      fill.slots["value"] = value_of(*extreme_value);
      return;
    }
    fill.template_key = "template." + type + ".subject";
    auto hops = hops_on(*selection);
    fill.slots["subject"] = subject_of(*selection, hops);
    fill.slots["with"] = others_phrase(hops, {subject_, column}, "template.with");
    std::optional<std::string> mention;
    if (extreme_value) {
      if (const Node* other = compared_with(*extreme_value)) mention = literal(*other);
    }
    for (const auto& [col, val] : hops) {
      if (!mention && same_column(col, column)) mention = val;
    }
    fill.slots["mention"] =
        mention ? substitute(p_.get("template.mention"), {{"value", *mention}}) : "";
  }

  void comparative(TemplateSlotFill& fill) {
    const Node* diff = find_first(ast_.root, [](const Node& n) { return in_family(n, Family::Diff); });
    const Node* relation_node = diff;
    if (!relation_node) {
      for (const Node* c : conjuncts_) {
        if (in_family(*c, Family::Compare) && c->children.size() == 2 && is_hop(c->children[0]) &&
            is_hop(c->children[1]) && !(c->children[0].children[0] == c->children[1].children[0])) {
          relation_node = c;
          break;
        }
      }
    }
    if (!relation_node) slot_failure("comparative program without two compared rows");
    const Node* h1 = find_first(relation_node->children[0], is_hop);
    const Node* h2 = find_first(relation_node->children[1], is_hop);
    if (!h1 || !h2) slot_failure("comparative operands are not hops");
    const Node& sel1 = h1->children[0];
    const Node& sel2 = h2->children[0];
    const std::string column = h1->children[1].label;
    auto hops1 = hops_on(sel1);
    auto hops2 = hops_on(sel2);

    fill.slots["column"] = column;
    fill.slots["subject1"] = subject_of(sel1, hops1);
    fill.slots["subject2"] = subject_of(sel2, hops2);
    fill.slots["with1"] = others_phrase(hops1, {subject_, column}, "template.with");
    fill.slots["with2"] = others_phrase(hops2, {subject_, column}, "template.with_end");

    if (diff) {
      fill.template_key = "template.comparative.diff";
      fill.slots["diff"] = value_of(*diff);
      std::string rel = "eq";
      try {
        CellValue a = evaluate_subprogram(*h1, table_).as_cell();
        CellValue b = evaluate_subprogram(*h2, table_).as_cell();
        Comparison c = compare_cells(a, b);
        if (c == Comparison::Greater) rel = "greater";
        if (c == Comparison::Less) rel = "less";
      } catch (const Error&) {
        // An unevaluable pair keeps the neutral relation word.
      }
      fill.slots["relation"] = p_.get("relation." + rel);
    } else {
      fill.template_key = "template.comparative.relation";
      const auto* word = p_.find("relation." + relation_node->label);
      if (!word) slot_failure("no relation word for '" + relation_node->label + "'");
      fill.slots["relation"] = *word;
    }
  }

  void unique(TemplateSlotFill& fill) {
    const Node* only = nullptr;
    for (const Node* c : conjuncts_) {
      if (in_family(*c, Family::Only)) only = c;
    }
    if (!only) slot_failure("unique program without only");
    const Node& selection = only->children[0];
    if (!in_family(selection, Family::Filter)) slot_failure("only over a non-filter view");
    fill.slots["scope"] = scope(selection.children[0]);
    fill.slots["column"] = selection.children[1].label;
    fill.slots["criterion"] = criterion(selection);
    fill.slots["value"] = selection.children[2].label;
    auto hops = hops_on(selection);
    if (hops.empty()) {
      fill.template_key = "template.unique.count";
      return;
    }
    fill.template_key = "template.unique.subject";
    fill.slots["subject"] = subject_of(selection, hops);
    fill.slots["with2"] = others_phrase(hops, {subject_, selection.children[1].label},
                                        "template.with_end");
  }

  void aggregation(TemplateSlotFill& fill) {
    const Node* agg = nullptr;
    for (const Node* c : conjuncts_) {
      if (!in_family(*c, Family::Compare)) continue;
      for (const auto& child : c->children) {
        if (child.is_function() && (child.label == "avg" || child.label == "sum")) agg = &child;
      }
      if (agg) break;
    }
    if (!agg) slot_failure("aggregation program without avg or sum");
    fill.template_key = "template.aggregation";
    fill.slots["scope"] = scope(agg->children[0]);
    fill.slots["aggregate"] = p_.get("word." + agg->label);
    fill.slots["column"] = agg->children[1].label;
    fill.slots["result"] = value_of(*agg);
  }

  void majority(TemplateSlotFill& fill) {
    const Node* q = nullptr;
    for (const Node* c : conjuncts_) {
      if (in_family(*c, Family::AllQuantifier) || in_family(*c, Family::MostQuantifier)) {
        q = c;
        break;
      }
    }
    if (!q) slot_failure("majority program without a quantifier");
    fill.template_key = "template.majority";
    fill.slots["scope"] = scope(q->children[0]);
    fill.slots["quantifier"] =
        p_.get(in_family(*q, Family::AllQuantifier) ? "word.all" : "word.most");
    fill.slots["column"] = q->children[1].label;
    fill.slots["criterion"] = criterion(*q);
    fill.slots["value"] = q->children[2].label;
  }

  const Ast& ast_;
  const Table& table_;
  const PhraseTable& p_;
  std::vector<const Node*> conjuncts_;
  std::string subject_;
};

}  // namespace

TemplateSlotFill extract_slots(const Ast& ast, const Table& table, const PhraseTable& phrases) {
  return Extractor(ast, table, phrases).run();
}

std::string fill_template(const TemplateSlotFill& fill, const PhraseTable& phrases) {
  std::string out = substitute(phrases.get(fill.template_key), fill.slots);
  auto open = out.find('{');
  if (open != std::string::npos) {
    auto close = out.find('}', open);
    slot_failure("unfilled slot " + out.substr(open, close == std::string::npos ? 1 : close - open + 1) +
                 " in " + fill.template_key);
  }
  return text::to_lower(text::collapse_ws(out));
}

std::string realize_template(const Ast& ast, const Table& table, const PhraseTable& phrases) {
  return fill_template(extract_slots(ast, table, phrases), phrases);
}

}  // namespace l2t
