#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "l2t/ast.hpp"
#include "l2t/kv_config.hpp"
#include "l2t/logic_types.hpp"
#include "l2t/table.hpp"

namespace l2t {

// Wording for interpret() and realize_template(). The built-in defaults are
// the contents of resources/phrases.txt; a file may override any subset.
class PhraseTable {
 public:
  static const PhraseTable& defaults();
  static PhraseTable with_overrides(const KeyValues& overrides);
  static PhraseTable load(const std::filesystem::path& path);

  // Throws InvalidConfig for a missing key.
  const std::string& get(std::string_view key) const;
  const std::string* find(std::string_view key) const;
  const KeyValues& entries() const noexcept { return entries_; }

 private:
  KeyValues entries_;
};

// Text of the built-in phrase resource.
std::string_view default_phrase_resource() noexcept;

struct TemplateSlotFill {
  LogicType logic_type = LogicType::Count;
  std::string template_key;                  // e.g. "template.superlative.subject"
  std::map<std::string, std::string> slots;  // slot name -> filled text
};

// Errors: Unclassifiable, SlotExtractionFailure.
TemplateSlotFill extract_slots(const Ast& ast, const Table& table,
                               const PhraseTable& phrases = PhraseTable::defaults());

std::string fill_template(const TemplateSlotFill& fill,
                          const PhraseTable& phrases = PhraseTable::defaults());

std::string realize_template(const Ast& ast, const Table& table,
                             const PhraseTable& phrases = PhraseTable::defaults());

// One clause per function node, bottom-up, joined with " . ".
std::string interpret(const Ast& ast, const PhraseTable& phrases = PhraseTable::defaults());

// Substitutes "{name}" markers; unknown markers are left in place.
std::string substitute(std::string_view pattern, const std::map<std::string, std::string>& slots);

// "one" .. "ninety-nine", then decimal digits.
std::string number_word(std::size_t n);

}  // namespace l2t
