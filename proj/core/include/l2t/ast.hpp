#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace l2t {

enum class NodeKind { Function, Text };

// One node of a logical-form program. Function nodes carry the function
// name in `label` and their arguments in `children`; text nodes carry the
// literal (column name, value or `all_rows`) and have no children.
struct Node {
  NodeKind kind = NodeKind::Text;
  std::string label;
  std::vector<Node> children;

  static Node function(std::string name, std::vector<Node> args) {
    return Node{NodeKind::Function, std::move(name), std::move(args)};
  }
  static Node text(std::string literal) { return Node{NodeKind::Text, std::move(literal), {}}; }

  bool is_function() const noexcept { return kind == NodeKind::Function; }
  bool is_text() const noexcept { return kind == NodeKind::Text; }

  bool operator==(const Node&) const = default;
};

// A program: the root is always a function node.
struct Ast {
  Node root;

  bool operator==(const Ast&) const = default;
};

struct NodeStats {
  std::size_t total_nodes = 0;
  std::size_t function_nodes = 0;
  std::size_t text_nodes = 0;
  std::size_t linearized_length = 0;
};

// Grammar:
//   program := expr [ "=" "true" ]
//   expr    := NAME "{" expr ( ";" expr )* "}"  |  ATOM+
// '{', '}' and ';' always delimit; an ATOM run up to the next delimiter is
// one text node with interior whitespace collapsed. Throws SyntaxError.
Ast parse_logic_str(std::string_view text);

// Canonical form: `name { a ; b }`, single spaces between tokens.
std::string print_logic_str(const Ast& ast);
std::string print_node(const Node& node);

std::vector<std::string> linearize(const Ast& ast);
void linearize_into(const Node& node, std::vector<std::string>& out);

NodeStats node_stats(const Ast& ast);

}  // namespace l2t
