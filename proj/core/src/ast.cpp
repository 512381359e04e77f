#include "l2t/ast.hpp"

#include "l2t/error.hpp"
#include "l2t/text_util.hpp"

namespace l2t {

namespace {

enum class TokKind { Open, Close, Sep, Word, End };

struct Token {
  TokKind kind;
  std::string_view text;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
    if (pos_ >= src_.size()) return {TokKind::End, {}, pos_};
    std::size_t start = pos_;
    switch (src_[pos_]) {
      case '{': ++pos_; return {TokKind::Open, src_.substr(start, 1), start};
      case '}': ++pos_; return {TokKind::Close, src_.substr(start, 1), start};
      case ';': ++pos_; return {TokKind::Sep, src_.substr(start, 1), start};
      default: break;
    }
    while (pos_ < src_.size() && !is_space(src_[pos_]) && src_[pos_] != '{' &&
           src_[pos_] != '}' && src_[pos_] != ';') {
      ++pos_;
    }
    return {TokKind::Word, src_.substr(start, pos_ - start), start};
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { advance(); }

  Ast parse_program() {
    if (cur_.kind == TokKind::End) throw SyntaxError(cur_.offset, "empty logical form");
    std::size_t root_offset = cur_.offset;
    Node root = parse_expr();
    if (!root.is_function()) {
      throw SyntaxError(root_offset, "program root must be a function");
    }
    // Optional trailing "= true" marker.
    if (cur_.kind == TokKind::Word && cur_.text == "=") {
      advance();
      if (cur_.kind != TokKind::Word || cur_.text != "true") {
        throw SyntaxError(cur_.offset, "expected 'true' after '='");
      }
      advance();
    } else if (cur_.kind == TokKind::Word && cur_.text == "=true") {
      advance();
    }
    if (cur_.kind != TokKind::End) {
      throw SyntaxError(cur_.offset, "unexpected trailing input");
    }
    return Ast{std::move(root)};
  }

 private:
  void advance() { cur_ = lex_.next(); }

  Node parse_expr() {
    if (cur_.kind != TokKind::Word) {
      throw SyntaxError(cur_.offset, cur_.kind == TokKind::End ? "unexpected end of input"
                                                               : "empty argument");
    }
    std::vector<std::string_view> words;
    std::size_t first_offset = cur_.offset;
    while (cur_.kind == TokKind::Word) {
      words.push_back(cur_.text);
      advance();
    }
    if (cur_.kind != TokKind::Open) {
      std::string literal;
      for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) literal.push_back(' ');
        literal.append(words[i]);
      }
      return Node::text(std::move(literal));
    }
    if (words.size() != 1) {
      throw SyntaxError(first_offset, "function name must be a single token");
    }
    std::size_t open_offset = cur_.offset;
    advance();
    std::vector<Node> args;
    while (true) {
      if (cur_.kind == TokKind::Close && args.empty()) {
        throw SyntaxError(cur_.offset, "function '" + std::string(words[0]) + "' has no arguments");
      }
      if (cur_.kind == TokKind::End) throw SyntaxError(open_offset, "unbalanced '{'");
      args.push_back(parse_expr());
      if (cur_.kind == TokKind::Sep) {
        advance();
        if (cur_.kind == TokKind::Close || cur_.kind == TokKind::Sep) {
          throw SyntaxError(cur_.offset, "dangling ';'");
        }
        continue;
      }
      if (cur_.kind == TokKind::Close) {
        advance();
        break;
      }
      if (cur_.kind == TokKind::End) throw SyntaxError(open_offset, "unbalanced '{'");
      throw SyntaxError(cur_.offset, "expected ';' or '}'");
    }
    return Node::function(std::string(words[0]), std::move(args));
  }

  Lexer lex_;
  Token cur_{TokKind::End, {}, 0};
};

void print_into(const Node& node, std::string& out) {
  if (node.is_text()) {
    out.append(node.label);
    return;
  }
  out.append(node.label);
  out.append(" { ");
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (i) out.append(" ; ");
    print_into(node.children[i], out);
  }
  out.append(" }");
}

void count_nodes(const Node& node, NodeStats& stats) {
  ++stats.total_nodes;
  if (node.is_text()) {
    ++stats.text_nodes;
    return;
  }
  ++stats.function_nodes;
  for (const auto& child : node.children) count_nodes(child, stats);
}

}  // namespace

Ast parse_logic_str(std::string_view text) { return Parser(text).parse_program(); }

std::string print_node(const Node& node) {
  std::string out;
  print_into(node, out);
  return out;
}

std::string print_logic_str(const Ast& ast) { return print_node(ast.root); }

void linearize_into(const Node& node, std::vector<std::string>& out) {
  if (node.is_text()) {
    for (auto& tok : text::split_ws(node.label)) out.push_back(std::move(tok));
    return;
  }
  out.push_back(node.label);
  out.emplace_back("{");
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (i) out.emplace_back(";");
    linearize_into(node.children[i], out);
  }
  out.emplace_back("}");
}

std::vector<std::string> linearize(const Ast& ast) {
  std::vector<std::string> out;
  linearize_into(ast.root, out);
  return out;
}

NodeStats node_stats(const Ast& ast) {
  NodeStats stats;
  count_nodes(ast.root, stats);
  stats.linearized_length = linearize(ast).size();
  return stats;
}

}  // namespace l2t
