#ifndef VTCHECK_SEXPR_HPP
#define VTCHECK_SEXPR_HPP

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "vtcheck/errors.hpp"

namespace vtcheck {

enum class TokenKind { LParen, RParen, Symbol, Keyword, Numeral, Decimal, String };

struct Token {
  TokenKind kind = TokenKind::Symbol;
  std::string text;  // quoted symbols are stored without the bars
  Position pos;
  bool quoted = false;

  bool operator==(const Token& other) const {
    return kind == other.kind && text == other.text;
  }
};

/// SMT-LIB 2.6 lexical analysis.  Comments are skipped; positions are
/// 1-based line/column plus byte offset.
std::vector<Token> tokenize(std::string_view text);

struct SExpr;
using SExprPtr = std::shared_ptr<const SExpr>;

/// Untyped s-expression.  Nodes are immutable and may be shared, so a tree
/// produced by name or define expansion is a DAG.
struct SExpr {
  Token token;  // the atom, or the opening parenthesis of a list
  bool list = false;
  std::vector<SExprPtr> items;

  bool is_atom() const { return !list; }
  bool is_symbol() const { return !list && token.kind == TokenKind::Symbol; }
  bool is_symbol(std::string_view s) const { return is_symbol() && token.text == s; }
  bool is_keyword(std::string_view s) const {
    return !list && token.kind == TokenKind::Keyword && token.text == s;
  }
  /// List whose first item is the symbol `s`.
  bool is_app_of(std::string_view s) const {
    return list && !items.empty() && items[0]->is_symbol(s);
  }
  const Position& pos() const { return token.pos; }
};

SExprPtr make_atom(Token token);
SExprPtr make_list(Position pos, std::vector<SExprPtr> items);

/// Parses a token stream into top-level s-expressions.
std::vector<SExprPtr> parse_sexprs(const std::vector<Token>& tokens);

std::string sexpr_to_string(const SExpr& e);

}  // namespace vtcheck

#endif  // VTCHECK_SEXPR_HPP
