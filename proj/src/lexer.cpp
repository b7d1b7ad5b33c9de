#include <sstream>

#include "vtcheck/sexpr.hpp"
#include "vtcheck/term.hpp"

namespace vtcheck {

namespace {

constexpr std::size_t kMaxNesting = 4096;

bool is_symbol_char(char c) {
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))
    return true;
  switch (c) {
    case '~': case '!': case '@': case '$': case '%': case '^': case '&':
    case '*': case '_': case '-': case '+': case '=': case '<': case '>':
    case '.': case '?': case '/':
      return true;
    default:
      return false;
  }
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (skip_blank(), i_ < text_.size()) out.push_back(next());
    return out;
  }

 private:
  char peek() const { return text_[i_]; }

  void advance() {
    if (text_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
    pos_.offset = i_;
  }

  void skip_blank() {
    while (i_ < text_.size()) {
      char c = peek();
      if (c == ';') {
        while (i_ < text_.size() && peek() != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        advance();
      } else {
        break;
      }
    }
  }

  Token next() {
    Token tok;
    tok.pos = pos_;
    char c = peek();
    if (c == '(') {
      tok.kind = TokenKind::LParen;
      tok.text = "(";
      advance();
    } else if (c == ')') {
      tok.kind = TokenKind::RParen;
      tok.text = ")";
      advance();
    } else if (c == '|') {
      advance();
      std::size_t start = i_;
      while (i_ < text_.size() && peek() != '|') {
        if (peek() == '\\') throw LexError("backslash in quoted symbol", pos_);
        advance();
      }
      if (i_ >= text_.size()) throw LexError("unterminated quoted symbol", tok.pos);
      tok.kind = TokenKind::Symbol;
      tok.text = std::string(text_.substr(start, i_ - start));
      tok.quoted = true;
      advance();
    } else if (c == '"') {
      advance();
      std::string value;
      for (;;) {
        if (i_ >= text_.size()) throw LexError("unterminated string literal", tok.pos);
        if (peek() == '"') {
          advance();
          if (i_ < text_.size() && peek() == '"') {
            value.push_back('"');
            advance();
            continue;
          }
          break;
        }
        value.push_back(peek());
        advance();
      }
      tok.kind = TokenKind::String;
      tok.text = std::move(value);
    } else if (c == ':') {
      std::size_t start = i_;
      advance();
      while (i_ < text_.size() && is_symbol_char(peek())) advance();
      if (i_ - start == 1) throw LexError("empty keyword", tok.pos);
      tok.kind = TokenKind::Keyword;
      tok.text = std::string(text_.substr(start, i_ - start));
    } else if (is_digit(c)) {
      std::size_t start = i_;
      while (i_ < text_.size() && is_digit(peek())) advance();
      tok.kind = TokenKind::Numeral;
      if (i_ < text_.size() && peek() == '.') {
        advance();
        if (i_ >= text_.size() || !is_digit(peek()))
          throw LexError("malformed decimal", tok.pos);
        while (i_ < text_.size() && is_digit(peek())) advance();
        tok.kind = TokenKind::Decimal;
      }
      if (i_ < text_.size() && is_symbol_char(peek()))
        throw LexError("malformed numeral", tok.pos);
      tok.text = std::string(text_.substr(start, i_ - start));
    } else if (is_symbol_char(c)) {
      std::size_t start = i_;
      while (i_ < text_.size() && is_symbol_char(peek())) advance();
      tok.kind = TokenKind::Symbol;
      tok.text = std::string(text_.substr(start, i_ - start));
    } else {
      std::ostringstream msg;
      msg << "illegal character 0x" << std::hex
          << static_cast<unsigned>(static_cast<unsigned char>(c));
      throw LexError(msg.str(), tok.pos);
    }
    return tok;
  }

  std::string_view text_;
  std::size_t i_ = 0;
  Position pos_;
};

void print_sexpr(const SExpr& e, std::ostream& os) {
  if (!e.list) {
    switch (e.token.kind) {
      case TokenKind::Symbol: os << quote_symbol(e.token.text); break;
      case TokenKind::String: {
        os << '"';
        for (char c : e.token.text) os << (c == '"' ? "\"\"" : std::string(1, c));
        os << '"';
        break;
      }
      default: os << e.token.text;
    }
    return;
  }
  os << "(";
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    if (i) os << " ";
    print_sexpr(*e.items[i], os);
  }
  os << ")";
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

SExprPtr make_atom(Token token) {
  auto e = std::make_shared<SExpr>();
  e->token = std::move(token);
  return e;
}

SExprPtr make_list(Position pos, std::vector<SExprPtr> items) {
  auto e = std::make_shared<SExpr>();
  e->token.kind = TokenKind::LParen;
  e->token.text = "(";
  e->token.pos = pos;
  e->list = true;
  e->items = std::move(items);
  return e;
}

std::vector<SExprPtr> parse_sexprs(const std::vector<Token>& tokens) {
  std::vector<SExprPtr> top;
  struct Frame {
    Position pos;
    std::vector<SExprPtr> items;
  };
  std::vector<Frame> stack;
  for (const Token& tok : tokens) {
    if (tok.kind == TokenKind::LParen) {
      if (stack.size() >= kMaxNesting) throw ParseError("nesting too deep", tok.pos);
      stack.push_back({tok.pos, {}});
      continue;
    }
    SExprPtr node;
    if (tok.kind == TokenKind::RParen) {
      if (stack.empty()) throw ParseError("unbalanced ')'", tok.pos);
      Frame f = std::move(stack.back());
      stack.pop_back();
      node = make_list(f.pos, std::move(f.items));
    } else {
      node = make_atom(tok);
    }
    if (stack.empty())
      top.push_back(std::move(node));
    else
      stack.back().items.push_back(std::move(node));
  }
  if (!stack.empty()) throw ParseError("unbalanced '(': input ends inside a list", stack.back().pos);
  return top;
}

std::string sexpr_to_string(const SExpr& e) {
  std::ostringstream os;
  print_sexpr(e, os);
  return os.str();
}

}  // namespace vtcheck
