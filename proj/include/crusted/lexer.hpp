// Hand-written lexer for the mini-C subset. Comments and whitespace vanish;
// #include directives become single tokens; identifiers found in the
// annotation registry come out as annotation-name tokens.

#ifndef CRUSTED_LEXER_HPP
#define CRUSTED_LEXER_HPP

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include <crusted/diagnostic.hpp>
#include <crusted/registry.hpp>
#include <crusted/span.hpp>

namespace crusted {

enum class Tok {
  Ident,
  Annotation,
  Keyword,
  IntLit,
  FloatLit,
  CharLit,
  StringLit,
  Punct,
  HeaderInclude,
  Eof,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;   // the lexeme as written
  std::string value;  // string/char contents, or header name for includes
  int64_t int_value = 0;
  double float_value = 0.0;
  Span span;

  bool is(Tok k, std::string_view t) const { return kind == k && text == t; }
  bool is_punct(std::string_view t) const { return is(Tok::Punct, t); }
  bool is_keyword(std::string_view t) const { return is(Tok::Keyword, t); }
};

inline bool is_keyword_name(std::string_view s) {
  static const char *names[] = {
      "void", "char", "int",    "unsigned", "long",   "double", "_Bool",
      "bool", "size_t", "ssize_t", "struct", "enum",  "typedef", "extern",
      "const", "restrict", "if", "else",    "while",  "return",
  };
  for (const char *n : names)
    if (s == n)
      return true;
  return false;
}

class Lexer {
public:
  Lexer(std::string_view src, DiagnosticBag &diags)
      : src_(src), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      Token t = next();
      bool at_end = t.kind == Tok::Eof;
      out.push_back(std::move(t));
      if (at_end)
        break;
    }
    return out;
  }

private:
  std::string_view src_;
  DiagnosticBag &diags_;
  size_t pos_ = 0;
  uint32_t line_ = 1;
  uint32_t col_ = 1;

  bool eof() const { return pos_ >= src_.size(); }
  char peek(size_t off = 0) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  Span start_span() const { return Span{line_, col_, 0}; }
  void close_span(Token &t, size_t start_pos) {
    t.span.len = static_cast<uint32_t>(pos_ - start_pos);
  }

  void error_here(Span sp, const std::string &detail) {
    diags_.emit(sp, Code::Lex, {{"detail", detail}});
  }

  void skip_trivia() {
    for (;;) {
      if (eof())
        return;
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!eof() && peek() != '\n')
          advance();
      } else if (c == '/' && peek(1) == '*') {
        Span sp = start_span();
        advance();
        advance();
        bool closed = false;
        while (!eof()) {
          if (peek() == '*' && peek(1) == '/') {
            advance();
            advance();
            closed = true;
            break;
          }
          advance();
        }
        if (!closed) {
          sp.len = 2;
          error_here(sp, "unterminated block comment");
          return;
        }
      } else {
        return;
      }
    }
  }

  Token next() {
    Token t;
    t.span = start_span();
    if (eof()) {
      t.kind = Tok::Eof;
      t.span.len = 0;
      return t;
    }
    size_t start = pos_;
    char c = peek();
    while (c == '#') {
      // A rejected directive consumes its whole line; resume with whatever
      // follows so one stray directive produces one diagnostic.
      Token d = lex_directive();
      if (d.kind == Tok::HeaderInclude)
        return d;
      skip_trivia();
      if (eof()) {
        t.kind = Tok::Eof;
        t.span = start_span();
        t.span.len = 0;
        return t;
      }
      t.span = start_span();
      start = pos_;
      c = peek();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return lex_word(start);
    if (std::isdigit(static_cast<unsigned char>(c)))
      return lex_number(start);
    if (c == '"')
      return lex_string(start);
    if (c == '\'')
      return lex_char(start);
    return lex_punct(start);
  }

  Token lex_word(size_t start) {
    Token t;
    t.span = start_span();
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                      peek() == '_'))
      advance();
    t.text = std::string(src_.substr(start, pos_ - start));
    close_span(t, start);
    if (is_keyword_name(t.text))
      t.kind = Tok::Keyword;
    else if (find_annotation(t.text) || is_predicate_name(t.text))
      t.kind = Tok::Annotation;
    else
      t.kind = Tok::Ident;
    return t;
  }

  Token lex_number(size_t start) {
    Token t;
    t.span = start_span();
    bool is_hex = false;
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      is_hex = true;
      advance();
      advance();
      while (!eof() && std::isxdigit(static_cast<unsigned char>(peek())))
        advance();
    } else {
      while (!eof() && std::isdigit(static_cast<unsigned char>(peek())))
        advance();
    }
    bool is_float = false;
    if (!is_hex && peek() == '.' &&
        std::isdigit(static_cast<unsigned char>(peek(1)))) {
      is_float = true;
      advance();
      while (!eof() && std::isdigit(static_cast<unsigned char>(peek())))
        advance();
    }
    // Integer suffixes as written in the figures: U, L, UL and friends.
    size_t digits_end = pos_;
    while (!eof() && (peek() == 'U' || peek() == 'u' || peek() == 'L' ||
                      peek() == 'l'))
      advance();
    t.text = std::string(src_.substr(start, pos_ - start));
    close_span(t, start);
    std::string digits(src_.substr(start, digits_end - start));
    if (is_float) {
      t.kind = Tok::FloatLit;
      t.float_value = std::stod(digits);
    } else {
      t.kind = Tok::IntLit;
      // Base 0 follows the C prefixes: 0x.. hex, 0.. octal, else decimal.
      size_t used = 0;
      t.int_value = std::stoll(digits, &used, 0);
      if (used != digits.size())
        error_here(t.span, "malformed integer literal '" + digits + "'");
    }
    return t;
  }

  bool lex_escape(char &out) {
    // Caller consumed the backslash.
    char e = advance();
    switch (e) {
    case '0': out = '\0'; return true;
    case 'n': out = '\n'; return true;
    case 't': out = '\t'; return true;
    case 'r': out = '\r'; return true;
    case '\\': out = '\\'; return true;
    case '\'': out = '\''; return true;
    case '"': out = '"'; return true;
    default: out = e; return false;
    }
  }

  Token lex_string(size_t start) {
    Token t;
    t.kind = Tok::StringLit;
    t.span = start_span();
    advance(); // opening quote
    for (;;) {
      if (eof() || peek() == '\n') {
        close_span(t, start);
        t.text = std::string(src_.substr(start, pos_ - start));
        error_here(t.span, "unterminated string literal");
        return t;
      }
      char c = advance();
      if (c == '"')
        break;
      if (c == '\\') {
        char e;
        if (!lex_escape(e)) {
          Span sp = t.span;
          sp.len = 2;
          error_here(sp, "unknown escape sequence in string literal");
        }
        t.value += e;
      } else {
        t.value += c;
      }
    }
    t.text = std::string(src_.substr(start, pos_ - start));
    close_span(t, start);
    return t;
  }

  Token lex_char(size_t start) {
    Token t;
    t.kind = Tok::CharLit;
    t.span = start_span();
    advance(); // opening quote
    char v = '\0';
    if (eof() || peek() == '\n') {
      error_here(t.span, "unterminated character literal");
    } else {
      char c = advance();
      if (c == '\\') {
        if (!lex_escape(v)) {
          Span sp = t.span;
          sp.len = 2;
          error_here(sp, "unknown escape sequence in character literal");
        }
      } else {
        v = c;
      }
      if (peek() == '\'')
        advance();
      else
        error_here(t.span, "unterminated character literal");
    }
    t.int_value = v;
    t.text = std::string(src_.substr(start, pos_ - start));
    close_span(t, start);
    return t;
  }

  // `#include <name>` is one token; any other directive is outside the subset.
  Token lex_directive() {
    Token t;
    t.span = start_span();
    size_t start = pos_;
    advance(); // '#'
    while (peek() == ' ' || peek() == '\t')
      advance();
    size_t word_start = pos_;
    while (!eof() && std::isalpha(static_cast<unsigned char>(peek())))
      advance();
    std::string word(src_.substr(word_start, pos_ - word_start));
    if (word != "include") {
      close_span(t, start);
      t.text = std::string(src_.substr(start, pos_ - start));
      t.kind = Tok::Punct;
      error_here(t.span, "unsupported preprocessor directive '#" + word + "'");
      while (!eof() && peek() != '\n')
        advance();
      return t;
    }
    while (peek() == ' ' || peek() == '\t')
      advance();
    if (peek() != '<') {
      close_span(t, start);
      t.text = std::string(src_.substr(start, pos_ - start));
      t.kind = Tok::Punct;
      error_here(t.span, "expected <header> after #include");
      // Consume the rest of the line so recovery restarts cleanly.
      while (!eof() && peek() != '\n')
        advance();
      return t;
    }
    advance(); // '<'
    size_t name_start = pos_;
    while (!eof() && peek() != '>' && peek() != '\n')
      advance();
    t.value = std::string(src_.substr(name_start, pos_ - name_start));
    if (peek() == '>')
      advance();
    else
      error_here(t.span, "unterminated #include directive");
    t.kind = Tok::HeaderInclude;
    t.text = std::string(src_.substr(start, pos_ - start));
    close_span(t, start);
    return t;
  }

  Token lex_punct(size_t start) {
    Token t;
    t.kind = Tok::Punct;
    t.span = start_span();
    static const char *two_char[] = {"->", "++", "--", "<=", ">=", "==",
                                     "!=", "||", "&&"};
    char c0 = peek(), c1 = peek(1);
    std::string two{c0, c1};
    for (const char *p : two_char) {
      if (two == p) {
        advance();
        advance();
        t.text = two;
        close_span(t, start);
        return t;
      }
    }
    static const std::string singles = "()[]{};,.*&+-/%!<>=?|";
    char c = advance();
    t.text = std::string(1, c);
    close_span(t, start);
    if (singles.find(c) == std::string::npos)
      error_here(t.span, std::string("unexpected character '") + c + "'");
    return t;
  }
};

inline std::vector<Token> tokenize(std::string_view src,
                                   DiagnosticBag &diags) {
  return Lexer(src, diags).run();
}

} // namespace crusted

#endif
