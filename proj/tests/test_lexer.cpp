#include <crusted/lexer.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

using namespace crusted;

namespace {

std::vector<Token> lex(const std::string &src, DiagnosticBag &bag) {
  return Lexer(src, bag).run();
}

std::vector<Token> lex_ok(const std::string &src) {
  DiagnosticBag bag("t.c");
  auto toks = lex(src, bag);
  REQUIRE(bag.take().empty());
  return toks;
}

} // namespace

TEST_CASE("identifiers keywords and annotations are distinguished") {
  auto t = lex_ok("int foo e_own while e_opt");
  REQUIRE(t.size() == 6); // incl. Eof
  CHECK(t[0].is_keyword("int"));
  CHECK(t[1].kind == Tok::Ident);
  CHECK(t[1].text == "foo");
  CHECK(t[2].kind == Tok::Annotation);
  CHECK(t[2].text == "e_own");
  CHECK(t[3].is_keyword("while"));
  CHECK(t[4].kind == Tok::Annotation);
  CHECK(t[5].kind == Tok::Eof);
}

TEST_CASE("spans are one-based and measure the lexeme") {
  auto t = lex_ok("ab + cde\nf");
  CHECK(t[0].span.line == 1);
  CHECK(t[0].span.col == 1);
  CHECK(t[0].span.len == 2);
  CHECK(t[1].span.col == 4);
  CHECK(t[1].span.len == 1);
  CHECK(t[2].span.col == 6);
  CHECK(t[2].span.len == 3);
  CHECK(t[3].span.line == 2);
  CHECK(t[3].span.col == 1);
}

TEST_CASE("numeric literals carry their value and spelling") {
  auto t = lex_ok("0 42 017 0x1F 10U 3.5 -7");
  CHECK(t[0].int_value == 0);
  CHECK(t[1].int_value == 42);
  CHECK(t[2].int_value == 15); // octal
  CHECK(t[3].int_value == 31);
  CHECK(t[4].int_value == 10);
  CHECK(t[4].text == "10U");
  CHECK(t[5].kind == Tok::FloatLit);
  CHECK(t[5].float_value == 3.5);
  // '-' lexes as punctuation; negation is the parser's business.
  CHECK(t[6].is_punct("-"));
  CHECK(t[7].int_value == 7);
}

TEST_CASE("string and char literals unescape into value") {
  auto t = lex_ok("\"a\\nb\" '\\0' 'x'");
  CHECK(t[0].kind == Tok::StringLit);
  CHECK(t[0].value == "a\nb");
  CHECK(t[0].text == "\"a\\nb\"");
  CHECK(t[1].kind == Tok::CharLit);
  CHECK(t[1].int_value == 0);
  CHECK(t[2].int_value == 'x');
}

TEST_CASE("multi-character operators lex as single tokens") {
  auto t = lex_ok("== != <= >= && || -> ++ --");
  const char *expect[] = {"==", "!=", "<=", ">=", "&&", "||", "->", "++", "--"};
  for (size_t i = 0; i < 9; ++i)
    CHECK(t[i].is_punct(expect[i]));
}

TEST_CASE("comments and whitespace separate tokens silently") {
  auto t = lex_ok("a // to end of line\nb /* span\nlines */ c");
  REQUIRE(t.size() == 4);
  CHECK(t[0].text == "a");
  CHECK(t[1].text == "b");
  CHECK(t[2].text == "c");
  CHECK(t[2].span.line == 3);
}

TEST_CASE("include directive lexes as one token with the header name") {
  auto t = lex_ok("#include <stdio.h>\nint x;");
  CHECK(t[0].kind == Tok::HeaderInclude);
  CHECK(t[0].value == "stdio.h");
  CHECK(t[0].span.line == 1);
  CHECK(t[0].span.col == 1);
  CHECK(t[1].is_keyword("int"));
}

TEST_CASE("a rejected directive yields one diagnostic and skips its line") {
  DiagnosticBag bag("t.c");
  auto t = lex("#define LIMIT 10\nint x;", bag);
  auto ds = bag.take();
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].code == Code::Lex);
  CHECK(ds[0].span.line == 1);
  CHECK(ds[0].span.col == 1);
  // The rest of the directive line is consumed; lexing resumes at `int`.
  REQUIRE(t.size() >= 2);
  CHECK(t[0].is_keyword("int"));
  CHECK(t[0].span.line == 2);
}

TEST_CASE("consecutive rejected directives each report once") {
  DiagnosticBag bag("t.c");
  auto t = lex("#define A 1\n#pragma once\nlong y;", bag);
  auto ds = bag.take();
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].span.line == 1);
  CHECK(ds[1].span.line == 2);
  CHECK(t[0].is_keyword("long"));
}

TEST_CASE("unterminated literals are reported at their start") {
  DiagnosticBag bag("t.c");
  lex("\"open", bag);
  auto ds = bag.take();
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].code == Code::Lex);
  CHECK(ds[0].span.col == 1);
}
