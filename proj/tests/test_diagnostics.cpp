// Pins the user-facing diagnostic surface: the code catalog, default
// severities, every message template, the two renderers, ordering, and the
// bag's duplicate suppression. Wording changes here are output format
// changes and should be deliberate.

#include <crusted/diagnostic.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <set>
#include <string>
#include <vector>

using namespace crusted;

TEST_CASE("the code catalog is complete and unambiguous") {
  const auto &codes = all_codes();
  CHECK(codes.size() == 29);
  std::set<std::string> names;
  for (Code c : codes) {
    std::string n = code_name(c);
    CHECK(n.rfind("CR-", 0) == 0);
    CHECK(names.insert(n).second);
  }
}

TEST_CASE("default severities") {
  const std::set<std::string> errors = {
      "CR-LEX",          "CR-PARSE",   "CR-LOWER",           "CR-ANN-CONFLICT",
      "CR-ANN-ARG",      "CR-ANN-UNKNOWN-TYPE", "CR-MODEL-CONFLICT",
  };
  const std::set<std::string> notes = {"CR-ANN-REDUNDANT", "CR-UNREACHABLE"};
  for (Code c : all_codes()) {
    std::string n = code_name(c);
    INFO(n);
    if (errors.count(n))
      CHECK(default_severity(c) == Severity::Error);
    else if (notes.count(n))
      CHECK(default_severity(c) == Severity::Note);
    else
      CHECK(default_severity(c) == Severity::Warning);
  }
  CHECK(severity_name(Severity::Note) == std::string("note"));
  CHECK(severity_name(Severity::Warning) == std::string("warning"));
  CHECK(severity_name(Severity::Error) == std::string("error"));
}

TEST_CASE("front-end messages pass their detail through verbatim") {
  CHECK(render_message(Code::Lex, {{"detail", "unterminated string literal"}}) ==
        "unterminated string literal");
  CHECK(render_message(Code::Parse, {{"detail", "expected expression"}}) ==
        "expected expression");
  CHECK(render_message(Code::Lower,
                       {{"detail", "left side of assignment is not a place"}}) ==
        "left side of assignment is not a place");
}

TEST_CASE("annotation and model messages") {
  CHECK(render_message(Code::IncludeUnknown, {{"header", "mystery.h"}}) ==
        "unknown header <mystery.h>; its declarations are treated as external");
  CHECK(render_message(
            Code::AnnConflict,
            {{"subject", "fd"},
             {"detail", "ownership is already declared along the type"}}) ==
        "conflicting annotations on 'fd': ownership is already declared along "
        "the type");
  CHECK(render_message(Code::AnnArg, {{"ann", "e_val"},
                                      {"detail", "unknown predicate 'e_gtr'"}}) ==
        "malformed argument of e_val: unknown predicate 'e_gtr'");
  CHECK(render_message(Code::AnnUnknownType, {{"type", "Widget"}}) ==
        "annotation refers to unknown type 'Widget'");
  CHECK(render_message(
            Code::AnnRedundant,
            {{"ann", "e_excl"},
             {"subject", "p"},
             {"detail",
              "a non-const referent already implies an exclusive reference"}}) ==
        "redundant annotation e_excl on 'p': a non-const referent already "
        "implies an exclusive reference");
  CHECK(render_message(Code::ModelConflict,
                       {{"function", "malloc"},
                        {"detail", "the return contract differs"}}) ==
        "declaration of 'malloc' conflicts with the built-in library model: "
        "the return contract differs");
}

TEST_CASE("optional-sentinel messages") {
  CHECK(render_message(Code::OptDeref,
                       {{"place", "p"}, {"sentinel", "NULL"}}) ==
        "'p' may be NULL here and is dereferenced without a preceding check");
  CHECK(render_message(
            Code::OptDeref,
            {{"place", "fd"}, {"sentinel", "-1"}, {"role", "index"}}) ==
        "'fd' may be -1 here and is used as an index without a preceding "
        "check");
  CHECK(render_message(Code::OptArg, {{"place", "fd"},
                                      {"sentinel", "-1"},
                                      {"param", "1"},
                                      {"callee", "read"}}) ==
        "'fd' may be -1 here; parameter 1 of 'read' is not optional");
  CHECK(render_message(Code::OptRet,
                       {{"sentinel", "NULL"}, {"function", "mkstr"}}) ==
        "returned value may be NULL but the return type of 'mkstr' is not "
        "optional");
}

TEST_CASE("ownership and lifetime messages") {
  CHECK(render_message(Code::UninitUse, {{"place", "*p"}}) ==
        "'*p' may be used uninitialized here");
  CHECK(render_message(Code::UseAfterMove, {{"place", "p"}}) ==
        "'p' is used here after its ownership was moved");
  CHECK(render_message(Code::UseAfterRelease, {{"place", "p"}}) ==
        "'p' refers to a resource that was already released");
  CHECK(render_message(Code::OwnLeak, {{"resource-class", "heap-block"},
                                       {"site-line", "9"},
                                       {"qualifier", "may be"}}) ==
        "the heap-block acquired at line 9 may be leaked here");
  CHECK(render_message(Code::OwnLeak, {{"resource-class", "resource"},
                                       {"site-line", "13"},
                                       {"qualifier", "is"}}) ==
        "the resource acquired at line 13 is leaked here");
  CHECK(render_message(Code::OwnUnclear,
                       {{"callee", "use"}, {"param", "1"}, {"place", "p"}}) ==
        "'use' has no ownership annotation for parameter 1; ownership of 'p' "
        "is unclear and the call is treated as a borrow");
  CHECK(render_message(Code::ReleaseInvalid,
                       {{"place", "view"},
                        {"detail", "it does not own a resource"}}) ==
        "'view' cannot be released here: it does not own a resource");
  CHECK(render_message(Code::FiniMissing, {{"place", "ch"}}) ==
        "'ch' requires finalization but may reach this point without it");
}

TEST_CASE("nominal typing and range messages") {
  CHECK(render_message(Code::NominalOp, {{"role", "binary"},
                                         {"op", "/"},
                                         {"lhs", "celsius_t"},
                                         {"rhs", "celsius_t"}}) ==
        "operator '/' not permitted between 'celsius_t' and 'celsius_t'");
  CHECK(render_message(Code::NominalOp,
                       {{"operation", "negation"}, {"type", "fd_t"}}) ==
        "negation not permitted on nominal type 'fd_t'");
  CHECK(render_message(Code::NominalMix,
                       {{"from", "kelvin_t"}, {"to", "celsius_t"}}) ==
        "value of type 'kelvin_t' cannot be used as 'celsius_t' without a "
        "declared conversion");
  CHECK(render_message(Code::ValRange, {{"actual", "-1"},
                                        {"expected", "[0, +inf]"},
                                        {"subject", "n"}}) ==
        "value -1 is outside the declared range [0, +inf] of 'n'");
}

TEST_CASE("contract messages") {
  CHECK(render_message(Code::PreViolation, {{"key", "door"},
                                            {"expected", "closed"},
                                            {"callee", "start"},
                                            {"actual", "unset"}}) ==
        "precondition door=closed of 'start' may not hold here (door is "
        "unset)");
  CHECK(render_message(Code::PostViolation, {{"function", "stop"},
                                             {"key", "blade"},
                                             {"actual", "on"},
                                             {"expected", "off"}}) ==
        "postcondition of 'stop' may be violated at this return: blade is on, "
        "expected off");
}

TEST_CASE("unsafety messages") {
  CHECK(render_message(Code::UnsafeAccess,
                       {{"place", "fp->flags"}, {"kind", "FILE"}}) ==
        "access to 'fp->flags' of unsafe kind \"FILE\" outside an "
        "e_checked/e_unchecked block");
  CHECK(render_message(Code::UnsafePropagate,
                       {{"kind", "FILE"}, {"function", "peek"}}) ==
        "e_unchecked(\"FILE\") requires the enclosing function 'peek' to be "
        "annotated e_unsafe(\"FILE\")");
}

TEST_CASE("reference discipline and const messages") {
  CHECK(render_message(Code::ExclViolation,
                       {{"place", "x"}, {"borrower", "ex"}}) ==
        "'x' is accessed here while exclusively borrowed by 'ex'");
  CHECK(render_message(Code::ExclViolation, {{"mode", "borrowed-shared"},
                                             {"place", "y"},
                                             {"borrower", "sh"}}) ==
        "write to 'y' while shared reference 'sh' is live");
  CHECK(render_message(Code::ExclViolation,
                       {{"mode", "write-shared"}, {"place", "ro"}}) ==
        "write through shared reference 'ro'");
  CHECK(render_message(Code::ConstCast, {{"subject", "p"}}) ==
        "cast removes const qualification from 'p'");
  CHECK(render_message(Code::Unreachable, {}) == "statement is unreachable");
}

TEST_CASE("text rendering is one canonical line per diagnostic") {
  Diagnostic d = make_diagnostic("t.c", Span{3, 7, 1}, Code::UninitUse,
                                 {{"place", "x"}});
  CHECK(render_text({d}) ==
        "t.c:3:7: warning: CR-UNINIT-USE: 'x' may be used uninitialized "
        "here\n");

  RenderOptions color;
  color.color = true;
  CHECK(render_text({d}, color) ==
        "t.c:3:7: \033[35mwarning\033[0m: CR-UNINIT-USE: 'x' may be used "
        "uninitialized here\n");

  RenderOptions strict;
  strict.warn_as_error = true;
  CHECK(render_text({d}, strict) ==
        "t.c:3:7: error: CR-UNINIT-USE: 'x' may be used uninitialized "
        "here\n");
}

TEST_CASE("warnings promote under warn-as-error but notes do not") {
  RenderOptions strict;
  strict.warn_as_error = true;
  Diagnostic w = make_diagnostic("t.c", Span{1, 1, 1}, Code::UninitUse,
                                 {{"place", "x"}});
  Diagnostic n = make_diagnostic("t.c", Span{1, 1, 1}, Code::Unreachable, {});
  Diagnostic e = make_diagnostic("t.c", Span{1, 1, 1}, Code::Parse,
                                 {{"detail", "expected expression"}});
  CHECK(effective_severity(w, strict) == Severity::Error);
  CHECK(effective_severity(n, strict) == Severity::Note);
  CHECK(effective_severity(e, strict) == Severity::Error);
  CHECK(effective_severity(w, {}) == Severity::Warning);
  CHECK(severity_at_least(Severity::Error, Severity::Warning));
  CHECK(severity_at_least(Severity::Warning, Severity::Warning));
  CHECK_FALSE(severity_at_least(Severity::Note, Severity::Warning));
}

TEST_CASE("the JSON rendering is a stable single line") {
  Diagnostic d = make_diagnostic("t.c", Span{3, 7, 1}, Code::UninitUse,
                                 {{"place", "x"}});
  std::string out = render_json({d});
  CHECK(out ==
        "{\"version\":1,\"diagnostics\":[{\"file\":\"t.c\",\"line\":3,"
        "\"col\":7,\"length\":1,\"code\":\"CR-UNINIT-USE\",\"severity\":"
        "\"warning\",\"message\":\"'x' may be used uninitialized here\","
        "\"payload\":{\"place\":\"x\"}}]}\n");

  // And it parses back to the same facts.
  auto j = nlohmann::json::parse(out);
  CHECK(j.at("version") == 1);
  REQUIRE(j.at("diagnostics").size() == 1);
  const auto &e = j.at("diagnostics").at(0);
  CHECK(e.at("file") == "t.c");
  CHECK(e.at("line") == 3);
  CHECK(e.at("col") == 7);
  CHECK(e.at("length") == 1);
  CHECK(e.at("code") == "CR-UNINIT-USE");
  CHECK(e.at("severity") == "warning");
  CHECK(e.at("payload").at("place") == "x");

  // An empty run still reports its shape.
  CHECK(render_json({}) == "{\"version\":1,\"diagnostics\":[]}\n");

  // warn-as-error shows up in the serialized severity.
  RenderOptions strict;
  strict.warn_as_error = true;
  auto js = nlohmann::json::parse(render_json({d}, strict));
  CHECK(js.at("diagnostics").at(0).at("severity") == "error");
}

TEST_CASE("diagnostics sort by file, position, then code") {
  auto mk = [](const char *file, int line, int col, Code c, Payload p) {
    return make_diagnostic(file, Span{line, col, 1}, c, std::move(p));
  };
  std::vector<Diagnostic> ds = {
      mk("b.c", 1, 1, Code::UninitUse, {{"place", "x"}}),
      mk("a.c", 9, 2, Code::UninitUse, {{"place", "x"}}),
      mk("a.c", 2, 5, Code::UninitUse, {{"place", "z"}}),
      mk("a.c", 2, 5, Code::UninitUse, {{"place", "a"}}),
      mk("a.c", 2, 5, Code::OptDeref, {{"place", "p"}, {"sentinel", "NULL"}}),
      mk("a.c", 2, 1, Code::ValRange,
         {{"actual", "-1"}, {"expected", "[0, 5]"}, {"subject", "n"}}),
  };
  sort_diagnostics(ds);
  CHECK(ds[0].file == "a.c");
  CHECK(ds[0].span.line == 2);
  CHECK(ds[0].span.col == 1);
  CHECK(ds[1].code == Code::OptDeref); // CR-OPT-DEREF < CR-UNINIT-USE
  CHECK(ds[2].code == Code::UninitUse);
  CHECK(payload_get(ds[2].payload, "place") == "a"); // place breaks the tie
  CHECK(payload_get(ds[3].payload, "place") == "z");
  CHECK(ds[4].span.line == 9);
  CHECK(ds[5].file == "b.c");

  // Sorting is idempotent and deterministic.
  std::vector<Diagnostic> again = ds;
  sort_diagnostics(again);
  CHECK(render_text(again) == render_text(ds));
}

TEST_CASE("the bag drops exact repeats only") {
  DiagnosticBag bag("t.c");
  CHECK(bag.emit(Span{4, 3, 1}, Code::UninitUse, {{"place", "x"}}));
  // The same defect rediscovered on a later fixpoint visit stays silent.
  CHECK_FALSE(bag.emit(Span{4, 3, 1}, Code::UninitUse, {{"place", "x"}}));
  // A different place at the same span is a different defect.
  CHECK(bag.emit(Span{4, 3, 1}, Code::UninitUse, {{"place", "y"}}));
  // So is a different code.
  CHECK(bag.emit(Span{4, 3, 1}, Code::UseAfterMove, {{"place", "x"}}));
  // Leaks of distinct acquisition sites at one return both matter.
  CHECK(bag.emit(Span{9, 3, 6}, Code::OwnLeak,
                 {{"resource-class", "heap-block"},
                  {"site-line", "2"},
                  {"qualifier", "is"}}));
  CHECK(bag.emit(Span{9, 3, 6}, Code::OwnLeak,
                 {{"resource-class", "heap-block"},
                  {"site-line", "3"},
                  {"qualifier", "is"}}));
  // Contract keys keep pre/post reports at one call site apart.
  CHECK(bag.emit(Span{11, 12, 3}, Code::PreViolation,
                 {{"key", "door"},
                  {"expected", "closed"},
                  {"callee", "start"},
                  {"actual", "unset"}}));
  CHECK(bag.emit(Span{11, 12, 3}, Code::PreViolation,
                 {{"key", "blade"},
                  {"expected", "off"},
                  {"callee", "start"},
                  {"actual", "on"}}));
  CHECK(bag.diagnostics().size() == 7);
  CHECK(bag.file() == "t.c");
}
