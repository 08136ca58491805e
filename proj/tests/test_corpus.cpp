// End-to-end expectations for every file in corpus/. Each entry pins the
// exact rendered diagnostics (position, severity, code, wording); the
// clean files pin silence. A corpus file without an entry here fails the
// coverage check at the bottom.

#include <crusted/driver.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

using namespace crusted;

namespace {

const std::map<std::string, std::vector<std::string>> &expected_lines() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"ann_arg.c",
       {"ann_arg.c:3:20: error: CR-ANN-ARG: malformed argument of e_val: "
        "expected e_geq, e_range or e_eq"}},
      {"ann_conflict.c",
       {"ann_conflict.c:5:20: error: CR-ANN-CONFLICT: conflicting "
        "annotations on 'fd': ownership is already declared along the type"}},
      {"ann_redundant.c",
       {"ann_redundant.c:3:17: note: CR-ANN-REDUNDANT: redundant annotation "
        "e_excl on 'dst': a non-const referent already implies an exclusive "
        "reference"}},
      {"ann_unknown_type.c",
       {"ann_unknown_type.c:3:13: error: CR-ANN-UNKNOWN-TYPE: annotation "
        "refers to unknown type 'Widget'"}},
      {"bad_lex.c",
       {"bad_lex.c:1:1: error: CR-LEX: unsupported preprocessor directive "
        "'#define'"}},
      {"bad_lower.c",
       {"bad_lower.c:5:3: error: CR-LOWER: left side of assignment is not a "
        "place"}},
      {"bad_parse.c",
       {"bad_parse.c:4:13: error: CR-PARSE: expected expression"}},
      {"const_cast.c",
       {"const_cast.c:4:10: warning: CR-CONST-CAST: cast removes const "
        "qualification from 'text'"}},
      {"excl_violation.c",
       {"excl_violation.c:6:3: warning: CR-EXCL-VIOLATION: 'x' is accessed "
        "here while exclusively borrowed by 'ex'",
        "excl_violation.c:13:3: warning: CR-EXCL-VIOLATION: write to 'y' "
        "while shared reference 'sh' is live",
        "excl_violation.c:18:3: warning: CR-EXCL-VIOLATION: write through "
        "shared reference 'ro'"}},
      {"fig1.c",
       {"fig1.c:10:3: warning: CR-NOMINAL-OP: increment not permitted on "
        "nominal type 'fd_t'",
        "fig1.c:11:24: warning: CR-OPT-ARG: 'fd' may be -1 here; parameter "
        "fd of 'read' is not optional",
        "fig1.c:11:28: warning: CR-OPT-ARG: 'buf' may be NULL here; "
        "parameter buf of 'read' is not optional",
        "fig1.c:12:3: warning: CR-OPT-DEREF: 'buf' may be NULL here and is "
        "dereferenced without a preceding check",
        "fig1.c:12:3: warning: CR-OPT-DEREF: 'bytes' may be -1 here and is "
        "used as an index without a preceding check",
        "fig1.c:13:3: warning: CR-OWN-UNCLEAR: 'process' has no ownership "
        "annotation for parameter string; ownership of 'buf' is unclear and "
        "the call is treated as a borrow",
        "fig1.c:14:3: warning: CR-OWN-LEAK: the heap-block acquired at line "
        "9 may be leaked here",
        "fig1.c:14:3: warning: CR-OWN-LEAK: the open-file-description "
        "acquired at line 8 may be leaked here"}},
      {"fig3.c", {}},
      {"fig4.c", {}},
      {"fig5.c", {}},
      {"fig6.c",
       {"fig6.c:14:20: warning: CR-NOMINAL-OP: operator '/' not permitted "
        "between 'celsius_t' and 'celsius_t'"}},
      {"fig7.c",
       {"fig7.c:11:16: warning: CR-UNINIT-USE: 'c' may be used uninitialized "
        "here",
        "fig7.c:14:5: warning: CR-FINI-MISSING: 'c' requires finalization "
        "but may reach this point without it"}},
      {"fig8.c",
       {"fig8.c:11:12: warning: CR-PRE-VIOLATION: precondition door=closed "
        "of 'mixer_on' may not hold here (door is unset)",
        "fig8.c:16:3: warning: CR-POST-VIOLATION: postcondition of 'qux' may "
        "be violated at this return: blade is on, expected off"}},
      {"fig9.c", {}},
      {"fig10.c",
       {"fig10.c:19:7: warning: CR-OWN-LEAK: the resource acquired at line "
        "13 is leaked here",
        "fig10.c:23:3: warning: CR-OWN-LEAK: the resource acquired at line "
        "13 is leaked here"}},
      {"loop.c", {}},
      {"model_conflict.c",
       {"model_conflict.c:5:1: error: CR-MODEL-CONFLICT: declaration of "
        "'malloc' conflicts with the built-in library model: the return "
        "contract differs"}},
      {"nominal_mix.c",
       {"nominal_mix.c:7:17: warning: CR-NOMINAL-MIX: value of type "
        "'kelvin_t' cannot be used as 'celsius_t' without a declared "
        "conversion"}},
      {"opt_ret.c",
       {"opt_ret.c:6:3: warning: CR-OPT-RET: returned value may be NULL but "
        "the return type of 'grab' is not optional"}},
      {"refs.c", {}},
      {"release_invalid.c",
       {"release_invalid.c:5:8: warning: CR-RELEASE-INVALID: 'view' cannot "
        "be released here: it is not an owning reference"}},
      {"uninit_heap.c",
       {"uninit_heap.c:8:11: warning: CR-UNINIT-USE: '*p' may be used "
        "uninitialized here"}},
      {"unknown_include.c",
       {"unknown_include.c:1:1: warning: CR-INCLUDE-UNKNOWN: unknown header "
        "<mystery.h>; its declarations are treated as external"}},
      {"unreachable.c",
       {"unreachable.c:5:3: note: CR-UNREACHABLE: statement is unreachable"}},
      {"unsafe_access.c",
       {"unsafe_access.c:7:10: warning: CR-UNSAFE-ACCESS: access to "
        "'fp->flags' of unsafe kind \"FILE\" outside an "
        "e_checked/e_unchecked block"}},
      {"unsafe_checked_clean.c", {}},
      {"unsafe_fn_ok.c", {}},
      {"unsafe_unchecked.c",
       {"unsafe_unchecked.c:8:3: warning: CR-UNSAFE-PROPAGATE: "
        "e_unchecked(\"FILE\") requires the enclosing function 'grab_flags' "
        "to be annotated e_unsafe(\"FILE\")"}},
      {"use_after_move.c",
       {"use_after_move.c:11:8: warning: CR-USE-AFTER-MOVE: 'p' is used here "
        "after its ownership was moved"}},
      {"use_after_release.c",
       {"use_after_release.c:10:11: warning: CR-USE-AFTER-RELEASE: 'p' "
        "refers to a resource that was already released"}},
      {"val_range.c",
       {"val_range.c:6:15: warning: CR-VAL-RANGE: value -1 is outside the "
        "declared range [0, +inf] of 'n'"}},
  };
  return table;
}

FileResult analyze_corpus_file(const std::string &name) {
  std::string path = std::string(CRUSTED_CORPUS_DIR) + "/" + name;
  std::string source, err;
  REQUIRE(read_file(path, source, err));
  // Analyze under the bare name so rendered lines match the table verbatim.
  return analyze_source(name, source);
}

} // namespace

TEST_CASE("every corpus file produces exactly its pinned diagnostics") {
  for (const auto &[name, lines] : expected_lines()) {
    DYNAMIC_SECTION(name) {
      FileResult r = analyze_corpus_file(name);
      std::string expected;
      for (const std::string &l : lines)
        expected += l + "\n";
      CHECK(render_text(r.diagnostics) == expected);
    }
  }
}

TEST_CASE("figure diagnostics carry the exact source extents") {
  struct Extent {
    const char *file;
    int line, col, len;
    Code code;
  };
  const Extent extents[] = {
      {"fig1.c", 10, 3, 4, Code::NominalOp},
      {"fig1.c", 11, 24, 2, Code::OptArg},
      {"fig1.c", 11, 28, 3, Code::OptArg},
      {"fig1.c", 12, 3, 10, Code::OptDeref},
      {"fig1.c", 12, 3, 10, Code::OptDeref},
      {"fig1.c", 13, 3, 12, Code::OwnUnclear},
      {"fig1.c", 14, 3, 8, Code::OwnLeak},
      {"fig1.c", 14, 3, 8, Code::OwnLeak},
      {"fig6.c", 14, 20, 7, Code::NominalOp},
      {"fig7.c", 11, 16, 2, Code::UninitUse},
      {"fig7.c", 14, 5, 9, Code::FiniMissing},
      {"fig8.c", 11, 12, 3, Code::PreViolation},
      {"fig8.c", 16, 3, 6, Code::PostViolation},
      {"fig10.c", 19, 7, 10, Code::OwnLeak},
      {"fig10.c", 23, 3, 8, Code::OwnLeak},
  };
  std::map<std::string, FileResult> results;
  for (const Extent &e : extents) {
    auto it = results.find(e.file);
    if (it == results.end())
      it = results.emplace(e.file, analyze_corpus_file(e.file)).first;
  }
  for (const auto &[file, r] : results) {
    size_t i = 0;
    for (const Extent &e : extents) {
      if (file != e.file)
        continue;
      INFO(file << " entry " << i);
      REQUIRE(i < r.diagnostics.size());
      const Diagnostic &d = r.diagnostics[i];
      CHECK(d.span.line == e.line);
      CHECK(d.span.col == e.col);
      CHECK(d.span.len == e.len);
      CHECK(d.code == e.code);
      ++i;
    }
    CHECK(i == r.diagnostics.size());
  }
}

TEST_CASE("the expectation table covers the corpus directory exactly") {
  std::set<std::string> on_disk;
  for (const auto &entry :
       std::filesystem::directory_iterator(CRUSTED_CORPUS_DIR))
    if (entry.path().extension() == ".c")
      on_disk.insert(entry.path().filename().string());
  std::set<std::string> in_table;
  for (const auto &[name, lines] : expected_lines())
    in_table.insert(name);
  CHECK(on_disk == in_table);
}

TEST_CASE("the corpus exercises the whole diagnostic catalog") {
  std::set<std::string> seen;
  for (const auto &[name, lines] : expected_lines()) {
    FileResult r = analyze_corpus_file(name);
    for (const Diagnostic &d : r.diagnostics)
      seen.insert(code_name(d.code));
  }
  for (Code c : all_codes()) {
    INFO(code_name(c));
    CHECK(seen.count(code_name(c)) == 1);
  }
}
