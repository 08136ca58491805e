// Library model tests. The built-in models are themselves written in the
// annotation language; they must build cleanly, and resolving the same
// declarations from an ordinary source file must produce structurally equal
// contracts (the model layer adds nothing the annotations cannot express).

#include <crusted/libmodels.hpp>
#include <crusted/parser.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>

using namespace crusted;

namespace {

AnnotationTables tables_of(const std::string &src) {
  DiagnosticBag bag("t.c");
  auto toks = Lexer(src, bag).run();
  TranslationUnit tu =
      Parser(std::move(toks), bag, model_type_names_for_header).run();
  ActiveModels models = models_for_headers(tu, bag);
  AnnotationTables t = build_annotation_tables(tu, models, bag);
  auto ds = bag.take();
  for (const auto &d : ds)
    UNSCOPED_INFO(render_text({d}));
  REQUIRE(ds.empty());
  return t;
}

std::string corpus_file(const std::string &name) {
  std::ifstream in(std::string(CRUSTED_CORPUS_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("the built-in model source builds without diagnostics") {
  CHECK(builtin_model_build_diagnostics().empty());
}

TEST_CASE("each recognized header activates its declarations") {
  AnnotationTables t = tables_of("#include <fcntl.h>\n"
                                 "#include <unistd.h>\n"
                                 "#include <stdlib.h>\n"
                                 "#include <stdio.h>\n"
                                 "#include <errno.h>\n");
  for (const char *fn : {"open", "close", "read", "malloc", "calloc", "free",
                         "fopen", "fclose"})
    CHECK(t.functions.count(fn) == 1);
  CHECK(t.globals.count("errno") == 1);
  // Model-internal typedef names do not leak into user scope as contracts
  // the user did not ask for; the opaque FILE type does (stdio exports it).
  CHECK(t.typedefs.count("FILE") == 1);
}

TEST_CASE("unincluded headers stay inactive") {
  AnnotationTables t = tables_of("#include <stdlib.h>\n");
  CHECK(t.functions.count("malloc") == 1);
  CHECK(t.functions.count("open") == 0);
  CHECK(t.functions.count("fopen") == 0);
}

TEST_CASE("model resource classes name the resource precisely") {
  AnnotationTables t = tables_of("#include <fcntl.h>\n#include <stdio.h>\n"
                                 "#include <stdlib.h>\n");
  CHECK(t.functions.at("open").ret.resource_class == "open-file-description");
  CHECK(t.functions.at("fopen").ret.resource_class == "stream");
  // Heap allocation reports speak of heap blocks via the default class.
  CHECK(t.functions.at("malloc").ret.resource_class == "heap-block");
  CHECK(t.functions.at("malloc").ret.heap);
}

TEST_CASE("allocator declarations resolve equal to the stdlib models") {
  // The corpus transcription restates malloc, calloc and free with their
  // annotations; resolving it must match the models exactly (the build is
  // silent because the conflict machinery verified contract equality).
  AnnotationTables user = tables_of(corpus_file("fig4.c"));
  const AnnotationTables &model = detail::builtin_model_tables().tables;
  for (const char *fn : {"malloc", "calloc", "free"}) {
    INFO(fn);
    CHECK(user.functions.at(fn).contracts_equal(model.functions.at(fn)));
  }
}

TEST_CASE("descriptor declarations resolve equal to the posix models") {
  // This transcription declares open and close without including their
  // headers, so the resolved signatures are entirely the user's.
  AnnotationTables user = tables_of(corpus_file("fig5.c"));
  const AnnotationTables &model = detail::builtin_model_tables().tables;
  for (const char *fn : {"open", "close"}) {
    INFO(fn);
    CHECK_FALSE(user.functions.at(fn).from_model);
    CHECK(user.functions.at(fn).contracts_equal(model.functions.at(fn)));
  }
}

TEST_CASE("stream declarations resolve equal to the stdio models") {
  AnnotationTables user = tables_of(corpus_file("fig9.c"));
  const AnnotationTables &model = detail::builtin_model_tables().tables;
  for (const char *fn : {"fopen", "fclose"}) {
    INFO(fn);
    CHECK(user.functions.at(fn).contracts_equal(model.functions.at(fn)));
  }
}

TEST_CASE("read initializes its buffer argument") {
  AnnotationTables t = tables_of("#include <unistd.h>\n");
  const AnnotatedSignature &read = t.functions.at("read");
  REQUIRE(read.params.size() == 3);
  CHECK(read.params[1].init == InitSpec::Initializes);
  CHECK(read.ret.optional);
  CHECK(read.ret.sentinel == -1);
}

TEST_CASE("free accepts null and releases heap ownership") {
  AnnotationTables t = tables_of("#include <stdlib.h>\n");
  const ContractSlot &p = t.functions.at("free").params[0];
  CHECK(p.optional);
  CHECK(p.sentinel_is_null);
  CHECK(p.owning);
  CHECK(p.heap);
  CHECK(p.mode == RefMode::Release);
  CHECK(p.init != InitSpec::Uninit);
}
