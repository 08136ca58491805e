// Resolver tests: raw annotations on declarations turn into contract slots,
// typedef chains accumulate, and inconsistent or malformed annotations are
// reported where they are written.

#include <crusted/libmodels.hpp>
#include <crusted/parser.hpp>
#include <crusted/type_table.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

using namespace crusted;

namespace {

struct Built {
  AnnotationTables tables;
  std::vector<Diagnostic> diags;
};

Built build(const std::string &src) {
  DiagnosticBag bag("t.c");
  auto toks = Lexer(src, bag).run();
  TranslationUnit tu =
      Parser(std::move(toks), bag, model_type_names_for_header).run();
  ActiveModels models = models_for_headers(tu, bag);
  Built out;
  out.tables = build_annotation_tables(tu, models, bag);
  out.diags = bag.take();
  return out;
}

Built build_ok(const std::string &src) {
  Built out = build(src);
  for (const auto &d : out.diags)
    UNSCOPED_INFO(render_text({d}));
  REQUIRE(out.diags.empty());
  return out;
}

} // namespace

TEST_CASE("typedef chain accumulates value range ownership and sentinel") {
  Built b = build_ok("typedef int e_type e_val(e_geq(0)) fd_t;\n"
                     "typedef fd_t e_own fd_own_t;\n"
                     "typedef fd_own_t e_opt(-1) fd_opt_own_t;\n");
  const ContractSlot &fd = b.tables.typedefs.at("fd_t");
  CHECK(fd.nominal == "fd_t");
  CHECK(fd.has_value);
  CHECK(fd.value.min().v == 0);
  CHECK_FALSE(fd.value.max().finite());
  CHECK_FALSE(fd.owning);

  const ContractSlot &own = b.tables.typedefs.at("fd_own_t");
  CHECK(own.nominal == "fd_t"); // nominal identity carries through
  CHECK(own.owning);
  CHECK_FALSE(own.optional);

  const ContractSlot &opt = b.tables.typedefs.at("fd_opt_own_t");
  CHECK(opt.owning);
  CHECK(opt.optional);
  CHECK(opt.sentinel == -1);
  CHECK_FALSE(opt.sentinel_is_null);
}

TEST_CASE("pointer annotations resolve on the declarator level") {
  Built b = build_ok("void * e_opt(NULL) e_hown e_uninit\n"
                     "grab(size_t size);\n");
  const AnnotatedSignature &fn = b.tables.functions.at("grab");
  CHECK(fn.ret.pointer_depth == 1);
  CHECK(fn.ret.optional);
  CHECK(fn.ret.sentinel_is_null);
  CHECK(fn.ret.owning);
  CHECK(fn.ret.heap);
  CHECK(fn.ret.init == InitSpec::Uninit);
  REQUIRE(fn.params.size() == 1);
  CHECK(fn.params[0].base == BaseType::SizeT);
}

TEST_CASE("e_opt_hown expands to optional heap ownership") {
  Built b = build_ok("void release(void * e_opt_hown e_release ptr);\n");
  const ContractSlot &p = b.tables.functions.at("release").params[0];
  CHECK(p.optional);
  CHECK(p.sentinel_is_null);
  CHECK(p.owning);
  CHECK(p.heap);
  CHECK(p.mode == RefMode::Release);
}

TEST_CASE("reference modes derive from constness when unannotated") {
  Built b = build_ok("typedef struct N { int e; } N_t;\n"
                     "void show(const N_t *np);\n"
                     "void edit(N_t *np);\n");
  CHECK(b.tables.functions.at("show").params[0].mode == RefMode::SharedRef);
  CHECK(b.tables.functions.at("edit").params[0].mode == RefMode::ExclRef);
}

TEST_CASE("init and fini annotations mark the referent contract") {
  Built b = build_ok("typedef struct { int x; } e_fini Channel_t;\n"
                     "void channel_ctor(Channel_t * e_init chanp);\n"
                     "void channel_dtor(Channel_t * e_fini chanp);\n");
  CHECK(b.tables.typedefs.at("Channel_t").fini_required);
  CHECK(b.tables.functions.at("channel_ctor").params[0].init ==
        InitSpec::Initializes);
  CHECK(b.tables.functions.at("channel_dtor").params[0].fini_required);
}

TEST_CASE("declared properties parse into pre and post assignments") {
  Built b = build_ok(
      "typedef struct Mixer Mixer_t;\n"
      "void mixer_on(Mixer_t * e_in(door=closed) e_out(blade=on) mxp);\n"
      "void qux(Mixer_t * e_in(blade=off) e_out(door=?) mxp);\n");
  const ContractSlot &on = b.tables.functions.at("mixer_on").params[0];
  REQUIRE(on.pre.size() == 1);
  CHECK(on.pre[0].key == "door");
  CHECK(on.pre[0].value == "closed");
  REQUIRE(on.post.size() == 1);
  CHECK(on.post[0].key == "blade");
  CHECK(on.post[0].value == "on");
  const ContractSlot &qux = b.tables.functions.at("qux").params[0];
  REQUIRE(qux.post.size() == 1);
  CHECK(qux.post[0].any_value); // written as `?`
}

TEST_CASE("operation table records declared nominal operations") {
  Built b = build_ok(
      "typedef double e_type celsius_t;\n"
      "typedef double e_type dltcelsius_t;\n"
      "e_bop(dltcelsius_t, celsius_t, -, celsius_t);\n");
  const std::string *res =
      b.tables.ops.lookup_binary("-", "celsius_t", "celsius_t");
  REQUIRE(res != nullptr);
  CHECK(*res == "dltcelsius_t");
  CHECK(b.tables.ops.lookup_binary("+", "celsius_t", "celsius_t") == nullptr);
}

TEST_CASE("declprops attaches unsafe kinds to a type") {
  Built b = build_ok("typedef struct file_rep { unsigned flags; } FILE;\n"
                     "e_declprops(FILE, e_unsafe(\"FILE\"));\n");
  const ContractSlot &slot = b.tables.typedefs.at("FILE");
  REQUIRE(slot.unsafe_kinds.size() == 1);
  CHECK(slot.unsafe_kinds[0] == "FILE");
}

TEST_CASE("value predicates combine with or") {
  Built b = build_ok("int e_val(e_eq(0) || e_eq(-1))\nfinish(int code);\n");
  const ContractSlot &ret = b.tables.functions.at("finish").ret;
  REQUIRE(ret.has_value);
  CHECK(ret.value.contains(0));
  CHECK(ret.value.contains(-1));
  CHECK_FALSE(ret.value.contains(1));
}

TEST_CASE("conflicting site and type annotations are reported at the site") {
  Built b = build("typedef int e_own fd_own_t;\n"
                  "void take(fd_own_t e_own fd);\n");
  REQUIRE(b.diags.size() == 1);
  CHECK(b.diags[0].code == Code::AnnConflict);
  CHECK(b.diags[0].span.line == 2);
  CHECK(b.diags[0].message.find("'fd'") != std::string::npos);
}

TEST_CASE("redundant reference annotations are noted") {
  Built b = build("void fill(int * e_excl dst);\n");
  REQUIRE(b.diags.size() == 1);
  CHECK(b.diags[0].code == Code::AnnRedundant);
  CHECK(b.diags[0].severity == Severity::Note);
}

TEST_CASE("unknown types in file scope annotations are reported") {
  Built b = build("e_declprops(Widget, e_unsafe(\"w\"));\n");
  REQUIRE(b.diags.size() == 1);
  CHECK(b.diags[0].code == Code::AnnUnknownType);
}

TEST_CASE("malformed predicate arguments are reported") {
  Built b = build("typedef int e_type e_val(e_gtr(0)) speed_t;\n");
  REQUIRE(b.diags.size() == 1);
  CHECK(b.diags[0].code == Code::AnnArg);
}

TEST_CASE("redeclaring a user function with a different contract conflicts") {
  Built b = build("void put(int *dst);\n"
                  "void put(int * e_opt(NULL) dst);\n");
  REQUIRE(b.diags.size() == 1);
  CHECK(b.diags[0].code == Code::AnnConflict);
  CHECK(b.diags[0].span.line == 2);
}

TEST_CASE("identical redeclarations stay silent") {
  Built b = build_ok("void put(int * e_opt(NULL) dst);\n"
                     "void put(int * e_opt(NULL) dst);\n");
  CHECK(b.tables.functions.at("put").params[0].optional);
}

TEST_CASE("plain redeclaration of a modeled function is tolerated") {
  Built b = build_ok("#include <stdlib.h>\n"
                     "void *malloc(size_t size);\n");
  // The model entry survives untouched.
  const AnnotatedSignature &m = b.tables.functions.at("malloc");
  CHECK(m.from_model);
  CHECK(m.ret.owning);
}

TEST_CASE("annotated divergent redeclaration of a model conflicts") {
  Built b = build("#include <stdlib.h>\n"
                  "void * e_opt(NULL) malloc(size_t size);\n");
  REQUIRE(b.diags.size() == 1);
  CHECK(b.diags[0].code == Code::ModelConflict);
  CHECK(b.diags[0].span.line == 2);
}

TEST_CASE("unknown headers are noted and otherwise inert") {
  Built b = build("#include <mystery.h>\nint g;\n");
  REQUIRE(b.diags.size() == 1);
  CHECK(b.diags[0].code == Code::IncludeUnknown);
  CHECK(b.diags[0].severity == Severity::Warning);
}

TEST_CASE("enum constants land in the tables with assigned values") {
  Built b = build_ok("enum mode { IDLE, BUSY = 4, DONE };\n");
  CHECK(b.tables.enums.at("IDLE") == 0);
  CHECK(b.tables.enums.at("BUSY") == 4);
  CHECK(b.tables.enums.at("DONE") == 5);
}

TEST_CASE("globals keep their resolved slots") {
  Built b = build_ok("#include <errno.h>\nint counter;\n");
  CHECK(b.tables.globals.count("counter") == 1);
  // errno arrives from the model layer.
  CHECK(b.tables.globals.count("errno") == 1);
  CHECK(b.tables.globals.at("errno").from_model);
}
