// Built-in contracts for the library functions the subset knows about.
//
// The models are written as annotated declarations in the subset itself and
// run through the regular lexer, parser and table builder exactly once. A
// user file that redeclares one of these functions with the same annotations
// therefore resolves to a structurally identical contract, because both went
// through the same code path; the models cannot drift from the surface
// syntax.
//
// Including a recognized header activates that header's models for the file.
// Including anything else is reported (the analysis then knows nothing about
// the names the header would declare).

#ifndef CRUSTED_LIBMODELS_HPP
#define CRUSTED_LIBMODELS_HPP

#include <map>
#include <string>
#include <vector>

#include "crusted/ast.hpp"
#include "crusted/diagnostic.hpp"
#include "crusted/lexer.hpp"
#include "crusted/parser.hpp"
#include "crusted/type_table.hpp"

namespace crusted {

// The model declarations. File descriptors follow the POSIX picture: a
// by-value owned resource encoded in an int, with -1 as the "no descriptor"
// sentinel. Heap blocks come from the allocator triple; free() is the
// designated release function and accepts a null pointer. Streams are owned
// through FILE pointers that must never be dereferenced outside an unsafety
// block, hence the "FILE" unsafety kind on the type.
inline const char *builtin_model_source() {
  return "typedef int e_type e_val(e_geq(0)) fd_t;\n"
         "typedef fd_t e_own fd_own_t;\n"
         "typedef fd_own_t e_opt(-1) fd_opt_own_t;\n"
         "\n"
         "fd_opt_own_t open(const char *path, int oflag);\n"
         "int e_val(e_range(-1, 0)) close(fd_own_t fildes);\n"
         "ssize_t e_opt(-1) e_val(e_geq(0))\n"
         "read(fd_t fd, void * e_init buf, size_t count);\n"
         "\n"
         "void * e_opt_hown e_uninit malloc(size_t size);\n"
         "void * e_opt_hown calloc(size_t nmemb, size_t size);\n"
         "void free(void * e_opt_hown e_release ptr);\n"
         "\n"
         "typedef struct e_file_rep FILE;\n"
         "e_declprops(FILE, e_unsafe(\"FILE\"));\n"
         "typedef FILE * fp_t;\n"
         "typedef fp_t e_own fp_own_t;\n"
         "typedef fp_own_t e_opt(NULL) fp_opt_own_t;\n"
         "\n"
         "fp_opt_own_t fopen(const char * restrict filename,\n"
         "                   const char * restrict mode);\n"
         "int e_val(e_eq(0) || e_eq(EOF)) fclose(fp_own_t fp);\n"
         "\n"
         "int errno;\n";
}

// What each recognized header contributes. Headers with empty lists are
// recognized (their inclusion is not reported) but add nothing.
struct HeaderModel {
  const char *header;
  std::vector<const char *> functions;
  std::vector<const char *> types;
  std::vector<const char *> globals;
};

inline const std::vector<HeaderModel> &header_models() {
  static const std::vector<HeaderModel> models = {
      {"fcntl.h", {"open"}, {}, {}},
      {"unistd.h", {"close", "read"}, {}, {}},
      {"stdlib.h", {"malloc", "calloc", "free"}, {}, {}},
      {"stdio.h", {"fopen", "fclose"}, {"FILE"}, {}},
      {"errno.h", {}, {}, {"errno"}},
      {"string.h", {}, {}, {}},
      {"crusted.h", {}, {}, {}},
  };
  return models;
}

inline const HeaderModel *find_header_model(const std::string &header) {
  for (const HeaderModel &m : header_models())
    if (header == m.header)
      return &m;
  return nullptr;
}

// Type names a header brings into scope for the parser. The models only
// export FILE; size_t and ssize_t are part of the subset grammar itself.
inline std::vector<std::string>
model_type_names_for_header(const std::string &header) {
  const HeaderModel *m = find_header_model(header);
  std::vector<std::string> names;
  if (m)
    for (const char *t : m->types)
      names.push_back(t);
  return names;
}

namespace detail {

struct BuiltinModelTables {
  AnnotationTables tables;
  std::vector<Diagnostic> build_diagnostics; // must stay empty
};

// Human phrasing of what a resource is, used in ownership diagnostics.
// Contracts written by users get the generic classes ("heap-block" or
// "resource"); the models name theirs precisely.
inline void apply_resource_classes(AnnotationTables &t) {
  auto fn = [&](const char *name) -> AnnotatedSignature * {
    auto it = t.functions.find(name);
    return it == t.functions.end() ? nullptr : &it->second;
  };
  if (AnnotatedSignature *s = fn("open"))
    s->ret.resource_class = "open-file-description";
  if (AnnotatedSignature *s = fn("close"))
    if (!s->params.empty())
      s->params[0].resource_class = "open-file-description";
  if (AnnotatedSignature *s = fn("fopen"))
    s->ret.resource_class = "stream";
  if (AnnotatedSignature *s = fn("fclose"))
    if (!s->params.empty())
      s->params[0].resource_class = "stream";
}

inline const BuiltinModelTables &builtin_model_tables() {
  static const BuiltinModelTables built = [] {
    BuiltinModelTables out;
    DiagnosticBag diags("<models>");
    Lexer lexer(builtin_model_source(), diags);
    Parser parser(lexer.run(), diags);
    TranslationUnit tu = parser.run();
    out.tables = build_annotation_tables(tu, ActiveModels{}, diags);
    out.build_diagnostics = diags.take();
    return out;
  }();
  return built;
}

} // namespace detail

// Exposed so a test can assert the model source itself is clean.
inline const std::vector<Diagnostic> &builtin_model_build_diagnostics() {
  return detail::builtin_model_tables().build_diagnostics;
}

// Builds the active model set for one file from its #include items and
// reports any include the analysis has no knowledge of.
inline ActiveModels models_for_headers(const TranslationUnit &tu,
                                       DiagnosticBag &diags) {
  const AnnotationTables &master = [] {
    static const AnnotationTables withClasses = [] {
      AnnotationTables t = detail::builtin_model_tables().tables;
      detail::apply_resource_classes(t);
      return t;
    }();
    return std::cref(withClasses);
  }()
                                       .get();

  ActiveModels active;
  for (const Item &item : tu.items) {
    if (item.kind != ItemKind::Include)
      continue;
    const HeaderModel *hm = find_header_model(item.header);
    if (!hm) {
      diags.emit(item.span, Code::IncludeUnknown, {{"header", item.header}});
      continue;
    }
    for (const char *name : hm->functions) {
      auto it = master.functions.find(name);
      if (it != master.functions.end()) {
        AnnotatedSignature sig = it->second;
        sig.from_model = true;
        active.functions[name] = std::move(sig);
      }
    }
    for (const char *name : hm->types) {
      if (const StructInfo *si = master.find_struct(name))
        active.types[name] = *si;
      auto slot = master.typedefs.find(name);
      if (slot != master.typedefs.end())
        active.type_slots[name] = slot->second;
    }
    for (const char *name : hm->globals) {
      auto it = master.globals.find(name);
      if (it != master.globals.end()) {
        GlobalInfo g = it->second;
        g.from_model = true;
        active.globals[name] = std::move(g);
      }
    }
  }
  return active;
}

} // namespace crusted

#endif
