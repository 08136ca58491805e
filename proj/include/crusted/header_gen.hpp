// Emits crusted.h, the header that makes annotated sources compile as plain
// C. Every annotation becomes a macro that expands to nothing (or, for the
// file-scope forms, to a harmless repeatable declaration), so a regular C
// compiler sees exactly the program with the annotations erased.
//
// The emitter iterates the annotation registry; adding an annotation there
// automatically adds it here. The output is a pure function of the registry,
// so the bytes are stable run to run.

#ifndef CRUSTED_HEADER_GEN_HPP
#define CRUSTED_HEADER_GEN_HPP

#include <fstream>
#include <string>

#include "crusted/registry.hpp"

namespace crusted {

inline std::string emit_crusted_header() {
  std::string out;
  out += "#ifndef CRUSTED_H\n";
  out += "#define CRUSTED_H\n";
  out += "\n";
  out += "/*\n";
  out += " * Annotation vocabulary for checked C sources.\n";
  out += " *\n";
  out += " * Every annotation expands to nothing under a regular C compiler,\n";
  out += " * so an annotated translation unit is an ordinary C translation\n";
  out += " * unit with identical semantics. The file-scope forms expand to a\n";
  out += " * repeatable extern declaration so that a trailing semicolon still\n";
  out += " * yields a well-formed top-level item.\n";
  out += " *\n";
  out += " * This file is generated; do not edit it by hand.\n";
  out += " */\n";
  out += "\n";
  out += "/* marker annotations */\n";
  for (const AnnSpec &s : annotation_registry()) {
    if (s.arity == AnnArity::Bare)
      out += std::string("#define ") + s.name + "\n";
  }
  out += "\n";
  out += "/* annotations written with an argument list */\n";
  for (const AnnSpec &s : annotation_registry()) {
    if (s.arity == AnnArity::Args && !s.file_scope)
      out += std::string("#define ") + s.name + "(...)\n";
  }
  out += "\n";
  out += "/* file-scope annotations; these stand where a declaration goes */\n";
  for (const AnnSpec &s : annotation_registry()) {
    if (s.arity == AnnArity::Args && s.file_scope)
      out += std::string("#define ") + s.name +
             "(...) extern int e_crusted_ignored\n";
  }
  out += "\n";
  out += "/* value predicates; they only occur inside e_val(...) */\n";
  for (const char *name : predicate_names())
    out += std::string("#define ") + name + "(...)\n";
  out += "\n";
  out += "#endif /* CRUSTED_H */\n";
  return out;
}

// Writes the header to `path`. Returns false (and fills `err` when given) if
// the file cannot be written.
inline bool write_crusted_header(const std::string &path,
                                 std::string *err = nullptr) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    if (err)
      *err = "cannot open '" + path + "' for writing";
    return false;
  }
  os << emit_crusted_header();
  os.flush();
  if (!os) {
    if (err)
      *err = "failed while writing '" + path + "'";
    return false;
  }
  return true;
}

} // namespace crusted

#endif
