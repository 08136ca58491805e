// The annotation registry: every annotation name the language knows, its
// argument shape, and where it may legally appear. The lexer classifies
// identifiers against this table and the header emitter iterates it, so the
// recognized surface and the emitted crusted.h cannot drift apart.

#ifndef CRUSTED_REGISTRY_HPP
#define CRUSTED_REGISTRY_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace crusted {

enum class AnnKind {
  Hown,      // owning reference to a heap resource
  Own,       // owning reference to a non-heap resource
  OptHown,   // built-in alias for e_opt(NULL) e_hown
  Opt,       // optional with sentinel argument
  Excl,      // exclusive borrow
  Shar,      // shared borrow
  Type,      // introduces a nominal type
  Val,       // value range predicate
  Bop,       // binary operation table entry (file scope)
  Uop,       // unary operation table entry (file scope)
  Init,      // parameter initializes its referent
  Uninit,    // value/contents may be uninitialized
  Fini,      // type requires finalization / parameter finalizes
  Release,   // parameter releases the received resource
  In,        // property precondition
  Out,       // property postcondition
  Unsafe,    // unsafety kind on a type or function
  Checked,   // statement block: encapsulated unsafe access
  Unchecked, // statement block: unsafe access needing propagation
  Declprops, // attach annotations to an existing type (file scope)
};

// How the annotation is written: bare annotations must expand as object-like
// macros, parenthesized ones as variadic function-like macros.
enum class AnnArity { Bare, Args };

struct AnnSpec {
  AnnKind kind;
  const char *name;
  AnnArity arity;
  bool file_scope; // legal only as a top-level item
};

inline const std::vector<AnnSpec> &annotation_registry() {
  static const std::vector<AnnSpec> specs = {
      {AnnKind::Hown, "e_hown", AnnArity::Bare, false},
      {AnnKind::Own, "e_own", AnnArity::Bare, false},
      {AnnKind::OptHown, "e_opt_hown", AnnArity::Bare, false},
      {AnnKind::Opt, "e_opt", AnnArity::Args, false},
      {AnnKind::Excl, "e_excl", AnnArity::Bare, false},
      {AnnKind::Shar, "e_shar", AnnArity::Bare, false},
      {AnnKind::Type, "e_type", AnnArity::Bare, false},
      {AnnKind::Val, "e_val", AnnArity::Args, false},
      {AnnKind::Bop, "e_bop", AnnArity::Args, true},
      {AnnKind::Uop, "e_uop", AnnArity::Args, true},
      {AnnKind::Init, "e_init", AnnArity::Bare, false},
      {AnnKind::Uninit, "e_uninit", AnnArity::Bare, false},
      {AnnKind::Fini, "e_fini", AnnArity::Bare, false},
      {AnnKind::Release, "e_release", AnnArity::Bare, false},
      {AnnKind::In, "e_in", AnnArity::Args, false},
      {AnnKind::Out, "e_out", AnnArity::Args, false},
      {AnnKind::Unsafe, "e_unsafe", AnnArity::Args, false},
      {AnnKind::Checked, "e_checked", AnnArity::Args, false},
      {AnnKind::Unchecked, "e_unchecked", AnnArity::Args, false},
      {AnnKind::Declprops, "e_declprops", AnnArity::Args, true},
  };
  return specs;
}

// Names that only occur inside e_val(...) arguments. They are part of the
// annotation vocabulary (and of the emitted header) but are not annotations
// on their own.
inline const std::vector<const char *> &predicate_names() {
  static const std::vector<const char *> names = {"e_geq", "e_range", "e_eq"};
  return names;
}

inline const AnnSpec *find_annotation(std::string_view name) {
  for (const AnnSpec &s : annotation_registry())
    if (name == s.name)
      return &s;
  return nullptr;
}

inline bool is_predicate_name(std::string_view name) {
  for (const char *n : predicate_names())
    if (name == n)
      return true;
  return false;
}

// Named integer constants that are always in scope; the subset has no
// preprocessor, so the handful of macros the figures rely on are built in.
struct NamedConstant {
  const char *name;
  int64_t value;
  bool is_null;
};

inline const std::vector<NamedConstant> &builtin_constants() {
  static const std::vector<NamedConstant> consts = {
      {"NULL", 0, true},
      {"EOF", -1, false},
      {"EBADF", 9, false},
      {"O_RDONLY", 0, false},
  };
  return consts;
}

inline const NamedConstant *find_constant(std::string_view name) {
  for (const NamedConstant &c : builtin_constants())
    if (name == c.name)
      return &c;
  return nullptr;
}

} // namespace crusted

#endif
