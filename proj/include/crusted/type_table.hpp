// Resolves typedef chains, structs, enums, operation tables and function
// signatures into contract form. A ContractSlot is the fully resolved
// contract of one parameter, return value, member or typedef; structural
// equality on slots is what "this declaration matches the built-in model"
// means.

#ifndef CRUSTED_TYPE_TABLE_HPP
#define CRUSTED_TYPE_TABLE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <crusted/annotation.hpp>
#include <crusted/ast.hpp>
#include <crusted/diagnostic.hpp>
#include <crusted/interval.hpp>

namespace crusted {

// How a value relates to the resource it names.
enum class RefMode {
  Value,     // no reference semantics
  SharedRef, // shared borrow
  ExclRef,   // exclusive borrow
  Owning,    // owning storage (locals, members)
  OwningIn,  // parameter: ownership moves into the callee
  OwningOut, // return: ownership moves out to the caller
  Release,   // parameter: ownership moves in and the resource is released
};

// What a parameter expects of and does to its referent's contents.
enum class InitSpec {
  Default,     // referent must be initialized, left as-is
  Initializes, // may be uninitialized on entry, initialized on exit (e_init)
  Uninit,      // contents may be uninitialized (e_uninit)
  Finalizes,   // initialized on entry, finalized on exit (e_fini on a param)
};

struct ContractSlot {
  std::string name; // declarator name; display only
  BaseType base = BaseType::Int;
  std::string base_name; // resolved Named base (struct or opaque type)
  bool is_struct = false;
  int pointer_depth = 0;
  bool pointee_const = false;
  std::string nominal; // nearest e_type name along the chain
  bool optional = false;
  int64_t sentinel = 0;
  bool sentinel_is_null = false;
  bool owning = false;
  bool heap = false;
  RefMode mode = RefMode::Value;
  InitSpec init = InitSpec::Default;
  bool has_value = false;
  MultiInterval value = MultiInterval::full();
  std::vector<PropAssign> pre;  // e_in
  std::vector<PropAssign> post; // e_out
  std::vector<std::string> unsafe_kinds;
  bool fini_required = false;
  bool explicit_shared = false;
  bool explicit_excl = false;
  std::string resource_class; // display name in leak reports; not compared
  Span span;                  // not compared

  friend bool operator==(const ContractSlot &a, const ContractSlot &b) {
    return a.base == b.base && a.base_name == b.base_name &&
           a.is_struct == b.is_struct &&
           a.pointer_depth == b.pointer_depth &&
           a.pointee_const == b.pointee_const && a.nominal == b.nominal &&
           a.optional == b.optional && a.sentinel == b.sentinel &&
           a.sentinel_is_null == b.sentinel_is_null && a.owning == b.owning &&
           a.heap == b.heap && a.mode == b.mode && a.init == b.init &&
           a.has_value == b.has_value && a.value == b.value &&
           a.pre == b.pre && a.post == b.post &&
           a.unsafe_kinds == b.unsafe_kinds &&
           a.fini_required == b.fini_required &&
           a.explicit_shared == b.explicit_shared &&
           a.explicit_excl == b.explicit_excl;
  }
};

struct AnnotatedSignature {
  std::string name;
  std::vector<ContractSlot> params;
  ContractSlot ret;
  std::vector<std::string> unsafe_kinds; // e_unsafe on the function itself
  bool has_body = false;
  bool annotated = false; // any inline annotation in the declaration
  bool from_model = false;
  Span span;

  bool contracts_equal(const AnnotatedSignature &o) const {
    if (params.size() != o.params.size() || !(ret == o.ret))
      return false;
    for (size_t i = 0; i < params.size(); ++i)
      if (!(params[i] == o.params[i]))
        return false;
    return unsafe_kinds == o.unsafe_kinds;
  }
};

struct StructMember {
  std::string name;
  ContractSlot slot;
  Span span;
};

struct StructInfo {
  std::string name; // canonical key
  std::string tag;  // struct tag, may equal name or be empty
  bool opaque = true;
  std::vector<StructMember> members;

  const StructMember *find(const std::string &n) const {
    for (const StructMember &m : members)
      if (m.name == n)
        return &m;
    return nullptr;
  }
};

// Declared operations on nominal types. Keys use nominal names; "" stands
// for a plain (non-nominal) type.
struct OpTable {
  std::map<std::tuple<std::string, std::string, std::string>, std::string>
      binary; // (op, lhs, rhs) -> result nominal
  std::map<std::pair<std::string, std::string>, std::string>
      unary; // (op, operand) -> result nominal

  const std::string *lookup_binary(const std::string &op,
                                   const std::string &lhs,
                                   const std::string &rhs) const {
    auto it = binary.find({op, lhs, rhs});
    return it == binary.end() ? nullptr : &it->second;
  }
  const std::string *lookup_unary(const std::string &op,
                                  const std::string &operand) const {
    auto it = unary.find({op, operand});
    return it == unary.end() ? nullptr : &it->second;
  }
};

struct GlobalInfo {
  std::string name;
  ContractSlot slot;
  bool from_model = false;
};

// Model declarations activated by recognized #includes. Filled by the
// library-model layer; consumed when building the tables for one file.
struct ActiveModels {
  std::map<std::string, AnnotatedSignature> functions;
  std::map<std::string, StructInfo> types; // opaque model types (FILE)
  std::map<std::string, ContractSlot> type_slots;
  std::map<std::string, GlobalInfo> globals;
};

struct AnnotationTables {
  std::map<std::string, ContractSlot> typedefs;
  std::map<std::string, StructInfo> structs;
  std::map<std::string, std::string> struct_tags; // tag -> canonical name
  OpTable ops;
  std::map<std::string, AnnotatedSignature> functions;
  std::map<std::string, int64_t> enums;
  std::map<std::string, GlobalInfo> globals;
  std::vector<std::string> headers;

  const AnnotatedSignature *find_function(const std::string &n) const {
    auto it = functions.find(n);
    return it == functions.end() ? nullptr : &it->second;
  }
  const StructInfo *find_struct(const std::string &n) const {
    auto it = structs.find(n);
    if (it != structs.end())
      return &it->second;
    auto tag = struct_tags.find(n);
    if (tag != struct_tags.end()) {
      it = structs.find(tag->second);
      if (it != structs.end())
        return &it->second;
    }
    return nullptr;
  }
};

inline const char *base_type_name(BaseType b) {
  switch (b) {
  case BaseType::Void:     return "void";
  case BaseType::Bool:     return "bool";
  case BaseType::Char:     return "char";
  case BaseType::Int:      return "int";
  case BaseType::Unsigned: return "unsigned";
  case BaseType::Long:     return "long";
  case BaseType::Double:   return "double";
  case BaseType::SizeT:    return "size_t";
  case BaseType::SSizeT:   return "ssize_t";
  case BaseType::Named:    return "";
  }
  return "";
}

// Display name of a written type for diagnostics.
inline std::string type_syntax_name(const TypeSyntax &t) {
  std::string n = t.base == BaseType::Named
                      ? (t.is_struct_kw ? "struct " + t.name : t.name)
                      : base_type_name(t.base);
  if (t.base_const)
    n = "const " + n;
  for (size_t i = 0; i < t.pointers.size(); ++i)
    n += " *";
  return n;
}

// Display name of a slot's type for diagnostics.
inline std::string slot_type_name(const ContractSlot &s) {
  std::string n = !s.nominal.empty() ? s.nominal
                  : s.base == BaseType::Named ? s.base_name
                                              : base_type_name(s.base);
  for (int i = 0; i < s.pointer_depth; ++i)
    n += " *";
  return n;
}

class TableBuilder {
public:
  TableBuilder(const ActiveModels &models, DiagnosticBag &diags)
      : models_(models), diags_(diags) {
    for (const auto &[name, sig] : models.functions)
      tables_.functions[name] = sig;
    for (const auto &[name, info] : models.types) {
      tables_.structs[name] = info;
      tables_.struct_tags[name] = name;
    }
    for (const auto &[name, slot] : models.type_slots)
      tables_.typedefs[name] = slot;
    for (const auto &[name, g] : models.globals)
      tables_.globals[name] = g;
  }

  AnnotationTables build(const TranslationUnit &tu) {
    for (const Item &item : tu.items) {
      switch (item.kind) {
      case ItemKind::Include:
        tables_.headers.push_back(item.header);
        break;
      case ItemKind::Typedef:
        add_typedef(item);
        break;
      case ItemKind::Enum:
        add_enum(item.en);
        break;
      case ItemKind::GlobalAnn:
        add_global_annotation(item.ann);
        break;
      case ItemKind::Function:
        add_function(*item.fn);
        break;
      case ItemKind::GlobalVar:
        add_global_var(item.var);
        break;
      }
    }
    return std::move(tables_);
  }

  // Resolves a written type plus its inline annotations to a contract slot.
  // `subject` names the declarator in diagnostics; `is_param`, `is_return`
  // steer reference-mode inference; `fn_unsafe` receives e_unsafe kinds
  // written inline at the return position (they mark the function);
  // `site_out` hands the resolved site annotations back to the caller.
  ContractSlot resolve_slot(const TypeSyntax &ts, const std::string &subject,
                            bool is_param, bool is_return,
                            std::vector<std::string> *fn_unsafe = nullptr,
                            SiteAnnotations *site_out = nullptr) {
    ContractSlot slot = seed_from_base(ts);
    slot.span = ts.span;
    slot.pointer_depth += static_cast<int>(ts.pointers.size());
    if (slot.pointer_depth > 0 && ts.base_const)
      slot.pointee_const = true;

    SiteAnnotations site =
        resolve_site_annotations(collect_annotations(ts), subject, diags_);
    merge_site(slot, site, subject);
    if (fn_unsafe) {
      for (const std::string &k : site.unsafe_kinds)
        fn_unsafe->push_back(k);
    } else {
      for (const std::string &k : site.unsafe_kinds)
        add_unique(slot.unsafe_kinds, k);
    }

    infer_mode(slot, site, subject, is_param, is_return);
    if (site_out)
      *site_out = std::move(site);
    return slot;
  }

  bool saw_inline_annotations(const TypeSyntax &ts) const {
    return !collect_annotations(ts).empty();
  }

private:
  const ActiveModels &models_;
  DiagnosticBag &diags_;
  AnnotationTables tables_;

  static void add_unique(std::vector<std::string> &v, const std::string &s) {
    for (const std::string &x : v)
      if (x == s)
        return;
    v.push_back(s);
  }

  ContractSlot seed_from_base(const TypeSyntax &ts) {
    ContractSlot slot;
    slot.base = ts.base;
    if (ts.base != BaseType::Named)
      return slot;
    if (!ts.is_struct_kw) {
      auto it = tables_.typedefs.find(ts.name);
      if (it != tables_.typedefs.end()) {
        slot = it->second;
        slot.name.clear();
        slot.pre.clear();
        slot.post.clear();
        // Chain-level pre/post make no sense; property contracts are
        // written at the use site.
        return slot;
      }
    }
    slot.base = BaseType::Named;
    auto tag = tables_.struct_tags.find(ts.name);
    slot.base_name = tag != tables_.struct_tags.end() ? tag->second : ts.name;
    if (const StructInfo *si = tables_.find_struct(slot.base_name)) {
      slot.is_struct = true;
      slot.base_name = si->name;
      if (const ContractSlot *ms = model_type_slot(si->name)) {
        slot.unsafe_kinds = ms->unsafe_kinds;
        slot.fini_required = ms->fini_required;
      }
    }
    return slot;
  }

  const ContractSlot *model_type_slot(const std::string &name) const {
    auto it = tables_.typedefs.find(name);
    return it == tables_.typedefs.end() ? nullptr : &it->second;
  }

  void merge_site(ContractSlot &slot, const SiteAnnotations &site,
                  const std::string &subject) {
    if (site.heap_owning || site.owning) {
      if (slot.owning)
        diags_.emit(site.span, Code::AnnConflict,
                    {{"subject", subject},
                     {"detail", "ownership is already declared along the "
                                "type"}});
      slot.owning = true;
      slot.heap = slot.heap || site.heap_owning;
    }
    if (site.has_sentinel) {
      if (slot.optional)
        diags_.emit(site.span, Code::AnnConflict,
                    {{"subject", subject},
                     {"detail", "a sentinel is already declared along the "
                                "type"}});
      slot.optional = true;
      slot.sentinel = site.sentinel;
      slot.sentinel_is_null = site.sentinel_is_null;
    }
    if (site.has_value) {
      // Value predicates intersect along the chain.
      slot.value =
          slot.has_value ? MultiInterval::meet(slot.value, site.value)
                         : site.value;
      slot.has_value = true;
    }
    if (site.fini) {
      // On a parameter e_fini means "finalizes its referent"; on a type it
      // marks the type as requiring finalization. The caller decides which
      // via infer_mode / add_typedef.
      slot.fini_required = true;
    }
    if (site.init)
      slot.init = InitSpec::Initializes;
    else if (site.uninit)
      slot.init = InitSpec::Uninit;
    slot.explicit_shared = site.shared;
    slot.explicit_excl = site.exclusive;
    for (const PropAssign &p : site.pre)
      slot.pre.push_back(p);
    for (const PropAssign &p : site.post)
      slot.post.push_back(p);
    if (site.release)
      slot.mode = RefMode::Release; // finalized in infer_mode
  }

  void infer_mode(ContractSlot &slot, const SiteAnnotations &site,
                  const std::string &subject, bool is_param, bool is_return) {
    bool release = slot.mode == RefMode::Release;
    if (is_param && site.fini) {
      // channel_dtor(Channel_t * e_fini chanp): the parameter finalizes.
      slot.init = InitSpec::Finalizes;
      slot.fini_required = false;
      if (const ContractSlot *base = pointee_type_slot(slot))
        slot.fini_required = base->fini_required;
    }
    if (release) {
      slot.mode = RefMode::Release;
    } else if (slot.owning) {
      slot.mode = is_param ? RefMode::OwningIn
                  : is_return ? RefMode::OwningOut
                              : RefMode::Owning;
    } else if (site.exclusive) {
      slot.mode = RefMode::ExclRef;
      if (slot.pointer_depth > 0 && !slot.pointee_const)
        diags_.emit(site.span, Code::AnnRedundant,
                    {{"ann", "e_excl"},
                     {"subject", subject},
                     {"detail", "a non-const referent already implies an "
                                "exclusive reference"}});
    } else if (site.shared) {
      slot.mode = RefMode::SharedRef;
      if (slot.pointer_depth > 0 && slot.pointee_const)
        diags_.emit(site.span, Code::AnnRedundant,
                    {{"ann", "e_shar"},
                     {"subject", subject},
                     {"detail", "a const referent already implies a shared "
                                "reference"}});
    } else if (slot.pointer_depth > 0 && (is_param || is_return)) {
      slot.mode = is_return ? RefMode::Value
                  : slot.pointee_const ? RefMode::SharedRef
                                       : RefMode::ExclRef;
    } else {
      slot.mode = RefMode::Value;
    }
    if (slot.owning && slot.resource_class.empty())
      slot.resource_class = slot.heap ? "heap-block" : "resource";
  }

  // The resolved slot of a pointer slot's referent type, if it is a named
  // type we know.
  const ContractSlot *pointee_type_slot(const ContractSlot &slot) const {
    if (slot.base != BaseType::Named)
      return nullptr;
    return model_type_slot(slot.base_name);
  }

  void add_typedef(const Item &item) {
    const TypedefItem &td = item.tdef;
    if (tables_.typedefs.count(td.name)) {
      diags_.emit(td.name_span, Code::AnnConflict,
                  {{"subject", td.name},
                   {"detail", "type name is already defined"}});
      return;
    }

    // A typedef introduces a new struct when it carries a body, or names a
    // tag nothing has defined yet (`typedef struct Mixer Mixer_t;`).
    if (td.has_struct_body ||
        (td.type.is_struct_kw && td.type.pointers.empty() &&
         !tables_.struct_tags.count(td.type.name))) {
      add_struct_typedef(td);
      return;
    }

    SiteAnnotations site;
    ContractSlot slot = resolve_slot(td.type, td.name, /*is_param=*/false,
                                     /*is_return=*/false, nullptr, &site);
    if (site.nominal)
      slot.nominal = td.name;
    slot.name = td.name;
    slot.span = td.name_span;
    if (slot.owning && slot.resource_class.empty())
      slot.resource_class = slot.heap ? "heap-block" : "resource";
    tables_.typedefs[td.name] = std::move(slot);
  }

  void add_struct_typedef(const TypedefItem &td) {
    StructInfo info;
    info.name = td.name;
    info.tag = td.struct_tag;
    info.opaque = !td.has_struct_body;
    if (!td.struct_tag.empty())
      tables_.struct_tags[td.struct_tag] = td.name;
    tables_.struct_tags[td.name] = td.name;
    // Register the shell before members so self-references resolve.
    tables_.structs[td.name] = info;

    SiteAnnotations site =
        resolve_site_annotations(collect_annotations(td.type), td.name,
                                 diags_);
    ContractSlot slot;
    slot.base = BaseType::Named;
    slot.base_name = td.name;
    slot.is_struct = true;
    slot.pointer_depth = static_cast<int>(td.type.pointers.size());
    slot.name = td.name;
    slot.span = td.name_span;
    slot.fini_required = site.fini;
    for (const std::string &k : site.unsafe_kinds)
      add_unique(slot.unsafe_kinds, k);
    tables_.typedefs[td.name] = slot;

    if (td.has_struct_body) {
      StructInfo full = info;
      for (const MemberDecl &m : td.members) {
        StructMember sm;
        sm.name = m.name;
        sm.span = m.span;
        sm.slot = resolve_slot(m.type, m.name, /*is_param=*/false,
                               /*is_return=*/false);
        sm.slot.name = m.name;
        if (sm.slot.owning)
          sm.slot.mode = RefMode::Owning;
        full.members.push_back(std::move(sm));
      }
      full.opaque = false;
      tables_.structs[td.name] = std::move(full);
    }
  }

  void add_enum(const EnumItem &en) {
    int64_t next = 0;
    for (const Enumerator &e : en.enumerators) {
      int64_t v = e.value.value_or(next);
      tables_.enums[e.name] = v;
      next = v + 1;
    }
  }

  // A type name mentioned inside e_bop/e_uop/e_declprops arguments.
  struct NamedType {
    bool ok = false;
    std::string written;
    std::string nominal; // "" when the type is plain
    Span span;
  };

  NamedType read_type_name(const RawAnnotation &ann, size_t arg_index) {
    NamedType out;
    const auto &arg = ann.args[arg_index];
    if (arg.size() != 1) {
      emit_ann_arg(diags_, ann, "expected a type name");
      return out;
    }
    const Token &t = arg[0];
    out.written = t.text;
    out.span = t.span;
    if (t.kind == Tok::Keyword) {
      // A plain base type: fine, carries no nominal identity.
      out.ok = true;
      return out;
    }
    if (t.kind == Tok::Ident) {
      auto it = tables_.typedefs.find(t.text);
      if (it == tables_.typedefs.end()) {
        diags_.emit(t.span, Code::AnnUnknownType, {{"type", t.text}});
        return out;
      }
      out.ok = true;
      out.nominal = it->second.nominal;
      return out;
    }
    emit_ann_arg(diags_, ann, "expected a type name");
    return out;
  }

  void add_global_annotation(const RawAnnotation &ann) {
    switch (ann.kind) {
    case AnnKind::Bop: {
      if (ann.args.size() != 4) {
        emit_ann_arg(diags_, ann, "expected (result, lhs, op, rhs)");
        return;
      }
      NamedType result = read_type_name(ann, 0);
      NamedType lhs = read_type_name(ann, 1);
      if (ann.args[2].size() != 1 || ann.args[2][0].kind != Tok::Punct) {
        emit_ann_arg(diags_, ann, "expected an operator");
        return;
      }
      std::string op = ann.args[2][0].text;
      NamedType rhs = read_type_name(ann, 3);
      if (!result.ok || !lhs.ok || !rhs.ok)
        return;
      tables_.ops.binary[{op, lhs.nominal, rhs.nominal}] = result.nominal;
      break;
    }
    case AnnKind::Uop: {
      if (ann.args.size() != 3) {
        emit_ann_arg(diags_, ann, "expected (result, op, operand)");
        return;
      }
      NamedType result = read_type_name(ann, 0);
      if (ann.args[1].size() != 1 || ann.args[1][0].kind != Tok::Punct) {
        emit_ann_arg(diags_, ann, "expected an operator");
        return;
      }
      std::string op = ann.args[1][0].text;
      NamedType operand = read_type_name(ann, 2);
      if (!result.ok || !operand.ok)
        return;
      tables_.ops.unary[{op, operand.nominal}] = result.nominal;
      break;
    }
    case AnnKind::Declprops: {
      if (ann.args.size() < 2) {
        emit_ann_arg(diags_, ann, "expected (type, annotation...)");
        return;
      }
      apply_declprops(ann);
      break;
    }
    default:
      emit_ann_arg(diags_, ann, "not valid at file scope");
      break;
    }
  }

  void apply_declprops(const RawAnnotation &ann) {
    const auto &type_arg = ann.args[0];
    if (type_arg.size() != 1 || (type_arg[0].kind != Tok::Ident &&
                                 type_arg[0].kind != Tok::Keyword)) {
      emit_ann_arg(diags_, ann, "expected a type name");
      return;
    }
    const std::string &type_name = type_arg[0].text;
    auto it = tables_.typedefs.find(type_name);
    if (it == tables_.typedefs.end()) {
      diags_.emit(type_arg[0].span, Code::AnnUnknownType,
                  {{"type", type_name}});
      return;
    }

    // Each further argument is one annotation application, written as it
    // would be on a declarator.
    std::vector<RawAnnotation> raws;
    for (size_t i = 1; i < ann.args.size(); ++i) {
      const auto &toks = ann.args[i];
      if (toks.empty() || toks[0].kind != Tok::Annotation) {
        emit_ann_arg(diags_, ann, "expected an annotation");
        return;
      }
      const AnnSpec *spec = find_annotation(toks[0].text);
      if (!spec) {
        emit_ann_arg(diags_, ann, "expected an annotation");
        return;
      }
      RawAnnotation raw;
      raw.kind = spec->kind;
      raw.name = toks[0].text;
      raw.span = toks[0].span;
      if (toks.size() > 1) {
        if (!toks[1].is_punct("(") || !toks.back().is_punct(")")) {
          emit_ann_arg(diags_, ann,
                       "malformed annotation inside e_declprops");
          return;
        }
        raw.has_parens = true;
        std::vector<Token> cur;
        int depth = 0;
        for (size_t k = 2; k + 1 < toks.size(); ++k) {
          const Token &t = toks[k];
          if (t.is_punct("("))
            ++depth;
          else if (t.is_punct(")"))
            --depth;
          if (depth == 0 && t.is_punct(",")) {
            raw.args.push_back(std::move(cur));
            cur.clear();
          } else {
            cur.push_back(t);
          }
        }
        if (!cur.empty() || !raw.args.empty())
          raw.args.push_back(std::move(cur));
      }
      raws.push_back(std::move(raw));
    }

    SiteAnnotations site = resolve_site_annotations(raws, type_name, diags_);
    ContractSlot &slot = it->second;
    for (const std::string &k : site.unsafe_kinds)
      add_unique(slot.unsafe_kinds, k);
    if (site.fini)
      slot.fini_required = true;
    if (site.has_value) {
      slot.value = slot.has_value ? MultiInterval::meet(slot.value, site.value)
                                  : site.value;
      slot.has_value = true;
    }
    if (site.has_sentinel && !slot.optional) {
      slot.optional = true;
      slot.sentinel = site.sentinel;
      slot.sentinel_is_null = site.sentinel_is_null;
    }
  }

  void add_function(const FunctionItem &fn) {
    AnnotatedSignature sig;
    sig.name = fn.name;
    sig.span = fn.name_span;
    sig.has_body = fn.body != nullptr;
    sig.annotated = saw_inline_annotations(fn.ret);

    sig.ret = resolve_slot(fn.ret, fn.name, /*is_param=*/false,
                           /*is_return=*/true, &sig.unsafe_kinds);
    sig.ret.name = fn.name;
    for (const ParamDecl &p : fn.params) {
      std::string subject = p.name.empty()
                                ? "parameter " +
                                      std::to_string(sig.params.size() + 1)
                                : p.name;
      ContractSlot slot = resolve_slot(p.type, subject, /*is_param=*/true,
                                       /*is_return=*/false);
      slot.name = p.name;
      slot.span = p.name.empty() ? p.span : p.name_span;
      sig.annotated = sig.annotated || saw_inline_annotations(p.type);
      sig.params.push_back(std::move(slot));
    }
    sig.annotated = sig.annotated || !sig.unsafe_kinds.empty();

    auto it = tables_.functions.find(fn.name);
    if (it == tables_.functions.end()) {
      tables_.functions[fn.name] = std::move(sig);
      return;
    }
    AnnotatedSignature &prev = it->second;
    if (prev.from_model) {
      if (!sig.annotated && !sig.has_body)
        return; // plain redeclaration of a modeled function
      if (prev.contracts_equal(sig)) {
        // A faithful restatement of the model; keep the model entry (its
        // display metadata) but remember a body if one was provided.
        if (sig.has_body) {
          sig.from_model = false;
          // Carry the display classes over from the model.
          for (size_t i = 0; i < sig.params.size(); ++i)
            if (sig.params[i].resource_class.empty())
              sig.params[i].resource_class = prev.params[i].resource_class;
          if (sig.ret.resource_class.empty())
            sig.ret.resource_class = prev.ret.resource_class;
          prev = std::move(sig);
        }
        return;
      }
      diags_.emit(fn.name_span, Code::ModelConflict,
                  {{"function", fn.name},
                   {"detail", describe_difference(prev, sig)}});
      return;
    }
    // Redeclaration of a user function.
    if (!prev.contracts_equal(sig)) {
      diags_.emit(fn.name_span, Code::AnnConflict,
                  {{"subject", fn.name},
                   {"detail", "redeclared with a different contract"}});
      return;
    }
    if (sig.has_body)
      prev = std::move(sig);
  }

  static std::string describe_difference(const AnnotatedSignature &a,
                                         const AnnotatedSignature &b) {
    if (a.params.size() != b.params.size())
      return "parameter count differs";
    if (!(a.ret == b.ret))
      return "the return contract differs";
    for (size_t i = 0; i < a.params.size(); ++i)
      if (!(a.params[i] == b.params[i]))
        return "the contract of parameter " + std::to_string(i + 1) +
               " differs";
    return "the unsafety annotation differs";
  }

  void add_global_var(const GlobalVarItem &var) {
    GlobalInfo g;
    g.name = var.name;
    g.slot = resolve_slot(var.type, var.name, /*is_param=*/false,
                          /*is_return=*/false);
    g.slot.name = var.name;
    tables_.globals[var.name] = std::move(g);
  }
};

inline AnnotationTables build_annotation_tables(const TranslationUnit &tu,
                                                const ActiveModels &models,
                                                DiagnosticBag &diags) {
  return TableBuilder(models, diags).build(tu);
}

} // namespace crusted

#endif
