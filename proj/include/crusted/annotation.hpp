// Gives meaning to raw annotations: argument lists become sentinel constants,
// value multi-intervals, property assignments and unsafety kinds, and the
// annotations written at one declarator position are folded into a single
// record with conflict checking.

#ifndef CRUSTED_ANNOTATION_HPP
#define CRUSTED_ANNOTATION_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <crusted/ast.hpp>
#include <crusted/diagnostic.hpp>
#include <crusted/interval.hpp>
#include <crusted/lexer.hpp>
#include <crusted/registry.hpp>

namespace crusted {

// One `key=value` (or `key=?`) element of an e_in/e_out list.
struct PropAssign {
  std::string key;
  std::string value;      // empty when any_value
  bool any_value = false; // written as `key=?`
  Span span;

  friend bool operator==(const PropAssign &a, const PropAssign &b) {
    return a.key == b.key && a.value == b.value && a.any_value == b.any_value;
  }
};

// The annotations attached to one declarator position, resolved.
struct SiteAnnotations {
  bool heap_owning = false; // e_hown
  bool owning = false;      // e_own
  bool exclusive = false;   // e_excl
  bool shared = false;      // e_shar
  bool nominal = false;     // e_type
  bool init = false;        // e_init
  bool uninit = false;      // e_uninit
  bool fini = false;        // e_fini
  bool release = false;     // e_release

  bool has_sentinel = false;
  int64_t sentinel = 0;
  bool sentinel_is_null = false;

  bool has_value = false;
  MultiInterval value = MultiInterval::full();

  std::vector<PropAssign> pre;  // e_in
  std::vector<PropAssign> post; // e_out
  std::vector<std::string> unsafe_kinds;

  Span span; // first annotation seen

  bool any() const {
    return heap_owning || owning || exclusive || shared || nominal || init ||
           uninit || fini || release || has_sentinel || has_value ||
           !pre.empty() || !post.empty() || !unsafe_kinds.empty();
  }
};

namespace detail {

// Cursor over one raw argument's token list.
struct ArgCursor {
  const std::vector<Token> *toks;
  size_t i = 0;

  bool done() const { return i >= toks->size(); }
  const Token &peek() const {
    static const Token eof{};
    return done() ? eof : (*toks)[i];
  }
  const Token &take() {
    const Token &t = peek();
    if (!done())
      ++i;
    return t;
  }
};

struct AnnConst {
  bool ok = false;
  int64_t value = 0;
  bool is_null = false;
  bool is_float = false;
  double fvalue = 0.0;
};

// Integer or floating constant, possibly negated, possibly a built-in name.
inline AnnConst read_constant(ArgCursor &cur) {
  AnnConst out;
  bool neg = false;
  if (cur.peek().is_punct("-")) {
    cur.take();
    neg = true;
  }
  const Token &t = cur.peek();
  if (t.kind == Tok::IntLit) {
    cur.take();
    out.ok = true;
    out.value = neg ? -t.int_value : t.int_value;
    return out;
  }
  if (t.kind == Tok::FloatLit) {
    cur.take();
    out.ok = true;
    out.is_float = true;
    out.fvalue = neg ? -t.float_value : t.float_value;
    return out;
  }
  if (t.kind == Tok::CharLit) {
    cur.take();
    out.ok = true;
    out.value = neg ? -t.int_value : t.int_value;
    return out;
  }
  if (!neg && t.kind == Tok::Ident) {
    if (const NamedConstant *c = find_constant(t.text)) {
      cur.take();
      out.ok = true;
      out.value = c->value;
      out.is_null = c->is_null;
      return out;
    }
  }
  return out;
}

// Floating predicate bounds are rounded outward so the described set only
// ever grows: floor for lower bounds, ceil for upper bounds.
inline int64_t lower_bound_of(const AnnConst &c) {
  return c.is_float ? static_cast<int64_t>(std::floor(c.fvalue)) : c.value;
}
inline int64_t upper_bound_of(const AnnConst &c) {
  return c.is_float ? static_cast<int64_t>(std::ceil(c.fvalue)) : c.value;
}

} // namespace detail

inline void emit_ann_arg(DiagnosticBag &diags, const RawAnnotation &ann,
                         const std::string &detail) {
  diags.emit(ann.span, Code::AnnArg,
             {{"ann", ann.name}, {"detail", detail}});
}

// e_val argument: `pred (|| pred)*` with pred one of e_geq(c), e_range(a,b),
// e_eq(c). Returns the union of the predicates, or nothing on a malformed
// argument (diagnosed).
inline std::optional<MultiInterval>
parse_value_predicate(const RawAnnotation &ann, DiagnosticBag &diags) {
  if (ann.args.size() != 1 || ann.args[0].empty()) {
    emit_ann_arg(diags, ann, "expected a single predicate argument");
    return std::nullopt;
  }
  detail::ArgCursor cur{&ann.args[0]};
  MultiInterval acc = MultiInterval::empty();
  for (;;) {
    const Token &name = cur.take();
    if (name.kind != Tok::Annotation || !is_predicate_name(name.text)) {
      emit_ann_arg(diags, ann, "expected e_geq, e_range or e_eq");
      return std::nullopt;
    }
    if (!cur.take().is_punct("(")) {
      emit_ann_arg(diags, ann, "expected '(' after " + name.text);
      return std::nullopt;
    }
    detail::AnnConst a = detail::read_constant(cur);
    if (!a.ok) {
      emit_ann_arg(diags, ann, "expected a constant in " + name.text);
      return std::nullopt;
    }
    if (name.text == "e_range") {
      if (!cur.take().is_punct(",")) {
        emit_ann_arg(diags, ann, "e_range takes two constants");
        return std::nullopt;
      }
      detail::AnnConst b = detail::read_constant(cur);
      if (!b.ok) {
        emit_ann_arg(diags, ann, "expected a constant in e_range");
        return std::nullopt;
      }
      int64_t lo = detail::lower_bound_of(a), hi = detail::upper_bound_of(b);
      if (lo > hi) {
        emit_ann_arg(diags, ann,
                     "lower bound " + std::to_string(lo) +
                         " exceeds upper bound " + std::to_string(hi));
        return std::nullopt;
      }
      acc = MultiInterval::join(acc, MultiInterval::range(lo, hi));
    } else if (name.text == "e_geq") {
      acc = MultiInterval::join(acc,
                                MultiInterval::at_least(detail::lower_bound_of(a)));
    } else { // e_eq
      if (a.is_float) {
        emit_ann_arg(diags, ann, "e_eq requires an integer constant");
        return std::nullopt;
      }
      acc = MultiInterval::join(acc, MultiInterval::point(a.value));
    }
    if (!cur.take().is_punct(")")) {
      emit_ann_arg(diags, ann, "expected ')' after " + name.text);
      return std::nullopt;
    }
    if (cur.done())
      break;
    if (!cur.take().is_punct("||")) {
      emit_ann_arg(diags, ann, "predicates are combined with '||'");
      return std::nullopt;
    }
  }
  return acc;
}

// e_opt argument: an integer sentinel constant (NULL, -1, EOF, ...).
struct SentinelArg {
  int64_t value = 0;
  bool is_null = false;
};

inline std::optional<SentinelArg> parse_sentinel(const RawAnnotation &ann,
                                                 DiagnosticBag &diags) {
  if (ann.args.size() != 1 || ann.args[0].empty()) {
    emit_ann_arg(diags, ann, "expected a single sentinel constant");
    return std::nullopt;
  }
  detail::ArgCursor cur{&ann.args[0]};
  detail::AnnConst c = detail::read_constant(cur);
  if (!c.ok || c.is_float || !cur.done()) {
    emit_ann_arg(diags, ann, "expected an integer sentinel constant");
    return std::nullopt;
  }
  return SentinelArg{c.value, c.is_null};
}

// e_in/e_out arguments: each is `key = value` or `key = ?`.
inline std::optional<std::vector<PropAssign>>
parse_prop_assigns(const RawAnnotation &ann, bool allow_any,
                   DiagnosticBag &diags) {
  if (ann.args.empty()) {
    emit_ann_arg(diags, ann, "expected key=value arguments");
    return std::nullopt;
  }
  std::vector<PropAssign> out;
  for (const auto &arg : ann.args) {
    detail::ArgCursor cur{&arg};
    const Token &key = cur.take();
    if (key.kind != Tok::Ident) {
      emit_ann_arg(diags, ann, "expected a property name");
      return std::nullopt;
    }
    if (!cur.take().is_punct("=")) {
      emit_ann_arg(diags, ann, "expected '=' after property name");
      return std::nullopt;
    }
    PropAssign pa;
    pa.key = key.text;
    pa.span = key.span;
    const Token &val = cur.take();
    if (val.is_punct("?")) {
      if (!allow_any) {
        emit_ann_arg(diags, ann, "'?' is only meaningful in e_out");
        return std::nullopt;
      }
      pa.any_value = true;
    } else if (val.kind == Tok::Ident) {
      pa.value = val.text;
    } else {
      emit_ann_arg(diags, ann, "expected a property value or '?'");
      return std::nullopt;
    }
    if (!cur.done()) {
      emit_ann_arg(diags, ann, "trailing tokens after property value");
      return std::nullopt;
    }
    for (const PropAssign &prev : out)
      if (prev.key == pa.key) {
        emit_ann_arg(diags, ann, "property '" + pa.key + "' listed twice");
        return std::nullopt;
      }
    out.push_back(std::move(pa));
  }
  return out;
}

// e_unsafe / e_checked / e_unchecked argument: one string literal.
inline std::optional<std::string> parse_kind_string(const RawAnnotation &ann,
                                                    DiagnosticBag &diags) {
  if (ann.args.size() != 1 || ann.args[0].size() != 1 ||
      ann.args[0][0].kind != Tok::StringLit) {
    emit_ann_arg(diags, ann, "expected a string literal naming the kind");
    return std::nullopt;
  }
  return ann.args[0][0].value;
}

namespace detail {

inline void conflict(DiagnosticBag &diags, Span span,
                     const std::string &subject, const std::string &det) {
  diags.emit(span, Code::AnnConflict, {{"subject", subject}, {"detail", det}});
}

} // namespace detail

// Folds the raw annotations written at one declarator position into one
// record. `subject` names the declarator for diagnostics.
inline SiteAnnotations
resolve_site_annotations(const std::vector<RawAnnotation> &raws,
                         const std::string &subject, DiagnosticBag &diags) {
  SiteAnnotations out;
  bool first = true;
  auto set_flag = [&](bool &flag, const RawAnnotation &ann) {
    if (flag)
      detail::conflict(diags, ann.span, subject, "duplicate " + ann.name);
    flag = true;
  };
  for (const RawAnnotation &ann : raws) {
    if (first) {
      out.span = ann.span;
      first = false;
    }
    switch (ann.kind) {
    case AnnKind::Hown:
      set_flag(out.heap_owning, ann);
      break;
    case AnnKind::Own:
      set_flag(out.owning, ann);
      break;
    case AnnKind::OptHown:
      // Built-in shorthand for e_opt(NULL) e_hown.
      set_flag(out.heap_owning, ann);
      if (out.has_sentinel) {
        detail::conflict(diags, ann.span, subject,
                         "duplicate sentinel via " + ann.name);
      } else {
        out.has_sentinel = true;
        out.sentinel = 0;
        out.sentinel_is_null = true;
      }
      break;
    case AnnKind::Opt: {
      if (out.has_sentinel) {
        detail::conflict(diags, ann.span, subject, "duplicate e_opt");
        break;
      }
      if (auto s = parse_sentinel(ann, diags)) {
        out.has_sentinel = true;
        out.sentinel = s->value;
        out.sentinel_is_null = s->is_null;
      }
      break;
    }
    case AnnKind::Excl:
      set_flag(out.exclusive, ann);
      break;
    case AnnKind::Shar:
      set_flag(out.shared, ann);
      break;
    case AnnKind::Type:
      set_flag(out.nominal, ann);
      break;
    case AnnKind::Val: {
      if (auto v = parse_value_predicate(ann, diags)) {
        // Repeating e_val narrows: both predicates must hold.
        out.value = out.has_value ? MultiInterval::meet(out.value, *v) : *v;
        out.has_value = true;
      }
      break;
    }
    case AnnKind::Init:
      set_flag(out.init, ann);
      break;
    case AnnKind::Uninit:
      set_flag(out.uninit, ann);
      break;
    case AnnKind::Fini:
      set_flag(out.fini, ann);
      break;
    case AnnKind::Release:
      set_flag(out.release, ann);
      break;
    case AnnKind::In: {
      if (auto ps = parse_prop_assigns(ann, /*allow_any=*/false, diags))
        for (PropAssign &p : *ps)
          out.pre.push_back(std::move(p));
      break;
    }
    case AnnKind::Out: {
      if (auto ps = parse_prop_assigns(ann, /*allow_any=*/true, diags))
        for (PropAssign &p : *ps)
          out.post.push_back(std::move(p));
      break;
    }
    case AnnKind::Unsafe: {
      if (auto k = parse_kind_string(ann, diags))
        out.unsafe_kinds.push_back(std::move(*k));
      break;
    }
    case AnnKind::Checked:
    case AnnKind::Unchecked:
      emit_ann_arg(diags, ann,
                   ann.name + " is a statement form, not a type annotation");
      break;
    case AnnKind::Bop:
    case AnnKind::Uop:
    case AnnKind::Declprops:
      emit_ann_arg(diags, ann,
                   ann.name + " is only valid at file scope");
      break;
    }
  }

  // Contradictory combinations.
  if (out.heap_owning && out.owning)
    detail::conflict(diags, out.span, subject,
                     "e_hown and e_own name different resource classes");
  if (out.exclusive && out.shared)
    detail::conflict(diags, out.span, subject,
                     "e_excl and e_shar are mutually exclusive");
  if (out.init && out.uninit)
    detail::conflict(diags, out.span, subject,
                     "e_init and e_uninit are mutually exclusive");
  if (out.init && out.release)
    detail::conflict(diags, out.span, subject,
                     "e_init and e_release are mutually exclusive");
  if ((out.exclusive || out.shared) && (out.heap_owning || out.owning))
    detail::conflict(diags, out.span, subject,
                     "a reference cannot be both borrowed and owning");
  return out;
}

// All raw annotations attached to a type syntax, base first, then pointer
// levels outward. For the mini subset's single-level pointers this is the
// full annotation list of the declarator.
inline std::vector<RawAnnotation> collect_annotations(const TypeSyntax &ts) {
  std::vector<RawAnnotation> out = ts.base_anns;
  for (const PointerLevel &pl : ts.pointers)
    for (const RawAnnotation &a : pl.anns)
      out.push_back(a);
  return out;
}

} // namespace crusted

#endif
