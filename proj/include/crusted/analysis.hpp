// The per-function analysis: a worklist fixpoint over the lowered graph,
// followed by one reporting walk with the fixed block-entry states.
//
// The same transfer function runs in both phases; only the reporting walk
// hands diagnostics to the bag. That keeps the fixpoint free to revisit
// blocks as often as it needs without duplicating or re-wording anything,
// and it makes the leak qualifier ("is" vs "may be") depend only on the
// final states.
//
// Calls drive most of the checking. For every argument, in order: the value
// itself is checked by evaluating it; then optionality against the
// parameter; then initialization of whatever it references; then the
// nominal tag; then the declared value range; then preconditions; then the
// ownership effect. After the arguments, postconditions and initialization
// effects apply and the result is bound. How much of this runs depends on
// what is known about the callee: an undeclared function only gets value
// checks and an ownership warning for owned arguments; a declaration
// without any contract information adds the default
// referent-initialization checks; anything with a contract gets the full
// sequence.

#ifndef CRUSTED_ANALYSIS_HPP
#define CRUSTED_ANALYSIS_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "crusted/abstract_state.hpp"
#include "crusted/diagnostic.hpp"
#include "crusted/ir.hpp"
#include "crusted/registry.hpp"
#include "crusted/type_table.hpp"

namespace crusted {

struct AnalysisStats {
  int max_block_visits = 0;
  bool hit_visit_cap = false;
  int single_owner_violations = 0;
};

struct AnalysisResult {
  AnalysisStats stats;
  std::vector<AbstractState> block_in; // fixed entry state per block
};

// How much the analysis knows about a callee.
enum class CalleeTrust {
  Undeclared,   // no declaration at all
  ContractFree, // declared, but no annotation-derived information
  Contracted,   // model, annotated, or carries typedef-borne contracts
};

namespace detail {

inline bool slot_has_contract(const ContractSlot &s) {
  return s.owning || s.optional || !s.nominal.empty() || s.has_value ||
         !s.pre.empty() || !s.post.empty() || s.init != InitSpec::Default ||
         s.fini_required || !s.unsafe_kinds.empty() ||
         s.mode == RefMode::Release || s.explicit_shared || s.explicit_excl;
}

inline CalleeTrust trust_of(const AnnotatedSignature *sig) {
  if (!sig)
    return CalleeTrust::Undeclared;
  if (sig->from_model || sig->has_body || sig->annotated)
    return CalleeTrust::Contracted;
  if (slot_has_contract(sig->ret))
    return CalleeTrust::Contracted;
  for (const ContractSlot &p : sig->params)
    if (slot_has_contract(p))
      return CalleeTrust::Contracted;
  return CalleeTrust::ContractFree;
}

inline std::string unary_op_display(const std::string &op) {
  if (op == "++")
    return "increment";
  if (op == "--")
    return "decrement";
  if (op == "-")
    return "negation";
  if (op == "!")
    return "logical negation";
  return "operator '" + op + "'";
}

inline bool is_comparison(const std::string &op) {
  return op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" ||
         op == ">=";
}

inline std::string flip_comparison(const std::string &op) {
  if (op == "<")
    return ">";
  if (op == "<=")
    return ">=";
  if (op == ">")
    return "<";
  if (op == ">=")
    return "<=";
  return op; // == and != are symmetric
}

inline std::string negate_comparison(const std::string &op) {
  if (op == "==")
    return "!=";
  if (op == "!=")
    return "==";
  if (op == "<")
    return ">=";
  if (op == "<=")
    return ">";
  if (op == ">")
    return "<=";
  return "<"; // ">="
}

} // namespace detail

class FunctionAnalysis {
public:
  FunctionAnalysis(const Cfg &cfg, const AnnotatedSignature &sig,
                   const AnnotationTables &tables, DiagnosticBag &diags)
      : cfg_(cfg), sig_(sig), tables_(tables), diags_(diags) {}

  AnalysisResult run() {
    compute_liveness();
    AbstractState entry = entry_state();

    std::vector<int> rpo = reverse_postorder(cfg_);
    std::map<int, int> rpo_index;
    for (size_t i = 0; i < rpo.size(); ++i)
      rpo_index[rpo[i]] = static_cast<int>(i);

    std::vector<AbstractState> in(cfg_.blocks.size());
    std::vector<int> visits(cfg_.blocks.size(), 0);
    in[cfg_.entry] = entry;

    // Worklist ordered by reverse postorder position.
    std::set<std::pair<int, int>> work;
    work.insert({rpo_index[cfg_.entry], cfg_.entry});
    while (!work.empty()) {
      int b = work.begin()->second;
      work.erase(work.begin());
      if (!in[b].reachable)
        continue;
      if (++visits[b] > kVisitCap) {
        stats_.hit_visit_cap = true;
        continue;
      }
      stats_.max_block_visits = std::max(stats_.max_block_visits, visits[b]);

      std::vector<std::pair<int, AbstractState>> edges;
      transfer_block(b, in[b], false, edges);
      for (auto &[succ, st] : edges) {
        bool widen = cfg_.blocks[succ].loop_head && visits[b] >= kWidenAfter;
        AbstractState merged = widen ? AbstractState::widen(in[succ], st)
                                     : AbstractState::join(in[succ], st);
        if (!(merged == in[succ])) {
          in[succ] = std::move(merged);
          work.insert({rpo_index[succ], succ});
        }
      }
    }

    // Reporting pass: one walk per reachable block with the fixed states.
    for (int b : rpo) {
      if (!in[b].reachable)
        continue;
      std::vector<std::pair<int, AbstractState>> edges;
      transfer_block(b, in[b], true, edges);
    }

    AnalysisResult res;
    res.stats = stats_;
    res.block_in = std::move(in);
    return res;
  }

  const PlaceTable &places() const { return places_; }

  // Post-hoc audit of a finished run: re-applies the transfer function to
  // every reachable block's fixed entry state and checks that each edge
  // output is covered by the successor's entry state. Only meaningful when
  // the run did not bail at the visit cap.
  bool fixpoint_holds(const AnalysisResult &res) {
    for (size_t b = 0; b < cfg_.blocks.size(); ++b) {
      if (b >= res.block_in.size() || !res.block_in[b].reachable)
        continue;
      std::vector<std::pair<int, AbstractState>> edges;
      transfer_block(static_cast<int>(b), res.block_in[b], false, edges);
      for (auto &[succ, st] : edges)
        if (!st.leq(res.block_in[succ]))
          return false;
    }
    return true;
  }

private:
  static constexpr int kVisitCap = 64;
  static constexpr int kWidenAfter = 3;

  const Cfg &cfg_;
  const AnnotatedSignature &sig_;
  const AnnotationTables &tables_;
  DiagnosticBag &diags_;
  PlaceTable places_;
  AnalysisStats stats_;
  bool emitting_ = false;

  std::map<std::pair<uint32_t, uint32_t>, uint32_t> site_ids_;
  uint32_t next_resource_id_ = 1;

  // Property maps of parameter referents on entry, for the frame rule.
  std::map<PlaceId, PropertyMap> entry_props_;

  // Liveness: places (by id) read strictly after a given program point.
  // live_after_[b][i] is the set after executing instruction i of block b;
  // index instrs.size() is the set entering the terminator evaluation.
  std::vector<std::vector<std::set<PlaceId>>> live_after_;

  void report(Span span, Code code, Payload payload) {
    if (emitting_)
      diags_.emit(span, code, std::move(payload));
  }

  // --- small helpers -------------------------------------------------------

  static const Expr *strip(const Expr *e) {
    while (e && e->kind == ExprKind::Paren)
      e = e->a.get();
    return e;
  }

  uint32_t resource_id_for(Span site) {
    auto key = std::make_pair(site.line, site.col);
    auto it = site_ids_.find(key);
    if (it != site_ids_.end())
      return it->second;
    uint32_t id = next_resource_id_++;
    site_ids_[key] = id;
    return id;
  }

  std::string sentinel_display(const Typestate &ts, bool pointer_like) const {
    if (!ts.has_sentinel())
      return "";
    int64_t s = *ts.sentinels().begin();
    if (pointer_like && s == 0)
      return "NULL";
    return std::to_string(s);
  }

  // Resolves a written type against the tables; used for local declarations
  // and cast targets. Typedef chains contribute their recorded contracts.
  ContractSlot resolve_type(const TypeSyntax &tsx,
                            const std::string &subject) const {
    ContractSlot slot;
    if (tsx.base == BaseType::Named) {
      auto it = tables_.typedefs.find(tsx.name);
      if (it != tables_.typedefs.end())
        slot = it->second;
      else {
        slot.base = BaseType::Named;
        slot.base_name = tsx.name;
        slot.is_struct = tables_.struct_tags.count(tsx.name) != 0 ||
                         tables_.structs.count(tsx.name) != 0 ||
                         tsx.is_struct_kw;
      }
    } else {
      slot.base = tsx.base;
    }
    if (!tsx.pointers.empty()) {
      slot.pointee_const = tsx.base_const || slot.pointee_const;
      slot.pointer_depth += static_cast<int>(tsx.pointers.size());
    }
    slot.name = subject;
    return slot;
  }

  const StructInfo *struct_of(const ContractSlot &slot) const {
    if (slot.base != BaseType::Named)
      return nullptr;
    return tables_.find_struct(slot.base_name);
  }

  // --- liveness ------------------------------------------------------------

  void uses_of(const Expr *e, std::set<PlaceId> &out, bool lvalue) const {
    e = strip(e);
    if (!e)
      return;
    switch (e->kind) {
    case ExprKind::Ident: {
      if (lvalue)
        return; // plain ident as assignment target is a def, not a use
      PlaceId p = places_.find_named(RootKind::Local, e->text);
      if (p == kNoPlace)
        p = places_.find_named(RootKind::Param, e->text);
      if (p == kNoPlace)
        p = places_.find_named(RootKind::Global, e->text);
      if (p != kNoPlace)
        out.insert(p);
      return;
    }
    case ExprKind::Assign:
      uses_of(e->a.get(), out, true);
      uses_of(e->b.get(), out, false);
      return;
    case ExprKind::Unary:
      // ++/-- and & read the operand location; treat as uses.
      uses_of(e->a.get(), out, false);
      return;
    case ExprKind::Index:
    case ExprKind::Member:
      // Base and index are read even when the element is written.
      uses_of(e->a.get(), out, false);
      uses_of(e->b.get(), out, false);
      return;
    default:
      uses_of(e->a.get(), out, false);
      uses_of(e->b.get(), out, false);
      for (const auto &arg : e->args)
        uses_of(arg.get(), out, false);
      return;
    }
  }

  void compute_liveness() {
    // Places must exist before liveness can name them; pre-intern every
    // declared name (params, locals, globals used by name).
    for (size_t i = 0; i < sig_.params.size(); ++i)
      if (!sig_.params[i].name.empty())
        places_.named(RootKind::Param, sig_.params[i].name);
    for (const Block &b : cfg_.blocks)
      for (const Instr &in : b.instrs)
        if (in.kind == InstrKind::Decl)
          places_.named(RootKind::Local, in.decl->name);
    for (const auto &[name, g] : tables_.globals)
      places_.named(RootKind::Global, name);

    size_t nb = cfg_.blocks.size();
    live_after_.assign(nb, {});
    std::vector<std::set<PlaceId>> live_in(nb), live_out(nb);
    for (size_t b = 0; b < nb; ++b)
      live_after_[b].assign(cfg_.blocks[b].instrs.size() + 1, {});

    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t bi = nb; bi-- > 0;) {
        const Block &b = cfg_.blocks[bi];
        std::set<PlaceId> live;
        for (int s : b.successors())
          live.insert(live_in[s].begin(), live_in[s].end());
        live_out[bi] = live;
        if (b.term.kind == TermKind::Branch)
          uses_of(b.term.cond, live, false);
        live_after_[bi][b.instrs.size()] = live;
        for (size_t i = b.instrs.size(); i-- > 0;) {
          const Instr &in = b.instrs[i];
          switch (in.kind) {
          case InstrKind::Decl: {
            PlaceId p = places_.find_named(RootKind::Local, in.decl->name);
            if (p != kNoPlace)
              live.erase(p);
            uses_of(in.decl->init.get(), live, false);
            break;
          }
          case InstrKind::Expr: {
            const Expr *e = strip(in.expr);
            if (e && e->kind == ExprKind::Assign) {
              const Expr *lhs = strip(e->a.get());
              if (lhs && lhs->kind == ExprKind::Ident) {
                PlaceId p = places_.find_named(RootKind::Local, lhs->text);
                if (p == kNoPlace)
                  p = places_.find_named(RootKind::Param, lhs->text);
                if (p == kNoPlace)
                  p = places_.find_named(RootKind::Global, lhs->text);
                if (p != kNoPlace)
                  live.erase(p);
              }
            }
            uses_of(in.expr, live, false);
            break;
          }
          case InstrKind::Return:
            uses_of(in.expr, live, false);
            break;
          default:
            break;
          }
          if (i > 0)
            live_after_[bi][i - 1] = live;
        }
        if (live != live_in[bi]) {
          live_in[bi] = live;
          changed = true;
        }
      }
    }
  }

  // --- entry state ---------------------------------------------------------

  AbstractState entry_state() {
    AbstractState st;
    st.reachable = true;

    for (const auto &[name, g] : tables_.globals) {
      PlaceId p = places_.named(RootKind::Global, name);
      places_.info(p).slot = g.slot;
      places_.info(p).has_slot = true;
      st.ts[p] = Typestate::init();
      if (g.slot.has_value)
        st.vals[p] = g.slot.value;
      if (!g.slot.nominal.empty())
        st.tags[p] = g.slot.nominal;
    }

    for (size_t i = 0; i < sig_.params.size(); ++i) {
      const ContractSlot &slot = sig_.params[i];
      if (slot.name.empty())
        continue;
      PlaceId p = places_.named(RootKind::Param, slot.name);
      places_.info(p).root = RootKind::Param;
      places_.info(p).param_index = static_cast<int>(i);
      places_.info(p).slot = slot;
      places_.info(p).has_slot = true;

      Typestate ts;
      if (slot.owning) {
        uint32_t id = resource_id_for(slot.span.valid() ? slot.span
                                                        : sig_.span);
        ResourceInfo r;
        r.id = id;
        r.res_class = slot.resource_class;
        r.site_line = slot.span.valid() ? slot.span.line : sig_.span.line;
        r.possibly = slot.optional;
        if (slot.pointer_depth > 0) {
          PlaceId ref = places_.pointee_of(p);
          r.contents = ref;
          st.ts[ref] = slot.init == InitSpec::Uninit ? Typestate::uninit()
                                                     : Typestate::init();
          st.refs[p] = {ref};
        }
        st.resources[id] = r;
        ts = Typestate::owned(id);
      } else if (slot.pointer_depth > 0) {
        ts = slot.mode == RefMode::SharedRef ? Typestate::shared_ref()
                                             : Typestate::excl_ref();
        PlaceId ref = places_.pointee_of(p);
        st.refs[p] = {ref};
        switch (slot.init) {
        case InitSpec::Initializes:
        case InitSpec::Uninit:
          st.ts[ref] = Typestate::uninit();
          break;
        default:
          st.ts[ref] = Typestate::init();
          break;
        }
      } else {
        ts = Typestate::init();
      }
      if (slot.optional)
        ts = Typestate::join(ts, Typestate::sentinel(slot.sentinel));
      st.ts[p] = ts;

      if (slot.has_value)
        st.vals[p] = slot.value;
      if (!slot.nominal.empty())
        st.tags[p] = slot.nominal;

      // Preconditions seed the referent's (or the value's) property map.
      if (!slot.pre.empty()) {
        PlaceId target = slot.pointer_depth > 0 ? places_.pointee_of(p) : p;
        PropertyMap &pm = st.props[target];
        for (const PropAssign &a : slot.pre) {
          if (a.any_value)
            pm.assign_unknown(a.key);
          else
            pm.assign(a.key, a.value);
        }
      }
      if (slot.pointer_depth > 0) {
        PlaceId target = places_.pointee_of(p);
        auto it = st.props.find(target);
        entry_props_[target] =
            it == st.props.end() ? PropertyMap() : it->second;
      }
    }
    return st;
  }

  // --- expression evaluation ----------------------------------------------

  struct AbsVal {
    Typestate ts = Typestate::unknown();
    MultiInterval val = MultiInterval::full();
    std::string tag;
    std::set<PlaceId> refs;   // referents, when the value is a reference
    PlaceId place = kNoPlace; // the place read, when the value came from one
    ContractSlot slot;        // static type, when known
    bool has_slot = false;
    bool is_unsigned = false;

    bool pointer_like() const {
      return (has_slot && slot.pointer_depth > 0) || !refs.empty();
    }
  };

  AbsVal const_val(int64_t v, bool uns = false) {
    AbsVal r;
    r.ts = Typestate::init();
    r.val = MultiInterval::point(v);
    r.is_unsigned = uns;
    return r;
  }

  bool in_checked_block(const AbstractState &st, const std::string &kind) {
    for (const UnsafeBracket &b : st.unsafe_stack)
      if (b.kind == kind)
        return true;
    return false;
  }

  void check_unsafe_access(AbstractState &st, const ContractSlot &base_slot,
                           const Expr *e) {
    for (const std::string &k : base_slot.unsafe_kinds) {
      if (!in_checked_block(st, k))
        report(e->span, Code::UnsafeAccess,
               {{"place", expr_to_string(e)}, {"kind", k}});
    }
  }

  // A direct access (read or write) to a place, checked against the live
  // borrows. An access that goes through a borrow's own holder (`via`)
  // never conflicts with that borrow.
  void check_borrow_conflict(AbstractState &st, PlaceId target, bool is_write,
                             Span span, const std::string &display,
                             size_t block, size_t instr_index,
                             PlaceId via = kNoPlace) {
    for (const Borrow &b : st.borrows) {
      if (b.target != target)
        continue;
      if (via != kNoPlace && b.holder == via)
        continue;
      if (!live_after(block, instr_index, b.holder))
        continue;
      if (b.exclusive) {
        report(span, Code::ExclViolation,
               {{"mode", "excl"},
                {"place", display},
                {"borrower", places_.display(b.holder)}});
      } else if (is_write) {
        report(span, Code::ExclViolation,
               {{"mode", "borrowed-shared"},
                {"place", display},
                {"borrower", places_.display(b.holder)}});
      }
    }
  }

  bool live_after(size_t block, size_t instr_index, PlaceId p) const {
    if (block >= live_after_.size())
      return false;
    const auto &v = live_after_[block];
    if (instr_index >= v.size())
      return false;
    return v[instr_index].count(p) != 0;
  }

  struct EvalCtx {
    size_t block = 0;
    size_t instr = 0;
  };

  PlaceId lookup_place(const std::string &name) const {
    PlaceId p = places_.find_named(RootKind::Local, name);
    if (p == kNoPlace)
      p = places_.find_named(RootKind::Param, name);
    if (p == kNoPlace)
      p = places_.find_named(RootKind::Global, name);
    return p;
  }

  // Reads the value currently stored in a place, with use checks.
  AbsVal read_place(AbstractState &st, PlaceId p, const Expr *e,
                    const EvalCtx &ctx) {
    AbsVal v;
    v.place = p;
    if (places_.info(p).has_slot) {
      v.slot = places_.info(p).slot;
      v.has_slot = true;
      v.is_unsigned = v.slot.base == BaseType::Unsigned ||
                      v.slot.base == BaseType::SizeT;
    }
    Typestate ts = st.ts_of(p);
    bool stale = false;
    if (ts.has(Typestate::AUninit)) {
      report(e->span, Code::UninitUse, {{"place", expr_to_string(e)}});
      stale = true;
    }
    if (ts.has(Typestate::AMoved)) {
      report(e->span, Code::UseAfterMove, {{"place", expr_to_string(e)}});
      stale = true;
    }
    if (ts.has(Typestate::AReleased)) {
      report(e->span, Code::UseAfterRelease, {{"place", expr_to_string(e)}});
      stale = true;
    }
    check_borrow_conflict(st, p, false, e->span, expr_to_string(e), ctx.block,
                          ctx.instr);
    if (stale) {
      // The defect is reported at this read; treat the value as opaque so
      // one bad read does not echo through every later use of the copy.
      v.ts = Typestate::unknown();
      return v;
    }
    v.ts = ts.is_bottom() ? Typestate::unknown() : ts;
    v.val = st.val_of(p);
    v.tag = st.tag_of(p);
    if (const auto *r = st.refs_of(p))
      v.refs = *r;
    return v;
  }

  // The places an expression's referent set denotes when used as a pointer.
  // For &x it is {x}; for a pointer-typed value it is its tracked referents.
  std::set<PlaceId> referents_of(const AbsVal &v) const { return v.refs; }

  // Checks a dereference-style use of `base` (deref, index, member arrow):
  // the base must not be a dangling or optional-without-check reference.
  void check_deref_base(const AbsVal &base, const Expr *base_expr,
                        Span access_span) {
    if (base.ts.has_sentinel()) {
      report(access_span, Code::OptDeref,
             {{"place", expr_to_string(base_expr)},
              {"sentinel", sentinel_display(base.ts, base.pointer_like())}});
    }
  }

  // Reading through a reference: propagate the referents' state.
  AbsVal read_referents(AbstractState &st, const AbsVal &base, const Expr *e,
                        const EvalCtx &ctx) {
    AbsVal v;
    if (base.has_slot && base.slot.pointer_depth > 0) {
      v.slot = base.slot;
      v.slot.pointer_depth -= 1;
      v.has_slot = true;
    }
    bool any = false;
    Typestate joined;
    for (PlaceId r : base.refs) {
      any = true;
      joined = Typestate::join(joined, st.ts_of(r));
      check_borrow_conflict(st, r, false, e->span, expr_to_string(e),
                            ctx.block, ctx.instr, base.place);
    }
    if (any) {
      bool stale = false;
      if (joined.has(Typestate::AUninit)) {
        report(e->span, Code::UninitUse, {{"place", expr_to_string(e)}});
        stale = true;
      }
      if (joined.has(Typestate::AReleased)) {
        report(e->span, Code::UseAfterRelease,
               {{"place", expr_to_string(e)}});
        stale = true;
      }
      if (joined.has(Typestate::AMoved)) {
        report(e->span, Code::UseAfterMove, {{"place", expr_to_string(e)}});
        stale = true;
      }
      // Same recovery as read_place: the report happens here, the copied
      // value stays quiet.
      v.ts = stale || joined.is_bottom() ? Typestate::unknown() : joined;
    }
    return v;
  }

  AbsVal eval(AbstractState &st, const Expr *e, const EvalCtx &ctx) {
    e = strip(e);
    if (!e)
      return AbsVal{};
    switch (e->kind) {
    case ExprKind::IntLit: {
      bool uns = e->text.find('U') != std::string::npos ||
                 e->text.find('u') != std::string::npos;
      return const_val(e->int_value, uns);
    }
    case ExprKind::CharLit:
      return const_val(e->int_value);
    case ExprKind::FloatLit: {
      AbsVal v;
      v.ts = Typestate::init();
      return v;
    }
    case ExprKind::StringLit: {
      AbsVal v;
      v.ts = Typestate::init();
      v.slot.base = BaseType::Char;
      v.slot.pointer_depth = 1;
      v.slot.pointee_const = true;
      v.has_slot = true;
      return v;
    }
    case ExprKind::Ident: {
      PlaceId p = lookup_place(e->text);
      if (p != kNoPlace)
        return read_place(st, p, e, ctx);
      auto en = tables_.enums.find(e->text);
      if (en != tables_.enums.end())
        return const_val(en->second);
      if (const NamedConstant *c = find_constant(e->text)) {
        AbsVal v = const_val(c->value);
        if (c->is_null) {
          v.slot.pointer_depth = 1;
          v.has_slot = true;
          v.ts = Typestate::sentinel(0);
          v.val = MultiInterval::point(0);
        }
        return v;
      }
      return AbsVal{}; // unknown name; the call path handles callees
    }
    case ExprKind::Unary:
      return eval_unary(st, e, ctx);
    case ExprKind::Binary:
      return eval_binary(st, e, ctx);
    case ExprKind::Assign:
      return eval_assign(st, e, ctx);
    case ExprKind::Call:
      return eval_call(st, e, ctx);
    case ExprKind::Index: {
      AbsVal base = eval(st, e->a.get(), ctx);
      AbsVal index = eval(st, e->b.get(), ctx);
      check_deref_base(base, e->a.get(), e->span);
      for (int64_t s : index.ts.sentinels())
        if (s < 0)
          report(e->span, Code::OptDeref,
                 {{"place", expr_to_string(e->b.get())},
                  {"sentinel", std::to_string(s)},
                  {"role", "index"}});
      if (base.has_slot)
        check_unsafe_access_pointee(st, base.slot, e);
      return read_referents(st, base, e, ctx);
    }
    case ExprKind::Member: {
      AbsVal base = eval(st, e->a.get(), ctx);
      if (e->arrow)
        check_deref_base(base, e->a.get(), e->span);
      if (base.has_slot)
        check_unsafe_access_pointee(st, base.slot, e);
      AbsVal v = e->arrow ? read_referents(st, base, e, ctx) : base;
      // Member type, when the struct is known.
      ContractSlot owner = base.slot;
      if (e->arrow && owner.pointer_depth > 0)
        owner.pointer_depth -= 1;
      if (const StructInfo *si = struct_of(owner)) {
        if (const StructMember *m = si->find(e->member)) {
          v.slot = m->slot;
          v.has_slot = true;
          v.tag = m->slot.nominal;
        }
      }
      v.place = kNoPlace;
      return v;
    }
    case ExprKind::Cast:
      return eval_cast(st, e, ctx);
    case ExprKind::Paren:
      break;
    }
    return AbsVal{};
  }

  void check_unsafe_access_pointee(AbstractState &st, const ContractSlot &s,
                                   const Expr *e) {
    check_unsafe_access(st, s, e);
  }

  AbsVal eval_unary(AbstractState &st, const Expr *e, const EvalCtx &ctx) {
    const std::string &op = e->op;
    if (op == "&") {
      const Expr *target = strip(e->a.get());
      AbsVal v;
      v.ts = Typestate::init();
      if (target && target->kind == ExprKind::Ident) {
        PlaceId p = lookup_place(target->text);
        if (p != kNoPlace) {
          v.refs = {p};
          if (places_.info(p).has_slot) {
            v.slot = places_.info(p).slot;
            v.slot.pointer_depth += 1;
            v.has_slot = true;
          }
        }
      } else {
        // Address of a non-trivial place: evaluate for its checks.
        eval(st, e->a.get(), ctx);
      }
      return v;
    }
    if (op == "*") {
      AbsVal base = eval(st, e->a.get(), ctx);
      check_deref_base(base, e->a.get(), e->span);
      if (base.has_slot)
        check_unsafe_access_pointee(st, base.slot, e);
      return read_referents(st, base, e, ctx);
    }
    if (op == "++" || op == "--") {
      AbsVal v = eval(st, e->a.get(), ctx);
      if (!v.tag.empty()) {
        const std::string *res = tables_.ops.lookup_unary(op, v.tag);
        if (!res) {
          report(e->span, Code::NominalOp,
                 {{"operation", detail::unary_op_display(op)},
                  {"type", v.tag}});
          return v; // state unchanged after the error
        }
      }
      if (v.place != kNoPlace) {
        BinopResult r = MultiInterval::binop(op == "++" ? "+" : "-",
                                             st.val_of(v.place),
                                             MultiInterval::point(1));
        if (!r.value.is_full())
          st.vals[v.place] = r.value;
        else
          st.vals.erase(v.place);
        check_borrow_conflict(st, v.place, true, e->span,
                              expr_to_string(e->a.get()), ctx.block,
                              ctx.instr);
        v.val = st.val_of(v.place);
      }
      return v;
    }
    if (op == "-") {
      AbsVal v = eval(st, e->a.get(), ctx);
      if (!v.tag.empty()) {
        const std::string *res = tables_.ops.lookup_unary(op, v.tag);
        if (!res)
          report(e->span, Code::NominalOp,
                 {{"operation", detail::unary_op_display(op)},
                  {"type", v.tag}});
        else
          v.tag = *res == v.tag ? v.tag : *res;
      }
      AbsVal out;
      out.ts = Typestate::init();
      out.val = MultiInterval::negate(v.val);
      out.tag = v.tag;
      return out;
    }
    if (op == "!") {
      AbsVal v = eval(st, e->a.get(), ctx);
      if (!v.tag.empty()) {
        const std::string *res = tables_.ops.lookup_unary(op, v.tag);
        if (!res)
          report(e->span, Code::NominalOp,
                 {{"operation", detail::unary_op_display(op)},
                  {"type", v.tag}});
      }
      AbsVal out;
      out.ts = Typestate::init();
      out.val = MultiInterval::range(0, 1);
      return out;
    }
    eval(st, e->a.get(), ctx);
    return AbsVal{};
  }

  std::string operand_type_display(const AbsVal &v) const {
    if (!v.tag.empty())
      return v.tag;
    if (v.has_slot)
      return slot_type_name(v.slot);
    return "int";
  }

  AbsVal eval_binary(AbstractState &st, const Expr *e, const EvalCtx &ctx) {
    AbsVal a = eval(st, e->a.get(), ctx);
    AbsVal b = eval(st, e->b.get(), ctx);
    const std::string &op = e->op;

    if (op == "&&" || op == "||") {
      AbsVal out;
      out.ts = Typestate::init();
      out.val = MultiInterval::range(0, 1);
      return out;
    }

    bool tagged = !a.tag.empty() || !b.tag.empty();
    if (tagged && detail::is_comparison(op)) {
      // Comparing a nominal value against its own sentinel is the blessed
      // optionality check; comparisons within one nominal type are ordinary.
      bool exempt = a.tag == b.tag;
      if (!exempt && (op == "==" || op == "!=")) {
        const AbsVal &tagged_side = a.tag.empty() ? b : a;
        const AbsVal &other = a.tag.empty() ? a : b;
        int64_t c = 0;
        if (as_point(other.val, c) && tagged_side.ts.has_sentinel(c))
          exempt = true;
      }
      if (!exempt) {
        report(e->span, Code::NominalOp,
               {{"role", "binary"},
                {"op", op},
                {"lhs", operand_type_display(a)},
                {"rhs", operand_type_display(b)}});
      }
      AbsVal out;
      out.ts = Typestate::init();
      out.val = MultiInterval::range(0, 1);
      return out;
    }

    if (tagged) {
      const std::string *res =
          tables_.ops.lookup_binary(op, operand_type_display(a),
                                    operand_type_display(b));
      if (!res) {
        report(e->span, Code::NominalOp,
               {{"role", "binary"},
                {"op", op},
                {"lhs", operand_type_display(a)},
                {"rhs", operand_type_display(b)}});
        AbsVal out;
        out.ts = Typestate::init();
        return out;
      }
      AbsVal out;
      out.ts = Typestate::init();
      BinopResult r = MultiInterval::binop(op, a.val, b.val);
      out.val = r.value;
      if (tables_.typedefs.count(*res) &&
          !tables_.typedefs.at(*res).nominal.empty())
        out.tag = tables_.typedefs.at(*res).nominal;
      return out;
    }

    AbsVal out;
    out.ts = Typestate::init();
    if (detail::is_comparison(op)) {
      out.val = MultiInterval::range(0, 1);
      return out;
    }
    if (op == "-" && (a.is_unsigned || b.is_unsigned)) {
      // Unsigned subtraction wraps instead of going negative.
      out.val = MultiInterval::at_least(0);
      out.is_unsigned = true;
      return out;
    }
    BinopResult r = MultiInterval::binop(op, a.val, b.val);
    out.val = r.value;
    out.is_unsigned = a.is_unsigned || b.is_unsigned;
    return out;
  }

  static bool as_point(const MultiInterval &m, int64_t &out) {
    if (m.is_empty() || !m.min().finite())
      return false;
    if (!m.is_point(m.min().v))
      return false;
    out = m.min().v;
    return true;
  }

  AbsVal eval_cast(AbstractState &st, const Expr *e, const EvalCtx &ctx) {
    AbsVal v = eval(st, e->a.get(), ctx);
    ContractSlot target = resolve_type(e->cast_type, "");
    if (target.base == BaseType::Void && target.pointer_depth == 0) {
      AbsVal out;
      out.ts = Typestate::init();
      return out; // (void) discards the value
    }
    if (v.has_slot && v.slot.pointer_depth > 0 && v.slot.pointee_const &&
        target.pointer_depth > 0 && !target.pointee_const) {
      report(e->span, Code::ConstCast,
             {{"subject", expr_to_string(e->a.get())}});
    }
    AbsVal out = v;
    out.slot = target;
    out.has_slot = true;
    out.tag = target.nominal;
    out.place = kNoPlace;
    return out;
  }

  // --- assignment and binding ---------------------------------------------

  // Applies ownership-aware binding semantics of `v` into place `p` with
  // declared slot `slot`. Handles moves, shared borrows and tag flow.
  void bind_value(AbstractState &st, PlaceId p, const ContractSlot &slot,
                  bool has_slot, AbsVal v, const Expr *rhs, Span span) {
    // Nominal binding. Untyped constants are universal: they take on any
    // nominal type (the declared range still applies below).
    if (has_slot && !slot.nominal.empty()) {
      if (v.tag != slot.nominal && (!v.tag.empty() || v.has_slot)) {
        std::string from = !v.tag.empty() ? v.tag
                           : v.has_slot   ? slot_type_name(v.slot)
                                          : std::string("int");
        report(rhs ? rhs->span : span, Code::NominalMix,
               {{"from", from}, {"to", slot.nominal}});
      }
      st.tags[p] = slot.nominal;
    } else if (!v.tag.empty()) {
      st.tags[p] = v.tag;
    } else {
      st.tags.erase(p);
    }

    // Declared value range on the target.
    if (has_slot && slot.has_value) {
      MultiInterval allowed = slot.value;
      if (slot.optional)
        allowed = MultiInterval::join(allowed,
                                      MultiInterval::point(slot.sentinel));
      for (int64_t s : v.ts.sentinels())
        allowed = MultiInterval::join(allowed, MultiInterval::point(s));
      if (!v.val.leq(allowed)) {
        report(rhs ? rhs->span : span, Code::ValRange,
               {{"actual", v.val.to_string()},
                {"expected", slot.value.to_string()},
                {"subject", places_.display(p)}});
      }
    }

    // Overwriting the last owner of a resource the value does not carry
    // forward orphans it: that is a leak at this statement.
    Typestate old = st.ts_of(p);
    for (uint32_t id : old.owned_ids()) {
      if (v.ts.owned_ids().count(id))
        continue;
      if (st.owners_of(id).size() > 1)
        continue; // another place still owns it
      auto it = st.resources.find(id);
      if (it != st.resources.end()) {
        report(span, Code::OwnLeak,
               {{"resource-class", it->second.res_class},
                {"site-line", std::to_string(it->second.site_line)},
                {"qualifier", it->second.possibly ? "may be" : "is"},
                {"place", places_.display(p)}});
        st.resources.erase(it);
      }
    }

    // Move vs shared borrow of an owning value read from another place.
    if (v.ts.has_owned() && v.place != kNoPlace && v.place != p) {
      bool to_shared_view = has_slot && slot.pointer_depth > 0 &&
                            slot.pointee_const && !slot.owning;
      if (to_shared_view) {
        // A const view: the owner stays, the view borrows the contents.
        Typestate ts = Typestate::shared_ref();
        for (int64_t s : v.ts.sentinels())
          ts = Typestate::join(ts, Typestate::sentinel(s));
        st.ts[p] = ts;
        st.refs[p] = v.refs;
        for (PlaceId target : v.refs)
          st.borrows.insert(Borrow{p, target, false});
        st.vals.erase(p);
        return;
      }
      st.ts[v.place] = st.ts_of(v.place).after_move();
      st.refs.erase(v.place);
    }

    // A plain borrow of a non-owned place (&x into a pointer).
    if (!v.ts.has_owned() && !v.refs.empty() && rhs &&
        strip(rhs)->kind == ExprKind::Unary && strip(rhs)->op == "&") {
      bool excl = !(has_slot && slot.pointee_const);
      for (PlaceId target : v.refs)
        st.borrows.insert(Borrow{p, target, excl});
    }

    st.ts[p] = v.ts.is_bottom() ? Typestate::unknown() : v.ts;
    if (!v.val.is_full())
      st.vals[p] = v.val;
    else
      st.vals.erase(p);
    if (!v.refs.empty())
      st.refs[p] = v.refs;
    else
      st.refs.erase(p);
  }

  AbsVal eval_assign(AbstractState &st, const Expr *e, const EvalCtx &ctx) {
    AbsVal v = eval(st, e->b.get(), ctx);
    const Expr *lhs = strip(e->a.get());
    if (!lhs)
      return v;

    if (lhs->kind == ExprKind::Ident) {
      PlaceId p = lookup_place(lhs->text);
      if (p == kNoPlace)
        return v;
      check_borrow_conflict(st, p, true, e->span, lhs->text, ctx.block,
                            ctx.instr);
      bind_value(st, p, places_.info(p).slot, places_.info(p).has_slot,
                 std::move(v), e->b.get(), e->span);
      return read_no_check(st, p);
    }

    // Stores through a reference: *p = v, p[i] = v, p->m = v.
    const Expr *base_expr = nullptr;
    if (lhs->kind == ExprKind::Unary && lhs->op == "*")
      base_expr = lhs->a.get();
    else if (lhs->kind == ExprKind::Index || lhs->kind == ExprKind::Member)
      base_expr = lhs->a.get();
    if (base_expr) {
      AbsVal base = eval(st, base_expr, ctx);
      if (lhs->kind != ExprKind::Member || lhs->arrow)
        check_deref_base(base, base_expr, lhs->span);
      if (lhs->kind == ExprKind::Index) {
        AbsVal index = eval(st, lhs->b.get(), ctx);
        for (int64_t s : index.ts.sentinels())
          if (s < 0)
            report(lhs->span, Code::OptDeref,
                   {{"place", expr_to_string(lhs->b.get())},
                    {"sentinel", std::to_string(s)},
                    {"role", "index"}});
      }
      if (base.has_slot)
        check_unsafe_access(st, base.slot, lhs);
      // Writing through a declared shared reference is not allowed.
      if (base.has_slot && !base.slot.owning && base.slot.pointer_depth > 0 &&
          (base.slot.mode == RefMode::SharedRef || base.ts.has(Typestate::ASharedRef)) &&
          base.place != kNoPlace) {
        report(e->span, Code::ExclViolation,
               {{"mode", "write-shared"},
                {"place", expr_to_string(base_expr)}});
      }
      for (PlaceId r : base.refs) {
        check_borrow_conflict(st, r, true, e->span, expr_to_string(lhs),
                              ctx.block, ctx.instr, base.place);
        Typestate cur = st.ts_of(r);
        if (cur.has(Typestate::AReleased))
          report(e->span, Code::UseAfterRelease,
                 {{"place", expr_to_string(lhs)}});
        st.ts[r] = Typestate::init();
      }
    }
    return v;
  }

  AbsVal read_no_check(AbstractState &st, PlaceId p) {
    AbsVal v;
    v.place = p;
    v.ts = st.ts_of(p);
    v.val = st.val_of(p);
    v.tag = st.tag_of(p);
    if (const auto *r = st.refs_of(p))
      v.refs = *r;
    if (places_.info(p).has_slot) {
      v.slot = places_.info(p).slot;
      v.has_slot = true;
    }
    return v;
  }

  // --- calls ---------------------------------------------------------------

  AbsVal eval_call(AbstractState &st, const Expr *e, const EvalCtx &ctx) {
    const Expr *callee = strip(e->a.get());
    std::string name = callee && callee->kind == ExprKind::Ident
                           ? callee->text
                           : std::string();
    const AnnotatedSignature *sig = tables_.find_function(name);
    CalleeTrust trust = detail::trust_of(sig);

    std::vector<AbsVal> args;
    args.reserve(e->args.size());
    for (const auto &arg : e->args)
      args.push_back(eval(st, arg.get(), ctx));

    for (size_t i = 0; i < args.size(); ++i) {
      const Expr *arg_expr = e->args[i].get();
      const ContractSlot *param =
          sig && i < sig->params.size() ? &sig->params[i] : nullptr;
      check_call_arg(st, name, trust, i, args[i], param, arg_expr, e->span);
    }

    // Post-state effects of the contract.
    if (sig && trust == CalleeTrust::Contracted) {
      for (size_t i = 0; i < args.size() && i < sig->params.size(); ++i) {
        const ContractSlot &param = sig->params[i];
        std::set<PlaceId> refs = args[i].refs;
        for (PlaceId r : refs) {
          if (!param.post.empty()) {
            PropertyMap &pm = st.props[r];
            for (const PropAssign &a : param.post) {
              if (a.any_value)
                pm.assign_unknown(a.key);
              else
                pm.assign(a.key, a.value);
            }
          }
          if (param.init == InitSpec::Initializes)
            st.ts[r] = Typestate::init();
          else if (param.init == InitSpec::Finalizes)
            st.ts[r] = Typestate::finalized();
        }
      }
    }

    return call_result(st, e, sig, trust);
  }

  void check_call_arg(AbstractState &st, const std::string &callee,
                      CalleeTrust trust, size_t index, AbsVal &arg,
                      const ContractSlot *param, const Expr *arg_expr,
                      Span call_span) {
    std::string param_display =
        param && !param->name.empty() ? param->name
                                      : std::to_string(index + 1);

    // Optionality of the argument value.
    if (trust == CalleeTrust::Contracted && param && !param->optional &&
        arg.ts.has_sentinel()) {
      report(arg_expr->span, Code::OptArg,
             {{"place", expr_to_string(arg_expr)},
              {"sentinel", sentinel_display(arg.ts, arg.pointer_like())},
              {"param", param_display},
              {"callee", callee}});
    }

    // Initialization of the referent, for reference-taking parameters. A
    // `void *` referent carries no readable value, so it is exempt.
    bool check_ref_init = false;
    if (trust == CalleeTrust::Contracted && param) {
      bool accepts_uninit = param->init == InitSpec::Initializes ||
                            param->init == InitSpec::Uninit ||
                            param->mode == RefMode::Release;
      check_ref_init = param->pointer_depth > 0 && !accepts_uninit &&
                       !(param->base == BaseType::Void &&
                         param->pointer_depth == 1);
    } else if (trust == CalleeTrust::ContractFree && param) {
      check_ref_init = param->pointer_depth > 0 &&
                       !(param->base == BaseType::Void &&
                         param->pointer_depth == 1);
    }
    if (check_ref_init) {
      for (PlaceId r : arg.refs) {
        Typestate ts = st.ts_of(r);
        std::string disp =
            places_.info(r).root == RootKind::HeapContents
                ? "*" + expr_to_string(arg_expr)
                : places_.display(r);
        if (ts.has(Typestate::AUninit))
          report(arg_expr->span, Code::UninitUse, {{"place", disp}});
        if (ts.has(Typestate::AReleased))
          report(arg_expr->span, Code::UseAfterRelease, {{"place", disp}});
      }
    }

    if (trust == CalleeTrust::Contracted && param) {
      // Nominal tag; untyped constants are universal.
      if (!param->nominal.empty() && arg.tag != param->nominal &&
          (!arg.tag.empty() || arg.has_slot)) {
        std::string from = !arg.tag.empty() ? arg.tag
                           : arg.has_slot   ? slot_type_name(arg.slot)
                                            : std::string("int");
        report(arg_expr->span, Code::NominalMix,
               {{"from", from}, {"to", param->nominal}});
      }

      // Declared value range; the argument's own sentinels are the
      // optionality system's concern, not a range violation.
      if (param->has_value) {
        MultiInterval allowed = param->value;
        if (param->optional)
          allowed = MultiInterval::join(
              allowed, MultiInterval::point(param->sentinel));
        for (int64_t s : arg.ts.sentinels())
          allowed = MultiInterval::join(allowed, MultiInterval::point(s));
        if (!arg.val.leq(allowed)) {
          std::string actual = arg.val.to_string();
          report(arg_expr->span, Code::ValRange,
                 {{"actual", actual},
                  {"expected", param->value.to_string()},
                  {"subject", param_display}});
        }
      }

      // Preconditions on the referent's properties.
      if (!param->pre.empty()) {
        std::set<PlaceId> targets =
            param->pointer_depth > 0
                ? arg.refs
                : (arg.place != kNoPlace ? std::set<PlaceId>{arg.place}
                                         : std::set<PlaceId>{});
        for (const PropAssign &a : param->pre) {
          if (a.any_value)
            continue;
          for (PlaceId r : targets) {
            auto it = st.props.find(r);
            const PropertyMap empty;
            const PropertyMap &pm =
                it == st.props.end() ? empty : it->second;
            if (!pm.entails(a.key, a.value)) {
              auto cur = pm.get(a.key);
              std::string actual = !cur          ? "unset"
                                   : cur->unknown ? "unknown"
                                                  : cur->atom;
              report(arg_expr->span, Code::PreViolation,
                     {{"key", a.key},
                      {"expected", a.value},
                      {"actual", actual},
                      {"callee", callee}});
            }
          }
        }
      }
    }

    // Ownership effects.
    bool owned_arg = arg.ts.has_owned();
    if (trust == CalleeTrust::Contracted && param) {
      // A stale owner was already reported when the argument was read;
      // complaining again about the release would double up.
      bool stale = arg.ts.has(Typestate::AMoved) ||
                   arg.ts.has(Typestate::AReleased);
      if (param->mode == RefMode::Release) {
        if (owned_arg) {
          release_resources(st, arg, true);
        } else if (!arg.ts.is_sentinel_only() && arg.place != kNoPlace &&
                   !stale && !arg.ts.has(Typestate::AUnknown)) {
          report(arg_expr->span, Code::ReleaseInvalid,
                 {{"place", expr_to_string(arg_expr)},
                  {"detail", "it is not an owning reference"}});
        }
      } else if (param->owning) {
        if (owned_arg) {
          release_resources(st, arg, false);
        } else if (!arg.ts.is_sentinel_only() && arg.place != kNoPlace &&
                   !stale && !arg.ts.has(Typestate::AUnknown)) {
          report(arg_expr->span, Code::ReleaseInvalid,
                 {{"place", expr_to_string(arg_expr)},
                  {"detail", "it is not an owning reference"}});
        }
      }
    } else if (owned_arg) {
      // Unknown contract: the analysis cannot tell whether ownership moves.
      report(call_span, Code::OwnUnclear,
             {{"callee", callee.empty() ? "?" : callee},
              {"param", param_display},
              {"place", expr_to_string(arg_expr)}});
    }
  }

  // Takes the owned resources of `arg` out of the frame. When `released`,
  // the contents places also become released (the resource is gone); a
  // plain ownership transfer leaves the contents alone.
  void release_resources(AbstractState &st, const AbsVal &arg,
                         bool released) {
    for (uint32_t id : arg.ts.owned_ids()) {
      auto it = st.resources.find(id);
      if (it != st.resources.end()) {
        if (released && it->second.contents != kNoPlace)
          st.ts[it->second.contents] = Typestate::released();
        st.resources.erase(it);
      }
    }
    if (arg.place != kNoPlace) {
      st.ts[arg.place] =
          released ? Typestate::released() : st.ts_of(arg.place).after_move();
      st.refs.erase(arg.place);
      st.tags.erase(arg.place);
      st.vals.erase(arg.place);
    }
  }

  AbsVal call_result(AbstractState &st, const Expr *e,
                     const AnnotatedSignature *sig, CalleeTrust trust) {
    AbsVal v;
    if (!sig || trust != CalleeTrust::Contracted) {
      if (sig) {
        v.slot = sig->ret;
        v.has_slot = true;
      }
      return v; // unknown payload
    }
    const ContractSlot &ret = sig->ret;
    v.slot = ret;
    v.has_slot = true;
    v.tag = ret.nominal;
    if (ret.has_value)
      v.val = ret.value;

    if (ret.owning) {
      uint32_t id = resource_id_for(e->span);
      ResourceInfo r;
      r.id = id;
      r.res_class = ret.resource_class;
      r.site_line = e->span.line;
      r.possibly = ret.optional;
      if (ret.pointer_depth > 0) {
        PlaceId contents = places_.heap_contents(e->span.line, e->span.col);
        r.contents = contents;
        st.ts[contents] = ret.init == InitSpec::Uninit ? Typestate::uninit()
                                                       : Typestate::init();
        v.refs = {contents};
      }
      // Remember which operands sized the allocation, to couple a proven
      // zero size with the fate of the block.
      if (sig->params.size() == e->args.size()) {
        for (size_t i = 0; i < sig->params.size(); ++i) {
          if (sig->params[i].base != BaseType::SizeT &&
              sig->params[i].base != BaseType::Unsigned)
            continue;
          const Expr *a = strip(e->args[i].get());
          if (a && a->kind == ExprKind::Ident) {
            PlaceId p = lookup_place(a->text);
            if (p != kNoPlace)
              r.size_places.insert(p);
          }
        }
      }
      st.resources[id] = r;
      v.ts = Typestate::owned(id);
    } else {
      v.ts = Typestate::init();
    }
    if (ret.optional)
      v.ts = Typestate::join(v.ts, Typestate::sentinel(ret.sentinel));
    if (ret.base == BaseType::Void && ret.pointer_depth == 0 && !ret.owning)
      v.ts = Typestate::init();
    return v;
  }

  // --- declarations --------------------------------------------------------

  void exec_decl(AbstractState &st, const Stmt *decl, const EvalCtx &ctx) {
    PlaceId p = places_.named(RootKind::Local, decl->name);
    ContractSlot slot;
    // Local declarations may carry annotations; resolve through the tables.
    slot = resolve_local_slot(decl);
    places_.info(p).slot = slot;
    places_.info(p).has_slot = true;

    if (decl->init) {
      AbsVal v = eval(st, decl->init.get(), ctx);
      bind_value(st, p, slot, true, std::move(v), decl->init.get(),
                 decl->span);
    } else {
      st.ts[p] = Typestate::uninit();
      st.vals.erase(p);
      st.tags.erase(p);
      st.refs.erase(p);
    }
  }

  ContractSlot resolve_local_slot(const Stmt *decl) const {
    ContractSlot s = resolve_type(decl->decl_type, decl->name);
    s.span = decl->name_span;
    return s;
  }

  // --- returns -------------------------------------------------------------

  void exec_return(AbstractState &st, const Instr &in, const EvalCtx &ctx) {
    AbsVal v;
    bool has_value = in.expr != nullptr;
    if (has_value)
      v = eval(st, in.expr, ctx);

    const ContractSlot &ret = sig_.ret;

    // Optionality of the returned value.
    if (has_value && !ret.optional && v.ts.has_sentinel())
      report(in.span, Code::OptRet,
             {{"sentinel", sentinel_display(v.ts, v.pointer_like())},
              {"function", sig_.name}});

    // Declared range of the returned value.
    if (has_value && ret.has_value) {
      MultiInterval allowed = ret.value;
      if (ret.optional)
        allowed =
            MultiInterval::join(allowed, MultiInterval::point(ret.sentinel));
      for (int64_t s : v.ts.sentinels())
        allowed = MultiInterval::join(allowed, MultiInterval::point(s));
      if (!v.val.leq(allowed))
        report(in.span, Code::ValRange,
               {{"actual", v.val.to_string()},
                {"expected", ret.value.to_string()},
                {"subject", sig_.name}});
    }

    // Returning an owned resource transfers it to the caller.
    for (uint32_t id : v.ts.owned_ids())
      st.resources.erase(id);
    if (v.place != kNoPlace && v.ts.has_owned())
      st.ts[v.place] = st.ts_of(v.place).after_move();

    // Whatever still lives in the frame leaks.
    for (const auto &[id, r] : st.resources) {
      std::vector<PlaceId> owners = st.owners_of(id);
      std::string owner_name =
          owners.empty() ? r.res_class : places_.display(owners.front());
      report(in.span, Code::OwnLeak,
             {{"resource-class", r.res_class},
              {"site-line", std::to_string(r.site_line)},
              {"qualifier", r.possibly ? "may be" : "is"},
              {"place", owner_name}});
    }

    // Finalization obligations: a value of a finalization-requiring type
    // that is (still) initialized has not been finalized.
    for (const auto &[p, ts] : st.ts) {
      if (!places_.info(p).has_slot)
        continue;
      const ContractSlot &slot = places_.info(p).slot;
      bool requires_fini = slot.fini_required;
      if (slot.base == BaseType::Named && !requires_fini) {
        auto td = tables_.typedefs.find(slot.base_name);
        requires_fini = td != tables_.typedefs.end() &&
                        td->second.fini_required &&
                        slot.pointer_depth == 0;
      }
      if (requires_fini && slot.pointer_depth == 0 &&
          ts.has(Typestate::AInit))
        report(in.span, Code::FiniMissing,
               {{"place", places_.display(p)}});
    }

    // Frame rule: each parameter's referent properties on exit must match
    // the function's own postconditions, and anything not mentioned must
    // have kept its entry value.
    for (size_t i = 0; i < sig_.params.size(); ++i) {
      const ContractSlot &param = sig_.params[i];
      if (param.pointer_depth == 0 || param.name.empty())
        continue;
      PlaceId pp = places_.find_named(RootKind::Param, param.name);
      if (pp == kNoPlace)
        continue;
      PlaceId target = places_.pointee_of(pp);
      const PropertyMap empty;
      auto exit_it = st.props.find(target);
      const PropertyMap &exit_props =
          exit_it == st.props.end() ? empty : exit_it->second;
      auto entry_it = entry_props_.find(target);
      const PropertyMap &entry =
          entry_it == entry_props_.end() ? empty : entry_it->second;

      std::set<std::string> own_keys;
      for (const PropAssign &a : param.post)
        own_keys.insert(a.key);

      // Declared postconditions must hold.
      for (const PropAssign &a : param.post) {
        if (a.any_value)
          continue;
        if (!exit_props.entails(a.key, a.value)) {
          auto cur = exit_props.get(a.key);
          std::string actual = !cur          ? "unset"
                               : cur->unknown ? "unknown"
                                              : cur->atom;
          report(in.span, Code::PostViolation,
                 {{"function", sig_.name},
                  {"key", a.key},
                  {"actual", actual},
                  {"expected", a.value}});
        }
      }
      // Unmentioned keys must be preserved.
      std::set<std::string> all_keys;
      for (const auto &[k, pv] : entry.entries())
        all_keys.insert(k);
      for (const auto &[k, pv] : exit_props.entries())
        all_keys.insert(k);
      for (const std::string &k : all_keys) {
        if (own_keys.count(k))
          continue;
        auto ev = entry.get(k);
        auto xv = exit_props.get(k);
        bool same = (!ev && !xv) || (ev && xv && *ev == *xv);
        if (!same) {
          std::string actual = !xv          ? "unset"
                               : xv->unknown ? "unknown"
                                             : xv->atom;
          std::string expected = !ev          ? "unset"
                                 : ev->unknown ? "unknown"
                                               : ev->atom;
          report(in.span, Code::PostViolation,
                 {{"function", sig_.name},
                  {"key", k},
                  {"actual", actual},
                  {"expected", expected}});
        }
      }
    }

    // Parameters that promised to initialize their referent must have done
    // so on every path that returns.
    for (size_t i = 0; i < sig_.params.size(); ++i) {
      const ContractSlot &param = sig_.params[i];
      if (param.init != InitSpec::Initializes || param.name.empty())
        continue;
      PlaceId pp = places_.find_named(RootKind::Param, param.name);
      if (pp == kNoPlace)
        continue;
      PlaceId ref = places_.pointee_of(pp);
      if (st.ts_of(ref).has(Typestate::AUninit))
        report(in.span, Code::UninitUse, {{"place", places_.display(ref)}});
    }
  }

  // --- guard refinement ----------------------------------------------------

  // Tries to read a compile-time integer constant out of an expression.
  bool const_of(const Expr *e, int64_t &out) const {
    e = strip(e);
    if (!e)
      return false;
    if (e->kind == ExprKind::IntLit || e->kind == ExprKind::CharLit) {
      out = e->int_value;
      return true;
    }
    if (e->kind == ExprKind::Unary && e->op == "-") {
      int64_t inner;
      if (const_of(e->a.get(), inner)) {
        out = -inner;
        return true;
      }
      return false;
    }
    if (e->kind == ExprKind::Ident) {
      auto en = tables_.enums.find(e->text);
      if (en != tables_.enums.end()) {
        out = en->second;
        return true;
      }
      if (const NamedConstant *c = find_constant(e->text)) {
        out = c->value;
        return true;
      }
    }
    return false;
  }

  void refine_edge(AbstractState &st, const Expr *cond, bool taken) {
    cond = strip(cond);
    if (!cond)
      return;
    if (cond->kind == ExprKind::Binary &&
        detail::is_comparison(cond->op)) {
      const Expr *lhs = strip(cond->a.get());
      const Expr *rhs = strip(cond->b.get());
      int64_t c;
      std::string op = cond->op;
      const Expr *place_side = nullptr;
      if (lhs && lhs->kind == ExprKind::Ident && const_of(rhs, c)) {
        place_side = lhs;
      } else if (rhs && rhs->kind == ExprKind::Ident && const_of(lhs, c)) {
        place_side = rhs;
        op = detail::flip_comparison(op);
      } else {
        return;
      }
      PlaceId p = lookup_place(place_side->text);
      if (p == kNoPlace)
        return;
      if (!taken)
        op = detail::negate_comparison(op);
      refine_place_relop(st, p, op, c);
      return;
    }
    // Truthiness of a plain place: if (p) / if (!p) after decomposition.
    if (cond->kind == ExprKind::Ident) {
      PlaceId p = lookup_place(cond->text);
      if (p == kNoPlace)
        return;
      refine_place_relop(st, p, taken ? "!=" : "==", 0);
    }
  }

  // --- the transfer function ----------------------------------------------

  void transfer_block(int bi, const AbstractState &in_state, bool emit,
                      std::vector<std::pair<int, AbstractState>> &edges) {
    emitting_ = emit;
    AbstractState st = in_state;
    const Block &b = cfg_.blocks[bi];
    EvalCtx ctx;
    ctx.block = static_cast<size_t>(bi);
    for (size_t i = 0; i < b.instrs.size(); ++i) {
      ctx.instr = i;
      const Instr &in = b.instrs[i];
      switch (in.kind) {
      case InstrKind::Decl:
        exec_decl(st, in.decl, ctx);
        break;
      case InstrKind::Expr:
        eval(st, in.expr, ctx);
        break;
      case InstrKind::Return:
        exec_return(st, in, ctx);
        break;
      case InstrKind::EnterChecked:
        st.unsafe_stack.push_back({in.unsafe_kind, in.unchecked});
        break;
      case InstrKind::ExitChecked:
        if (!st.unsafe_stack.empty())
          st.unsafe_stack.pop_back();
        break;
      }
      if (emit)
        check_single_owner(st);
      drop_dead_borrows(st, ctx);
    }
    ctx.instr = b.instrs.size();
    switch (b.term.kind) {
    case TermKind::Jump:
      edges.emplace_back(b.term.on_true, std::move(st));
      break;
    case TermKind::Branch: {
      eval(st, b.term.cond, ctx);
      AbstractState t = st;
      refine_edge(t, b.term.cond, true);
      AbstractState f = std::move(st);
      refine_edge(f, b.term.cond, false);
      edges.emplace_back(b.term.on_true, std::move(t));
      edges.emplace_back(b.term.on_false, std::move(f));
      break;
    }
    default:
      break;
    }
    emitting_ = false;
  }

  void drop_dead_borrows(AbstractState &st, const EvalCtx &ctx) {
    for (auto it = st.borrows.begin(); it != st.borrows.end();) {
      if (!live_after(ctx.block, ctx.instr, it->holder))
        it = st.borrows.erase(it);
      else
        ++it;
    }
  }

  void check_single_owner(AbstractState &st) {
    std::map<uint32_t, int> owners;
    for (const auto &[p, ts] : st.ts)
      for (uint32_t id : ts.owned_ids())
        owners[id]++;
    for (const auto &[id, n] : owners)
      if (n > 1)
        stats_.single_owner_violations++;
  }
};

} // namespace crusted

#endif
