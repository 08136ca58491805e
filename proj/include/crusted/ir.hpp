// Lowers one function body to a control-flow graph the analysis walks.
//
// Instructions stay close to the source: a declaration, a statement
// expression, a return, or the brackets of an e_checked/e_unchecked block.
// Conditions are decomposed at build time, so every branch condition is
// atomic (no &&, ||, or ! at the top); short-circuit evaluation order and
// edge refinements then fall out of the graph shape.
//
// Lowering also performs the purely syntactic checks that need no abstract
// state: operands of & and the left side of assignments must be places,
// statements after a return are dead, and an e_unchecked block requires the
// enclosing function to be annotated unsafe for the same kind.

#ifndef CRUSTED_IR_HPP
#define CRUSTED_IR_HPP

#include <functional>
#include <string>
#include <vector>

#include "crusted/annotation.hpp"
#include "crusted/ast.hpp"
#include "crusted/diagnostic.hpp"

namespace crusted {

enum class TermKind { None, Jump, Branch, Ret };

struct Terminator {
  TermKind kind = TermKind::None;
  const Expr *cond = nullptr; // Branch only; always an atomic condition
  int on_true = -1;           // Branch true target; Jump target
  int on_false = -1;
};

enum class InstrKind { Decl, Expr, Return, EnterChecked, ExitChecked };

struct Instr {
  InstrKind kind = InstrKind::Expr;
  Span span;
  const Stmt *decl = nullptr; // Decl
  const Expr *expr = nullptr; // Expr statement; Return value (may be null)
  std::string unsafe_kind;    // EnterChecked
  bool unchecked = false;     // EnterChecked
};

struct Block {
  int id = 0;
  std::vector<Instr> instrs;
  Terminator term;
  bool loop_head = false;
  std::vector<int> preds;

  std::vector<int> successors() const {
    switch (term.kind) {
    case TermKind::Jump:
      return {term.on_true};
    case TermKind::Branch:
      return {term.on_true, term.on_false};
    default:
      return {};
    }
  }
};

struct Cfg {
  const FunctionItem *fn = nullptr;
  std::vector<Block> blocks;
  int entry = 0;
};

class CfgBuilder {
public:
  CfgBuilder(const FunctionItem &fn, std::vector<std::string> fn_unsafe_kinds,
             DiagnosticBag &diags)
      : fn_(fn), fn_unsafe_kinds_(std::move(fn_unsafe_kinds)), diags_(diags) {}

  Cfg run() {
    cfg_.fn = &fn_;
    cur_ = new_block();
    if (fn_.body)
      lower_stmt(*fn_.body);
    // A body that falls off the end returns implicitly; the exit checks run
    // there like at any other return.
    if (!terminated()) {
      Instr ret;
      ret.kind = InstrKind::Return;
      ret.span = fn_.body ? fn_.body->span : fn_.name_span;
      append(std::move(ret));
      block().term.kind = TermKind::Ret;
    }
    fill_preds();
    return std::move(cfg_);
  }

private:
  const FunctionItem &fn_;
  std::vector<std::string> fn_unsafe_kinds_;
  DiagnosticBag &diags_;
  Cfg cfg_;
  int cur_ = 0;

  Block &block() { return cfg_.blocks[cur_]; }
  bool terminated() { return block().term.kind != TermKind::None; }

  int new_block() {
    int id = static_cast<int>(cfg_.blocks.size());
    cfg_.blocks.emplace_back();
    cfg_.blocks.back().id = id;
    return id;
  }

  void append(Instr in) { block().instrs.push_back(std::move(in)); }

  void jump_to(int target) {
    block().term.kind = TermKind::Jump;
    block().term.on_true = target;
  }

  void lower_stmt(const Stmt &s) {
    switch (s.kind) {
    case StmtKind::Empty:
      return;
    case StmtKind::Block: {
      bool dead_noted = false;
      for (const auto &child : s.body) {
        if (terminated()) {
          if (!dead_noted && child->kind != StmtKind::Empty) {
            diags_.emit(child->span, Code::Unreachable, {});
            dead_noted = true;
          }
          continue;
        }
        lower_stmt(*child);
      }
      return;
    }
    case StmtKind::Decl: {
      validate_expr(s.init.get());
      Instr in;
      in.kind = InstrKind::Decl;
      in.span = s.span;
      in.decl = &s;
      append(std::move(in));
      return;
    }
    case StmtKind::Expr: {
      validate_expr(s.expr.get());
      Instr in;
      in.kind = InstrKind::Expr;
      in.span = s.span;
      in.expr = s.expr.get();
      append(std::move(in));
      return;
    }
    case StmtKind::Return: {
      validate_expr(s.expr.get());
      Instr in;
      in.kind = InstrKind::Return;
      in.span = s.span;
      in.expr = s.expr.get();
      append(std::move(in));
      block().term.kind = TermKind::Ret;
      return;
    }
    case StmtKind::If: {
      int then_b = new_block();
      int else_b = s.else_stmt ? new_block() : -1;
      int join = new_block();
      if (else_b < 0)
        else_b = join;
      lower_cond(s.expr.get(), then_b, else_b);
      cur_ = then_b;
      if (s.then_stmt)
        lower_stmt(*s.then_stmt);
      if (!terminated())
        jump_to(join);
      if (s.else_stmt) {
        cur_ = else_b;
        lower_stmt(*s.else_stmt);
        if (!terminated())
          jump_to(join);
      }
      cur_ = join;
      return;
    }
    case StmtKind::While: {
      int head = new_block();
      cfg_.blocks[head].loop_head = true;
      int body_b = new_block();
      int exit_b = new_block();
      jump_to(head);
      cur_ = head;
      lower_cond(s.expr.get(), body_b, exit_b);
      cur_ = body_b;
      if (s.then_stmt)
        lower_stmt(*s.then_stmt);
      if (!terminated())
        jump_to(head);
      cur_ = exit_b;
      return;
    }
    case StmtKind::AnnBlock: {
      bool unchecked = s.block_ann.kind == AnnKind::Unchecked;
      std::string kind;
      if (auto k = parse_kind_string(s.block_ann, diags_))
        kind = *k;
      if (unchecked && !kind.empty()) {
        bool covered = false;
        for (const std::string &k : fn_unsafe_kinds_)
          covered = covered || k == kind;
        if (!covered)
          diags_.emit(s.block_ann.span, Code::UnsafePropagate,
                      {{"kind", kind}, {"function", fn_.name}});
      }
      Instr enter;
      enter.kind = InstrKind::EnterChecked;
      enter.span = s.block_ann.span;
      enter.unsafe_kind = kind;
      enter.unchecked = unchecked;
      append(std::move(enter));
      if (s.then_stmt)
        lower_stmt(*s.then_stmt);
      if (!terminated()) {
        Instr exit;
        exit.kind = InstrKind::ExitChecked;
        exit.span = s.span;
        append(std::move(exit));
      }
      return;
    }
    }
  }

  // Decomposes a condition so each emitted branch tests an atomic predicate;
  // the evaluation order of the pieces matches C's short-circuit order.
  void lower_cond(const Expr *e, int on_true, int on_false) {
    if (!e) {
      block().term = {TermKind::Jump, nullptr, on_true, -1};
      return;
    }
    if (e->kind == ExprKind::Paren) {
      lower_cond(e->a.get(), on_true, on_false);
      return;
    }
    if (e->kind == ExprKind::Unary && e->op == "!") {
      lower_cond(e->a.get(), on_false, on_true);
      return;
    }
    if (e->kind == ExprKind::Binary && (e->op == "&&" || e->op == "||")) {
      int mid = new_block();
      if (e->op == "&&")
        lower_cond(e->a.get(), mid, on_false);
      else
        lower_cond(e->a.get(), on_true, mid);
      cur_ = mid;
      lower_cond(e->b.get(), on_true, on_false);
      return;
    }
    validate_expr(e);
    block().term.kind = TermKind::Branch;
    block().term.cond = e;
    block().term.on_true = on_true;
    block().term.on_false = on_false;
  }

  static const Expr *strip_parens(const Expr *e) {
    while (e && e->kind == ExprKind::Paren)
      e = e->a.get();
    return e;
  }

  static bool is_place_expr(const Expr *e) {
    e = strip_parens(e);
    if (!e)
      return false;
    switch (e->kind) {
    case ExprKind::Ident:
    case ExprKind::Index:
    case ExprKind::Member:
      return true;
    case ExprKind::Unary:
      return e->op == "*";
    default:
      return false;
    }
  }

  void validate_expr(const Expr *e) {
    if (!e)
      return;
    if (e->kind == ExprKind::Unary && e->op == "&" &&
        !is_place_expr(e->a.get()))
      diags_.emit(e->span, Code::Lower,
                  {{"detail",
                    "cannot take the address of a value that is not a place"}});
    if (e->kind == ExprKind::Assign && !is_place_expr(e->a.get()))
      diags_.emit(e->span, Code::Lower,
                  {{"detail", "left side of assignment is not a place"}});
    if (e->kind == ExprKind::Unary && (e->op == "++" || e->op == "--") &&
        !is_place_expr(e->a.get()))
      diags_.emit(e->span, Code::Lower,
                  {{"detail", e->op + " needs a place to modify"}});
    validate_expr(e->a.get());
    validate_expr(e->b.get());
    for (const auto &arg : e->args)
      validate_expr(arg.get());
  }

  void fill_preds() {
    for (Block &b : cfg_.blocks)
      b.preds.clear();
    for (const Block &b : cfg_.blocks)
      for (int s : b.successors())
        cfg_.blocks[s].preds.push_back(b.id);
  }
};

inline Cfg build_cfg(const FunctionItem &fn,
                     std::vector<std::string> fn_unsafe_kinds,
                     DiagnosticBag &diags) {
  return CfgBuilder(fn, std::move(fn_unsafe_kinds), diags).run();
}

// Blocks in reverse postorder of a depth-first walk that visits successors
// last-to-first; straight-line code and simple diamonds come out in id
// order, and loop bodies precede their exits.
inline std::vector<int> reverse_postorder(const Cfg &cfg) {
  std::vector<int> order;
  std::vector<char> seen(cfg.blocks.size(), 0);
  std::function<void(int)> walk = [&](int id) {
    if (seen[id])
      return;
    seen[id] = 1;
    std::vector<int> succ = cfg.blocks[id].successors();
    for (auto it = succ.rbegin(); it != succ.rend(); ++it)
      walk(*it);
    order.push_back(id);
  };
  walk(cfg.entry);
  std::reverse(order.begin(), order.end());
  return order;
}

inline std::string dump_cfg(const Cfg &cfg) {
  std::string out;
  auto pos = [](Span s) {
    return std::to_string(s.line) + ":" + std::to_string(s.col);
  };
  out += "fn " + (cfg.fn ? cfg.fn->name : std::string("?")) + "\n";
  for (const Block &b : cfg.blocks) {
    out += "b" + std::to_string(b.id);
    if (b.loop_head)
      out += " (loop head)";
    out += ":\n";
    for (const Instr &in : b.instrs) {
      switch (in.kind) {
      case InstrKind::Decl:
        out += "  decl " + in.decl->name + " @" + pos(in.span) + "\n";
        break;
      case InstrKind::Expr:
        out += "  expr @" + pos(in.span) + "\n";
        break;
      case InstrKind::Return:
        out += "  return @" + pos(in.span) + "\n";
        break;
      case InstrKind::EnterChecked:
        out += std::string("  enter ") +
               (in.unchecked ? "unchecked" : "checked") + "(\"" +
               in.unsafe_kind + "\")\n";
        break;
      case InstrKind::ExitChecked:
        out += "  exit checked\n";
        break;
      }
    }
    switch (b.term.kind) {
    case TermKind::None:
      out += "  (no terminator)\n";
      break;
    case TermKind::Jump:
      out += "  jump b" + std::to_string(b.term.on_true) + "\n";
      break;
    case TermKind::Branch:
      out += "  branch @" + pos(b.term.cond->span) + " -> b" +
             std::to_string(b.term.on_true) + ", b" +
             std::to_string(b.term.on_false) + "\n";
      break;
    case TermKind::Ret:
      out += "  ret\n";
      break;
    }
  }
  return out;
}

} // namespace crusted

#endif
