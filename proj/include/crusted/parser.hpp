// Recursive-descent parser. Error recovery is statement granular: a bad
// statement becomes CR-PARSE plus an empty statement and parsing resumes at
// the next ';' or '}', so one error does not take the rest of the file down.
//
// The classic declaration/expression ambiguity is settled the way C compilers
// settle it: the parser tracks typedef names as it goes. Type names provided
// by modeled headers enter through the include hook.

#ifndef CRUSTED_PARSER_HPP
#define CRUSTED_PARSER_HPP

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <crusted/ast.hpp>
#include <crusted/diagnostic.hpp>
#include <crusted/lexer.hpp>

namespace crusted {

using IncludeHook =
    std::function<std::vector<std::string>(const std::string &)>;

class Parser {
public:
  Parser(std::vector<Token> toks, DiagnosticBag &diags,
         IncludeHook include_hook = {})
      : toks_(std::move(toks)), diags_(diags),
        include_hook_(std::move(include_hook)) {}

  TranslationUnit run() {
    TranslationUnit tu;
    while (!at_eof()) {
      size_t before = pos_;
      if (!parse_item(tu)) {
        sync_top_level();
        if (pos_ == before)
          ++pos_; // never stall
      }
    }
    return tu;
  }

private:
  std::vector<Token> toks_;
  DiagnosticBag &diags_;
  IncludeHook include_hook_;
  size_t pos_ = 0;
  std::set<std::string> type_names_;
  std::set<std::string> struct_tags_;

  // ---- token helpers ----

  const Token &peek(size_t off = 0) const {
    size_t i = pos_ + off;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token &prev() const { return toks_[pos_ ? pos_ - 1 : 0]; }
  bool at_eof() const { return peek().kind == Tok::Eof; }
  const Token &advance() {
    const Token &t = peek();
    if (!at_eof())
      ++pos_;
    return t;
  }
  bool check_punct(std::string_view p) const { return peek().is_punct(p); }
  bool check_kw(std::string_view k) const { return peek().is_keyword(k); }
  bool eat_punct(std::string_view p) {
    if (!check_punct(p))
      return false;
    advance();
    return true;
  }
  bool eat_kw(std::string_view k) {
    if (!check_kw(k))
      return false;
    advance();
    return true;
  }

  void error(const Token &at, const std::string &detail) {
    diags_.emit(at.span, Code::Parse, {{"detail", detail}});
  }

  bool expect_punct(std::string_view p, const char *what) {
    if (eat_punct(p))
      return true;
    error(peek(), std::string("expected '") + std::string(p) + "' " + what);
    return false;
  }

  void sync_top_level() {
    int depth = 0;
    while (!at_eof()) {
      if (check_punct("{"))
        ++depth;
      if (check_punct("}")) {
        if (depth > 0)
          --depth;
        else {
          advance();
          return;
        }
      }
      if (depth == 0 && check_punct(";")) {
        advance();
        return;
      }
      advance();
    }
  }

  void sync_statement() {
    int depth = 0;
    while (!at_eof()) {
      if (check_punct(";") && depth == 0) {
        advance();
        return;
      }
      if (check_punct("{"))
        ++depth;
      if (check_punct("}")) {
        if (depth == 0)
          return; // let the block close
        --depth;
      }
      advance();
    }
  }

  // ---- types and annotations ----

  bool at_type_start() const {
    const Token &t = peek();
    if (t.kind == Tok::Keyword)
      return t.text == "void" || t.text == "char" || t.text == "int" ||
             t.text == "unsigned" || t.text == "long" || t.text == "double" ||
             t.text == "_Bool" || t.text == "bool" || t.text == "size_t" ||
             t.text == "ssize_t" || t.text == "struct" || t.text == "const" ||
             t.text == "restrict";
    if (t.kind == Tok::Ident)
      return type_names_.count(t.text) > 0;
    return false;
  }

  // Collects one annotation with its raw argument tokens.
  bool parse_annotation(RawAnnotation &out) {
    const Token &name = peek();
    const AnnSpec *spec = find_annotation(name.text);
    if (name.kind != Tok::Annotation || !spec) {
      error(name, "expected annotation");
      return false;
    }
    advance();
    out.kind = spec->kind;
    out.name = name.text;
    out.span = name.span;
    if (check_punct("(")) {
      advance();
      out.has_parens = true;
      out.args.emplace_back();
      int depth = 0;
      for (;;) {
        if (at_eof()) {
          error(peek(), "unterminated annotation argument list");
          return false;
        }
        if (depth == 0 && check_punct(")")) {
          advance();
          break;
        }
        if (depth == 0 && check_punct(",")) {
          advance();
          out.args.emplace_back();
          continue;
        }
        if (check_punct("("))
          ++depth;
        else if (check_punct(")"))
          --depth;
        out.args.back().push_back(advance());
      }
      if (out.args.size() == 1 && out.args[0].empty())
        out.args.clear();
    } else if (spec->arity == AnnArity::Args) {
      error(peek(), out.name + " requires an argument list");
      return false;
    }
    // Close the span over the argument list.
    if (out.has_parens)
      out.span = span_cover(out.span, prev().span);
    return true;
  }

  void parse_annotation_seq(std::vector<RawAnnotation> &out) {
    while (peek().kind == Tok::Annotation &&
           find_annotation(peek().text) != nullptr) {
      // Checked/unchecked introduce statements, never type positions.
      const AnnSpec *spec = find_annotation(peek().text);
      if (spec->kind == AnnKind::Checked || spec->kind == AnnKind::Unchecked)
        break;
      RawAnnotation ann;
      if (!parse_annotation(ann))
        break;
      out.push_back(std::move(ann));
    }
  }

  // Base type with qualifiers and trailing annotations; pointer levels with
  // their own qualifier/annotation runs.
  bool parse_type(TypeSyntax &ty) {
    ty.span = peek().span;
    bool saw_base = false;
    bool is_unsigned = false, is_long = false;
    for (;;) {
      const Token &t = peek();
      if (t.is_keyword("const")) {
        ty.base_const = true;
        advance();
        continue;
      }
      if (t.is_keyword("restrict")) {
        advance();
        continue;
      }
      if (t.kind == Tok::Keyword &&
          (t.text == "void" || t.text == "char" || t.text == "int" ||
           t.text == "double" || t.text == "_Bool" || t.text == "bool" ||
           t.text == "size_t" || t.text == "ssize_t")) {
        if (saw_base && !(is_unsigned || is_long)) {
          error(t, "unexpected type keyword");
          return false;
        }
        saw_base = true;
        if (t.text == "void")
          ty.base = BaseType::Void;
        else if (t.text == "char")
          ty.base = BaseType::Char;
        else if (t.text == "int")
          ty.base = is_unsigned ? BaseType::Unsigned
                                : (is_long ? BaseType::Long : BaseType::Int);
        else if (t.text == "double")
          ty.base = BaseType::Double;
        else if (t.text == "_Bool" || t.text == "bool")
          ty.base = BaseType::Bool;
        else if (t.text == "size_t")
          ty.base = BaseType::SizeT;
        else
          ty.base = BaseType::SSizeT;
        advance();
        continue;
      }
      if (t.is_keyword("unsigned")) {
        is_unsigned = true;
        saw_base = true;
        ty.base = BaseType::Unsigned;
        advance();
        continue;
      }
      if (t.is_keyword("long")) {
        is_long = true;
        saw_base = true;
        ty.base = is_unsigned ? BaseType::Unsigned : BaseType::Long;
        advance();
        continue;
      }
      if (t.is_keyword("struct")) {
        advance();
        const Token &tag = peek();
        if (tag.kind != Tok::Ident) {
          error(tag, "expected struct tag");
          return false;
        }
        advance();
        ty.base = BaseType::Named;
        ty.name = tag.text;
        ty.is_struct_kw = true;
        struct_tags_.insert(tag.text);
        saw_base = true;
        continue;
      }
      if (t.kind == Tok::Ident && !saw_base && type_names_.count(t.text)) {
        ty.base = BaseType::Named;
        ty.name = t.text;
        saw_base = true;
        advance();
        continue;
      }
      break;
    }
    if (!saw_base) {
      error(peek(), "expected type");
      return false;
    }
    parse_annotation_seq(ty.base_anns);
    while (check_punct("*")) {
      advance();
      PointerLevel lvl;
      for (;;) {
        if (eat_kw("const")) {
          lvl.is_const = true;
          continue;
        }
        if (eat_kw("restrict")) {
          lvl.is_restrict = true;
          continue;
        }
        if (peek().kind == Tok::Annotation) {
          const AnnSpec *spec = find_annotation(peek().text);
          if (spec && spec->kind != AnnKind::Checked &&
              spec->kind != AnnKind::Unchecked) {
            RawAnnotation ann;
            if (!parse_annotation(ann))
              return false;
            lvl.anns.push_back(std::move(ann));
            continue;
          }
        }
        break;
      }
      ty.pointers.push_back(std::move(lvl));
    }
    ty.span = span_cover(ty.span, prev().span);
    return true;
  }

  // ---- top-level items ----

  bool parse_item(TranslationUnit &tu) {
    const Token &t = peek();
    if (t.kind == Tok::HeaderInclude) {
      Item item;
      item.kind = ItemKind::Include;
      item.span = t.span;
      item.header = t.value;
      advance();
      if (include_hook_)
        for (const std::string &n : include_hook_(item.header))
          type_names_.insert(n);
      tu.items.push_back(std::move(item));
      return true;
    }
    if (t.kind == Tok::Punct && t.text == ";") {
      advance(); // stray semicolon
      return true;
    }
    if (t.kind == Tok::Annotation) {
      const AnnSpec *spec = find_annotation(t.text);
      if (spec && spec->file_scope) {
        Item item;
        item.kind = ItemKind::GlobalAnn;
        if (!parse_annotation(item.ann))
          return false;
        item.span = item.ann.span;
        expect_punct(";", "after file-scope annotation");
        tu.items.push_back(std::move(item));
        return true;
      }
      error(t, "annotation '" + t.text + "' is not valid at file scope");
      return false;
    }
    if (t.is_keyword("typedef"))
      return parse_typedef(tu);
    if (t.is_keyword("enum"))
      return parse_enum(tu);

    bool is_extern = false;
    if (check_kw("extern")) {
      is_extern = true;
      advance();
    }
    if (!at_type_start()) {
      error(peek(), "expected declaration");
      return false;
    }
    TypeSyntax ty;
    if (!parse_type(ty))
      return false;
    const Token &name = peek();
    if (name.kind != Tok::Ident) {
      error(name, "expected declarator name");
      return false;
    }
    advance();
    if (check_punct("("))
      return parse_function_rest(tu, std::move(ty), name, is_extern);
    // Global object declaration.
    Item item;
    item.kind = ItemKind::GlobalVar;
    item.span = span_cover(ty.span, name.span);
    item.var.type = std::move(ty);
    item.var.name = name.text;
    item.var.name_span = name.span;
    item.var.is_extern = is_extern;
    if (!expect_punct(";", "after declaration")) {
      sync_top_level();
      return true;
    }
    tu.items.push_back(std::move(item));
    return true;
  }

  bool parse_typedef(TranslationUnit &tu) {
    Span start = peek().span;
    advance(); // typedef
    Item item;
    item.kind = ItemKind::Typedef;
    TypedefItem &td = item.tdef;

    if (check_kw("struct")) {
      advance();
      if (peek().kind == Tok::Ident) {
        td.struct_tag = advance().text;
        struct_tags_.insert(td.struct_tag);
      }
      if (check_punct("{")) {
        advance();
        td.has_struct_body = true;
        while (!check_punct("}") && !at_eof()) {
          MemberDecl m;
          if (!parse_type(m.type)) {
            sync_statement();
            continue;
          }
          const Token &mn = peek();
          if (mn.kind != Tok::Ident) {
            error(mn, "expected member name");
            sync_statement();
            continue;
          }
          advance();
          m.name = mn.text;
          m.span = span_cover(m.type.span, mn.span);
          expect_punct(";", "after struct member");
          td.members.push_back(std::move(m));
        }
        expect_punct("}", "to close struct body");
      }
      td.type.base = BaseType::Named;
      td.type.name = td.struct_tag;
      td.type.is_struct_kw = true;
      td.type.span = start;
      parse_annotation_seq(td.type.base_anns);
      while (check_punct("*")) {
        advance();
        PointerLevel lvl;
        while (eat_kw("const"))
          lvl.is_const = true;
        parse_annotation_seq(lvl.anns);
        td.type.pointers.push_back(std::move(lvl));
      }
    } else {
      if (!parse_type(td.type)) {
        sync_top_level();
        return true;
      }
    }
    const Token &name = peek();
    if (name.kind != Tok::Ident) {
      error(name, "expected typedef name");
      sync_top_level();
      return true;
    }
    advance();
    td.name = name.text;
    td.name_span = name.span;
    type_names_.insert(td.name);
    item.span = span_cover(start, name.span);
    expect_punct(";", "after typedef");
    tu.items.push_back(std::move(item));
    return true;
  }

  bool parse_enum(TranslationUnit &tu) {
    Span start = peek().span;
    advance(); // enum
    Item item;
    item.kind = ItemKind::Enum;
    if (peek().kind == Tok::Ident)
      item.en.tag = advance().text;
    if (!expect_punct("{", "to open enum body")) {
      sync_top_level();
      return true;
    }
    while (!check_punct("}") && !at_eof()) {
      const Token &n = peek();
      if (n.kind != Tok::Ident) {
        error(n, "expected enumerator name");
        sync_top_level();
        return true;
      }
      advance();
      Enumerator e;
      e.name = n.text;
      e.span = n.span;
      if (eat_punct("=")) {
        bool neg = eat_punct("-");
        const Token &v = peek();
        if (v.kind != Tok::IntLit) {
          error(v, "expected integer enumerator value");
          sync_top_level();
          return true;
        }
        advance();
        e.value = neg ? -v.int_value : v.int_value;
      }
      item.en.enumerators.push_back(std::move(e));
      if (!eat_punct(","))
        break;
    }
    expect_punct("}", "to close enum body");
    expect_punct(";", "after enum");
    item.span = span_cover(start, prev().span);
    tu.items.push_back(std::move(item));
    return true;
  }

  bool parse_function_rest(TranslationUnit &tu, TypeSyntax ret,
                           const Token &name, bool is_extern) {
    Item item;
    item.kind = ItemKind::Function;
    item.fn = std::make_unique<FunctionItem>();
    FunctionItem &fn = *item.fn;
    fn.ret = std::move(ret);
    fn.name = name.text;
    fn.name_span = name.span;
    fn.is_extern = is_extern;

    advance(); // '('
    if (check_kw("void") && peek(1).is_punct(")")) {
      advance();
      advance();
    } else if (eat_punct(")")) {
      // empty parameter list
    } else {
      for (;;) {
        ParamDecl p;
        p.span = peek().span;
        if (!parse_type(p.type)) {
          sync_top_level();
          return true;
        }
        if (peek().kind == Tok::Ident) {
          const Token &pn = advance();
          p.name = pn.text;
          p.name_span = pn.span;
          p.span = span_cover(p.span, pn.span);
        }
        fn.params.push_back(std::move(p));
        if (eat_punct(","))
          continue;
        break;
      }
      if (!expect_punct(")", "to close parameter list")) {
        sync_top_level();
        return true;
      }
    }
    item.span = span_cover(fn.ret.span, prev().span);
    if (eat_punct(";")) {
      tu.items.push_back(std::move(item));
      return true;
    }
    if (!check_punct("{")) {
      error(peek(), "expected ';' or function body");
      sync_top_level();
      return true;
    }
    fn.body = parse_block();
    item.span = span_cover(item.span, fn.body->span);
    tu.items.push_back(std::move(item));
    return true;
  }

  // ---- statements ----

  StmtPtr parse_block() {
    auto blk = std::make_unique<Stmt>();
    blk->kind = StmtKind::Block;
    blk->span = peek().span;
    advance(); // '{'
    while (!check_punct("}") && !at_eof()) {
      size_t before = pos_;
      StmtPtr s = parse_statement();
      if (s)
        blk->body.push_back(std::move(s));
      if (pos_ == before)
        ++pos_;
    }
    Span close = peek().span;
    expect_punct("}", "to close block");
    blk->span = span_cover(blk->span, close);
    return blk;
  }

  StmtPtr make_empty(Span sp) {
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::Empty;
    s->span = sp;
    return s;
  }

  StmtPtr parse_statement() {
    const Token &t = peek();
    if (t.is_punct("{"))
      return parse_block();
    if (t.is_punct(";")) {
      advance();
      return make_empty(t.span);
    }
    if (t.kind == Tok::Annotation) {
      const AnnSpec *spec = find_annotation(t.text);
      if (spec && (spec->kind == AnnKind::Checked ||
                   spec->kind == AnnKind::Unchecked)) {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::AnnBlock;
        s->span = t.span;
        if (!parse_annotation(s->block_ann)) {
          sync_statement();
          return make_empty(t.span);
        }
        if (!check_punct("{")) {
          error(peek(), "expected block after " + s->block_ann.name);
          sync_statement();
          return make_empty(t.span);
        }
        s->then_stmt = parse_block();
        s->span = span_cover(s->span, s->then_stmt->span);
        return s;
      }
      error(t, "annotation '" + t.text + "' is not a statement");
      sync_statement();
      return make_empty(t.span);
    }
    if (t.is_keyword("if"))
      return parse_if();
    if (t.is_keyword("while"))
      return parse_while();
    if (t.is_keyword("return"))
      return parse_return();
    if (at_type_start() && !starts_expression_instead())
      return parse_local_decl();
    return parse_expr_statement();
  }

  // `name` that is a typedef starts a declaration; any other identifier (or
  // '(' etc.) starts an expression.
  bool starts_expression_instead() const {
    const Token &t = peek();
    if (t.kind != Tok::Ident)
      return false;
    return type_names_.count(t.text) == 0;
  }

  StmtPtr parse_if() {
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::If;
    s->span = peek().span;
    advance();
    if (!expect_punct("(", "after 'if'")) {
      sync_statement();
      return make_empty(s->span);
    }
    s->expr = parse_expression();
    if (!s->expr || !expect_punct(")", "to close condition")) {
      sync_statement();
      return make_empty(s->span);
    }
    s->then_stmt = parse_statement();
    if (!s->then_stmt)
      s->then_stmt = make_empty(s->span);
    if (check_kw("else")) {
      advance();
      s->else_stmt = parse_statement();
    }
    s->span = span_cover(s->span, s->else_stmt ? s->else_stmt->span
                                               : s->then_stmt->span);
    return s;
  }

  StmtPtr parse_while() {
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::While;
    s->span = peek().span;
    advance();
    if (!expect_punct("(", "after 'while'")) {
      sync_statement();
      return make_empty(s->span);
    }
    s->expr = parse_expression();
    if (!s->expr || !expect_punct(")", "to close condition")) {
      sync_statement();
      return make_empty(s->span);
    }
    s->then_stmt = parse_statement();
    if (!s->then_stmt)
      s->then_stmt = make_empty(s->span);
    s->span = span_cover(s->span, s->then_stmt->span);
    return s;
  }

  StmtPtr parse_return() {
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::Return;
    s->span = peek().span;
    advance();
    if (!check_punct(";")) {
      s->expr = parse_expression();
      if (!s->expr) {
        sync_statement();
        return make_empty(s->span);
      }
    }
    if (!expect_punct(";", "after return"))
      sync_statement();
    if (s->expr)
      s->span = span_cover(s->span, s->expr->span);
    return s;
  }

  StmtPtr parse_local_decl() {
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::Decl;
    s->span = peek().span;
    if (!parse_type(s->decl_type)) {
      sync_statement();
      return make_empty(s->span);
    }
    const Token &name = peek();
    if (name.kind != Tok::Ident) {
      error(name, "expected variable name");
      sync_statement();
      return make_empty(s->span);
    }
    advance();
    s->name = name.text;
    s->name_span = name.span;
    if (check_punct("[")) {
      error(peek(), "array declarators are outside the analyzable subset");
      sync_statement();
      return make_empty(s->span);
    }
    if (eat_punct("=")) {
      s->init = parse_expression();
      if (!s->init) {
        sync_statement();
        return make_empty(s->span);
      }
    }
    s->span = span_cover(s->span, prev().span);
    if (!expect_punct(";", "after declaration"))
      sync_statement();
    return s;
  }

  StmtPtr parse_expr_statement() {
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::Expr;
    s->span = peek().span;
    s->expr = parse_expression();
    if (!s->expr) {
      sync_statement();
      return make_empty(s->span);
    }
    s->span = s->expr->span;
    if (!expect_punct(";", "after expression"))
      sync_statement();
    return s;
  }

  // ---- expressions ----

  ExprPtr parse_expression() { return parse_assignment(); }

  ExprPtr parse_assignment() {
    ExprPtr lhs = parse_binary(0);
    if (!lhs)
      return nullptr;
    if (check_punct("=")) {
      advance();
      ExprPtr rhs = parse_assignment();
      if (!rhs)
        return nullptr;
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Assign;
      e->span = span_cover(lhs->span, rhs->span);
      e->a = std::move(lhs);
      e->b = std::move(rhs);
      return e;
    }
    return lhs;
  }

  static int binary_prec(const std::string &op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*" || op == "/" || op == "%") return 6;
    return 0;
  }

  ExprPtr parse_binary(int min_prec) {
    ExprPtr lhs = parse_unary();
    if (!lhs)
      return nullptr;
    for (;;) {
      const Token &t = peek();
      if (t.kind != Tok::Punct)
        break;
      int prec = binary_prec(t.text);
      if (prec == 0 || prec < min_prec)
        break;
      std::string op = t.text;
      advance();
      ExprPtr rhs = parse_binary(prec + 1);
      if (!rhs)
        return nullptr;
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Binary;
      e->op = op;
      e->span = span_cover(lhs->span, rhs->span);
      e->a = std::move(lhs);
      e->b = std::move(rhs);
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    const Token &t = peek();
    if (t.is_punct("(") && is_cast_start()) {
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Cast;
      e->span = t.span;
      advance();
      if (!parse_type(e->cast_type))
        return nullptr;
      if (!expect_punct(")", "to close cast"))
        return nullptr;
      e->a = parse_unary();
      if (!e->a)
        return nullptr;
      e->span = span_cover(e->span, e->a->span);
      return e;
    }
    if (t.kind == Tok::Punct &&
        (t.text == "!" || t.text == "-" || t.text == "*" || t.text == "&" ||
         t.text == "++" || t.text == "--")) {
      advance();
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Unary;
      e->op = t.text;
      e->prefix = true;
      e->a = parse_unary();
      if (!e->a)
        return nullptr;
      e->span = span_cover(t.span, e->a->span);
      return e;
    }
    return parse_postfix();
  }

  bool is_cast_start() const {
    const Token &t1 = peek(1);
    if (t1.kind == Tok::Keyword)
      return t1.text == "void" || t1.text == "char" || t1.text == "int" ||
             t1.text == "unsigned" || t1.text == "long" ||
             t1.text == "double" || t1.text == "_Bool" || t1.text == "bool" ||
             t1.text == "size_t" || t1.text == "ssize_t" ||
             t1.text == "struct" || t1.text == "const";
    if (t1.kind == Tok::Ident)
      return type_names_.count(t1.text) > 0;
    return false;
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    if (!e)
      return nullptr;
    for (;;) {
      const Token &t = peek();
      if (t.is_punct("(")) {
        advance();
        auto call = std::make_unique<Expr>();
        call->kind = ExprKind::Call;
        call->span = e->span;
        call->a = std::move(e);
        if (!check_punct(")")) {
          for (;;) {
            ExprPtr arg = parse_assignment();
            if (!arg)
              return nullptr;
            call->args.push_back(std::move(arg));
            if (!eat_punct(","))
              break;
          }
        }
        Span close = peek().span;
        if (!expect_punct(")", "to close call"))
          return nullptr;
        call->span = span_cover(call->span, close);
        e = std::move(call);
      } else if (t.is_punct("[")) {
        advance();
        auto idx = std::make_unique<Expr>();
        idx->kind = ExprKind::Index;
        idx->span = e->span;
        idx->a = std::move(e);
        idx->b = parse_expression();
        if (!idx->b)
          return nullptr;
        Span close = peek().span;
        if (!expect_punct("]", "to close index"))
          return nullptr;
        idx->span = span_cover(idx->span, close);
        e = std::move(idx);
      } else if (t.is_punct(".") || t.is_punct("->")) {
        bool arrow = t.text == "->";
        advance();
        const Token &m = peek();
        if (m.kind != Tok::Ident) {
          error(m, "expected member name");
          return nullptr;
        }
        advance();
        auto mem = std::make_unique<Expr>();
        mem->kind = ExprKind::Member;
        mem->span = span_cover(e->span, m.span);
        mem->a = std::move(e);
        mem->member = m.text;
        mem->member_span = m.span;
        mem->arrow = arrow;
        e = std::move(mem);
      } else if (t.is_punct("++") || t.is_punct("--")) {
        advance();
        auto u = std::make_unique<Expr>();
        u->kind = ExprKind::Unary;
        u->op = t.text;
        u->prefix = false;
        u->span = span_cover(e->span, t.span);
        u->a = std::move(e);
        e = std::move(u);
      } else {
        break;
      }
    }
    return e;
  }

  ExprPtr parse_primary() {
    const Token &t = peek();
    auto e = std::make_unique<Expr>();
    e->span = t.span;
    switch (t.kind) {
    case Tok::IntLit:
      e->kind = ExprKind::IntLit;
      e->int_value = t.int_value;
      e->text = t.text;
      advance();
      return e;
    case Tok::FloatLit:
      e->kind = ExprKind::FloatLit;
      e->float_value = t.float_value;
      e->text = t.text;
      advance();
      return e;
    case Tok::CharLit:
      e->kind = ExprKind::CharLit;
      e->int_value = t.int_value;
      e->text = t.text;
      advance();
      return e;
    case Tok::StringLit:
      e->kind = ExprKind::StringLit;
      e->str_value = t.value;
      e->text = t.text;
      advance();
      return e;
    case Tok::Ident:
      e->kind = ExprKind::Ident;
      e->text = t.text;
      advance();
      return e;
    case Tok::Punct:
      if (t.text == "(") {
        advance();
        ExprPtr inner = parse_expression();
        if (!inner)
          return nullptr;
        Span close = peek().span;
        if (!expect_punct(")", "to close parenthesized expression"))
          return nullptr;
        e->kind = ExprKind::Paren;
        e->span = span_cover(e->span, close);
        e->a = std::move(inner);
        return e;
      }
      break;
    default:
      break;
    }
    error(t, "expected expression");
    return nullptr;
  }
};

inline TranslationUnit parse_translation_unit(std::vector<Token> toks,
                                              DiagnosticBag &diags,
                                              IncludeHook hook = {}) {
  return Parser(std::move(toks), diags, std::move(hook)).run();
}

} // namespace crusted

#endif
