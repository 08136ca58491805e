// AST printer. With annotations enabled the output tokenizes back to the
// input token stream (kind and lexeme, whitespace aside); with them disabled
// it is the annotation-free projection used by the header-neutrality check.

#ifndef CRUSTED_PRINTER_HPP
#define CRUSTED_PRINTER_HPP

#include <string>

#include <crusted/ast.hpp>

namespace crusted {

struct PrintOptions {
  bool annotations = true;
  // Skip `e_crusted_ignored` globals left behind by macro-expanding the
  // file-scope annotations; lets expanded output compare against projections.
  bool drop_reserved_globals = false;
};

class Printer {
public:
  explicit Printer(PrintOptions opt) : opt_(opt) {}

  std::string print(const TranslationUnit &tu) {
    for (const Item &item : tu.items)
      print_item(item);
    return std::move(out_);
  }

private:
  PrintOptions opt_;
  std::string out_;

  void emit(std::string_view s) {
    if (!out_.empty() && out_.back() != '\n')
      out_ += ' ';
    out_ += s;
  }
  void emit_line(std::string_view s) {
    emit(s);
    out_ += '\n';
  }

  void print_annotation(const RawAnnotation &a) {
    if (!opt_.annotations)
      return;
    std::string s = a.name;
    if (a.has_parens) {
      s += "(";
      for (size_t i = 0; i < a.args.size(); ++i) {
        if (i)
          s += ", ";
        for (size_t j = 0; j < a.args[i].size(); ++j) {
          if (j)
            s += " ";
          s += a.args[i][j].text;
        }
      }
      s += ")";
    }
    emit(s);
  }

  void print_type(const TypeSyntax &ty) {
    if (ty.base_const)
      emit("const");
    switch (ty.base) {
    case BaseType::Void: emit("void"); break;
    case BaseType::Bool: emit("bool"); break;
    case BaseType::Char: emit("char"); break;
    case BaseType::Int: emit("int"); break;
    case BaseType::Unsigned: emit("unsigned"); break;
    case BaseType::Long: emit("long"); break;
    case BaseType::Double: emit("double"); break;
    case BaseType::SizeT: emit("size_t"); break;
    case BaseType::SSizeT: emit("ssize_t"); break;
    case BaseType::Named:
      if (ty.is_struct_kw)
        emit("struct");
      emit(ty.name);
      break;
    }
    for (const RawAnnotation &a : ty.base_anns)
      print_annotation(a);
    for (const PointerLevel &p : ty.pointers) {
      emit("*");
      if (p.is_const)
        emit("const");
      if (p.is_restrict)
        emit("restrict");
      for (const RawAnnotation &a : p.anns)
        print_annotation(a);
    }
  }

  void print_expr(const Expr &e) {
    switch (e.kind) {
    case ExprKind::IntLit:
    case ExprKind::FloatLit:
    case ExprKind::CharLit:
    case ExprKind::StringLit:
    case ExprKind::Ident:
      emit(e.text);
      break;
    case ExprKind::Unary:
      if (e.prefix) {
        emit(e.op);
        print_expr(*e.a);
      } else {
        print_expr(*e.a);
        emit(e.op);
      }
      break;
    case ExprKind::Binary:
      print_expr(*e.a);
      emit(e.op);
      print_expr(*e.b);
      break;
    case ExprKind::Assign:
      print_expr(*e.a);
      emit("=");
      print_expr(*e.b);
      break;
    case ExprKind::Call:
      print_expr(*e.a);
      emit("(");
      for (size_t i = 0; i < e.args.size(); ++i) {
        if (i)
          emit(",");
        print_expr(*e.args[i]);
      }
      emit(")");
      break;
    case ExprKind::Index:
      print_expr(*e.a);
      emit("[");
      print_expr(*e.b);
      emit("]");
      break;
    case ExprKind::Member:
      print_expr(*e.a);
      emit(e.arrow ? "->" : ".");
      emit(e.member);
      break;
    case ExprKind::Cast:
      emit("(");
      print_type(e.cast_type);
      emit(")");
      print_expr(*e.a);
      break;
    case ExprKind::Paren:
      emit("(");
      print_expr(*e.a);
      emit(")");
      break;
    }
  }

  void print_stmt(const Stmt &s) {
    switch (s.kind) {
    case StmtKind::Expr:
      print_expr(*s.expr);
      emit_line(";");
      break;
    case StmtKind::Decl:
      print_type(s.decl_type);
      emit(s.name);
      if (s.init) {
        emit("=");
        print_expr(*s.init);
      }
      emit_line(";");
      break;
    case StmtKind::If:
      emit("if");
      emit("(");
      print_expr(*s.expr);
      emit_line(")");
      print_stmt(*s.then_stmt);
      if (s.else_stmt) {
        emit_line("else");
        print_stmt(*s.else_stmt);
      }
      break;
    case StmtKind::While:
      emit("while");
      emit("(");
      print_expr(*s.expr);
      emit_line(")");
      print_stmt(*s.then_stmt);
      break;
    case StmtKind::Return:
      emit("return");
      if (s.expr)
        print_expr(*s.expr);
      emit_line(";");
      break;
    case StmtKind::Block:
      emit_line("{");
      for (const StmtPtr &c : s.body)
        print_stmt(*c);
      emit_line("}");
      break;
    case StmtKind::AnnBlock:
      if (opt_.annotations)
        print_annotation(s.block_ann);
      print_stmt(*s.then_stmt);
      break;
    case StmtKind::Empty:
      emit_line(";");
      break;
    }
  }

  void print_item(const Item &item) {
    switch (item.kind) {
    case ItemKind::Include:
      emit_line("#include <" + item.header + ">");
      break;
    case ItemKind::Typedef: {
      const TypedefItem &td = item.tdef;
      emit("typedef");
      if (td.type.is_struct_kw) {
        emit("struct");
        if (!td.struct_tag.empty())
          emit(td.struct_tag);
        if (td.has_struct_body) {
          emit_line("{");
          for (const MemberDecl &m : td.members) {
            print_type(m.type);
            emit(m.name);
            emit_line(";");
          }
          emit("}");
        }
        for (const RawAnnotation &a : td.type.base_anns)
          print_annotation(a);
        for (const PointerLevel &p : td.type.pointers) {
          emit("*");
          if (p.is_const)
            emit("const");
          for (const RawAnnotation &a : p.anns)
            print_annotation(a);
        }
      } else {
        print_type(td.type);
      }
      emit(td.name);
      emit_line(";");
      break;
    }
    case ItemKind::Function: {
      const FunctionItem &fn = *item.fn;
      if (fn.is_extern)
        emit("extern");
      print_type(fn.ret);
      emit(fn.name);
      emit("(");
      if (fn.params.empty()) {
        emit("void");
      } else {
        for (size_t i = 0; i < fn.params.size(); ++i) {
          if (i)
            emit(",");
          print_type(fn.params[i].type);
          if (!fn.params[i].name.empty())
            emit(fn.params[i].name);
        }
      }
      emit(")");
      if (fn.body)
        print_stmt(*fn.body);
      else
        emit_line(";");
      break;
    }
    case ItemKind::GlobalVar:
      if (opt_.drop_reserved_globals && item.var.name == "e_crusted_ignored")
        break;
      if (item.var.is_extern)
        emit("extern");
      print_type(item.var.type);
      emit(item.var.name);
      emit_line(";");
      break;
    case ItemKind::GlobalAnn:
      if (!opt_.annotations)
        break;
      print_annotation(item.ann);
      emit_line(";");
      break;
    case ItemKind::Enum:
      emit("enum");
      if (!item.en.tag.empty())
        emit(item.en.tag);
      emit_line("{");
      for (size_t i = 0; i < item.en.enumerators.size(); ++i) {
        const Enumerator &e = item.en.enumerators[i];
        emit(e.name);
        if (e.value) {
          emit("=");
          if (*e.value < 0) {
            emit("-");
            emit(std::to_string(-*e.value));
          } else {
            emit(std::to_string(*e.value));
          }
        }
        if (i + 1 < item.en.enumerators.size())
          emit(",");
      }
      emit("}");
      emit_line(";");
      break;
    }
  }
};

inline std::string print_unit(const TranslationUnit &tu,
                              PrintOptions opt = {}) {
  return Printer(opt).print(tu);
}

} // namespace crusted

#endif
