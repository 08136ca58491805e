// Syntax tree for the mini-C subset. Annotations are kept as written (name
// plus raw argument token groups); the annotation resolver gives them meaning
// later. Every node carries the span of the text it covers.

#ifndef CRUSTED_AST_HPP
#define CRUSTED_AST_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <crusted/lexer.hpp>
#include <crusted/registry.hpp>
#include <crusted/span.hpp>

namespace crusted {

struct RawAnnotation {
  AnnKind kind = AnnKind::Hown;
  std::string name;
  Span span;
  bool has_parens = false;
  std::vector<std::vector<Token>> args; // split at top-level commas
};

enum class BaseType {
  Void,
  Bool,
  Char,
  Int,
  Unsigned,
  Long,
  Double,
  SizeT,
  SSizeT,
  Named, // typedef name or struct tag
};

struct PointerLevel {
  bool is_const = false;
  bool is_restrict = false;
  std::vector<RawAnnotation> anns;
};

struct TypeSyntax {
  BaseType base = BaseType::Void;
  std::string name;          // when base == Named
  bool is_struct_kw = false; // written as `struct name`
  bool base_const = false;
  std::vector<RawAnnotation> base_anns;
  std::vector<PointerLevel> pointers;
  Span span;

  bool is_pointer() const { return !pointers.empty(); }
};

enum class ExprKind {
  IntLit,
  FloatLit,
  CharLit,
  StringLit,
  Ident,
  Unary,  // op in `op`, prefix flag: ! - & * ++ --
  Binary,
  Assign,
  Call,   // callee in `a`
  Index,  // a[b]
  Member, // a.member / a->member
  Cast,
  Paren,
};

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  Span span;
  std::string text; // lexeme of literals and identifiers, as written
  int64_t int_value = 0;
  double float_value = 0.0;
  std::string str_value; // decoded string literal contents
  std::string op;
  bool prefix = true;
  std::unique_ptr<Expr> a;
  std::unique_ptr<Expr> b;
  std::string member;
  bool arrow = false;
  Span member_span;
  TypeSyntax cast_type;
  std::vector<std::unique_ptr<Expr>> args;
};

using ExprPtr = std::unique_ptr<Expr>;

enum class StmtKind {
  Expr,
  Decl,
  If,
  While,
  Return,
  Block,
  AnnBlock, // e_checked/e_unchecked { ... }
  Empty,
};

struct Stmt {
  StmtKind kind = StmtKind::Empty;
  Span span;
  ExprPtr expr; // Expr stmt, If/While condition, Return value
  TypeSyntax decl_type;
  std::string name;
  Span name_span;
  ExprPtr init;
  std::vector<std::unique_ptr<Stmt>> body;
  std::unique_ptr<Stmt> then_stmt;
  std::unique_ptr<Stmt> else_stmt;
  RawAnnotation block_ann;
};

using StmtPtr = std::unique_ptr<Stmt>;

struct ParamDecl {
  TypeSyntax type;
  std::string name; // may be empty in prototypes
  Span span;
  Span name_span;
};

struct FunctionItem {
  TypeSyntax ret;
  std::string name;
  Span name_span;
  std::vector<ParamDecl> params;
  bool is_extern = false;
  StmtPtr body; // null for a plain declaration
};

struct MemberDecl {
  TypeSyntax type;
  std::string name;
  Span span;
};

struct TypedefItem {
  TypeSyntax type; // carries annotations written between type and new name
  bool has_struct_body = false;
  std::string struct_tag; // `typedef struct Tag ...` (may be empty)
  std::vector<MemberDecl> members;
  std::string name; // the new type name
  Span name_span;
};

struct GlobalVarItem {
  TypeSyntax type;
  std::string name;
  Span name_span;
  bool is_extern = false;
};

struct Enumerator {
  std::string name;
  Span span;
  std::optional<int64_t> value;
};

struct EnumItem {
  std::string tag; // may be empty
  std::vector<Enumerator> enumerators;
};

enum class ItemKind {
  Include,
  Typedef,
  Function,
  GlobalVar,
  GlobalAnn, // e_bop / e_uop / e_declprops at file scope
  Enum,
};

struct Item {
  ItemKind kind = ItemKind::Include;
  Span span;
  std::string header; // Include
  TypedefItem tdef;
  std::unique_ptr<FunctionItem> fn;
  GlobalVarItem var;
  RawAnnotation ann;
  EnumItem en;
};

struct TranslationUnit {
  std::vector<Item> items;
};

} // namespace crusted

#endif
