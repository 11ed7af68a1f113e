#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace retest::javalite {

struct Span {
  int line = 0;
  int col = 0;
  int end_line = 0;
  int end_col = 0;
};

// ---------------------------------------------------------------------------
// Type references
// ---------------------------------------------------------------------------

struct TypeArg;

struct TypeRef {
  std::string name;  // possibly dotted: "Outer.Inner"
  std::vector<TypeArg> args;
  int array_dims = 0;

  bool empty() const { return name.empty(); }
};

struct TypeArg {
  bool wildcard = false;
  std::string bound_kind;  // "", "extends", "super" (wildcards only)
  TypeRef type;            // the concrete type, or the wildcard bound
};

struct TypeParam {
  std::string name;
  std::vector<TypeRef> bounds;  // `extends` bounds, `&`-separated
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct Expr;
struct Stmt;
struct Member;
struct TypeDecl;

using ExprPtr = std::shared_ptr<Expr>;
using StmtPtr = std::shared_ptr<Stmt>;
using MemberPtr = std::shared_ptr<Member>;
using TypeDeclPtr = std::shared_ptr<TypeDecl>;

enum class ExprKind {
  Literal,     // text = literal token ("1", "\"s\"", "true", "null", "'c'")
  Name,        // text = identifier
  FieldAccess, // a.text
  This,        // `this`
  OuterThis,   // text = outer class name, `Outer.this`
  Call,        // a = receiver (may be null for unqualified), text = method, args
  New,         // type, args, optional anonymous body
  ArrayNew,    // type, a = length expr
  Index,       // a[b]
  Lambda,      // params (names, optionally typed), body expr (a) or block (body)
  Binary,      // text = operator, a, b
  Unary,       // text = operator, a; text prefixed "post" for postfix ops
  Assign,      // text = operator ("=", "+=", ...), a, b
  Ternary,     // a ? b : c
  Paren,       // (a)
};

struct LambdaParam {
  TypeRef type;  // may be empty (inferred)
  std::string name;
};

struct Expr {
  ExprKind kind;
  Span span;
  std::string text;
  ExprPtr a, b, c;
  std::vector<ExprPtr> args;
  TypeRef type;                     // New / ArrayNew
  std::vector<MemberPtr> anon_body; // New with anonymous class body
  bool has_anon_body = false;
  std::vector<LambdaParam> lambda_params;
  bool lambda_paren = false;        // lambda params were parenthesized
  std::vector<StmtPtr> body;        // lambda block body
  bool lambda_block = false;
};

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

enum class StmtKind {
  Block,
  If,
  While,
  For,
  ForEach,
  Return,
  Throw,
  Break,
  Continue,
  LocalDecl,
  LocalClass,
  ExprStmt,
  Empty,
};

struct Stmt {
  StmtKind kind;
  Span span;
  std::vector<std::string> comments;  // leading `//` comment texts

  ExprPtr expr;               // condition / return value / thrown / expression
  TypeRef type;               // LocalDecl / ForEach element type
  std::string name;           // LocalDecl / ForEach variable
  bool is_final = false;      // LocalDecl
  ExprPtr init;               // LocalDecl initializer
  std::vector<StmtPtr> body;  // Block / loop body (always a Block for loops)
  StmtPtr then_branch;        // If
  StmtPtr else_branch;        // If (optional)
  StmtPtr for_init;           // For (LocalDecl or ExprStmt or Empty)
  ExprPtr for_update;         // For
  TypeDeclPtr local_type;     // LocalClass
};

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

struct Param {
  TypeRef type;
  std::string name;
  bool is_final = false;
};

enum class MemberKind { Field, Method, Initializer, NestedType };

struct Member {
  MemberKind kind;
  Span span;
  std::vector<std::string> comments;
  std::vector<std::string> modifiers;  // source order

  // Field
  TypeRef type;  // also the method return type
  std::string name;
  ExprPtr init;

  // Method
  std::vector<TypeParam> type_params;
  std::vector<Param> params;
  std::vector<StmtPtr> body;  // method / initializer body
  bool has_body = false;      // false for abstract / interface methods

  // NestedType
  TypeDeclPtr nested;
};

struct TypeDecl {
  bool is_interface = false;
  Span span;
  std::vector<std::string> comments;
  std::vector<std::string> modifiers;
  std::string name;
  std::vector<TypeParam> type_params;
  TypeRef extends;                 // empty when absent; interfaces: first extends
  std::vector<TypeRef> implements; // class: implements; interface: extra extends
  std::vector<MemberPtr> members;
};

struct CompilationUnit {
  std::vector<TypeDeclPtr> types;
};

using Ast = CompilationUnit;

inline bool has_modifier(const std::vector<std::string>& mods, std::string_view m) {
  for (const auto& s : mods)
    if (s == m) return true;
  return false;
}

}  // namespace retest::javalite
