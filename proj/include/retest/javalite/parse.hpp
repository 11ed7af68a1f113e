#pragma once

#include <cctype>
#include <stdexcept>

#include "retest/javalite/ast.hpp"

namespace retest::javalite {

struct Diagnostic {
  Span span;
  std::string message;
};

class SyntaxError : public std::runtime_error {
 public:
  explicit SyntaxError(std::vector<Diagnostic> diags)
      : std::runtime_error(diags.empty() ? "syntax error"
                                         : "syntax error at line " + std::to_string(diags[0].span.line) +
                                               ": " + diags[0].message),
        diagnostics(std::move(diags)) {}
  std::vector<Diagnostic> diagnostics;
};

struct ParseResult {
  std::optional<Ast> ast;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return ast.has_value(); }
};

namespace detail {

enum class Tok { Ident, Keyword, Number, String, Char, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

inline bool is_keyword(const std::string& s) {
  static const char* kws[] = {
      "class",     "interface", "extends",   "implements", "this",   "new",
      "return",    "if",        "else",      "while",      "for",    "final",
      "static",    "public",    "private",   "protected",  "abstract", "void",
      "throw",     "break",     "continue",  "true",       "false",  "null",
      "super",     "default",   "synchronized"};
  for (const char* k : kws)
    if (s == k) return true;
  return false;
}

struct PendingComment {
  std::string text;
  int line;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  // Tokenizes the whole input; comments land in `comments`.
  std::vector<Token> run(std::vector<PendingComment>& comments, std::vector<Diagnostic>& diags) {
    std::vector<Token> out;
    while (true) {
      skip_ws(comments);
      if (pos_ >= src_.size()) break;
      Span start = here();
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
        std::string word;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                src_[pos_] == '$'))
          word += advance();
        out.push_back({is_keyword(word) ? Tok::Keyword : Tok::Ident, word, close(start)});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.' ||
                src_[pos_] == '_')) {
          // stop at a '.' that is not followed by a digit (method call on literal)
          if (src_[pos_] == '.' &&
              !(pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))))
            break;
          num += advance();
        }
        out.push_back({Tok::Number, num, close(start)});
      } else if (c == '"') {
        std::string lit;
        lit += advance();
        while (pos_ < src_.size() && src_[pos_] != '"') {
          if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) lit += advance();
          if (src_[pos_] == '\n') break;
          lit += advance();
        }
        if (pos_ >= src_.size() || src_[pos_] != '"') {
          diags.push_back({close(start), "unterminated string literal"});
          return out;
        }
        lit += advance();
        out.push_back({Tok::String, lit, close(start)});
      } else if (c == '\'') {
        std::string lit;
        lit += advance();
        while (pos_ < src_.size() && src_[pos_] != '\'') {
          if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) lit += advance();
          lit += advance();
        }
        if (pos_ >= src_.size()) {
          diags.push_back({close(start), "unterminated character literal"});
          return out;
        }
        lit += advance();
        out.push_back({Tok::Char, lit, close(start)});
      } else {
        out.push_back({Tok::Punct, punct(), close(start)});
      }
    }
    out.push_back({Tok::End, "", here()});
    return out;
  }

 private:
  Span here() const { return {line_, col_, line_, col_}; }
  Span close(Span s) const {
    s.end_line = line_;
    s.end_col = col_;
    return s;
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_ws(std::vector<PendingComment>& comments) {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        int ln = line_;
        advance();
        advance();
        std::string text;
        while (pos_ < src_.size() && src_[pos_] != '\n') text += advance();
        comments.push_back({std::string(trim_view(text)), ln});
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        int ln = line_;
        advance();
        advance();
        std::string text;
        while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/'))
          text += advance();
        if (pos_ + 1 < src_.size()) {
          advance();
          advance();
        }
        comments.push_back({std::string(trim_view(text)), ln});
      } else {
        break;
      }
    }
  }

  static std::string_view trim_view(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
  }

  std::string punct() {
    static const char* two[] = {"->", "<=", ">=", "==", "!=", "&&", "||",
                                "+=", "-=", "*=", "/=", "++", "--", "%="};
    if (pos_ + 1 < src_.size()) {
      char a = src_[pos_], b = src_[pos_ + 1];
      for (const char* p : two) {
        if (a == p[0] && b == p[1]) {
          advance();
          advance();
          return p;
        }
      }
    }
    std::string s(1, advance());
    return s;
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<PendingComment> comments)
      : toks_(std::move(toks)), comments_(std::move(comments)) {}

  Ast parse_unit() {
    Ast unit;
    while (!at_end()) {
      unit.types.push_back(parse_type_decl());
    }
    return unit;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw SyntaxError({{peek().span, msg}});
  }

  const Token& peek(int ahead = 0) const {
    size_t i = idx_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at_end() const { return peek().kind == Tok::End; }

  bool is_punct(std::string_view p, int ahead = 0) const {
    return peek(ahead).kind == Tok::Punct && peek(ahead).text == p;
  }
  bool is_kw(std::string_view k, int ahead = 0) const {
    return peek(ahead).kind == Tok::Keyword && peek(ahead).text == k;
  }

  Token take() { return toks_[idx_ < toks_.size() - 1 ? idx_++ : idx_]; }

  Token expect_punct(std::string_view p) {
    if (!is_punct(p)) fail("expected '" + std::string(p) + "', found '" + peek().text + "'");
    return take();
  }
  Token expect_kw(std::string_view k) {
    if (!is_kw(k)) fail("expected '" + std::string(k) + "'");
    return take();
  }
  Token expect_ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier, found '" + peek().text + "'");
    return take();
  }

  // Comments whose line precedes the next token are attached to the node
  // being started.
  std::vector<std::string> take_comments() {
    std::vector<std::string> out;
    int next_line = peek().span.line;
    while (comment_idx_ < comments_.size() && comments_[comment_idx_].line <= next_line) {
      out.push_back(comments_[comment_idx_].text);
      ++comment_idx_;
    }
    return out;
  }

  // ---- modifiers -----------------------------------------------------------

  static bool is_modifier_word(const std::string& w) {
    return w == "public" || w == "private" || w == "protected" || w == "static" ||
           w == "final" || w == "abstract" || w == "default" || w == "synchronized";
  }

  std::vector<std::string> parse_modifiers() {
    std::vector<std::string> mods;
    while (peek().kind == Tok::Keyword && is_modifier_word(peek().text)) mods.push_back(take().text);
    return mods;
  }

  // ---- types ---------------------------------------------------------------

  bool looks_like_primitive(const std::string& s) {
    return s == "int" || s == "long" || s == "short" || s == "byte" || s == "char" ||
           s == "boolean" || s == "float" || s == "double";
  }

  TypeRef parse_type() {
    TypeRef t;
    if (is_kw("void")) {
      t.name = take().text;
      return t;
    }
    if (peek().kind != Tok::Ident) fail("expected type name");
    t.name = take().text;
    while (is_punct(".") && peek(1).kind == Tok::Ident) {
      take();
      t.name += "." + take().text;
    }
    if (is_punct("<")) {
      take();
      if (is_punct(">")) {  // diamond
        take();
      } else {
        t.args.push_back(parse_type_arg());
        while (is_punct(",")) {
          take();
          t.args.push_back(parse_type_arg());
        }
        expect_punct(">");
      }
    }
    while (is_punct("[") && is_punct("]", 1)) {
      take();
      take();
      ++t.array_dims;
    }
    return t;
  }

  TypeArg parse_type_arg() {
    TypeArg a;
    if (is_punct("?")) {
      take();
      a.wildcard = true;
      if (is_kw("extends") || (peek().kind == Tok::Ident && peek().text == "super")) {
        a.bound_kind = take().text;
        a.type = parse_type();
      } else if (is_kw("super")) {
        take();
        a.bound_kind = "super";
        a.type = parse_type();
      }
      return a;
    }
    a.type = parse_type();
    return a;
  }

  std::vector<TypeParam> parse_type_params() {
    std::vector<TypeParam> out;
    expect_punct("<");
    while (true) {
      TypeParam p;
      p.name = expect_ident().text;
      if (is_kw("extends")) {
        take();
        p.bounds.push_back(parse_type());
        while (is_punct("&")) {
          take();
          p.bounds.push_back(parse_type());
        }
      }
      out.push_back(std::move(p));
      if (is_punct(",")) {
        take();
        continue;
      }
      break;
    }
    expect_punct(">");
    return out;
  }

  // ---- declarations --------------------------------------------------------

  TypeDeclPtr parse_type_decl() {
    auto decl = std::make_shared<TypeDecl>();
    decl->comments = take_comments();
    decl->span = peek().span;
    decl->modifiers = parse_modifiers();
    if (is_kw("interface")) {
      take();
      decl->is_interface = true;
    } else {
      expect_kw("class");
    }
    decl->name = expect_ident().text;
    if (is_punct("<")) decl->type_params = parse_type_params();
    if (is_kw("extends")) {
      take();
      decl->extends = parse_type();
      while (decl->is_interface && is_punct(",")) {
        take();
        decl->implements.push_back(parse_type());
      }
    }
    if (is_kw("implements")) {
      take();
      decl->implements.push_back(parse_type());
      while (is_punct(",")) {
        take();
        decl->implements.push_back(parse_type());
      }
    }
    expect_punct("{");
    while (!is_punct("}")) {
      if (at_end()) fail("unexpected end of input inside '" + decl->name + "'");
      if (is_punct(";")) { take(); continue; }
      decl->members.push_back(parse_member(decl->name));
    }
    take();  // }
    if (is_punct(";")) take();
    return decl;
  }

  MemberPtr parse_member(const std::string& enclosing_name) {
    auto m = std::make_shared<Member>();
    m->comments = take_comments();
    m->span = peek().span;
    m->modifiers = parse_modifiers();

    if (is_punct("{")) {  // instance or static initializer
      m->kind = MemberKind::Initializer;
      m->body = parse_block_stmts();
      m->has_body = true;
      return m;
    }
    if (is_kw("class") || is_kw("interface")) {
      m->kind = MemberKind::NestedType;
      // reparse modifiers/comments inside the nested decl
      auto nested = std::make_shared<TypeDecl>();
      nested->comments = m->comments;
      nested->modifiers = m->modifiers;
      nested->span = peek().span;
      if (is_kw("interface")) {
        take();
        nested->is_interface = true;
      } else {
        take();
      }
      nested->name = expect_ident().text;
      if (is_punct("<")) nested->type_params = parse_type_params();
      if (is_kw("extends")) {
        take();
        nested->extends = parse_type();
        while (nested->is_interface && is_punct(",")) {
          take();
          nested->implements.push_back(parse_type());
        }
      }
      if (is_kw("implements")) {
        take();
        nested->implements.push_back(parse_type());
        while (is_punct(",")) {
          take();
          nested->implements.push_back(parse_type());
        }
      }
      expect_punct("{");
      while (!is_punct("}")) {
        if (at_end()) fail("unexpected end of input inside '" + nested->name + "'");
        if (is_punct(";")) { take(); continue; }
        nested->members.push_back(parse_member(nested->name));
      }
      take();
      if (is_punct(";")) take();
      m->nested = nested;
      return m;
    }

    if (is_punct("<")) m->type_params = parse_type_params();

    // Constructor: identifier matching the enclosing type, directly followed
    // by a parameter list.
    if (peek().kind == Tok::Ident && peek().text == enclosing_name && is_punct("(", 1)) {
      m->kind = MemberKind::Method;
      m->name = take().text;  // return type left empty
      parse_method_rest(*m);
      return m;
    }

    m->type = parse_type();
    m->name = expect_ident().text;
    if (is_punct("(")) {
      m->kind = MemberKind::Method;
      parse_method_rest(*m);
    } else {
      m->kind = MemberKind::Field;
      if (is_punct("=")) {
        take();
        m->init = parse_expr();
      }
      expect_punct(";");
    }
    return m;
  }

  void parse_method_rest(Member& m) {
    expect_punct("(");
    while (!is_punct(")")) {
      Param p;
      if (is_kw("final")) {
        take();
        p.is_final = true;
      }
      p.type = parse_type();
      p.name = expect_ident().text;
      m.params.push_back(std::move(p));
      if (is_punct(",")) take();
    }
    take();  // )
    if (peek().kind == Tok::Ident && peek().text == "throws") {
      take();
      parse_type();
      while (is_punct(",")) {
        take();
        parse_type();
      }
    }
    if (is_punct(";")) {
      take();
      m.has_body = false;
    } else {
      m.body = parse_block_stmts();
      m.has_body = true;
    }
  }

  // ---- statements ----------------------------------------------------------

  std::vector<StmtPtr> parse_block_stmts() {
    expect_punct("{");
    std::vector<StmtPtr> out;
    while (!is_punct("}")) {
      if (at_end()) fail("unexpected end of input inside block");
      out.push_back(parse_stmt());
    }
    take();
    return out;
  }

  // Control-flow bodies are normalized to blocks so printing and reparsing
  // reach a fixed point.
  StmtPtr as_block(StmtPtr s) {
    if (!s || s->kind == StmtKind::Block) return s;
    auto b = std::make_shared<Stmt>();
    b->kind = StmtKind::Block;
    b->span = s->span;
    b->body.push_back(std::move(s));
    return b;
  }

  StmtPtr parse_stmt() {
    auto s = std::make_shared<Stmt>();
    s->comments = take_comments();
    s->span = peek().span;

    if (is_punct("{")) {
      s->kind = StmtKind::Block;
      s->body = parse_block_stmts();
      return s;
    }
    if (is_punct(";")) {
      take();
      s->kind = StmtKind::Empty;
      return s;
    }
    if (is_kw("if")) {
      take();
      s->kind = StmtKind::If;
      expect_punct("(");
      s->expr = parse_expr();
      expect_punct(")");
      s->then_branch = as_block(parse_stmt());
      if (is_kw("else")) {
        take();
        s->else_branch = as_block(parse_stmt());
      }
      return s;
    }
    if (is_kw("while")) {
      take();
      s->kind = StmtKind::While;
      expect_punct("(");
      s->expr = parse_expr();
      expect_punct(")");
      s->then_branch = as_block(parse_stmt());
      return s;
    }
    if (is_kw("for")) {
      take();
      expect_punct("(");
      // for-each: [final] Type name : expr
      size_t save = idx_;
      bool foreach_ok = false;
      try {
        if (is_kw("final")) take();
        TypeRef t = parse_type();
        if (peek().kind == Tok::Ident && is_punct(":", 1)) {
          s->type = t;
          s->name = take().text;
          take();  // :
          s->expr = parse_expr();
          foreach_ok = true;
        }
      } catch (const SyntaxError&) {
        foreach_ok = false;
      }
      if (foreach_ok) {
        s->kind = StmtKind::ForEach;
        expect_punct(")");
        s->then_branch = as_block(parse_stmt());
        return s;
      }
      idx_ = save;
      s->kind = StmtKind::For;
      if (is_punct(";")) {
        take();
        s->for_init = nullptr;
      } else {
        s->for_init = parse_simple_stmt();  // consumes ';'
      }
      if (!is_punct(";")) s->expr = parse_expr();
      expect_punct(";");
      if (!is_punct(")")) s->for_update = parse_expr();
      expect_punct(")");
      s->then_branch = as_block(parse_stmt());
      return s;
    }
    if (is_kw("return")) {
      take();
      s->kind = StmtKind::Return;
      if (!is_punct(";")) s->expr = parse_expr();
      expect_punct(";");
      return s;
    }
    if (is_kw("throw")) {
      take();
      s->kind = StmtKind::Throw;
      s->expr = parse_expr();
      expect_punct(";");
      return s;
    }
    if (is_kw("break")) {
      take();
      s->kind = StmtKind::Break;
      expect_punct(";");
      return s;
    }
    if (is_kw("continue")) {
      take();
      s->kind = StmtKind::Continue;
      expect_punct(";");
      return s;
    }
    if (is_kw("class") || is_kw("interface") ||
        ((is_kw("final") || is_kw("abstract") || is_kw("static")) &&
         (is_kw("class", 1) || is_kw("interface", 1)))) {
      s->kind = StmtKind::LocalClass;
      s->local_type = parse_type_decl();
      return s;
    }
    auto simple = parse_simple_stmt();
    simple->comments = s->comments;
    simple->span = s->span;
    return simple;
  }

  // Local declaration or expression statement; consumes the trailing ';'.
  StmtPtr parse_simple_stmt() {
    auto s = std::make_shared<Stmt>();
    s->span = peek().span;
    size_t save = idx_;
    bool is_decl = false;
    bool fin = false;
    TypeRef t;
    std::string name;
    try {
      if (is_kw("final")) {
        take();
        fin = true;
      }
      t = parse_type();
      if (peek().kind == Tok::Ident && (is_punct("=", 1) || is_punct(";", 1))) {
        name = take().text;
        is_decl = true;
      }
    } catch (const SyntaxError&) {
      is_decl = false;
    }
    if (is_decl) {
      s->kind = StmtKind::LocalDecl;
      s->is_final = fin;
      s->type = t;
      s->name = name;
      if (is_punct("=")) {
        take();
        s->init = parse_expr();
      }
      expect_punct(";");
      return s;
    }
    idx_ = save;
    s->kind = StmtKind::ExprStmt;
    s->expr = parse_expr();
    expect_punct(";");
    return s;
  }

  // ---- expressions ---------------------------------------------------------

  ExprPtr mk(ExprKind k, Span sp) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->span = sp;
    return e;
  }

  ExprPtr parse_expr() { return parse_assign(); }

  ExprPtr parse_assign() {
    ExprPtr lhs = parse_ternary();
    if (is_punct("=") || is_punct("+=") || is_punct("-=") || is_punct("*=") || is_punct("/=") ||
        is_punct("%=")) {
      auto e = mk(ExprKind::Assign, peek().span);
      e->text = take().text;
      e->a = lhs;
      e->b = parse_assign();
      return e;
    }
    return lhs;
  }

  ExprPtr parse_ternary() {
    ExprPtr cond = parse_binary(0);
    if (is_punct("?")) {
      auto e = mk(ExprKind::Ternary, peek().span);
      take();
      e->a = cond;
      e->b = parse_expr();
      expect_punct(":");
      e->c = parse_ternary();
      return e;
    }
    return cond;
  }

  static int binop_prec(const std::string& op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*" || op == "/" || op == "%") return 6;
    return -1;
  }

  ExprPtr parse_binary(int min_prec) {
    ExprPtr lhs = parse_unary();
    while (peek().kind == Tok::Punct) {
      int prec = binop_prec(peek().text);
      if (prec < 0 || prec < min_prec) break;
      auto e = mk(ExprKind::Binary, peek().span);
      e->text = take().text;
      e->a = lhs;
      e->b = parse_binary(prec + 1);
      lhs = e;
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (is_punct("!") || is_punct("-") || is_punct("++") || is_punct("--")) {
      auto e = mk(ExprKind::Unary, peek().span);
      e->text = take().text;
      e->a = parse_unary();
      return e;
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    while (true) {
      if (is_punct(".")) {
        if (is_kw("this", 1)) {
          // Outer.this — only valid on a plain name chain
          take();
          take();
          auto t = mk(ExprKind::OuterThis, e->span);
          t->text = flatten_name(e);
          e = t;
          continue;
        }
        take();
        std::string member;
        if (peek().kind == Tok::Ident) member = take().text;
        else fail("expected member name after '.'");
        if (is_punct("(")) {
          auto call = mk(ExprKind::Call, e->span);
          call->text = member;
          call->a = e;
          call->args = parse_args();
          e = call;
        } else {
          auto fa = mk(ExprKind::FieldAccess, e->span);
          fa->text = member;
          fa->a = e;
          e = fa;
        }
      } else if (is_punct("[")) {
        take();
        auto ix = mk(ExprKind::Index, e->span);
        ix->a = e;
        ix->b = parse_expr();
        expect_punct("]");
        e = ix;
      } else if (is_punct("++") || is_punct("--")) {
        auto u = mk(ExprKind::Unary, peek().span);
        u->text = "post" + take().text;
        u->a = e;
        e = u;
      } else {
        break;
      }
    }
    return e;
  }

  std::string flatten_name(const ExprPtr& e) {
    if (e->kind == ExprKind::Name) return e->text;
    if (e->kind == ExprKind::FieldAccess) return flatten_name(e->a) + "." + e->text;
    fail("qualified 'this' requires a class name");
  }

  std::vector<ExprPtr> parse_args() {
    expect_punct("(");
    std::vector<ExprPtr> args;
    while (!is_punct(")")) {
      args.push_back(parse_expr());
      if (is_punct(",")) take();
    }
    take();
    return args;
  }

  // Lambda lookahead: `ident ->` or a parenthesized parameter list followed
  // by `->`.
  bool at_lambda() {
    if (peek().kind == Tok::Ident && is_punct("->", 1)) return true;
    if (!is_punct("(")) return false;
    int depth = 0;
    for (int i = 0;; ++i) {
      const Token& t = peek(i);
      if (t.kind == Tok::End) return false;
      if (t.kind == Tok::Punct && t.text == "(") ++depth;
      else if (t.kind == Tok::Punct && t.text == ")") {
        if (--depth == 0) return peek(i + 1).kind == Tok::Punct && peek(i + 1).text == "->";
      }
    }
  }

  ExprPtr parse_lambda() {
    auto e = mk(ExprKind::Lambda, peek().span);
    if (peek().kind == Tok::Ident) {
      e->lambda_params.push_back({TypeRef{}, take().text});
    } else {
      e->lambda_paren = true;
      expect_punct("(");
      while (!is_punct(")")) {
        LambdaParam p;
        size_t save = idx_;
        // typed parameter: Type name
        bool typed = false;
        try {
          TypeRef t = parse_type();
          if (peek().kind == Tok::Ident) {
            p.type = t;
            p.name = take().text;
            typed = true;
          }
        } catch (const SyntaxError&) {
        }
        if (!typed) {
          idx_ = save;
          p.name = expect_ident().text;
        }
        e->lambda_params.push_back(std::move(p));
        if (is_punct(",")) take();
      }
      take();
    }
    expect_punct("->");
    if (is_punct("{")) {
      e->lambda_block = true;
      e->body = parse_block_stmts();
    } else {
      e->a = parse_expr();
    }
    return e;
  }

  ExprPtr parse_primary() {
    if (at_lambda()) return parse_lambda();
    Span sp = peek().span;
    if (is_punct("(")) {
      take();
      auto e = mk(ExprKind::Paren, sp);
      e->a = parse_expr();
      expect_punct(")");
      return e;
    }
    if (peek().kind == Tok::Number || peek().kind == Tok::String || peek().kind == Tok::Char ||
        is_kw("true") || is_kw("false") || is_kw("null")) {
      auto e = mk(ExprKind::Literal, sp);
      e->text = take().text;
      return e;
    }
    if (is_kw("this")) {
      take();
      return mk(ExprKind::This, sp);
    }
    if (is_kw("super")) {
      take();
      auto e = mk(ExprKind::Name, sp);
      e->text = "super";
      return e;
    }
    if (is_kw("new")) {
      take();
      TypeRef t = parse_type();
      if (is_punct("[")) {
        take();
        auto e = mk(ExprKind::ArrayNew, sp);
        e->type = t;
        e->a = parse_expr();
        expect_punct("]");
        return e;
      }
      auto e = mk(ExprKind::New, sp);
      e->type = t;
      e->args = parse_args();
      if (is_punct("{")) {
        e->has_anon_body = true;
        take();
        while (!is_punct("}")) {
          if (at_end()) fail("unexpected end of input inside anonymous class body");
          if (is_punct(";")) { take(); continue; }
          e->anon_body.push_back(parse_member(t.name));
        }
        take();
      }
      return e;
    }
    if (peek().kind == Tok::Ident) {
      std::string name = take().text;
      if (is_punct("(")) {
        auto call = mk(ExprKind::Call, sp);
        call->text = name;
        call->args = parse_args();
        return call;
      }
      auto e = mk(ExprKind::Name, sp);
      e->text = name;
      return e;
    }
    fail("unexpected token '" + peek().text + "'");
  }

  std::vector<Token> toks_;
  std::vector<PendingComment> comments_;
  size_t idx_ = 0;
  size_t comment_idx_ = 0;
};

}  // namespace detail

inline ParseResult parse(std::string_view source) {
  std::vector<detail::PendingComment> comments;
  std::vector<Diagnostic> diags;
  detail::Lexer lex(source);
  auto toks = lex.run(comments, diags);
  if (!diags.empty()) return {std::nullopt, diags};
  detail::Parser p(std::move(toks), std::move(comments));
  try {
    return {p.parse_unit(), {}};
  } catch (const SyntaxError& e) {
    return {std::nullopt, e.diagnostics};
  }
}

inline Ast parse_or_throw(std::string_view source) {
  auto r = parse(source);
  if (!r.ok()) throw SyntaxError(r.diagnostics);
  return std::move(*r.ast);
}

}  // namespace retest::javalite
