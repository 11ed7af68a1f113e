#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "retest/javalite/ast.hpp"
#include "retest/javalite/parse.hpp"

namespace retest::javalite {

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

struct NormalizeOptions {
  // Ignore `final` on method parameters (the make-static engine-default
  // divergence).
  bool ignore_param_final = false;
};

enum class EqualMode { Strict, Normalized };

namespace detail_eq {

struct Cmp {
  EqualMode mode;
  NormalizeOptions norm;

  bool strict() const { return mode == EqualMode::Strict; }

  bool eq(const TypeRef& a, const TypeRef& b) const {
    if (a.name != b.name || a.array_dims != b.array_dims || a.args.size() != b.args.size())
      return false;
    for (size_t i = 0; i < a.args.size(); ++i) {
      const auto& x = a.args[i];
      const auto& y = b.args[i];
      if (x.wildcard != y.wildcard || x.bound_kind != y.bound_kind) return false;
      if (!x.wildcard || !x.bound_kind.empty())
        if (!eq(x.type, y.type)) return false;
    }
    return true;
  }

  bool eq_mods(const std::vector<std::string>& a, const std::vector<std::string>& b) const {
    if (strict()) return a == b;
    std::vector<std::string> x = a, y = b;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
  }

  bool eq_comments(const std::vector<std::string>& a, const std::vector<std::string>& b) const {
    return strict() ? a == b : true;
  }

  bool eq(const std::vector<TypeParam>& a, const std::vector<TypeParam>& b) const {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i].name != b[i].name || a[i].bounds.size() != b[i].bounds.size()) return false;
      for (size_t j = 0; j < a[i].bounds.size(); ++j)
        if (!eq(a[i].bounds[j], b[i].bounds[j])) return false;
    }
    return true;
  }

  bool eq(const ExprPtr& a, const ExprPtr& b) const {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind || a->text != b->text) return false;
    if (!eq(a->a, b->a) || !eq(a->b, b->b) || !eq(a->c, b->c)) return false;
    if (a->args.size() != b->args.size()) return false;
    for (size_t i = 0; i < a->args.size(); ++i)
      if (!eq(a->args[i], b->args[i])) return false;
    if (!eq(a->type, b->type)) return false;
    if (a->has_anon_body != b->has_anon_body) return false;
    if (a->anon_body.size() != b->anon_body.size()) return false;
    for (size_t i = 0; i < a->anon_body.size(); ++i)
      if (!eq(a->anon_body[i], b->anon_body[i])) return false;
    if (a->lambda_params.size() != b->lambda_params.size()) return false;
    for (size_t i = 0; i < a->lambda_params.size(); ++i) {
      if (a->lambda_params[i].name != b->lambda_params[i].name) return false;
      if (!eq(a->lambda_params[i].type, b->lambda_params[i].type)) return false;
    }
    if (a->lambda_block != b->lambda_block) return false;
    if (!eq_stmts(a->body, b->body)) return false;
    return true;
  }

  bool eq_stmts(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) const {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (!eq(a[i], b[i])) return false;
    return true;
  }

  bool eq(const StmtPtr& a, const StmtPtr& b) const {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind || a->name != b->name || a->is_final != b->is_final) return false;
    if (!eq_comments(a->comments, b->comments)) return false;
    if (!eq(a->expr, b->expr) || !eq(a->init, b->init) || !eq(a->for_update, b->for_update))
      return false;
    if (!eq(a->type, b->type)) return false;
    if (!eq(a->then_branch, b->then_branch) || !eq(a->else_branch, b->else_branch) ||
        !eq(a->for_init, b->for_init))
      return false;
    if (!eq_stmts(a->body, b->body)) return false;
    if (!a->local_type != !b->local_type) return false;
    if (a->local_type && !eq(*a->local_type, *b->local_type)) return false;
    return true;
  }

  bool eq(const MemberPtr& a, const MemberPtr& b) const {
    if (a->kind != b->kind || a->name != b->name || a->has_body != b->has_body) return false;
    if (!eq_comments(a->comments, b->comments) || !eq_mods(a->modifiers, b->modifiers))
      return false;
    if (!eq(a->type, b->type) || !eq(a->type_params, b->type_params)) return false;
    if (!eq(a->init, b->init)) return false;
    if (a->params.size() != b->params.size()) return false;
    for (size_t i = 0; i < a->params.size(); ++i) {
      const auto& p = a->params[i];
      const auto& q = b->params[i];
      if (p.name != q.name || !eq(p.type, q.type)) return false;
      bool ignore_final = !strict() && norm.ignore_param_final;
      if (!ignore_final && p.is_final != q.is_final) return false;
    }
    if (!eq_stmts(a->body, b->body)) return false;
    if (!a->nested != !b->nested) return false;
    if (a->nested && !eq(*a->nested, *b->nested)) return false;
    return true;
  }

  bool eq(const TypeDecl& a, const TypeDecl& b) const {
    if (a.is_interface != b.is_interface || a.name != b.name) return false;
    if (!eq_comments(a.comments, b.comments) || !eq_mods(a.modifiers, b.modifiers)) return false;
    if (!eq(a.type_params, b.type_params) || !eq(a.extends, b.extends)) return false;
    if (a.implements.size() != b.implements.size()) return false;
    for (size_t i = 0; i < a.implements.size(); ++i)
      if (!eq(a.implements[i], b.implements[i])) return false;
    if (a.members.size() != b.members.size()) return false;
    for (size_t i = 0; i < a.members.size(); ++i)
      if (!eq(a.members[i], b.members[i])) return false;
    return true;
  }
};

}  // namespace detail_eq

inline bool ast_equal(const Ast& a, const Ast& b, EqualMode mode,
                      const NormalizeOptions& norm = {}) {
  detail_eq::Cmp cmp{mode, norm};
  if (a.types.size() != b.types.size()) return false;
  for (size_t i = 0; i < a.types.size(); ++i)
    if (!cmp.eq(*a.types[i], *b.types[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Element locators
// ---------------------------------------------------------------------------

enum class SegmentKind { Class, Method, Field, StatementIndex, ExpressionIndex, AnonymousOrdinal };

struct LocatorSegment {
  SegmentKind kind;
  std::string name;  // Class/Method/Field
  int index = 0;     // Statement/Expression/Anonymous
};

struct ElementLocator {
  std::vector<LocatorSegment> path;
  std::optional<Span> span_hint;

  bool empty() const { return path.empty(); }

  std::string to_string() const {
    std::string out;
    for (size_t i = 0; i < path.size(); ++i) {
      if (i) out += "/";
      const auto& s = path[i];
      switch (s.kind) {
        case SegmentKind::Class: out += "class:" + s.name; break;
        case SegmentKind::Method: out += "method:" + s.name; break;
        case SegmentKind::Field: out += "field:" + s.name; break;
        case SegmentKind::StatementIndex: out += "stmt:" + std::to_string(s.index); break;
        case SegmentKind::ExpressionIndex: out += "expr:" + std::to_string(s.index); break;
        case SegmentKind::AnonymousOrdinal: out += "anon:" + std::to_string(s.index); break;
      }
    }
    return out;
  }

  static std::optional<ElementLocator> parse(std::string_view text) {
    ElementLocator loc;
    size_t start = 0;
    while (start <= text.size()) {
      size_t slash = text.find('/', start);
      std::string_view part =
          slash == std::string_view::npos ? text.substr(start) : text.substr(start, slash - start);
      size_t colon = part.find(':');
      if (colon == std::string_view::npos) return std::nullopt;
      std::string kind(part.substr(0, colon));
      std::string rest(part.substr(colon + 1));
      LocatorSegment seg;
      if (kind == "class") seg = {SegmentKind::Class, rest, 0};
      else if (kind == "method") seg = {SegmentKind::Method, rest, 0};
      else if (kind == "field") seg = {SegmentKind::Field, rest, 0};
      else if (kind == "stmt") seg = {SegmentKind::StatementIndex, "", std::atoi(rest.c_str())};
      else if (kind == "expr") seg = {SegmentKind::ExpressionIndex, "", std::atoi(rest.c_str())};
      else if (kind == "anon") seg = {SegmentKind::AnonymousOrdinal, "", std::atoi(rest.c_str())};
      else return std::nullopt;
      if (rest.empty()) return std::nullopt;
      loc.path.push_back(std::move(seg));
      if (slash == std::string_view::npos) break;
      start = slash + 1;
    }
    if (loc.path.empty()) return std::nullopt;
    return loc;
  }
};

enum class LocateStatus { Found, NotFound, Ambiguous };

// A located node; exactly one pointer is set. Pointers alias the Ast passed
// to locate() and stay valid while it lives.
struct LocatedNode {
  TypeDecl* type = nullptr;
  Member* member = nullptr;
  Stmt* stmt = nullptr;
  Expr* expr = nullptr;           // anonymous-class New node or expression
};

struct LocateResult {
  LocateStatus status = LocateStatus::NotFound;
  LocatedNode node;
  int candidates = 0;  // for Ambiguous
};

namespace detail_loc {

// Collects anonymous-class `new` expressions in evaluation order.
inline void collect_anon(const ExprPtr& e, std::vector<Expr*>& out);

inline void collect_anon(const std::vector<StmtPtr>& stmts, std::vector<Expr*>& out) {
  for (const auto& s : stmts) {
    if (!s) continue;
    collect_anon(s->expr, out);
    collect_anon(s->init, out);
    collect_anon(s->for_update, out);
    if (s->for_init) collect_anon(std::vector<StmtPtr>{s->for_init}, out);
    collect_anon(s->body, out);
    if (s->then_branch) collect_anon(std::vector<StmtPtr>{s->then_branch}, out);
    if (s->else_branch) collect_anon(std::vector<StmtPtr>{s->else_branch}, out);
  }
}

inline void collect_anon(const ExprPtr& e, std::vector<Expr*>& out) {
  if (!e) return;
  if (e->kind == ExprKind::New && e->has_anon_body) out.push_back(e.get());
  collect_anon(e->a, out);
  collect_anon(e->b, out);
  collect_anon(e->c, out);
  for (const auto& a : e->args) collect_anon(a, out);
  collect_anon(e->body, out);
}

// Pre-order expression flattening within one statement, for expr:N segments.
inline void flatten_exprs(const ExprPtr& e, std::vector<Expr*>& out) {
  if (!e) return;
  out.push_back(e.get());
  flatten_exprs(e->a, out);
  flatten_exprs(e->b, out);
  flatten_exprs(e->c, out);
  for (const auto& a : e->args) flatten_exprs(a, out);
}

inline void flatten_stmt_exprs(const Stmt& s, std::vector<Expr*>& out) {
  flatten_exprs(s.expr, out);
  flatten_exprs(s.init, out);
  flatten_exprs(s.for_update, out);
}

}  // namespace detail_loc

inline LocateResult locate(Ast& ast, const ElementLocator& loc) {
  if (loc.empty()) return {LocateStatus::NotFound, {}, 0};

  TypeDecl* cur_type = nullptr;
  Member* cur_member = nullptr;
  std::vector<MemberPtr>* members = nullptr;  // member list of current class scope
  std::vector<StmtPtr>* stmts = nullptr;      // current statement list
  Stmt* cur_stmt = nullptr;

  for (size_t i = 0; i < loc.path.size(); ++i) {
    const auto& seg = loc.path[i];
    switch (seg.kind) {
      case SegmentKind::Class: {
        TypeDecl* found = nullptr;
        if (!cur_type && !members) {
          for (auto& t : ast.types)
            if (t->name == seg.name) found = t.get();
        } else if (members) {
          for (auto& m : *members)
            if (m->kind == MemberKind::NestedType && m->nested->name == seg.name)
              found = m->nested.get();
        }
        if (!found) return {LocateStatus::NotFound, {}, 0};
        cur_type = found;
        members = &found->members;
        cur_member = nullptr;
        stmts = nullptr;
        break;
      }
      case SegmentKind::Method:
      case SegmentKind::Field: {
        if (!members) return {LocateStatus::NotFound, {}, 0};
        std::vector<Member*> hits;
        auto want = seg.kind == SegmentKind::Method ? MemberKind::Method : MemberKind::Field;
        for (auto& m : *members)
          if (m->kind == want && m->name == seg.name) hits.push_back(m.get());
        if (hits.empty()) return {LocateStatus::NotFound, {}, 0};
        if (hits.size() > 1) {
          // span hint disambiguates overloads
          if (loc.span_hint) {
            Member* best = nullptr;
            for (auto* h : hits)
              if (h->span.line == loc.span_hint->line ||
                  (h->span.line <= loc.span_hint->line && loc.span_hint->line <= h->span.end_line))
                best = h;
            if (!best) return {LocateStatus::Ambiguous, {}, static_cast<int>(hits.size())};
            hits = {best};
          } else {
            return {LocateStatus::Ambiguous, {}, static_cast<int>(hits.size())};
          }
        }
        cur_member = hits[0];
        stmts = &cur_member->body;
        cur_stmt = nullptr;
        break;
      }
      case SegmentKind::AnonymousOrdinal: {
        std::vector<Expr*> anons;
        if (cur_member) {
          detail_loc::collect_anon(cur_member->body, anons);
          detail_loc::collect_anon(cur_member->init, anons);
        } else if (members) {
          for (auto& m : *members) {
            detail_loc::collect_anon(m->body, anons);
            detail_loc::collect_anon(m->init, anons);
          }
        }
        if (seg.index < 0 || seg.index >= static_cast<int>(anons.size()))
          return {LocateStatus::NotFound, {}, 0};
        Expr* anon = anons[seg.index];
        // descend into the anonymous class body
        cur_type = nullptr;
        cur_member = nullptr;
        members = &anon->anon_body;
        stmts = nullptr;
        if (i + 1 == loc.path.size()) {
          LocatedNode n;
          n.expr = anon;
          return {LocateStatus::Found, n, 0};
        }
        break;
      }
      case SegmentKind::StatementIndex: {
        if (!stmts) return {LocateStatus::NotFound, {}, 0};
        if (seg.index < 0 || seg.index >= static_cast<int>(stmts->size()))
          return {LocateStatus::NotFound, {}, 0};
        cur_stmt = (*stmts)[seg.index].get();
        stmts = &cur_stmt->body;
        break;
      }
      case SegmentKind::ExpressionIndex: {
        if (!cur_stmt) return {LocateStatus::NotFound, {}, 0};
        std::vector<Expr*> flat;
        detail_loc::flatten_stmt_exprs(*cur_stmt, flat);
        if (seg.index < 0 || seg.index >= static_cast<int>(flat.size()))
          return {LocateStatus::NotFound, {}, 0};
        LocatedNode n;
        n.expr = flat[seg.index];
        if (i + 1 != loc.path.size()) return {LocateStatus::NotFound, {}, 0};
        return {LocateStatus::Found, n, 0};
      }
    }
  }

  LocatedNode n;
  if (cur_stmt) n.stmt = cur_stmt;
  else if (cur_member) n.member = cur_member;
  else if (cur_type) n.type = cur_type;
  else return {LocateStatus::NotFound, {}, 0};
  return {LocateStatus::Found, n, 0};
}

inline LocateResult locate(const Ast& ast, const ElementLocator& loc) {
  return locate(const_cast<Ast&>(ast), loc);
}

// ---------------------------------------------------------------------------
// Lexical scope checking (the built-in legality checker)
// ---------------------------------------------------------------------------

namespace detail_scope {

inline const std::set<std::string>& builtin_types() {
  static const std::set<std::string> s = {
      "Object",  "String",    "System",  "Integer",   "Long",    "Double",
      "Float",   "Short",     "Byte",    "Character", "Boolean", "Math",
      "Number",  "CharSequence", "StringBuilder", "Runnable", "Comparable",
      "Iterable", "Thread",   "Exception", "RuntimeException", "Throwable",
      "Error",   "IllegalArgumentException", "IllegalStateException",
      "UnsupportedOperationException", "NullPointerException", "Void", "Class",
      "int",     "long",      "short",   "byte",      "char",    "boolean",
      "float",   "double",    "void"};
  return s;
}

struct ClassFrame {
  const TypeDecl* decl = nullptr;          // null for anonymous classes
  std::string name;                        // empty for anonymous classes
  std::set<std::string> fields;
  std::set<std::string> methods;
  std::set<std::string> nested_types;
  std::set<std::string> type_params;
};

class Checker {
 public:
  explicit Checker(const Ast& unit) : unit_(unit) {}

  std::vector<Diagnostic> run() {
    for (const auto& t : unit_.types) top_types_[t->name] = t.get();
    for (const auto& t : unit_.types) check_type(*t);
    return std::move(diags_);
  }

 private:
  void error(const Span& sp, const std::string& msg) { diags_.push_back({sp, msg}); }

  const TypeDecl* find_type_in_file(const std::string& name) const {
    auto it = top_types_.find(name);
    if (it != top_types_.end()) return it->second;
    // search nested declarations everywhere (javalite has no package scoping)
    const TypeDecl* found = nullptr;
    std::function<void(const TypeDecl&)> walk = [&](const TypeDecl& d) {
      if (d.name == name && !found) found = &d;
      for (const auto& m : d.members)
        if (m->kind == MemberKind::NestedType) walk(*m->nested);
    };
    for (const auto& t : unit_.types) walk(*t);
    return found;
  }

  // Fills a frame with member names, chasing in-file superclasses and
  // interfaces.
  void fill_frame(ClassFrame& f, const TypeDecl* d, std::set<std::string>& visited) {
    if (!d || visited.count(d->name)) return;
    visited.insert(d->name);
    for (const auto& m : d->members) {
      if (m->kind == MemberKind::Field) f.fields.insert(m->name);
      else if (m->kind == MemberKind::Method) f.methods.insert(m->name);
      else if (m->kind == MemberKind::NestedType) f.nested_types.insert(m->nested->name);
    }
    if (!d->extends.empty()) fill_frame(f, find_type_in_file(base_name(d->extends)), visited);
    for (const auto& i : d->implements) fill_frame(f, find_type_in_file(base_name(i)), visited);
  }

  static std::string base_name(const TypeRef& t) {
    auto pos = t.name.rfind('.');
    return pos == std::string::npos ? t.name : t.name.substr(pos + 1);
  }

  bool type_name_known(const std::string& dotted) {
    std::string head = dotted.substr(0, dotted.find('.'));
    if (builtin_types().count(head)) return true;
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
      if (it->name == head) return true;
      if (it->nested_types.count(head)) return true;
      if (it->type_params.count(head)) return true;
    }
    if (top_types_.count(head)) return true;
    for (const auto& scope : locals_)
      if (scope.count("class " + head)) return true;
    return find_type_in_file(head) != nullptr;
  }

  void check_typeref(const TypeRef& t, const Span& sp) {
    if (t.empty()) return;
    if (!type_name_known(t.name)) error(sp, "cannot find symbol: class " + t.name);
    for (const auto& a : t.args)
      if (!a.wildcard || !a.bound_kind.empty()) check_typeref(a.type, sp);
  }

  bool var_in_scope(const std::string& name) const {
    for (auto it = locals_.rbegin(); it != locals_.rend(); ++it)
      if (it->count(name)) return true;
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it)
      if (it->fields.count(name)) return true;
    return false;
  }

  bool method_in_scope(const std::string& name) const {
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it)
      if (it->methods.count(name)) return true;
    return false;
  }

  bool enclosing_class(const std::string& name) const {
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it)
      if (it->name == name) return true;
    return false;
  }

  void check_type(const TypeDecl& d) {
    ClassFrame f;
    f.decl = &d;
    f.name = d.name;
    for (const auto& tp : d.type_params) f.type_params.insert(tp.name);
    std::set<std::string> visited;
    fill_frame(f, &d, visited);
    frames_.push_back(std::move(f));
    if (!d.extends.empty()) check_typeref(d.extends, d.span);
    for (const auto& i : d.implements) check_typeref(i, d.span);
    for (const auto& m : d.members) check_member(*m);
    frames_.pop_back();
  }

  void check_member(const Member& m) {
    switch (m.kind) {
      case MemberKind::Field:
        check_typeref(m.type, m.span);
        if (m.init) {
          locals_.emplace_back();
          check_expr(m.init);
          locals_.pop_back();
        }
        break;
      case MemberKind::Method: {
        locals_.emplace_back();
        auto& scope = locals_.back();
        for (const auto& tp : m.type_params) scope.insert("class " + tp.name);
        check_typeref(m.type, m.span);
        for (const auto& p : m.params) {
          check_typeref(p.type, m.span);
          if (!scope.insert(p.name).second)
            error(m.span, "variable " + p.name + " is already defined");
        }
        if (m.has_body) check_stmts(m.body);
        locals_.pop_back();
        break;
      }
      case MemberKind::Initializer:
        locals_.emplace_back();
        check_stmts(m.body);
        locals_.pop_back();
        break;
      case MemberKind::NestedType:
        check_type(*m.nested);
        break;
    }
  }

  void check_stmts(const std::vector<StmtPtr>& stmts) {
    locals_.emplace_back();
    for (const auto& s : stmts) check_stmt(*s);
    locals_.pop_back();
  }

  void declare_local(const std::string& name, const Span& sp) {
    for (const auto& scope : locals_)
      if (scope.count(name)) {
        error(sp, "variable " + name + " is already defined in enclosing scope");
        return;
      }
    locals_.back().insert(name);
  }

  void check_stmt(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Block:
        check_stmts(s.body);
        break;
      case StmtKind::If:
        check_expr(s.expr);
        if (s.then_branch) check_stmt(*s.then_branch);
        if (s.else_branch) check_stmt(*s.else_branch);
        break;
      case StmtKind::While:
        check_expr(s.expr);
        if (s.then_branch) check_stmt(*s.then_branch);
        break;
      case StmtKind::For:
        locals_.emplace_back();
        if (s.for_init) check_stmt(*s.for_init);
        if (s.expr) check_expr(s.expr);
        if (s.for_update) check_expr(s.for_update);
        if (s.then_branch) check_stmt(*s.then_branch);
        locals_.pop_back();
        break;
      case StmtKind::ForEach:
        locals_.emplace_back();
        check_typeref(s.type, s.span);
        locals_.back().insert(s.name);
        check_expr(s.expr);
        if (s.then_branch) check_stmt(*s.then_branch);
        locals_.pop_back();
        break;
      case StmtKind::Return:
      case StmtKind::Throw:
        if (s.expr) check_expr(s.expr);
        break;
      case StmtKind::Break:
      case StmtKind::Continue:
      case StmtKind::Empty:
        break;
      case StmtKind::LocalDecl:
        check_typeref(s.type, s.span);
        if (s.init) check_expr(s.init);
        declare_local(s.name, s.span);
        break;
      case StmtKind::LocalClass:
        locals_.back().insert("class " + s.local_type->name);
        check_type(*s.local_type);
        break;
      case StmtKind::ExprStmt:
        check_expr(s.expr);
        break;
    }
  }

  void check_expr(const ExprPtr& e) {
    if (!e) return;
    switch (e->kind) {
      case ExprKind::Name:
        if (e->text == "super") break;
        if (!var_in_scope(e->text) && !type_name_known(e->text))
          error(e->span, "cannot find symbol: " + e->text);
        break;
      case ExprKind::OuterThis:
        if (!enclosing_class(e->text))
          error(e->span, "no enclosing instance of type " + e->text + " is accessible");
        break;
      case ExprKind::FieldAccess:
        check_expr(e->a);
        if (e->a->kind == ExprKind::This && !var_in_scope(e->text) && !frames_.empty() &&
            !frames_.back().fields.count(e->text))
          error(e->span, "cannot find symbol: " + e->text);
        break;
      case ExprKind::Call:
        if (!e->a) {
          if (!method_in_scope(e->text))
            error(e->span, "cannot find symbol: method " + e->text);
        } else {
          check_expr(e->a);
        }
        for (const auto& a : e->args) check_expr(a);
        break;
      case ExprKind::New: {
        check_typeref(e->type, e->span);
        for (const auto& a : e->args) check_expr(a);
        if (e->has_anon_body) {
          ClassFrame f;  // anonymous: members plus supertype members
          std::set<std::string> visited;
          for (const auto& m : e->anon_body) {
            if (m->kind == MemberKind::Field) f.fields.insert(m->name);
            else if (m->kind == MemberKind::Method) f.methods.insert(m->name);
            else if (m->kind == MemberKind::NestedType) f.nested_types.insert(m->nested->name);
          }
          fill_frame(f, find_type_in_file(base_name(e->type)), visited);
          frames_.push_back(std::move(f));
          for (const auto& m : e->anon_body) check_member(*m);
          frames_.pop_back();
        }
        break;
      }
      case ExprKind::Lambda: {
        locals_.emplace_back();
        for (const auto& p : e->lambda_params) {
          if (!p.type.empty()) check_typeref(p.type, e->span);
          declare_local(p.name, e->span);
        }
        if (e->lambda_block) check_stmts(e->body);
        else check_expr(e->a);
        locals_.pop_back();
        break;
      }
      default:
        check_expr(e->a);
        check_expr(e->b);
        check_expr(e->c);
        for (const auto& a : e->args) check_expr(a);
        break;
    }
  }

  const Ast& unit_;
  std::map<std::string, const TypeDecl*> top_types_;
  std::vector<ClassFrame> frames_;
  std::vector<std::set<std::string>> locals_;
  std::vector<Diagnostic> diags_;
};

}  // namespace detail_scope

// Lexical-scope legality check. Not a type checker: it resolves names,
// enclosing-instance qualifiers, and duplicate locals only.
inline std::vector<Diagnostic> scope_check(const Ast& unit) {
  return detail_scope::Checker(unit).run();
}

}  // namespace retest::javalite
