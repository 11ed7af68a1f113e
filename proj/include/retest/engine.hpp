#pragma once

#include <algorithm>
#include <functional>
#include <initializer_list>
#include <map>
#include <set>

#include "retest/common.hpp"
#include "retest/compile_gate.hpp"
#include "retest/javalite.hpp"
#include "retest/refactoring.hpp"

namespace retest::engine {

using namespace retest::javalite;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

// Each fault disables one safety check, imitating a known class of
// refactoring-engine defect.
enum class Fault {
  None,
  PullupDropOuterQualifier,    // moves methods that depend on the enclosing instance
  InlineSkipNameFreshening,    // splices bodies without renaming colliding locals
  ExtractMethodIgnoreLiveOut,  // drops values that flow out of the selection
};

inline std::string to_string(Fault f) {
  switch (f) {
    case Fault::None: return "none";
    case Fault::PullupDropOuterQualifier: return "pullup-drop-outer-qualifier";
    case Fault::InlineSkipNameFreshening: return "inline-skip-name-freshening";
    case Fault::ExtractMethodIgnoreLiveOut: return "extract-method-ignore-live-out";
  }
  return "none";
}

inline std::optional<Fault> parse_fault(const std::string& s) {
  if (s == "none" || s.empty()) return Fault::None;
  if (s == "pullup-drop-outer-qualifier") return Fault::PullupDropOuterQualifier;
  if (s == "inline-skip-name-freshening") return Fault::InlineSkipNameFreshening;
  if (s == "extract-method-ignore-live-out") return Fault::ExtractMethodIgnoreLiveOut;
  return std::nullopt;
}

struct EngineConfig {
  std::string profile = "ec-like";
  bool final_params = false;  // make-static marks introduced parameters final
  Fault fault = Fault::None;

  static EngineConfig for_profile(const std::string& name) {
    if (name == "ec-like") return {"ec-like", false, Fault::None};
    if (name == "idea-like") return {"idea-like", true, Fault::None};
    throw UsageError("unknown engine profile: " + name);
  }
};

// ---------------------------------------------------------------------------
// Requests and responses
// ---------------------------------------------------------------------------

struct RefactoringRequest {
  RefactoringType type = RefactoringType::PullUp;
  std::vector<SourceUnit> units;
  ElementLocator target;
  ParamMap params;
};

enum class Status { Ok, Warning, Refused, Crashed };

inline std::string wire_status(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::Warning: return "warning";
    case Status::Refused: return "refused";
    case Status::Crashed: return "crashed";
  }
  return "crashed";
}

inline std::optional<Status> parse_status(const std::string& s) {
  if (s == "ok") return Status::Ok;
  if (s == "warning") return Status::Warning;
  if (s == "refused") return Status::Refused;
  if (s == "crashed") return Status::Crashed;
  return std::nullopt;
}

struct EngineResponse {
  Status status = Status::Crashed;
  std::vector<SourceUnit> units;  // refactored sources; empty unless ok/warning
  std::vector<std::string> warnings;
  std::string reason;  // refusal reason or crash message
};

// ---------------------------------------------------------------------------
// AST utilities local to the engine
// ---------------------------------------------------------------------------

namespace detail {

inline ExprPtr clone_expr(const ExprPtr& e);

inline StmtPtr clone_stmt(const StmtPtr& s) {
  if (!s) return nullptr;
  auto out = std::make_shared<Stmt>(*s);
  out->expr = clone_expr(s->expr);
  out->init = clone_expr(s->init);
  out->for_update = clone_expr(s->for_update);
  out->for_init = clone_stmt(s->for_init);
  out->then_branch = clone_stmt(s->then_branch);
  out->else_branch = clone_stmt(s->else_branch);
  out->body.clear();
  for (const auto& b : s->body) out->body.push_back(clone_stmt(b));
  return out;
}

inline ExprPtr clone_expr(const ExprPtr& e) {
  if (!e) return nullptr;
  auto out = std::make_shared<Expr>(*e);
  out->a = clone_expr(e->a);
  out->b = clone_expr(e->b);
  out->c = clone_expr(e->c);
  out->args.clear();
  for (const auto& a : e->args) out->args.push_back(clone_expr(a));
  out->body.clear();
  for (const auto& b : e->body) out->body.push_back(clone_stmt(b));
  // anonymous bodies are shared; the engine never edits through them
  return out;
}

// Visits every mutable ExprPtr slot in a statement tree, innermost first so a
// visitor may replace whole subtrees.
inline void walk_expr_slots(ExprPtr& e, const std::function<void(ExprPtr&)>& fn);

inline void walk_stmt_exprs(StmtPtr& s, const std::function<void(ExprPtr&)>& fn) {
  if (!s) return;
  walk_expr_slots(s->expr, fn);
  walk_expr_slots(s->init, fn);
  walk_expr_slots(s->for_update, fn);
  walk_stmt_exprs(s->for_init, fn);
  walk_stmt_exprs(s->then_branch, fn);
  walk_stmt_exprs(s->else_branch, fn);
  for (auto& b : s->body) walk_stmt_exprs(b, fn);
}

inline void walk_expr_slots(ExprPtr& e, const std::function<void(ExprPtr&)>& fn) {
  if (!e) return;
  walk_expr_slots(e->a, fn);
  walk_expr_slots(e->b, fn);
  walk_expr_slots(e->c, fn);
  for (auto& a : e->args) walk_expr_slots(a, fn);
  for (auto& b : e->body) walk_stmt_exprs(b, fn);
  fn(e);
}

inline void walk_body(std::vector<StmtPtr>& body, const std::function<void(ExprPtr&)>& fn) {
  for (auto& s : body) walk_stmt_exprs(s, fn);
}

// Names read anywhere in the subtree (identifiers and unqualified call names).
inline void used_names(const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->kind == ExprKind::Name) out.insert(e->text);
  if (e->kind == ExprKind::Call && !e->a) out.insert(e->text);
  used_names(e->a, out);
  used_names(e->b, out);
  used_names(e->c, out);
  for (const auto& a : e->args) used_names(a, out);
  for (const auto& b : e->body)
    if (b) {
      used_names(b->expr, out);
      used_names(b->init, out);
      used_names(b->for_update, out);
    }
}

inline void used_names(const StmtPtr& s, std::set<std::string>& out) {
  if (!s) return;
  used_names(s->expr, out);
  used_names(s->init, out);
  used_names(s->for_update, out);
  used_names(s->for_init, out);
  used_names(s->then_branch, out);
  used_names(s->else_branch, out);
  for (const auto& b : s->body) used_names(b, out);
}

inline void declared_names(const StmtPtr& s, std::set<std::string>& out) {
  if (!s) return;
  if (s->kind == StmtKind::LocalDecl || s->kind == StmtKind::ForEach) out.insert(s->name);
  declared_names(s->for_init, out);
  declared_names(s->then_branch, out);
  declared_names(s->else_branch, out);
  for (const auto& b : s->body) declared_names(b, out);
}

// Renames a local variable throughout a statement subtree. Ignores
// shadowing: statements the engine splices never redeclare the same name.
inline void rename_local(StmtPtr& s, const std::string& from, const std::string& to) {
  if (!s) return;
  if ((s->kind == StmtKind::LocalDecl || s->kind == StmtKind::ForEach) && s->name == from)
    s->name = to;
  rename_local(s->for_init, from, to);
  rename_local(s->then_branch, from, to);
  rename_local(s->else_branch, from, to);
  for (auto& b : s->body) rename_local(b, from, to);
  walk_stmt_exprs(s, [&](ExprPtr& e) {
    if (e->kind == ExprKind::Name && e->text == from) e->text = to;
  });
}

inline bool contains_kind(const StmtPtr& s, std::initializer_list<StmtKind> kinds) {
  if (!s) return false;
  for (auto k : kinds)
    if (s->kind == k) return true;
  if (contains_kind(s->for_init, kinds) || contains_kind(s->then_branch, kinds) ||
      contains_kind(s->else_branch, kinds))
    return true;
  for (const auto& b : s->body)
    if (contains_kind(b, kinds)) return true;
  return false;
}

struct ResolvedMethod {
  TypeDecl* owner = nullptr;
  std::vector<TypeDecl*> chain;  // outermost → owner
  Member* method = nullptr;
  int member_index = -1;
  int unit_index = -1;
};

struct Workspace {
  std::vector<Ast> asts;  // parallel to request units

  explicit Workspace(const std::vector<SourceUnit>& units) {
    for (const auto& u : units) asts.push_back(parse_or_throw(u.source));
  }

  TypeDecl* find_top_level(const std::string& name, int* unit_out = nullptr) {
    for (size_t i = 0; i < asts.size(); ++i)
      for (auto& t : asts[i].types)
        if (t->name == name) {
          if (unit_out) *unit_out = static_cast<int>(i);
          return t.get();
        }
    return nullptr;
  }

  // Any class with this name, searching nested declarations too.
  TypeDecl* find_class(const std::string& name, int* unit_out = nullptr) {
    if (auto* t = find_top_level(name, unit_out)) return t;
    for (size_t i = 0; i < asts.size(); ++i) {
      for (auto& t : asts[i].types) {
        if (auto* hit = find_nested(*t, name)) {
          if (unit_out) *unit_out = static_cast<int>(i);
          return hit;
        }
      }
    }
    return nullptr;
  }

  std::optional<ResolvedMethod> resolve_method(const ElementLocator& loc) {
    if (loc.empty()) return std::nullopt;
    ResolvedMethod r;
    TypeDecl* cur = nullptr;
    for (size_t i = 0; i < loc.path.size(); ++i) {
      const auto& seg = loc.path[i];
      if (seg.kind == SegmentKind::Class) {
        if (!cur) {
          cur = find_top_level(seg.name, &r.unit_index);
        } else {
          TypeDecl* next = nullptr;
          for (auto& m : cur->members)
            if (m->kind == MemberKind::NestedType && m->nested->name == seg.name)
              next = m->nested.get();
          cur = next;
        }
        if (!cur) return std::nullopt;
        r.chain.push_back(cur);
      } else if (seg.kind == SegmentKind::Method) {
        if (!cur || i + 1 != loc.path.size()) return std::nullopt;
        for (size_t k = 0; k < cur->members.size(); ++k) {
          if (cur->members[k]->kind == MemberKind::Method && cur->members[k]->name == seg.name) {
            r.owner = cur;
            r.method = cur->members[k].get();
            r.member_index = static_cast<int>(k);
            return r;
          }
        }
        return std::nullopt;
      } else {
        return std::nullopt;  // statement-level locators resolve elsewhere
      }
    }
    return std::nullopt;
  }

  std::vector<SourceUnit> render(const std::vector<SourceUnit>& in) const {
    std::vector<SourceUnit> out;
    for (size_t i = 0; i < asts.size(); ++i) out.push_back({in[i].class_name, print(asts[i])});
    return out;
  }

 private:
  static TypeDecl* find_nested(TypeDecl& t, const std::string& name) {
    for (auto& m : t.members) {
      if (m->kind != MemberKind::NestedType) continue;
      if (m->nested->name == name) return m->nested.get();
      if (auto* hit = find_nested(*m->nested, name)) return hit;
    }
    return nullptr;
  }
};

inline ExprPtr make_name(const std::string& n) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Name;
  e->text = n;
  return e;
}

// Substitution payload for inlining: parameters become argument expressions,
// parenthesized unless atomic.
inline ExprPtr wrap_for_subst(const ExprPtr& arg) {
  switch (arg->kind) {
    case ExprKind::Name:
    case ExprKind::Literal:
    case ExprKind::This:
    case ExprKind::FieldAccess:
    case ExprKind::Paren:
      return clone_expr(arg);
    default: {
      auto p = std::make_shared<Expr>();
      p->kind = ExprKind::Paren;
      p->a = clone_expr(arg);
      return p;
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The engine
// ---------------------------------------------------------------------------

class Engine {
 public:
  explicit Engine(EngineConfig cfg = {}) : cfg_(std::move(cfg)) {}

  const EngineConfig& config() const { return cfg_; }

  // Reports why the refactoring would be refused, or nullopt when it is
  // applicable. Shares every check with apply(), so the two never disagree.
  std::optional<std::string> check_preconditions(const RefactoringRequest& req) const {
    try {
      detail::Workspace ws(req.units);
      return precheck(ws, req);
    } catch (const SyntaxError& e) {
      return std::string("input does not parse: ") + e.what();
    }
  }

  EngineResponse apply(const RefactoringRequest& req) const {
    EngineResponse resp;
    try {
      detail::Workspace ws(req.units);
      if (auto reason = precheck(ws, req)) {
        resp.status = Status::Refused;
        resp.reason = *reason;
        return resp;
      }
      std::vector<std::string> warnings;
      switch (req.type) {
        case RefactoringType::PullUp: apply_pull_up(ws, req, warnings); break;
        case RefactoringType::InlineMethod: apply_inline(ws, req, warnings); break;
        case RefactoringType::ExtractVariable: apply_extract_variable(ws, req, warnings); break;
        case RefactoringType::ExtractMethod: apply_extract_method(ws, req, warnings); break;
        case RefactoringType::MakeStatic: apply_make_static(ws, req, warnings); break;
      }
      resp.units = ws.render(req.units);
      resp.warnings = std::move(warnings);
      resp.status = resp.warnings.empty() ? Status::Ok : Status::Warning;
      return resp;
    } catch (const std::exception& e) {
      resp.status = Status::Crashed;
      resp.units.clear();
      resp.reason = e.what();
      return resp;
    }
  }

 private:
  EngineConfig cfg_;

  std::optional<std::string> precheck(detail::Workspace& ws, const RefactoringRequest& req) const {
    for (const auto& p : required_params(req.type))
      if (!req.params.count(p)) return "missing parameter: " + p;
    switch (req.type) {
      case RefactoringType::PullUp: return pre_pull_up(ws, req);
      case RefactoringType::InlineMethod: return pre_inline(ws, req);
      case RefactoringType::ExtractVariable: return pre_extract_variable(ws, req);
      case RefactoringType::ExtractMethod: return pre_extract_method(ws, req);
      case RefactoringType::MakeStatic: return pre_make_static(ws, req);
    }
    return "unknown refactoring type";
  }

  // ---- Pull Up Method ----

  std::optional<std::string> pre_pull_up(detail::Workspace& ws,
                                         const RefactoringRequest& req) const {
    auto r = ws.resolve_method(req.target);
    if (!r) return "target method not found: " + req.target.to_string();
    const std::string& dest_name = req.params.at("destination");
    TypeDecl* dest = ws.find_class(dest_name);
    if (!dest) return "destination class not found: " + dest_name;
    if (r->owner->extends.name != dest_name)
      return "destination is not the direct superclass of " + r->owner->name;
    for (const auto& m : dest->members)
      if (m->kind == MemberKind::Method && m->name == r->method->name)
        return "destination already declares a method named " + r->method->name;

    if (cfg_.fault != Fault::PullupDropOuterQualifier) {
      if (auto sym = enclosing_dependency(*r, *dest, ws))
        return "method body depends on the enclosing instance: " + *sym;
    }
    return std::nullopt;
  }

  // A symbol in the method body that resolves in the owner's enclosing scope
  // but would dangle at the destination.
  static std::optional<std::string> enclosing_dependency(const detail::ResolvedMethod& r,
                                                         const TypeDecl& dest,
                                                         detail::Workspace& ws) {
    // Outer.this references dangle unless Outer encloses the destination too.
    std::set<std::string> dest_enclosers;  // names of classes enclosing dest
    for (auto& ast : ws.asts)
      for (auto& t : ast.types) collect_enclosers(*t, dest, {}, dest_enclosers);

    std::optional<std::string> hit;
    auto& body = const_cast<std::vector<StmtPtr>&>(r.method->body);
    detail::walk_body(body, [&](ExprPtr& e) {
      if (hit) return;
      if (e->kind == ExprKind::OuterThis && !dest_enclosers.count(e->text))
        hit = e->text + ".this";
    });
    if (hit) return hit;

    // Unqualified names declared by enclosing classes of the owner but
    // invisible from the destination.
    std::set<std::string> outer_syms;
    for (size_t i = 0; i + 1 < r.chain.size(); ++i)
      for (const auto& m : r.chain[i]->members)
        if (m->kind == MemberKind::Field || m->kind == MemberKind::Method)
          outer_syms.insert(m->name);
    if (outer_syms.empty()) return std::nullopt;

    std::set<std::string> visible;  // at the destination (own members only)
    for (const auto& m : dest.members) visible.insert(m->name);
    for (const auto& m : r.method->body) {
      std::set<std::string> used;
      detail::used_names(m, used);
      for (const auto& p : r.method->params) used.erase(p.name);
      for (const auto& n : used)
        if (outer_syms.count(n) && !visible.count(n)) return n;
    }
    return std::nullopt;
  }

  static void collect_enclosers(const TypeDecl& t, const TypeDecl& dest,
                                std::vector<std::string> stack, std::set<std::string>& out) {
    if (&t == &dest) {
      out.insert(stack.begin(), stack.end());
      return;
    }
    stack.push_back(t.name);
    for (const auto& m : t.members)
      if (m->kind == MemberKind::NestedType) collect_enclosers(*m->nested, dest, stack, out);
  }

  void apply_pull_up(detail::Workspace& ws, const RefactoringRequest& req,
                     std::vector<std::string>&) const {
    auto r = ws.resolve_method(req.target);
    TypeDecl* dest = ws.find_class(req.params.at("destination"));
    MemberPtr moved = r->owner->members[r->member_index];
    r->owner->members.erase(r->owner->members.begin() + r->member_index);
    if (cfg_.fault == Fault::PullupDropOuterQualifier) {
      // the defect: enclosing-instance qualifiers are stripped, not resolved
      detail::walk_body(moved->body, [](ExprPtr& e) {
        if (e->kind == ExprKind::FieldAccess && e->a && e->a->kind == ExprKind::OuterThis)
          e = detail::make_name(e->text);
        else if (e->kind == ExprKind::Call && e->a && e->a->kind == ExprKind::OuterThis)
          e->a = nullptr;
      });
    }
    dest->members.push_back(moved);
  }

  // ---- Inline Method ----

  struct InlinePlan {
    bool expression_form = false;  // single `return expr;`
    int call_sites = 0;
  };

  static std::optional<std::string> classify_inline(detail::Workspace& ws,
                                                    const RefactoringRequest& req,
                                                    detail::ResolvedMethod& r, InlinePlan& plan) {
    auto resolved = ws.resolve_method(req.target);
    if (!resolved) return "target method not found: " + req.target.to_string();
    r = *resolved;
    if (!r.method->has_body) return "method has no body";

    std::set<std::string> called;
    for (const auto& s : r.method->body) detail::used_names(s, called);
    if (called.count(r.method->name)) return "method is recursive";

    int returns = 0;
    for (const auto& s : r.method->body)
      if (detail::contains_kind(s, {StmtKind::Return})) ++returns;
    if (r.method->body.size() == 1 && r.method->body[0]->kind == StmtKind::Return &&
        r.method->body[0]->expr) {
      plan.expression_form = true;
    } else if (returns == 0 && r.method->type.name == "void") {
      plan.expression_form = false;
    } else {
      return "unsupported body shape for inlining";
    }

    // every call site must be resolvable; statement-form bodies additionally
    // require call-statement positions
    std::optional<std::string> bad;
    for (auto& m : r.owner->members) {
      if (m->kind != MemberKind::Method || m.get() == r.method) continue;
      for (auto& s : m->body) count_sites(s, *r.method, plan, bad);
    }
    if (bad) return bad;
    if (plan.call_sites == 0) return "no call sites found in the declaring class";
    return std::nullopt;
  }

  static bool is_self_call(const Expr& e, const Member& target) {
    return e.kind == ExprKind::Call && e.text == target.name &&
           (!e.a || e.a->kind == ExprKind::This);
  }

  static void count_sites(StmtPtr& s, const Member& target, InlinePlan& plan,
                          std::optional<std::string>& bad) {
    if (!s) return;
    bool stmt_site = s->kind == StmtKind::ExprStmt && s->expr && is_self_call(*s->expr, target);
    detail::walk_stmt_exprs(s, [&](ExprPtr& e) {
      if (!is_self_call(*e, target)) return;
      ++plan.call_sites;
      if (e->args.size() != target.params.size()) bad = "call-site arity mismatch";
    });
    if (!plan.expression_form) {
      // statement form can only replace whole call statements
      int in_stmt = 0;
      detail::walk_stmt_exprs(s, [&](ExprPtr& e) {
        if (is_self_call(*e, target)) ++in_stmt;
      });
      if (in_stmt > 0 && (!stmt_site || in_stmt > 1))
        bad = "call site uses the result of a statement-bodied method";
    }
  }

  std::optional<std::string> pre_inline(detail::Workspace& ws,
                                        const RefactoringRequest& req) const {
    detail::ResolvedMethod r;
    InlinePlan plan;
    return classify_inline(ws, req, r, plan);
  }

  void apply_inline(detail::Workspace& ws, const RefactoringRequest& req,
                    std::vector<std::string>&) const {
    detail::ResolvedMethod r;
    InlinePlan plan;
    classify_inline(ws, req, r, plan);
    Member& target = *r.method;

    for (auto& m : r.owner->members) {
      if (m->kind != MemberKind::Method || m.get() == r.method) continue;
      if (plan.expression_form) {
        detail::walk_body(m->body, [&](ExprPtr& e) {
          if (!is_self_call(*e, target)) return;
          ExprPtr replacement = detail::wrap_for_subst(target.body[0]->expr);
          substitute_params(replacement, target, e->args);
          e = replacement;
        });
      } else {
        splice_sites(m->body, target, *m);
      }
    }
    r.owner->members.erase(r.owner->members.begin() + r.member_index);
  }

  static void substitute_params(ExprPtr& root, const Member& target,
                                const std::vector<ExprPtr>& args) {
    std::map<std::string, ExprPtr> bind;
    for (size_t i = 0; i < target.params.size(); ++i)
      bind[target.params[i].name] = args[i];
    detail::walk_expr_slots(root, [&](ExprPtr& e) {
      if (e->kind != ExprKind::Name) return;
      auto it = bind.find(e->text);
      if (it != bind.end()) e = detail::wrap_for_subst(it->second);
    });
  }

  void splice_sites(std::vector<StmtPtr>& body, const Member& target, Member& caller) const {
    for (size_t i = 0; i < body.size(); ++i) {
      auto& s = body[i];
      if (!s) continue;
      splice_in_children(s, target, caller);
      if (s->kind != StmtKind::ExprStmt || !s->expr || !is_self_call(*s->expr, target)) continue;

      // names already taken in the caller; colliding inlined locals freshen
      std::set<std::string> taken;
      for (const auto& p : caller.params) taken.insert(p.name);
      for (const auto& st : caller.body) detail::declared_names(st, taken);

      std::vector<StmtPtr> spliced;
      for (const auto& st : target.body) spliced.push_back(detail::clone_stmt(st));
      // freshen before substituting so argument expressions keep their names
      if (cfg_.fault != Fault::InlineSkipNameFreshening) {
        std::set<std::string> param_names;
        for (const auto& p : target.params) param_names.insert(p.name);
        std::set<std::string> decls;
        for (const auto& st : spliced) detail::declared_names(st, decls);
        for (const auto& name : decls) {
          if (!taken.count(name)) continue;
          std::string fresh = name;
          int n = 1;
          while (taken.count(fresh) || param_names.count(fresh))
            fresh = name + "_" + std::to_string(n++);
          for (auto& st : spliced) detail::rename_local(st, name, fresh);
          taken.insert(fresh);
        }
      }
      for (auto& st : spliced) {
        detail::walk_stmt_exprs(st, [&](ExprPtr& e) {
          if (e->kind != ExprKind::Name) return;
          for (size_t k = 0; k < target.params.size(); ++k)
            if (target.params[k].name == e->text) e = detail::wrap_for_subst(s->expr->args[k]);
        });
      }
      body.erase(body.begin() + static_cast<long>(i));
      body.insert(body.begin() + static_cast<long>(i), spliced.begin(), spliced.end());
      if (spliced.empty()) {
        if (i == 0) {
          // re-scan from the start; the erased statement shifted everything left
          i = static_cast<size_t>(-1);
        } else {
          --i;
        }
      } else {
        i += spliced.size() - 1;
      }
    }
  }

  void splice_in_children(StmtPtr& s, const Member& target, Member& caller) const {
    if (s->then_branch && s->then_branch->kind == StmtKind::Block)
      splice_sites(s->then_branch->body, target, caller);
    if (s->else_branch && s->else_branch->kind == StmtKind::Block)
      splice_sites(s->else_branch->body, target, caller);
    if (s->kind == StmtKind::Block) splice_sites(s->body, target, caller);
  }

  // ---- Extract Variable ----

  struct ExtractVarSite {
    std::vector<StmtPtr>* list = nullptr;  // statement list holding the site
    int stmt_index = -1;                   // insertion point within that list
    ExprPtr* slot = nullptr;               // the expression to replace
    Member* method = nullptr;
  };

  static std::optional<std::string> resolve_extract_site(detail::Workspace& ws,
                                                         const ElementLocator& loc,
                                                         ExtractVarSite& site) {
    // split `.../method:m/stmt:i[/stmt:j...]/expr:k`
    size_t expr_at = loc.path.size();
    for (size_t i = 0; i < loc.path.size(); ++i)
      if (loc.path[i].kind == SegmentKind::ExpressionIndex) expr_at = i;
    if (expr_at != loc.path.size() - 1) return "target locator must end in an expression segment";

    size_t first_stmt = expr_at;
    while (first_stmt > 0 && loc.path[first_stmt - 1].kind == SegmentKind::StatementIndex)
      --first_stmt;
    ElementLocator head;
    head.path.assign(loc.path.begin(), loc.path.begin() + first_stmt);
    detail::ResolvedMethod r;
    auto resolved = ws.resolve_method(head);
    if (!resolved) return "target method not found: " + head.to_string();
    r = *resolved;
    site.method = r.method;

    std::vector<StmtPtr>* list = &r.method->body;
    StmtPtr* cur = nullptr;
    int idx = -1;
    for (size_t i = first_stmt; i < expr_at; ++i) {
      int want = loc.path[i].index;
      if (want < 0 || want >= static_cast<int>(list->size())) return "statement index out of range";
      cur = &(*list)[want];
      idx = want;
      if (i + 1 < expr_at) {
        // descend into block-bearing statements
        Stmt& st = **cur;
        if (st.kind == StmtKind::Block) list = &st.body;
        else if (st.then_branch && st.then_branch->kind == StmtKind::Block)
          list = &st.then_branch->body;
        else return "statement path does not descend into a block";
      }
    }
    if (!cur) return "target locator lacks a statement segment";
    site.list = list;
    site.stmt_index = idx;

    // slot lookup mirrors the pre-order used by expr locators
    int want = loc.path[expr_at].index;
    int seen = 0;
    std::function<ExprPtr*(ExprPtr&)> dig = [&](ExprPtr& e) -> ExprPtr* {
      if (!e) return nullptr;
      if (seen++ == want) return &e;
      if (auto* s = dig(e->a)) return s;
      if (auto* s = dig(e->b)) return s;
      if (auto* s = dig(e->c)) return s;
      for (auto& a : e->args)
        if (auto* s = dig(a)) return s;
      return nullptr;
    };
    Stmt& st = **cur;
    for (ExprPtr* root : {&st.expr, &st.init, &st.for_update}) {
      if (auto* s = dig(*root)) {
        site.slot = s;
        return std::nullopt;
      }
    }
    return "expression index out of range";
  }

  std::optional<std::string> pre_extract_variable(detail::Workspace& ws,
                                                  const RefactoringRequest& req) const {
    ExtractVarSite site;
    if (auto err = resolve_extract_site(ws, req.target, site)) return err;
    bool impure = false;
    detail::walk_expr_slots(*site.slot, [&](ExprPtr& e) {
      if (e->kind == ExprKind::Assign) impure = true;
      if (e->kind == ExprKind::Unary && (e->text.find("++") != std::string::npos ||
                                         e->text.find("--") != std::string::npos))
        impure = true;
    });
    if (impure) return "expression has side effects";

    const std::string& name = req.params.at("name");
    std::set<std::string> taken;
    for (const auto& p : site.method->params) taken.insert(p.name);
    for (const auto& s : site.method->body) detail::declared_names(s, taken);
    if (taken.count(name)) return "name already in scope: " + name;
    return std::nullopt;
  }

  void apply_extract_variable(detail::Workspace& ws, const RefactoringRequest& req,
                              std::vector<std::string>& warnings) const {
    ExtractVarSite site;
    resolve_extract_site(ws, req.target, site);
    bool has_call = false;
    detail::walk_expr_slots(*site.slot, [&](ExprPtr& e) {
      if (e->kind == ExprKind::Call) has_call = true;
    });
    if (has_call)
      warnings.push_back("extracted expression calls a method; evaluation point moves");

    auto decl = std::make_shared<Stmt>();
    decl->kind = StmtKind::LocalDecl;
    decl->type.name = req.params.at("var_type");
    decl->name = req.params.at("name");
    decl->init = *site.slot;
    *site.slot = detail::make_name(decl->name);
    site.list->insert(site.list->begin() + site.stmt_index, decl);
  }

  // ---- Extract Method ----

  struct ExtractMethodPlan {
    detail::ResolvedMethod r;
    int start = 0, end = 0;
    std::vector<Param> live_in;
    std::vector<std::pair<TypeRef, std::string>> live_out;
  };

  std::optional<std::string> plan_extract_method(detail::Workspace& ws,
                                                 const RefactoringRequest& req,
                                                 ExtractMethodPlan& plan) const {
    auto resolved = ws.resolve_method(req.target);
    if (!resolved) return "target method not found: " + req.target.to_string();
    plan.r = *resolved;
    Member& m = *plan.r.method;
    try {
      plan.start = std::stoi(req.params.at("start"));
      plan.end = std::stoi(req.params.at("end"));
    } catch (...) {
      return "start/end must be integers";
    }
    if (plan.start < 0 || plan.end < plan.start ||
        plan.end >= static_cast<int>(m.body.size()))
      return "selection range out of bounds";
    for (int i = plan.start; i <= plan.end; ++i)
      if (detail::contains_kind(m.body[i], {StmtKind::Return, StmtKind::Break, StmtKind::Continue}))
        return "selection contains a jump statement";
    const std::string& name = req.params.at("name");
    for (const auto& mem : plan.r.owner->members)
      if (mem->kind == MemberKind::Method && mem->name == name)
        return "a method named " + name + " already exists";

    // live-in: used in range, declared before it
    std::map<std::string, TypeRef> before;  // declared name -> type
    for (const auto& p : m.params) before[p.name] = p.type;
    for (int i = 0; i < plan.start; ++i) {
      std::set<std::string> d;
      detail::declared_names(m.body[i], d);
      if (m.body[i]->kind == StmtKind::LocalDecl) before[m.body[i]->name] = m.body[i]->type;
      else
        for (const auto& n : d) before[n] = TypeRef{"int", {}, 0};  // loop vars: best effort
    }
    std::set<std::string> used_in_range, declared_in_range;
    for (int i = plan.start; i <= plan.end; ++i) {
      detail::used_names(m.body[i], used_in_range);
      detail::declared_names(m.body[i], declared_in_range);
      if (m.body[i]->kind == StmtKind::LocalDecl)
        before[m.body[i]->name] = m.body[i]->type;  // remember the type for live-out
    }
    for (const auto& n : used_in_range) {
      if (declared_in_range.count(n)) continue;
      auto it = before.find(n);
      if (it != before.end()) plan.live_in.push_back({it->second, n, false});
    }
    // live-out: declared in range, used after it
    std::set<std::string> used_after;
    for (int i = plan.end + 1; i < static_cast<int>(m.body.size()); ++i)
      detail::used_names(m.body[i], used_after);
    for (const auto& n : declared_in_range)
      if (used_after.count(n)) plan.live_out.push_back({before[n], n});

    if (cfg_.fault != Fault::ExtractMethodIgnoreLiveOut && plan.live_out.size() > 1)
      return "more than one value flows out of the selection";
    return std::nullopt;
  }

  std::optional<std::string> pre_extract_method(detail::Workspace& ws,
                                                const RefactoringRequest& req) const {
    ExtractMethodPlan plan;
    return plan_extract_method(ws, req, plan);
  }

  void apply_extract_method(detail::Workspace& ws, const RefactoringRequest& req,
                            std::vector<std::string>&) const {
    ExtractMethodPlan plan;
    plan_extract_method(ws, req, plan);
    Member& m = *plan.r.method;
    bool faulted = cfg_.fault == Fault::ExtractMethodIgnoreLiveOut;
    bool returns_value = !faulted && plan.live_out.size() == 1;

    auto extracted = std::make_shared<Member>();
    extracted->kind = MemberKind::Method;
    extracted->modifiers.push_back("private");
    if (has_modifier(m.modifiers, "static")) extracted->modifiers.push_back("static");
    extracted->type = returns_value ? plan.live_out[0].first : TypeRef{"void", {}, 0};
    extracted->name = req.params.at("name");
    extracted->params = plan.live_in;
    extracted->has_body = true;
    for (int i = plan.start; i <= plan.end; ++i)
      extracted->body.push_back(detail::clone_stmt(m.body[i]));
    if (returns_value) {
      auto ret = std::make_shared<Stmt>();
      ret->kind = StmtKind::Return;
      ret->expr = detail::make_name(plan.live_out[0].second);
      extracted->body.push_back(ret);
    }

    auto call = std::make_shared<Expr>();
    call->kind = ExprKind::Call;
    call->text = extracted->name;
    for (const auto& p : plan.live_in) call->args.push_back(detail::make_name(p.name));

    auto repl = std::make_shared<Stmt>();
    if (returns_value) {
      repl->kind = StmtKind::LocalDecl;
      repl->type = plan.live_out[0].first;
      repl->name = plan.live_out[0].second;
      repl->init = call;
    } else {
      repl->kind = StmtKind::ExprStmt;
      repl->expr = call;
    }
    m.body.erase(m.body.begin() + plan.start, m.body.begin() + plan.end + 1);
    m.body.insert(m.body.begin() + plan.start, repl);
    plan.r.owner->members.push_back(extracted);
  }

  // ---- Make Static ----

  std::optional<std::string> pre_make_static(detail::Workspace& ws,
                                             const RefactoringRequest& req) const {
    auto r = ws.resolve_method(req.target);
    if (!r) return "target method not found: " + req.target.to_string();
    if (has_modifier(r->method->modifiers, "static")) return "method is already static";
    if (r->owner->is_interface) return "interface methods cannot be made static here";

    // external call sites would need receiver rewriting; out of scope
    bool external_site = false;
    for (auto& ast : ws.asts)
      for (auto& t : ast.types) scan_external_calls(*t, *r, external_site);
    if (external_site) return "method has call sites outside the declaring class";
    return std::nullopt;
  }

  static void scan_external_calls(TypeDecl& t, const detail::ResolvedMethod& r, bool& found) {
    for (auto& m : t.members) {
      if (m->kind == MemberKind::NestedType) {
        scan_external_calls(*m->nested, r, found);
        continue;
      }
      if (&t == r.owner) continue;  // internal sites rewrite cleanly
      detail::walk_body(m->body, [&](ExprPtr& e) {
        if (e->kind == ExprKind::Call && e->text == r.method->name && e->a &&
            e->a->kind != ExprKind::This)
          found = true;
      });
    }
  }

  void apply_make_static(detail::Workspace& ws, const RefactoringRequest& req,
                         std::vector<std::string>& warnings) const {
    auto r = ws.resolve_method(req.target);
    Member& m = *r->method;
    TypeDecl& owner = *r->owner;

    std::set<std::string> instance_fields, instance_methods, static_members;
    for (const auto& mem : owner.members) {
      bool st = has_modifier(mem->modifiers, "static");
      if (mem->kind == MemberKind::Field) (st ? static_members : instance_fields).insert(mem->name);
      if (mem->kind == MemberKind::Method && mem.get() != &m)
        (st ? static_members : instance_methods).insert(mem->name);
    }
    std::set<std::string> locals;
    for (const auto& p : m.params) locals.insert(p.name);
    for (const auto& s : m.body) detail::declared_names(s, locals);

    bool needs_instance = false;
    detail::walk_body(m.body, [&](ExprPtr& e) {
      if (e->kind == ExprKind::This) needs_instance = true;
      if (e->kind == ExprKind::Name && instance_fields.count(e->text) && !locals.count(e->text))
        needs_instance = true;
      if (e->kind == ExprKind::Call && !e->a && instance_methods.count(e->text))
        needs_instance = true;
    });

    m.modifiers.push_back("static");
    if (!needs_instance) return;

    std::string pname = to_lower(owner.name.substr(0, 1));
    while (locals.count(pname) || instance_fields.count(pname)) pname += "0";
    detail::walk_body(m.body, [&](ExprPtr& e) {
      if (e->kind == ExprKind::This) {
        e = detail::make_name(pname);
      } else if (e->kind == ExprKind::Name && instance_fields.count(e->text) &&
                 !locals.count(e->text)) {
        auto fa = std::make_shared<Expr>();
        fa->kind = ExprKind::FieldAccess;
        fa->a = detail::make_name(pname);
        fa->text = e->text;
        e = fa;
      } else if (e->kind == ExprKind::Call && !e->a && instance_methods.count(e->text)) {
        e->a = detail::make_name(pname);
      }
    });
    Param p;
    p.type.name = owner.name;
    p.name = pname;
    p.is_final = cfg_.final_params;
    m.params.insert(m.params.begin(), p);
    warnings.push_back("signature changed: instance parameter " + pname + " added");
  }
};

}  // namespace retest::engine
