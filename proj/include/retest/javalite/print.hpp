#pragma once

#include <sstream>

#include "retest/javalite/ast.hpp"

namespace retest::javalite {

// Canonical formatting: four-space indent, braces on the declaring line, one
// statement per line, `//` comments on their own line before the node.
class Printer {
 public:
  std::string print(const Ast& unit) {
    out_.str("");
    for (const auto& t : unit.types) print_type(*t);
    return out_.str();
  }

  std::string print(const Expr& e) {
    out_.str("");
    expr(e);
    return out_.str();
  }

 private:
  void line(const std::string& s) { out_ << pad() << s << '\n'; }
  std::string pad() const { return std::string(static_cast<size_t>(indent_) * 4, ' '); }

  void comments(const std::vector<std::string>& cs) {
    for (const auto& c : cs) line("// " + c);
  }

  static std::string mods(const std::vector<std::string>& m) {
    std::string s;
    for (const auto& w : m) s += w + " ";
    return s;
  }

  std::string type(const TypeRef& t) {
    std::string s = t.name;
    if (!t.args.empty()) {
      s += "<";
      for (size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ", ";
        s += type_arg(t.args[i]);
      }
      s += ">";
    }
    for (int i = 0; i < t.array_dims; ++i) s += "[]";
    return s;
  }

  std::string type_arg(const TypeArg& a) {
    if (a.wildcard) {
      if (a.bound_kind.empty()) return "?";
      return "? " + a.bound_kind + " " + type(a.type);
    }
    return type(a.type);
  }

  std::string type_params(const std::vector<TypeParam>& ps) {
    if (ps.empty()) return "";
    std::string s = "<";
    for (size_t i = 0; i < ps.size(); ++i) {
      if (i) s += ", ";
      s += ps[i].name;
      for (size_t j = 0; j < ps[i].bounds.size(); ++j)
        s += (j ? " & " : " extends ") + type(ps[i].bounds[j]);
    }
    return s + "> ";
  }

  void print_type(const TypeDecl& d) {
    comments(d.comments);
    std::string head = mods(d.modifiers);
    head += d.is_interface ? "interface " : "class ";
    head += d.name;
    if (!d.type_params.empty()) {
      std::string tp = type_params(d.type_params);
      tp.pop_back();  // trailing space
      head += tp;
    }
    if (!d.extends.empty()) head += " extends " + type(d.extends);
    if (!d.implements.empty()) {
      head += d.is_interface ? ", " : " implements ";
      for (size_t i = 0; i < d.implements.size(); ++i) {
        if (i) head += ", ";
        head += type(d.implements[i]);
      }
    }
    line(head + " {");
    ++indent_;
    for (const auto& m : d.members) member(*m);
    --indent_;
    line("}");
  }

  void member(const Member& m) {
    comments(m.comments);
    switch (m.kind) {
      case MemberKind::Field: {
        std::string s = mods(m.modifiers) + type(m.type) + " " + m.name;
        if (m.init) s += " = " + expr_str(*m.init);
        line(s + ";");
        break;
      }
      case MemberKind::Method: {
        std::string s = mods(m.modifiers) + type_params(m.type_params);
        if (!m.type.empty()) s += type(m.type) + " ";
        s += m.name + "(";
        for (size_t i = 0; i < m.params.size(); ++i) {
          if (i) s += ", ";
          if (m.params[i].is_final) s += "final ";
          s += type(m.params[i].type) + " " + m.params[i].name;
        }
        s += ")";
        if (!m.has_body) {
          line(s + ";");
        } else {
          line(s + " {");
          ++indent_;
          for (const auto& st : m.body) stmt(*st);
          --indent_;
          line("}");
        }
        break;
      }
      case MemberKind::Initializer: {
        line(mods(m.modifiers) + "{");
        ++indent_;
        for (const auto& st : m.body) stmt(*st);
        --indent_;
        line("}");
        break;
      }
      case MemberKind::NestedType:
        print_type(*m.nested);
        break;
    }
  }

  void stmt(const Stmt& s) {
    comments(s.comments);
    switch (s.kind) {
      case StmtKind::Block:
        line("{");
        ++indent_;
        for (const auto& st : s.body) stmt(*st);
        --indent_;
        line("}");
        break;
      case StmtKind::If: {
        line("if (" + expr_str(*s.expr) + ") {");
        ++indent_;
        branch(s.then_branch);
        --indent_;
        if (s.else_branch) {
          line("} else {");
          ++indent_;
          branch(s.else_branch);
          --indent_;
        }
        line("}");
        break;
      }
      case StmtKind::While:
        line("while (" + expr_str(*s.expr) + ") {");
        ++indent_;
        branch(s.then_branch);
        --indent_;
        line("}");
        break;
      case StmtKind::For: {
        std::string head = "for (";
        head += s.for_init ? simple_stmt_str(*s.for_init) : ";";
        head += " ";
        if (s.expr) head += expr_str(*s.expr);
        head += ";";
        if (s.for_update) head += " " + expr_str(*s.for_update);
        line(head + ") {");
        ++indent_;
        branch(s.then_branch);
        --indent_;
        line("}");
        break;
      }
      case StmtKind::ForEach:
        line("for (" + type(s.type) + " " + s.name + " : " + expr_str(*s.expr) + ") {");
        ++indent_;
        branch(s.then_branch);
        --indent_;
        line("}");
        break;
      case StmtKind::Return:
        line(s.expr ? "return " + expr_str(*s.expr) + ";" : "return;");
        break;
      case StmtKind::Throw:
        line("throw " + expr_str(*s.expr) + ";");
        break;
      case StmtKind::Break:
        line("break;");
        break;
      case StmtKind::Continue:
        line("continue;");
        break;
      case StmtKind::LocalDecl: {
        std::string d = s.is_final ? "final " : "";
        d += type(s.type) + " " + s.name;
        if (s.init) d += " = " + expr_str(*s.init);
        line(d + ";");
        break;
      }
      case StmtKind::LocalClass:
        print_type(*s.local_type);
        break;
      case StmtKind::ExprStmt:
        line(expr_str(*s.expr) + ";");
        break;
      case StmtKind::Empty:
        line(";");
        break;
    }
  }

  // Loop and if bodies always print as blocks; a nested Block statement is
  // flattened one level so printing is idempotent.
  void branch(const StmtPtr& b) {
    if (!b) return;
    if (b->kind == StmtKind::Block && b->comments.empty()) {
      for (const auto& st : b->body) stmt(*st);
    } else {
      stmt(*b);
    }
  }

  std::string simple_stmt_str(const Stmt& s) {
    if (s.kind == StmtKind::LocalDecl) {
      std::string d = s.is_final ? "final " : "";
      d += type(s.type) + " " + s.name;
      if (s.init) d += " = " + expr_str(*s.init);
      return d + ";";
    }
    if (s.kind == StmtKind::ExprStmt) return expr_str(*s.expr) + ";";
    return ";";
  }

  std::string expr_str(const Expr& e) {
    std::ostringstream saved;
    saved.swap(out_);
    expr(e);
    std::string s = out_.str();
    saved.swap(out_);
    return s;
  }

  void expr(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Literal:
      case ExprKind::Name:
        out_ << e.text;
        break;
      case ExprKind::This:
        out_ << "this";
        break;
      case ExprKind::OuterThis:
        out_ << e.text << ".this";
        break;
      case ExprKind::FieldAccess:
        expr(*e.a);
        out_ << "." << e.text;
        break;
      case ExprKind::Call:
        if (e.a) {
          expr(*e.a);
          out_ << ".";
        }
        out_ << e.text << "(";
        args(e.args);
        out_ << ")";
        break;
      case ExprKind::New: {
        out_ << "new " << type(e.type) << "(";
        args(e.args);
        out_ << ")";
        if (e.has_anon_body) {
          out_ << " {\n";
          ++indent_;
          for (const auto& m : e.anon_body) member(*m);
          --indent_;
          out_ << pad() << "}";
        }
        break;
      }
      case ExprKind::ArrayNew:
        out_ << "new " << type(e.type) << "[";
        expr(*e.a);
        out_ << "]";
        break;
      case ExprKind::Index:
        expr(*e.a);
        out_ << "[";
        expr(*e.b);
        out_ << "]";
        break;
      case ExprKind::Lambda: {
        if (e.lambda_params.size() == 1 && e.lambda_params[0].type.empty() && !e.lambda_paren) {
          out_ << e.lambda_params[0].name;
        } else {
          out_ << "(";
          for (size_t i = 0; i < e.lambda_params.size(); ++i) {
            if (i) out_ << ", ";
            if (!e.lambda_params[i].type.empty()) out_ << type(e.lambda_params[i].type) << " ";
            out_ << e.lambda_params[i].name;
          }
          out_ << ")";
        }
        out_ << " -> ";
        if (e.lambda_block) {
          out_ << "{\n";
          ++indent_;
          for (const auto& st : e.body) stmt(*st);
          --indent_;
          out_ << pad() << "}";
        } else {
          expr(*e.a);
        }
        break;
      }
      case ExprKind::Binary:
        expr(*e.a);
        out_ << " " << e.text << " ";
        expr(*e.b);
        break;
      case ExprKind::Unary:
        if (e.text.rfind("post", 0) == 0) {
          expr(*e.a);
          out_ << e.text.substr(4);
        } else {
          out_ << e.text;
          expr(*e.a);
        }
        break;
      case ExprKind::Assign:
        expr(*e.a);
        out_ << " " << e.text << " ";
        expr(*e.b);
        break;
      case ExprKind::Ternary:
        expr(*e.a);
        out_ << " ? ";
        expr(*e.b);
        out_ << " : ";
        expr(*e.c);
        break;
      case ExprKind::Paren:
        out_ << "(";
        expr(*e.a);
        out_ << ")";
        break;
    }
  }

  void args(const std::vector<ExprPtr>& as) {
    for (size_t i = 0; i < as.size(); ++i) {
      if (i) out_ << ", ";
      expr(*as[i]);
    }
  }

  std::ostringstream out_;
  int indent_ = 0;
};

inline std::string print(const Ast& unit) { return Printer().print(unit); }

}  // namespace retest::javalite
