#include <set>

#include "sbp/tdl/tdl.hpp"

namespace sbp::tdl {

namespace {

// Builtin callables and their arity. randomValue also accepts a range call.
std::optional<std::size_t> builtin_arity(const Name& n) {
  if (n == "abs" || n == "x" || n == "y" || n == "entity" || n == "randomValue") return 1;
  if (n == "distance" || n == "contains") return 2;
  return std::nullopt;
}

class Checker {
 public:
  explicit Checker(const CheckContext& ctx) : ctx_(ctx) {
    for (const Name& n : ctx.ambient_binders) bound_.insert(n);
  }

  std::vector<Diagnostic> run(const Ast& ast) {
    check_block(ast.program);
    return std::move(diags_);
  }

  std::vector<Diagnostic> run_expr(const Expr& e) {
    check_expr(e);
    return std::move(diags_);
  }

 private:
  void error(Span sp, std::string msg) {
    diags_.push_back({Diagnostic::Severity::Error, std::move(msg), sp});
  }
  void warn(Span sp, std::string msg) {
    diags_.push_back({Diagnostic::Severity::Warning, std::move(msg), sp});
  }

  void check_block(const Block& b) {
    bool unreachable = false;
    Span return_span;
    for (const Stmt& s : b.stmts) {
      if (unreachable) {
        warn(s.span, "statement is unreachable after return at line " +
                         std::to_string(return_span.line));
        unreachable = false;  // one warning per return is enough
      }
      check_stmt(s);
      if (s.kind == Stmt::Kind::Return) {
        unreachable = true;
        return_span = s.span;
      }
    }
  }

  void check_stmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Wait:
        check_expr(*s.expr);
        break;
      case Stmt::Kind::Let:
        check_expr(*s.expr);
        if (!s.name.empty()) bound_.insert(s.name);
        break;
      case Stmt::Kind::If: {
        check_expr(*s.expr);
        auto saved = bound_;
        check_block(s.then_block);
        bound_ = saved;
        check_block(s.else_block);
        bound_ = std::move(saved);
        break;
      }
      case Stmt::Kind::Switch:
        check_expr(*s.expr);
        for (const SwitchCase& c : s.cases) {
          auto saved = bound_;
          check_block(c.body);
          bound_ = std::move(saved);
        }
        break;
      case Stmt::Kind::Select: {
        check_expr(*s.world_expr);
        auto saved = bound_;
        if (!s.name.empty()) bound_.insert(s.name);
        check_expr(*s.expr);
        if (s.minimizing) check_expr(*s.minimizing);
        check_block(s.then_block);
        bound_ = saved;
        check_block(s.else_block);
        bound_ = std::move(saved);
        break;
      }
      case Stmt::Kind::Return:
      case Stmt::Kind::Emit:
        for (const UpdateExprAst& u : s.updates) check_update(u);
        break;
      case Stmt::Kind::Await:
        if (s.await_path) {
          check_path(*s.await_path);
          int known = path_min_segments(*s.await_path);
          if (known != 3) {
            error(s.span, "await target must be a world.entity.process path");
          }
        }
        break;
    }
  }

  // Total number of address segments, counting the root's contribution.
  static int path_min_segments(const PathExpr& p) {
    int base = 0;
    switch (p.root) {
      case PathExpr::Root::Me:
      case PathExpr::Root::Binder:
        base = 2;  // world + entity
        break;
      case PathExpr::Root::MyWorld:
      case PathExpr::Root::World:
        base = 1;
        break;
    }
    return base + static_cast<int>(p.segments.size());
  }

  void check_path(const PathExpr& p) {
    if (p.root == PathExpr::Root::Binder && !bound_.count(p.binder)) {
      error(p.span, "unbound binder \"" + p.binder + "\"");
    }
    if (p.root_expr) check_expr(*p.root_expr);
    for (const auto& seg : p.segments) {
      if (seg.dynamic) check_expr(*seg.dynamic);
    }
    if (path_min_segments(p) > 3) error(p.span, "path has more than 3 segments");
  }

  void check_expr(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Literal:
        break;
      case Expr::Kind::Binder:
        if (!bound_.count(e.name)) error(e.span, "unbound binder \"" + e.name + "\"");
        break;
      case Expr::Kind::Path:
        check_path(*e.path);
        break;
      case Expr::Kind::Unary:
      case Expr::Kind::Binary:
      case Expr::Kind::CoordLit:
      case Expr::Kind::ListLit:
        for (const ExprPtr& a : e.args) check_expr(*a);
        break;
      case Expr::Kind::Call: {
        auto arity = builtin_arity(e.name);
        if (!arity) {
          error(e.span, "unknown builtin \"" + e.name + "\"");
        } else if (e.name == "randomValue") {
          if (e.args.size() != 1 && !(e.range_call && e.args.size() == 2)) {
            error(e.span, "randomValue takes n or lo..hi");
          }
        } else if (e.args.size() != *arity) {
          error(e.span, e.name + " takes " + std::to_string(*arity) + " argument(s)");
        }
        for (const ExprPtr& a : e.args) check_expr(*a);
        break;
      }
    }
  }

  void check_update(const UpdateExprAst& u) {
    if (u.guard) {
      check_path(u.guard->path);
      if (u.guard->value) check_expr(*u.guard->value);
    }
    if (u.kind == UpdateExprAst::Kind::Macro) {
      for (const ExprPtr& a : u.macro_args) check_expr(*a);
      if (ctx_.macros) {
        auto it = ctx_.macros->find(u.macro_name);
        if (it == ctx_.macros->end()) {
          error(u.span, "unknown macro \"" + u.macro_name + "\"");
        } else if (it->second != u.macro_args.size()) {
          error(u.span, "macro \"" + u.macro_name + "\" expects " + std::to_string(it->second) +
                            " argument(s)");
        }
      }
      return;
    }
    auto check_path_arity = [&](const std::optional<PathExpr>& p, int want, const char* what) {
      if (!p) return;
      check_path(*p);
      if (path_min_segments(*p) != want) {
        error(u.span, std::string(what) + " needs a " + std::to_string(want) + "-segment path");
      }
    };
    switch (u.op) {
      case CoreOp::SetData:
      case CoreOp::DeleteData:
      case CoreOp::SetTransition:
      case CoreOp::DeleteTransition:
      case CoreOp::StartProcess:
      case CoreOp::CancelProcess:
      case CoreOp::RebindProcess:
        check_path_arity(u.path, 3, "this update");
        break;
      case CoreOp::CreateEntity:
      case CoreOp::DeleteEntity:
        check_path_arity(u.path, 2, "this update");
        break;
      case CoreOp::CopyProperties:
        check_path_arity(u.path, 2, "copy_properties source");
        check_path_arity(u.path2, 2, "copy_properties destination");
        break;
      case CoreOp::AddWorld:
      case CoreOp::DeleteWorld:
        break;
    }
    for (const ExprPtr* e :
         {&u.value, &u.trans_name, &u.sem_name, &u.source_text, &u.world_name, &u.from_world}) {
      if (*e) check_expr(**e);
    }
    for (const ExprPtr& k : u.key_args) check_expr(*k);
  }

  const CheckContext& ctx_;
  std::set<Name> bound_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> check(const Ast& ast, const CheckContext& ctx) {
  return Checker(ctx).run(ast);
}

std::vector<Diagnostic> check_expression(const Expr& expr, const CheckContext& ctx) {
  return Checker(ctx).run_expr(expr);
}

bool expr_uses_random(const Expr& e) {
  if (e.kind == Expr::Kind::Call && e.name == "randomValue") return true;
  for (const ExprPtr& a : e.args) {
    if (a && expr_uses_random(*a)) return true;
  }
  if (e.path) {
    if (e.path->root_expr && expr_uses_random(*e.path->root_expr)) return true;
    for (const auto& seg : e.path->segments) {
      if (seg.dynamic && expr_uses_random(*seg.dynamic)) return true;
    }
  }
  return false;
}

}  // namespace sbp::tdl
