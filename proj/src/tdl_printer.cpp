#include <sstream>

#include "sbp/tdl/tdl.hpp"

namespace sbp::tdl {

namespace {

// Binding strength for parenthesization, mirroring the parser's precedence.
int precedence(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq: case BinOp::Ne: case BinOp::Lt: case BinOp::Le:
    case BinOp::Gt: case BinOp::Ge: return 4;
    case BinOp::Add: case BinOp::Sub: return 5;
    case BinOp::Mul: case BinOp::Div: case BinOp::Mod: return 6;
  }
  return 0;
}

const char* op_text(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
  }
  return "?";
}

class Printer {
 public:
  std::string run(const Ast& ast) {
    print_block_body(ast.program, 0);
    return std::move(out_);
  }

  void expr(const Expr& e, int parent_prec = 0) {
    switch (e.kind) {
      case Expr::Kind::Literal:
        out_ += e.literal.to_text();
        break;
      case Expr::Kind::Binder:
        out_ += e.name;
        break;
      case Expr::Kind::Path:
        path(*e.path);
        break;
      case Expr::Kind::Unary:
        if (e.un_op == UnOp::Not) {
          out_ += "not ";
          expr(*e.args[0], 3);
        } else {
          out_ += "-";
          expr(*e.args[0], 7);
        }
        break;
      case Expr::Kind::Binary: {
        int prec = precedence(e.bin_op);
        bool parens = prec < parent_prec;
        if (parens) out_ += "(";
        expr(*e.args[0], prec);
        out_ += " ";
        out_ += op_text(e.bin_op);
        out_ += " ";
        expr(*e.args[1], prec + 1);
        if (parens) out_ += ")";
        break;
      }
      case Expr::Kind::Call:
        out_ += e.name + "(";
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          if (i) out_ += e.range_call ? ".." : ", ";
          expr(*e.args[i]);
        }
        out_ += ")";
        break;
      case Expr::Kind::CoordLit:
        out_ += "(";
        expr(*e.args[0]);
        out_ += ", ";
        expr(*e.args[1]);
        out_ += ")";
        break;
      case Expr::Kind::ListLit:
        out_ += "[";
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          if (i) out_ += ", ";
          expr(*e.args[i]);
        }
        out_ += "]";
        break;
    }
  }

 private:
  void indent(int depth) { out_.append(static_cast<std::size_t>(depth) * 2, ' '); }

  void path(const PathExpr& p) {
    switch (p.root) {
      case PathExpr::Root::Me: out_ += "me"; break;
      case PathExpr::Root::MyWorld: out_ += "myworld"; break;
      case PathExpr::Root::World:
        out_ += "world(";
        expr(*p.root_expr);
        out_ += ")";
        break;
      case PathExpr::Root::Binder: out_ += p.binder; break;
    }
    for (const auto& seg : p.segments) {
      out_ += ".";
      if (seg.dynamic) {
        out_ += "(";
        expr(*seg.dynamic);
        out_ += ")";
      } else {
        out_ += seg.literal;
      }
    }
  }

  void guard(const GuardExpr& g) {
    switch (g.kind) {
      case Guard::Kind::Exists: out_ += "exists("; break;
      case Guard::Kind::NotExists: out_ += "not_exists("; break;
      case Guard::Kind::Equals: out_ += "eq("; break;
      case Guard::Kind::Compare:
        switch (g.cmp) {
          case Guard::Cmp::Lt: out_ += "lt("; break;
          case Guard::Cmp::Le: out_ += "le("; break;
          case Guard::Cmp::Gt: out_ += "gt("; break;
          case Guard::Cmp::Ge: out_ += "ge("; break;
          case Guard::Cmp::Ne: out_ += "ne("; break;
        }
        break;
    }
    path(g.path);
    if (g.value) {
      out_ += ", ";
      expr(*g.value);
    }
    out_ += ")";
  }

  void update(const UpdateExprAst& u) {
    if (u.guard) {
      out_ += "when ";
      guard(*u.guard);
      out_ += ": ";
    }
    if (u.kind == UpdateExprAst::Kind::Macro) {
      out_ += u.macro_name;
      if (!u.macro_args.empty()) {
        out_ += "(";
        for (std::size_t i = 0; i < u.macro_args.size(); ++i) {
          if (i) out_ += ", ";
          expr(*u.macro_args[i]);
        }
        out_ += ")";
      }
      return;
    }
    auto name_arg = [&](const ExprPtr& e) {
      // Text literals that are valid names print bare.
      if (e->kind == Expr::Kind::Literal && e->literal.is_text() &&
          is_valid_name(e->literal.as_text())) {
        out_ += e->literal.as_text();
      } else if (e->kind == Expr::Kind::Path && e->path->segments.empty() &&
                 (e->path->root == PathExpr::Root::Me || e->path->root == PathExpr::Root::MyWorld)) {
        expr(*e);
      } else {
        out_ += "(";
        expr(*e);
        out_ += ")";
      }
    };
    switch (u.op) {
      case CoreOp::SetData:
        out_ += "set_data ";
        path(*u.path);
        out_ += " = ";
        expr(*u.value);
        break;
      case CoreOp::DeleteData:
        out_ += "delete_data ";
        path(*u.path);
        break;
      case CoreOp::SetTransition:
        out_ += "set_transition ";
        path(*u.path);
        out_ += " = transition(";
        name_arg(u.sem_name);
        out_ += ", ";
        expr(*u.source_text);
        out_ += ")";
        break;
      case CoreOp::DeleteTransition:
        out_ += "delete_transition ";
        path(*u.path);
        break;
      case CoreOp::StartProcess:
        out_ += "start_process ";
        path(*u.path);
        out_ += " : ";
        name_arg(u.trans_name);
        break;
      case CoreOp::CancelProcess:
        out_ += "cancel_process ";
        path(*u.path);
        break;
      case CoreOp::RebindProcess:
        out_ += "rebind_process ";
        path(*u.path);
        out_ += " : ";
        name_arg(u.trans_name);
        break;
      case CoreOp::CreateEntity:
        out_ += "create_entity ";
        path(*u.path);
        break;
      case CoreOp::DeleteEntity:
        out_ += "delete_entity ";
        path(*u.path);
        break;
      case CoreOp::AddWorld:
        out_ += "add_world ";
        name_arg(u.world_name);
        if (u.from_world) {
          out_ += " from ";
          name_arg(u.from_world);
        }
        break;
      case CoreOp::DeleteWorld:
        out_ += "delete_world ";
        name_arg(u.world_name);
        break;
      case CoreOp::CopyProperties:
        out_ += "copy_properties ";
        path(*u.path);
        out_ += " -> ";
        path(*u.path2);
        if (u.wildcard) {
          out_ += " *";
        } else {
          out_ += " [";
          for (std::size_t i = 0; i < u.key_args.size(); ++i) {
            if (i) out_ += ", ";
            name_arg(u.key_args[i]);
          }
          out_ += "]";
        }
        break;
    }
  }

  void update_list(const std::vector<UpdateExprAst>& updates) {
    out_ += "{";
    if (updates.empty()) {
      out_ += "}";
      return;
    }
    out_ += " ";
    for (std::size_t i = 0; i < updates.size(); ++i) {
      if (i) out_ += ", ";
      update(updates[i]);
    }
    out_ += " }";
  }

  void print_block_body(const Block& b, int depth) {
    for (const Stmt& s : b.stmts) stmt(s, depth);
  }

  void block(const Block& b, int depth) {
    out_ += "{\n";
    print_block_body(b, depth + 1);
    indent(depth);
    out_ += "}";
  }

  void stmt(const Stmt& s, int depth) {
    indent(depth);
    switch (s.kind) {
      case Stmt::Kind::Wait:
        out_ += "wait(";
        expr(*s.expr);
        out_ += ")";
        break;
      case Stmt::Kind::Let:
        out_ += "let " + s.name + " = ";
        expr(*s.expr);
        break;
      case Stmt::Kind::If:
        out_ += "if ";
        expr(*s.expr);
        out_ += " ";
        block(s.then_block, depth);
        if (!s.else_block.stmts.empty()) {
          out_ += " else ";
          block(s.else_block, depth);
        }
        break;
      case Stmt::Kind::Switch:
        out_ += "switch ";
        expr(*s.expr);
        out_ += " {\n";
        for (const SwitchCase& c : s.cases) {
          indent(depth + 1);
          out_ += "case " + c.match.to_text() + ": ";
          block(c.body, depth + 1);
          out_ += "\n";
        }
        indent(depth);
        out_ += "}";
        break;
      case Stmt::Kind::Select:
        out_ += "select " + s.name + " in ";
        expr(*s.world_expr);
        out_ += " where ";
        expr(*s.expr);
        if (s.minimizing) {
          out_ += " minimizing ";
          expr(*s.minimizing);
        }
        out_ += " ";
        block(s.then_block, depth);
        if (!s.else_block.stmts.empty()) {
          out_ += " else ";
          block(s.else_block, depth);
        }
        break;
      case Stmt::Kind::Return:
        out_ += s.stop ? "return stop " : "return ";
        update_list(s.updates);
        break;
      case Stmt::Kind::Emit:
        out_ += "emit ";
        update_list(s.updates);
        break;
      case Stmt::Kind::Await:
        out_ += "await ";
        path(*s.await_path);
        break;
    }
    out_ += "\n";
  }

  std::string out_;
};

// ---- structural equality (spans ignored) ----

bool same_expr(const Expr& a, const Expr& b);

bool same_path(const PathExpr& a, const PathExpr& b) {
  if (a.root != b.root || a.binder != b.binder) return false;
  if (static_cast<bool>(a.root_expr) != static_cast<bool>(b.root_expr)) return false;
  if (a.root_expr && !same_expr(*a.root_expr, *b.root_expr)) return false;
  if (a.segments.size() != b.segments.size()) return false;
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    const auto& x = a.segments[i];
    const auto& y = b.segments[i];
    if (x.literal != y.literal) return false;
    if (static_cast<bool>(x.dynamic) != static_cast<bool>(y.dynamic)) return false;
    if (x.dynamic && !same_expr(*x.dynamic, *y.dynamic)) return false;
  }
  return true;
}

bool same_expr(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  if (!(a.literal == b.literal) || a.name != b.name || a.un_op != b.un_op ||
      a.bin_op != b.bin_op || a.range_call != b.range_call) {
    return false;
  }
  if (static_cast<bool>(a.path) != static_cast<bool>(b.path)) return false;
  if (a.path && !same_path(*a.path, *b.path)) return false;
  if (a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!same_expr(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

bool same_expr_opt(const ExprPtr& a, const ExprPtr& b) {
  if (static_cast<bool>(a) != static_cast<bool>(b)) return false;
  return !a || same_expr(*a, *b);
}

bool same_update(const UpdateExprAst& a, const UpdateExprAst& b) {
  if (a.kind != b.kind || a.macro_name != b.macro_name || a.op != b.op ||
      a.wildcard != b.wildcard) {
    return false;
  }
  if (a.macro_args.size() != b.macro_args.size()) return false;
  for (std::size_t i = 0; i < a.macro_args.size(); ++i) {
    if (!same_expr(*a.macro_args[i], *b.macro_args[i])) return false;
  }
  for (auto [pa, pb] : {std::pair(&a.path, &b.path), std::pair(&a.path2, &b.path2)}) {
    if (pa->has_value() != pb->has_value()) return false;
    if (pa->has_value() && !same_path(**pa, **pb)) return false;
  }
  if (!same_expr_opt(a.value, b.value) || !same_expr_opt(a.trans_name, b.trans_name) ||
      !same_expr_opt(a.sem_name, b.sem_name) || !same_expr_opt(a.source_text, b.source_text) ||
      !same_expr_opt(a.world_name, b.world_name) || !same_expr_opt(a.from_world, b.from_world)) {
    return false;
  }
  if (a.key_args.size() != b.key_args.size()) return false;
  for (std::size_t i = 0; i < a.key_args.size(); ++i) {
    if (!same_expr(*a.key_args[i], *b.key_args[i])) return false;
  }
  if (a.guard.has_value() != b.guard.has_value()) return false;
  if (a.guard) {
    if (a.guard->kind != b.guard->kind || a.guard->cmp != b.guard->cmp) return false;
    if (!same_path(a.guard->path, b.guard->path)) return false;
    if (!same_expr_opt(a.guard->value, b.guard->value)) return false;
  }
  return true;
}

bool same_block(const Block& a, const Block& b);

bool same_stmt(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.name != b.name || a.stop != b.stop) return false;
  if (!same_expr_opt(a.expr, b.expr) || !same_expr_opt(a.world_expr, b.world_expr) ||
      !same_expr_opt(a.minimizing, b.minimizing)) {
    return false;
  }
  if (a.await_path.has_value() != b.await_path.has_value()) return false;
  if (a.await_path && !same_path(*a.await_path, *b.await_path)) return false;
  if (!same_block(a.then_block, b.then_block) || !same_block(a.else_block, b.else_block)) {
    return false;
  }
  if (a.cases.size() != b.cases.size()) return false;
  for (std::size_t i = 0; i < a.cases.size(); ++i) {
    if (!(a.cases[i].match == b.cases[i].match)) return false;
    if (!same_block(a.cases[i].body, b.cases[i].body)) return false;
  }
  if (a.updates.size() != b.updates.size()) return false;
  for (std::size_t i = 0; i < a.updates.size(); ++i) {
    if (!same_update(a.updates[i], b.updates[i])) return false;
  }
  return true;
}

bool same_block(const Block& a, const Block& b) {
  if (a.stmts.size() != b.stmts.size()) return false;
  for (std::size_t i = 0; i < a.stmts.size(); ++i) {
    if (!same_stmt(a.stmts[i], b.stmts[i])) return false;
  }
  return true;
}

}  // namespace

std::string pretty_print(const Ast& ast) { return Printer().run(ast); }

bool same_structure(const Ast& a, const Ast& b) { return same_block(a.program, b.program); }

}  // namespace sbp::tdl
