#include <utility>

#include "sbp/tdl/tdl.hpp"
#include "tdl_token.hpp"

namespace sbp::tdl {

std::string Diagnostic::to_string() const {
  std::string out = severity == Severity::Error ? "error" : "warning";
  out += " at " + std::to_string(span.line) + ":" + std::to_string(span.col) + ": " + message;
  return out;
}

bool has_error(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) {
    if (d.severity == Diagnostic::Severity::Error) return true;
  }
  return false;
}

namespace {

ExprPtr make_expr(Expr::Kind kind, Span span) {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->span = span;
  return e;
}

struct CoreOpSpec {
  std::string_view word;
  CoreOp op;
};

constexpr CoreOpSpec kCoreOps[] = {
    {"set_data", CoreOp::SetData},
    {"delete_data", CoreOp::DeleteData},
    {"set_transition", CoreOp::SetTransition},
    {"delete_transition", CoreOp::DeleteTransition},
    {"start_process", CoreOp::StartProcess},
    {"cancel_process", CoreOp::CancelProcess},
    {"rebind_process", CoreOp::RebindProcess},
    {"create_entity", CoreOp::CreateEntity},
    {"delete_entity", CoreOp::DeleteEntity},
    {"add_world", CoreOp::AddWorld},
    {"delete_world", CoreOp::DeleteWorld},
    {"copy_properties", CoreOp::CopyProperties},
};

class Parser {
 public:
  explicit Parser(std::string_view source) : toks_(lex(source)) {}

  ParseResult parse_program() {
    ParseResult out;
    Block program;
    while (!at(Tok::Eof)) {
      if (auto s = parse_stmt()) {
        program.stmts.push_back(std::move(*s));
      } else {
        sync_stmt();
      }
    }
    out.diagnostics = std::move(diags_);
    if (!has_error(out.diagnostics)) out.ast = Ast{std::move(program)};
    return out;
  }

  ExprParseResult parse_single_expression() {
    ExprParseResult out;
    ExprPtr e = parse_expr();
    if (!at(Tok::Eof)) error(peek().span, "trailing input after expression");
    out.diagnostics = std::move(diags_);
    if (!has_error(out.diagnostics)) out.expr = std::move(e);
    return out;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k) const { return peek().kind == k; }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool eat(Tok k) {
    if (at(k)) {
      take();
      return true;
    }
    return false;
  }
  void expect(Tok k, const char* where) {
    if (!eat(k)) {
      error(peek().span, std::string("expected ") + token_name(k) + " " + where + ", found " +
                             token_name(peek().kind));
    }
  }

  void error(Span span, std::string msg) {
    diags_.push_back({Diagnostic::Severity::Error, std::move(msg), span});
  }

  static bool stmt_start(Tok k) {
    switch (k) {
      case Tok::KwWait: case Tok::KwLet: case Tok::KwIf: case Tok::KwSwitch:
      case Tok::KwSelect: case Tok::KwReturn: case Tok::KwEmit: case Tok::KwAwait:
        return true;
      default:
        return false;
    }
  }

  void sync_stmt() {
    while (!at(Tok::Eof) && !stmt_start(peek().kind) && !at(Tok::RBrace)) take();
    if (at(Tok::RBrace)) take();
  }

  // ---- statements ----

  std::optional<Stmt> parse_stmt() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwWait: return parse_wait();
      case Tok::KwLet: return parse_let();
      case Tok::KwIf: return parse_if();
      case Tok::KwSwitch: return parse_switch();
      case Tok::KwSelect: return parse_select();
      case Tok::KwReturn: return parse_return();
      case Tok::KwEmit: return parse_emit();
      case Tok::KwAwait: return parse_await();
      case Tok::Error:
        error(t.span, t.text);
        take();
        return std::nullopt;
      default:
        error(t.span, std::string("expected a statement, found ") + token_name(t.kind));
        return std::nullopt;
    }
  }

  Stmt parse_wait() {
    Stmt s;
    s.kind = Stmt::Kind::Wait;
    s.span = take().span;
    expect(Tok::LParen, "after 'wait'");
    s.expr = parse_expr();
    expect(Tok::RParen, "after wait duration");
    return s;
  }

  Stmt parse_let() {
    Stmt s;
    s.kind = Stmt::Kind::Let;
    s.span = take().span;
    if (at(Tok::Ident)) {
      s.name = take().text;
    } else {
      error(peek().span, "expected a binder name after 'let'");
    }
    expect(Tok::Assign, "in let binding");
    s.expr = parse_expr();
    return s;
  }

  Stmt parse_if() {
    Stmt s;
    s.kind = Stmt::Kind::If;
    s.span = take().span;
    s.expr = parse_expr();
    s.then_block = parse_block("if body");
    if (eat(Tok::KwElse)) {
      if (at(Tok::KwIf)) {
        s.else_block.stmts.push_back(parse_if());
      } else {
        s.else_block = parse_block("else body");
      }
    }
    return s;
  }

  Stmt parse_switch() {
    Stmt s;
    s.kind = Stmt::Kind::Switch;
    s.span = take().span;
    s.expr = parse_expr();
    expect(Tok::LBrace, "to open switch");
    while (!at(Tok::RBrace) && !at(Tok::Eof)) {
      if (!at(Tok::KwCase)) {
        error(peek().span, "expected 'case' in switch");
        sync_stmt();
        break;
      }
      SwitchCase c;
      c.span = take().span;
      c.match = parse_case_literal();
      expect(Tok::Colon, "after case value");
      if (at(Tok::LBrace)) {
        c.body = parse_block("case body");
      } else if (auto inner = parse_stmt()) {
        c.body.stmts.push_back(std::move(*inner));
      }
      s.cases.push_back(std::move(c));
    }
    expect(Tok::RBrace, "to close switch");
    return s;
  }

  Value parse_case_literal() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: return Value::integer(take().int_val);
      case Tok::String: return Value::text(take().text);
      case Tok::KwTrue: take(); return Value::boolean(true);
      case Tok::KwFalse: take(); return Value::boolean(false);
      case Tok::KwUnit: take(); return Value::unit();
      case Tok::Minus:
        if (peek(1).kind == Tok::Int) {
          take();
          return Value::integer(-take().int_val);
        }
        [[fallthrough]];
      default:
        error(t.span, "expected a literal case value");
        return Value::unit();
    }
  }

  Stmt parse_select() {
    Stmt s;
    s.kind = Stmt::Kind::Select;
    s.span = take().span;
    if (at(Tok::Ident)) {
      s.name = take().text;
    } else {
      error(peek().span, "expected a binder name after 'select'");
    }
    expect(Tok::KwIn, "in select");
    s.world_expr = parse_expr();
    expect(Tok::KwWhere, "in select");
    s.expr = parse_expr();
    if (eat(Tok::KwMinimizing)) s.minimizing = parse_expr();
    s.then_block = parse_block("select body");
    if (eat(Tok::KwElse)) s.else_block = parse_block("select else body");
    return s;
  }

  Stmt parse_return() {
    Stmt s;
    s.kind = Stmt::Kind::Return;
    s.span = take().span;
    s.stop = eat(Tok::KwStop);
    s.updates = parse_update_list("return");
    return s;
  }

  Stmt parse_emit() {
    Stmt s;
    s.kind = Stmt::Kind::Emit;
    s.span = take().span;
    s.updates = parse_update_list("emit");
    return s;
  }

  Stmt parse_await() {
    Stmt s;
    s.kind = Stmt::Kind::Await;
    s.span = take().span;
    s.await_path = parse_path_expr("await target");
    return s;
  }

  Block parse_block(const char* what) {
    Block b;
    expect(Tok::LBrace, what);
    while (!at(Tok::RBrace) && !at(Tok::Eof)) {
      if (auto s = parse_stmt()) {
        b.stmts.push_back(std::move(*s));
      } else {
        sync_stmt();
        break;
      }
    }
    expect(Tok::RBrace, what);
    return b;
  }

  // ---- update expressions ----

  std::vector<UpdateExprAst> parse_update_list(const char* what) {
    std::vector<UpdateExprAst> out;
    expect(Tok::LBrace, what);
    if (eat(Tok::RBrace)) return out;
    while (true) {
      out.push_back(parse_update_expr());
      if (eat(Tok::RBrace)) break;
      if (!eat(Tok::Comma)) {
        error(peek().span, "expected ',' or '}' in update list");
        while (!at(Tok::RBrace) && !at(Tok::Eof) && !stmt_start(peek().kind)) take();
        eat(Tok::RBrace);
        break;
      }
    }
    return out;
  }

  std::optional<CoreOp> core_op_at() const {
    if (!at(Tok::Ident)) return std::nullopt;
    for (const auto& spec : kCoreOps) {
      if (peek().text == spec.word) return spec.op;
    }
    return std::nullopt;
  }

  UpdateExprAst parse_update_expr() {
    UpdateExprAst u;
    u.span = peek().span;
    if (eat(Tok::KwWhen)) {
      u.guard = parse_guard();
      expect(Tok::Colon, "after guard");
      auto op = core_op_at();
      if (!op) {
        error(peek().span, "a guarded update must wrap a core update");
        u.kind = UpdateExprAst::Kind::Macro;
        u.macro_name = "?";
        return u;
      }
      parse_core_into(u, *op);
      u.kind = UpdateExprAst::Kind::Core;
      return u;
    }
    if (auto op = core_op_at()) {
      parse_core_into(u, *op);
      u.kind = UpdateExprAst::Kind::Core;
      return u;
    }
    // Macro invocation.
    u.kind = UpdateExprAst::Kind::Macro;
    if (at(Tok::Ident)) {
      u.macro_name = take().text;
    } else {
      error(peek().span, std::string("expected an update, found ") + token_name(peek().kind));
      u.macro_name = "?";
      return u;
    }
    if (eat(Tok::LParen)) {
      if (!eat(Tok::RParen)) {
        while (true) {
          u.macro_args.push_back(parse_expr());
          if (eat(Tok::RParen)) break;
          expect(Tok::Comma, "in macro arguments");
          if (at(Tok::RParen) || at(Tok::Eof)) {
            eat(Tok::RParen);
            break;
          }
        }
      }
    }
    return u;
  }

  void parse_core_into(UpdateExprAst& u, CoreOp op) {
    u.op = op;
    take();  // the op word
    switch (op) {
      case CoreOp::SetData:
        u.path = parse_path_expr("set_data target");
        expect(Tok::Assign, "in set_data");
        u.value = parse_expr();
        break;
      case CoreOp::DeleteData:
        u.path = parse_path_expr("delete_data target");
        break;
      case CoreOp::SetTransition: {
        u.path = parse_path_expr("set_transition target");
        expect(Tok::Assign, "in set_transition");
        if (!at(Tok::Ident) || peek().text != "transition") {
          error(peek().span, "expected transition(semantics, source)");
        } else {
          take();
        }
        expect(Tok::LParen, "in transition literal");
        u.sem_name = parse_name_expr("semantics id");
        expect(Tok::Comma, "in transition literal");
        u.source_text = parse_expr();
        expect(Tok::RParen, "in transition literal");
        break;
      }
      case CoreOp::DeleteTransition:
        u.path = parse_path_expr("delete_transition target");
        break;
      case CoreOp::StartProcess:
        u.path = parse_path_expr("start_process target");
        expect(Tok::Colon, "in start_process");
        u.trans_name = parse_name_expr("transition name");
        break;
      case CoreOp::CancelProcess:
        u.path = parse_path_expr("cancel_process target");
        break;
      case CoreOp::RebindProcess:
        u.path = parse_path_expr("rebind_process target");
        expect(Tok::Colon, "in rebind_process");
        u.trans_name = parse_name_expr("transition name");
        break;
      case CoreOp::CreateEntity:
        u.path = parse_path_expr("create_entity target");
        break;
      case CoreOp::DeleteEntity:
        u.path = parse_path_expr("delete_entity target");
        break;
      case CoreOp::AddWorld:
        u.world_name = parse_name_expr("world name");
        if (eat(Tok::KwFrom)) u.from_world = parse_name_expr("source world");
        break;
      case CoreOp::DeleteWorld:
        u.world_name = parse_name_expr("world name");
        break;
      case CoreOp::CopyProperties:
        u.path = parse_path_expr("copy_properties source");
        expect(Tok::Arrow, "in copy_properties");
        u.path2 = parse_path_expr("copy_properties destination");
        if (eat(Tok::Star)) {
          u.wildcard = true;
        } else {
          expect(Tok::LBracket, "for copy_properties keys");
          if (!eat(Tok::RBracket)) {
            while (true) {
              u.key_args.push_back(parse_name_expr("property key"));
              if (eat(Tok::RBracket)) break;
              expect(Tok::Comma, "in key list");
              if (at(Tok::RBracket) || at(Tok::Eof)) {
                eat(Tok::RBracket);
                break;
              }
            }
          }
        }
        break;
    }
  }

  // A name position: a bare identifier is a literal name, a string literal is
  // taken verbatim, `me`/`myworld` name the running process's entity/world,
  // and a parenthesized expression is evaluated (binders go here).
  ExprPtr parse_name_expr(const char* what) {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      auto e = make_expr(Expr::Kind::Literal, t.span);
      e->literal = Value::text(take().text);
      return e;
    }
    if (t.kind == Tok::String) {
      auto e = make_expr(Expr::Kind::Literal, t.span);
      e->literal = Value::text(take().text);
      return e;
    }
    if (t.kind == Tok::KwMe || t.kind == Tok::KwMyworld) return parse_primary();
    if (t.kind == Tok::LParen) {
      take();
      ExprPtr e = parse_expr();
      expect(Tok::RParen, what);
      return e;
    }
    error(t.span, std::string("expected a name for ") + what);
    return make_expr(Expr::Kind::Literal, t.span);
  }

  GuardExpr parse_guard() {
    GuardExpr g;
    g.span = peek().span;
    std::string word = at(Tok::Ident) ? peek().text : "";
    if (word == "exists" || word == "not_exists") {
      take();
      g.kind = word == "exists" ? Guard::Kind::Exists : Guard::Kind::NotExists;
      expect(Tok::LParen, "in guard");
      g.path = parse_path_expr("guard path");
      expect(Tok::RParen, "in guard");
      return g;
    }
    if (word == "eq" || word == "lt" || word == "le" || word == "gt" || word == "ge" ||
        word == "ne") {
      take();
      if (word == "eq") {
        g.kind = Guard::Kind::Equals;
      } else {
        g.kind = Guard::Kind::Compare;
        g.cmp = word == "lt"   ? Guard::Cmp::Lt
                : word == "le" ? Guard::Cmp::Le
                : word == "gt" ? Guard::Cmp::Gt
                : word == "ge" ? Guard::Cmp::Ge
                               : Guard::Cmp::Ne;
      }
      expect(Tok::LParen, "in guard");
      g.path = parse_path_expr("guard path");
      expect(Tok::Comma, "in guard");
      g.value = parse_expr();
      expect(Tok::RParen, "in guard");
      return g;
    }
    error(peek().span, "expected a guard: exists, not_exists, eq, lt, le, gt, ge, ne");
    return g;
  }

  // ---- expressions ----

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (at(Tok::KwOr)) {
      Span sp = take().span;
      auto e = make_expr(Expr::Kind::Binary, sp);
      e->bin_op = BinOp::Or;
      e->args.push_back(std::move(lhs));
      e->args.push_back(parse_and());
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (at(Tok::KwAnd)) {
      Span sp = take().span;
      auto e = make_expr(Expr::Kind::Binary, sp);
      e->bin_op = BinOp::And;
      e->args.push_back(std::move(lhs));
      e->args.push_back(parse_not());
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (at(Tok::KwNot)) {
      Span sp = take().span;
      auto e = make_expr(Expr::Kind::Unary, sp);
      e->un_op = UnOp::Not;
      e->args.push_back(parse_not());
      return e;
    }
    return parse_cmp();
  }

  ExprPtr parse_cmp() {
    ExprPtr lhs = parse_add();
    BinOp op;
    switch (peek().kind) {
      case Tok::EqEq: op = BinOp::Eq; break;
      case Tok::Ne: op = BinOp::Ne; break;
      case Tok::Lt: op = BinOp::Lt; break;
      case Tok::Le: op = BinOp::Le; break;
      case Tok::Gt: op = BinOp::Gt; break;
      case Tok::Ge: op = BinOp::Ge; break;
      default: return lhs;
    }
    Span sp = take().span;
    auto e = make_expr(Expr::Kind::Binary, sp);
    e->bin_op = op;
    e->args.push_back(std::move(lhs));
    e->args.push_back(parse_add());
    return e;
  }

  ExprPtr parse_add() {
    ExprPtr lhs = parse_mul();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinOp op = at(Tok::Plus) ? BinOp::Add : BinOp::Sub;
      Span sp = take().span;
      auto e = make_expr(Expr::Kind::Binary, sp);
      e->bin_op = op;
      e->args.push_back(std::move(lhs));
      e->args.push_back(parse_mul());
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_mul() {
    ExprPtr lhs = parse_unary();
    while (at(Tok::Star) || at(Tok::Slash) || at(Tok::Percent)) {
      BinOp op = at(Tok::Star) ? BinOp::Mul : at(Tok::Slash) ? BinOp::Div : BinOp::Mod;
      Span sp = take().span;
      auto e = make_expr(Expr::Kind::Binary, sp);
      e->bin_op = op;
      e->args.push_back(std::move(lhs));
      e->args.push_back(parse_unary());
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (at(Tok::Minus)) {
      Span sp = take().span;
      auto e = make_expr(Expr::Kind::Unary, sp);
      e->un_op = UnOp::Neg;
      e->args.push_back(parse_unary());
      return e;
    }
    return parse_primary();
  }

  // Continues a path from a root: zero or more `.segment`, segment = name or
  // parenthesized expression.
  PathExpr finish_path(PathExpr root) {
    while (at(Tok::Dot)) {
      take();
      PathExpr::Seg seg;
      if (at(Tok::Ident)) {
        seg.literal = take().text;
      } else if (at(Tok::LParen)) {
        take();
        seg.dynamic = parse_expr();
        expect(Tok::RParen, "after dynamic path segment");
      } else {
        error(peek().span, "expected a path segment after '.'");
        break;
      }
      root.segments.push_back(std::move(seg));
    }
    return root;
  }

  std::optional<PathExpr> try_parse_path_root() {
    PathExpr p;
    p.span = peek().span;
    switch (peek().kind) {
      case Tok::KwMe:
        take();
        p.root = PathExpr::Root::Me;
        return p;
      case Tok::KwMyworld:
        take();
        p.root = PathExpr::Root::MyWorld;
        return p;
      case Tok::KwWorld:
        take();
        p.root = PathExpr::Root::World;
        expect(Tok::LParen, "after 'world'");
        p.root_expr = parse_expr();
        expect(Tok::RParen, "after world name");
        return p;
      case Tok::Ident:
        p.root = PathExpr::Root::Binder;
        p.binder = take().text;
        return p;
      default:
        return std::nullopt;
    }
  }

  PathExpr parse_path_expr(const char* what) {
    auto root = try_parse_path_root();
    if (!root) {
      error(peek().span, std::string("expected a path for ") + what);
      PathExpr p;
      p.span = peek().span;
      return p;
    }
    return finish_path(std::move(*root));
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: {
        auto e = make_expr(Expr::Kind::Literal, t.span);
        e->literal = Value::integer(take().int_val);
        return e;
      }
      case Tok::Float: {
        auto e = make_expr(Expr::Kind::Literal, t.span);
        e->literal = Value::real(take().float_val);
        return e;
      }
      case Tok::String: {
        auto e = make_expr(Expr::Kind::Literal, t.span);
        e->literal = Value::text(take().text);
        return e;
      }
      case Tok::KwTrue:
      case Tok::KwFalse: {
        auto e = make_expr(Expr::Kind::Literal, t.span);
        e->literal = Value::boolean(t.kind == Tok::KwTrue);
        take();
        return e;
      }
      case Tok::KwUnit: {
        auto e = make_expr(Expr::Kind::Literal, t.span);
        take();
        return e;
      }
      case Tok::LParen: {
        Span sp = take().span;
        ExprPtr first = parse_expr();
        if (eat(Tok::Comma)) {
          auto e = make_expr(Expr::Kind::CoordLit, sp);
          e->args.push_back(std::move(first));
          e->args.push_back(parse_expr());
          expect(Tok::RParen, "to close coordinate");
          return e;
        }
        expect(Tok::RParen, "to close parenthesis");
        return first;
      }
      case Tok::LBracket: {
        Span sp = take().span;
        auto e = make_expr(Expr::Kind::ListLit, sp);
        if (!eat(Tok::RBracket)) {
          while (true) {
            e->args.push_back(parse_expr());
            if (eat(Tok::RBracket)) break;
            expect(Tok::Comma, "in list literal");
            if (at(Tok::RBracket) || at(Tok::Eof)) {
              eat(Tok::RBracket);
              break;
            }
          }
        }
        return e;
      }
      case Tok::KwMe:
      case Tok::KwMyworld:
      case Tok::KwWorld: {
        Span sp = t.span;
        PathExpr p = finish_path(*try_parse_path_root());
        auto e = make_expr(Expr::Kind::Path, sp);
        e->path = std::move(p);
        return e;
      }
      case Tok::Ident: {
        Span sp = t.span;
        // call / binder-rooted path / plain binder ref
        if (peek(1).kind == Tok::LParen) {
          auto e = make_expr(Expr::Kind::Call, sp);
          e->name = take().text;
          take();  // (
          if (!eat(Tok::RParen)) {
            while (true) {
              e->args.push_back(parse_expr());
              if (e->args.size() == 1 && at(Tok::DotDot)) {
                take();
                e->range_call = true;
                e->args.push_back(parse_expr());
              }
              if (eat(Tok::RParen)) break;
              expect(Tok::Comma, "in call arguments");
              if (at(Tok::RParen) || at(Tok::Eof)) {
                eat(Tok::RParen);
                break;
              }
            }
          }
          return e;
        }
        if (peek(1).kind == Tok::Dot) {
          PathExpr p = finish_path(*try_parse_path_root());
          auto e = make_expr(Expr::Kind::Path, sp);
          e->path = std::move(p);
          return e;
        }
        auto e = make_expr(Expr::Kind::Binder, sp);
        e->name = take().text;
        return e;
      }
      case Tok::Error: {
        error(t.span, t.text);
        take();
        return make_expr(Expr::Kind::Literal, t.span);
      }
      default:
        error(t.span, std::string("expected an expression, found ") + token_name(t.kind));
        take();
        return make_expr(Expr::Kind::Literal, t.span);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic> diags_;
};

}  // namespace

ParseResult parse(std::string_view source) { return Parser(source).parse_program(); }

ExprParseResult parse_expression(std::string_view source) {
  return Parser(source).parse_single_expression();
}

}  // namespace sbp::tdl
