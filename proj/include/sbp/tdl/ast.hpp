#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sbp/types.hpp"
#include "sbp/update.hpp"

namespace sbp::tdl {

struct Span {
  std::uint32_t line = 0;  // 1-based
  std::uint32_t col = 0;   // 1-based
  std::uint32_t len = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
  Span span;

  std::string to_string() const;
};

bool has_error(const std::vector<Diagnostic>& diags);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class BinOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnOp { Neg, Not };

// world[.entity[.property]] reference with computed segments; roots:
// `me`, `myworld`, `world(expr)`, or a binder introduced by let/select.
struct PathExpr {
  enum class Root { Me, MyWorld, World, Binder };

  struct Seg {
    Name literal;     // set when static
    ExprPtr dynamic;  // set when written as (expr)
  };

  Root root = Root::Me;
  Name binder;        // Root::Binder
  ExprPtr root_expr;  // Root::World
  std::vector<Seg> segments;
  Span span;
};

struct Expr {
  enum class Kind { Literal, Binder, Path, Unary, Binary, Call, CoordLit, ListLit };

  Kind kind = Kind::Literal;
  Span span;
  Value literal;              // Literal
  Name name;                  // Binder name / Call callee
  UnOp un_op = UnOp::Neg;     // Unary
  BinOp bin_op = BinOp::Add;  // Binary
  std::vector<ExprPtr> args;  // Unary(1), Binary(2), Call(n), CoordLit(2), ListLit(n)
  std::optional<PathExpr> path;  // Path
  bool range_call = false;       // randomValue(lo..hi) — args are [lo, hi]
};

enum class CoreOp {
  SetData,
  DeleteData,
  SetTransition,
  DeleteTransition,
  StartProcess,
  CancelProcess,
  RebindProcess,
  CreateEntity,
  DeleteEntity,
  AddWorld,
  DeleteWorld,
  CopyProperties,
};

struct GuardExpr {
  Guard::Kind kind = Guard::Kind::Exists;
  Guard::Cmp cmp = Guard::Cmp::Lt;
  PathExpr path;
  ExprPtr value;  // Equals / Compare
  Span span;
};

// One element of a return/emit update list: a macro invocation, a core update
// with expression operands, or a guarded core.
struct UpdateExprAst {
  enum class Kind { Macro, Core };

  Kind kind = Kind::Macro;
  Span span;

  Name macro_name;
  std::vector<ExprPtr> macro_args;

  CoreOp op = CoreOp::SetData;
  std::optional<PathExpr> path;   // primary operand
  std::optional<PathExpr> path2;  // copy_properties destination
  ExprPtr value;                  // set_data value
  ExprPtr trans_name;             // start_process / rebind_process transition
  ExprPtr sem_name;               // set_transition semantics id
  ExprPtr source_text;            // set_transition source
  ExprPtr world_name;             // add_world / delete_world
  ExprPtr from_world;             // add_world ... from
  std::vector<ExprPtr> key_args;  // copy_properties key list
  bool wildcard = false;

  std::optional<GuardExpr> guard;
};

struct Stmt;

struct Block {
  std::vector<Stmt> stmts;
};

struct SwitchCase {
  Value match;
  Block body;
  Span span;
};

struct Stmt {
  enum class Kind { Wait, Let, If, Switch, Select, Return, Emit, Await };

  Kind kind = Kind::Wait;
  Span span;
  ExprPtr expr;  // wait duration / let value / if condition / switch subject / select where
  Name name;     // let target / select binder
  Block then_block;  // if-then / select body
  Block else_block;  // if-else / select else
  std::vector<SwitchCase> cases;
  ExprPtr world_expr;  // select ... in <expr>
  ExprPtr minimizing;  // select ... minimizing <expr>
  std::optional<PathExpr> await_path;
  std::vector<UpdateExprAst> updates;  // return / emit
  bool stop = false;                   // return stop {...}
};

struct Ast {
  Block program;
};

struct ParseResult {
  std::optional<Ast> ast;  // present iff no error diagnostics
  std::vector<Diagnostic> diagnostics;
};

}  // namespace sbp::tdl
