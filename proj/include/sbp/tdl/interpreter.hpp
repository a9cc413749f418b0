#pragma once

#include <map>

#include "sbp/model.hpp"
#include "sbp/rng.hpp"
#include "sbp/tdl/ast.hpp"
#include "sbp/update.hpp"

namespace sbp::tdl {

// A type error, division by zero, missing read, or corrupt continuation.
// Surfaces as a SemanticsFailure in the scheduler, cancelling the process.
struct RuntimeFault : Error {
  RuntimeFault(Span sp, const std::string& msg)
      : Error("runtime fault at " + std::to_string(sp.line) + ":" + std::to_string(sp.col) +
              ": " + msg),
        span(sp) {}
  Span span;
};

struct EvalEnv {
  Name self_world;
  Name self_entity;
  std::map<Name, Value> bindings;
  std::map<Name, Name> binder_worlds;  // binder -> world its EntityRef lives in
};

// Runs one segment of a transition: from the continuation (or the start) to
// the next wait/await or to a result. Pure in (ast, resume, env, snapshot,
// rng position); all reads hit `snapshot`.
SegmentOutcome interpret_segment(const Ast& ast, const Continuation* resume, EvalEnv env,
                                 const Configuration& snapshot, Tick now, RngStream& rng);

// Expression evaluation, also used for scenario macro templates (rng == null
// there; randomValue then faults).
Value eval_expression(const Expr& expr, EvalEnv& env, const Configuration& snapshot,
                      RngStream* rng);

// Evaluates a path expression to a concrete address without reading it.
Path eval_path_address(const PathExpr& path, EvalEnv& env, const Configuration& snapshot,
                       RngStream* rng);

// Coerces a value into a name: text, entity refs, and world refs qualify.
Name name_from_value(const Value& v, Span span);

}  // namespace sbp::tdl
