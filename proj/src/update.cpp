#include "sbp/update.hpp"

#include "text_scan.hpp"

namespace sbp {

const char* to_string(ConflictPolicy p) {
  switch (p) {
    case ConflictPolicy::LastWriterWins: return "last_writer_wins";
    case ConflictPolicy::FirstWins: return "first_wins";
    case ConflictPolicy::DropConflicting: return "drop_conflicting";
    case ConflictPolicy::FailTick: return "fail_tick";
  }
  return "?";
}

std::optional<ConflictPolicy> parse_conflict_policy(std::string_view text) {
  if (text == "last_writer_wins") return ConflictPolicy::LastWriterWins;
  if (text == "first_wins") return ConflictPolicy::FirstWins;
  if (text == "drop_conflicting") return ConflictPolicy::DropConflicting;
  if (text == "fail_tick") return ConflictPolicy::FailTick;
  return std::nullopt;
}

const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::Conflict: return "conflict";
    case DropReason::GuardFailed: return "guard_failed";
    case DropReason::TargetMissing: return "target_missing";
    case DropReason::ExpansionFailed: return "expansion_failed";
  }
  return "?";
}

SegmentOutcome SegmentOutcome::suspend(Tick resume, Continuation c, std::vector<Update> emitted) {
  SegmentOutcome o;
  o.kind = Kind::Suspend;
  o.resume_tick = resume;
  o.continuation = std::move(c);
  o.emitted = std::move(emitted);
  return o;
}

SegmentOutcome SegmentOutcome::await_process(Path target, Continuation c,
                                             std::vector<Update> emitted) {
  SegmentOutcome o;
  o.kind = Kind::Await;
  o.await_target = std::move(target);
  o.continuation = std::move(c);
  o.emitted = std::move(emitted);
  return o;
}

SegmentOutcome SegmentOutcome::finished(ResultStructure r, std::vector<Update> emitted) {
  SegmentOutcome o;
  o.kind = Kind::Finished;
  o.result = std::move(r);
  o.emitted = std::move(emitted);
  return o;
}

std::string Guard::to_text() const {
  switch (kind) {
    case Kind::Exists: return "exists(" + path.to_text() + ")";
    case Kind::NotExists: return "not_exists(" + path.to_text() + ")";
    case Kind::Equals: return "eq(" + path.to_text() + ", " + value.to_text() + ")";
    case Kind::Compare: {
      const char* op = "?";
      switch (cmp) {
        case Cmp::Lt: op = "<"; break;
        case Cmp::Le: op = "<="; break;
        case Cmp::Gt: op = ">"; break;
        case Cmp::Ge: op = ">="; break;
        case Cmp::Ne: op = "!="; break;
      }
      return std::string("cmp(") + path.to_text() + ", " + op + ", " + value.to_text() + ")";
    }
  }
  return "?";
}

namespace {

std::string transition_text(const TransitionDescription& t) {
  std::string out = "transition(" + t.semantics + ", ";
  detail::append_quoted(out, t.source);
  out += ")";
  return out;
}

struct CoreWriter {
  std::string operator()(const SetData& u) const {
    return "set_data " + u.world + "." + u.entity + "." + u.key + "=" + u.value.to_text();
  }
  std::string operator()(const DeleteData& u) const {
    return "delete_data " + u.world + "." + u.entity + "." + u.key;
  }
  std::string operator()(const SetTransition& u) const {
    return "set_transition " + u.world + "." + u.entity + "." + u.key + "=" +
           transition_text(u.transition);
  }
  std::string operator()(const DeleteTransition& u) const {
    return "delete_transition " + u.world + "." + u.entity + "." + u.key;
  }
  std::string operator()(const StartProcess& u) const {
    return "start_process " + u.world + "." + u.entity + "." + u.process + ":" + u.transition;
  }
  std::string operator()(const CancelProcess& u) const {
    return "cancel_process " + u.world + "." + u.entity + "." + u.process;
  }
  std::string operator()(const RebindProcess& u) const {
    return "rebind_process " + u.world + "." + u.entity + "." + u.process + ":" +
           u.new_transition;
  }
  std::string operator()(const CreateEntity& u) const {
    return "create_entity " + u.world + "." + u.entity;
  }
  std::string operator()(const DeleteEntity& u) const {
    return "delete_entity " + u.world + "." + u.entity;
  }
  std::string operator()(const AddWorld& u) const {
    std::string out = "add_world " + u.world;
    if (u.copy_from) out += " from " + *u.copy_from;
    return out;
  }
  std::string operator()(const DeleteWorld& u) const { return "delete_world " + u.world; }
  std::string operator()(const CopyProperties& u) const {
    std::string out = "copy_properties " + u.src_world + "." + u.src_entity + " -> " +
                      u.dst_world + "." + u.dst_entity + " ";
    if (u.wildcard) {
      out += "*";
    } else {
      out += "[";
      for (std::size_t i = 0; i < u.keys.size(); ++i) {
        if (i) out += ", ";
        out += u.keys[i];
      }
      out += "]";
    }
    return out;
  }
};

}  // namespace

std::string to_text(const CoreUpdate& u) { return std::visit(CoreWriter{}, u); }

std::string to_text(const GuardedCore& u) {
  if (!u.guard) return to_text(u.core);
  return "when " + u.guard->to_text() + ": " + to_text(u.core);
}

std::string to_text(const Update& u) {
  if (const auto* core = std::get_if<CoreUpdate>(&u.node)) return to_text(*core);
  if (const auto* g = std::get_if<GuardedUpdate>(&u.node)) {
    return "when " + g->guard.to_text() + ": " + to_text(g->inner);
  }
  const auto& m = std::get<MacroCall>(u.node);
  if (m.args.empty()) return m.name;
  std::string out = m.name + "(";
  for (std::size_t i = 0; i < m.args.size(); ++i) {
    if (i) out += ", ";
    out += m.args[i].to_text();
  }
  out += ")";
  return out;
}

namespace {

using detail::TextScanner;

Path scan_path(TextScanner& sc, int want_segments) {
  Path p;
  p.world = sc.scan_name();
  int segs = 1;
  while (segs < 3 && sc.peek() == '.') {
    sc.advance(1);
    Name n = sc.scan_name();
    if (segs == 1) p.entity = std::move(n);
    else p.property = std::move(n);
    ++segs;
  }
  if (want_segments > 0 && segs != want_segments) {
    sc.fail("expected a " + std::to_string(want_segments) + "-segment path");
  }
  return p;
}

Guard scan_guard(TextScanner& sc) {
  Guard g;
  if (sc.try_consume("exists(")) {
    g.kind = Guard::Kind::Exists;
    g.path = scan_path(sc, 0);
    sc.expect(')');
  } else if (sc.try_consume("not_exists(")) {
    g.kind = Guard::Kind::NotExists;
    g.path = scan_path(sc, 0);
    sc.expect(')');
  } else if (sc.try_consume("eq(")) {
    g.kind = Guard::Kind::Equals;
    g.path = scan_path(sc, 0);
    sc.expect(',');
    g.value = detail::parse_value_at(sc);
    sc.expect(')');
  } else if (sc.try_consume("cmp(")) {
    g.kind = Guard::Kind::Compare;
    g.path = scan_path(sc, 0);
    sc.expect(',');
    sc.skip_ws();
    if (sc.try_consume("<=")) g.cmp = Guard::Cmp::Le;
    else if (sc.try_consume(">=")) g.cmp = Guard::Cmp::Ge;
    else if (sc.try_consume("!=")) g.cmp = Guard::Cmp::Ne;
    else if (sc.try_consume('<')) g.cmp = Guard::Cmp::Lt;
    else if (sc.try_consume('>')) g.cmp = Guard::Cmp::Gt;
    else sc.fail("expected a comparison operator");
    sc.expect(',');
    g.value = detail::parse_value_at(sc);
    sc.expect(')');
  } else {
    sc.fail("expected a guard");
  }
  return g;
}

std::optional<CoreUpdate> scan_core(TextScanner& sc) {
  if (sc.try_consume("set_data ")) {
    Path p = scan_path(sc, 3);
    sc.expect('=');
    Value v = detail::parse_value_at(sc);
    return SetData{p.world, *p.entity, *p.property, std::move(v)};
  }
  if (sc.try_consume("delete_data ")) {
    Path p = scan_path(sc, 3);
    return DeleteData{p.world, *p.entity, *p.property};
  }
  if (sc.try_consume("set_transition ")) {
    Path p = scan_path(sc, 3);
    sc.expect('=');
    sc.expect("transition(");
    Name sem = sc.scan_name();
    sc.expect(',');
    std::string source = sc.scan_quoted();
    sc.expect(')');
    return SetTransition{p.world, *p.entity, *p.property,
                         TransitionDescription{*p.property, std::move(sem), std::move(source)}};
  }
  if (sc.try_consume("delete_transition ")) {
    Path p = scan_path(sc, 3);
    return DeleteTransition{p.world, *p.entity, *p.property};
  }
  if (sc.try_consume("start_process ")) {
    Path p = scan_path(sc, 3);
    sc.expect(':');
    Name t = sc.scan_name();
    return StartProcess{p.world, *p.entity, *p.property, std::move(t)};
  }
  if (sc.try_consume("cancel_process ")) {
    Path p = scan_path(sc, 3);
    return CancelProcess{p.world, *p.entity, *p.property};
  }
  if (sc.try_consume("rebind_process ")) {
    Path p = scan_path(sc, 3);
    sc.expect(':');
    Name t = sc.scan_name();
    return RebindProcess{p.world, *p.entity, *p.property, std::move(t)};
  }
  if (sc.try_consume("create_entity ")) {
    Path p = scan_path(sc, 2);
    return CreateEntity{p.world, *p.entity};
  }
  if (sc.try_consume("delete_entity ")) {
    Path p = scan_path(sc, 2);
    return DeleteEntity{p.world, *p.entity};
  }
  if (sc.try_consume("add_world ")) {
    Name w = sc.scan_name();
    AddWorld u{std::move(w), std::nullopt};
    if (sc.try_consume(" from ") || sc.try_consume("from ")) u.copy_from = sc.scan_name();
    return u;
  }
  if (sc.try_consume("delete_world ")) {
    return DeleteWorld{sc.scan_name()};
  }
  if (sc.try_consume("copy_properties ")) {
    Path src = scan_path(sc, 2);
    sc.expect("->");
    Path dst = scan_path(sc, 2);
    CopyProperties u{src.world, *src.entity, dst.world, *dst.entity, {}, false};
    sc.skip_ws();
    if (sc.try_consume('*')) {
      u.wildcard = true;
    } else {
      sc.expect('[');
      if (!sc.try_consume(']')) {
        while (true) {
          u.keys.push_back(sc.scan_name());
          if (sc.try_consume(']')) break;
          sc.expect(',');
        }
      }
    }
    return u;
  }
  return std::nullopt;
}

}  // namespace

Update parse_update_text(std::string_view text) {
  TextScanner sc(text);
  sc.skip_ws();
  Update out;
  if (sc.try_consume("when ")) {
    Guard g = scan_guard(sc);
    sc.expect(':');
    auto core = scan_core(sc);
    if (!core) sc.fail("expected a core update after guard");
    out = guarded_update(std::move(g), std::move(*core));
  } else if (auto core = scan_core(sc)) {
    out = core_update(std::move(*core));
  } else {
    // Macro invocation: name or name(args).
    Name m = sc.scan_name();
    std::vector<Value> args;
    if (sc.try_consume('(')) {
      if (!sc.try_consume(')')) {
        while (true) {
          args.push_back(detail::parse_value_at(sc));
          if (sc.try_consume(')')) break;
          sc.expect(',');
        }
      }
    }
    out = macro_update(std::move(m), std::move(args));
  }
  sc.skip_ws();
  if (!sc.done()) sc.fail("trailing characters after update");
  return out;
}

BucketKey bucket_key_of(const CoreUpdate& u) {
  return std::visit(
      [](const auto& v) -> BucketKey {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AddWorld> || std::is_same_v<T, DeleteWorld>) {
          return BucketKey{v.world, std::nullopt};
        } else if constexpr (std::is_same_v<T, CopyProperties>) {
          return BucketKey{v.dst_world, v.dst_entity};
        } else {
          return BucketKey{v.world, v.entity};
        }
      },
      u);
}

}  // namespace sbp
