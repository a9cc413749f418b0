#include "sbp/update_engine.hpp"

#include <algorithm>
#include <cassert>

namespace sbp {

std::map<Name, std::size_t> MacroRegistry::arities() const {
  std::map<Name, std::size_t> out;
  for (const auto& [n, def] : macros_) out.emplace(n, def.arity);
  return out;
}

namespace {

void lower_copy_properties(const CopyProperties& cp, const std::optional<Guard>& guard,
                           const Configuration& snapshot, std::vector<GuardedCore>& out) {
  const Entity* src = snapshot.find_entity(cp.src_world, cp.src_entity);
  if (!src) {
    throw ExpansionError("copy_properties: source " + cp.src_world + "." + cp.src_entity +
                         " does not exist in the snapshot");
  }
  auto emit_key = [&](const Name& key) {
    if (auto it = src->data.find(key); it != src->data.end()) {
      out.push_back({guard, SetData{cp.dst_world, cp.dst_entity, key, it->second}});
      return;
    }
    if (auto it = src->transitions.find(key); it != src->transitions.end()) {
      TransitionDescription td = it->second;
      td.name = key;
      out.push_back({guard, SetTransition{cp.dst_world, cp.dst_entity, key, std::move(td)}});
    }
    // Missing keys are skipped: copy what exists.
  };
  if (cp.wildcard) {
    for (const auto& [k, v] : src->data) emit_key(k);
    for (const auto& [k, t] : src->transitions) emit_key(k);
  } else {
    for (const Name& k : cp.keys) emit_key(k);
  }
}

void push_core(const std::optional<Guard>& guard, const CoreUpdate& core,
               const Configuration& snapshot, std::vector<GuardedCore>& out) {
  if (const auto* cp = std::get_if<CopyProperties>(&core)) {
    lower_copy_properties(*cp, guard, snapshot, out);
  } else {
    out.push_back({guard, core});
  }
}

}  // namespace

std::vector<GuardedCore> expand_update(const Update& update, const Configuration& snapshot,
                                       const MacroRegistry& macros, const MacroContext& ctx) {
  std::vector<GuardedCore> out;
  if (const auto* core = std::get_if<CoreUpdate>(&update.node)) {
    push_core(std::nullopt, *core, snapshot, out);
    return out;
  }
  if (const auto* g = std::get_if<GuardedUpdate>(&update.node)) {
    push_core(g->guard, g->inner, snapshot, out);
    return out;
  }
  const auto& call = std::get<MacroCall>(update.node);
  const MacroDef* def = macros.find(call.name);
  if (!def) throw UnknownMacroError("unknown macro \"" + call.name + "\"");
  if (call.args.size() != def->arity) {
    throw ExpansionError("macro \"" + call.name + "\" expects " + std::to_string(def->arity) +
                         " argument(s), got " + std::to_string(call.args.size()));
  }
  std::vector<GuardedCore> produced = def->expand(call.args, ctx);
  for (const GuardedCore& gc : produced) push_core(gc.guard, gc.core, snapshot, out);
  return out;
}

namespace {

// nullopt when the two values are incomparable.
std::optional<int> compare_ordered(const Value& a, const Value& b) {
  if (a.is_numeric() && b.is_numeric()) {
    if (a.is_int() && b.is_int()) {
      auto x = a.as_int(), y = b.as_int();
      return x < y ? -1 : x > y ? 1 : 0;
    }
    double x = a.numeric(), y = b.numeric();
    return x < y ? -1 : x > y ? 1 : 0;
  }
  if (a.is_text() && b.is_text()) {
    int c = a.as_text().compare(b.as_text());
    return c < 0 ? -1 : c > 0 ? 1 : 0;
  }
  return std::nullopt;
}

}  // namespace

bool guard_holds(const Guard& guard, const Configuration& snapshot) {
  ResolveResult res = resolve_path(snapshot, guard.path);
  const Located* loc = std::get_if<Located>(&res);
  switch (guard.kind) {
    case Guard::Kind::Exists:
      return loc != nullptr;
    case Guard::Kind::NotExists:
      return loc == nullptr;
    case Guard::Kind::Equals:
      return loc && loc->kind == Located::Kind::Data && *loc->data == guard.value;
    case Guard::Kind::Compare: {
      if (guard.cmp == Guard::Cmp::Ne) {
        // "is not this value": holds when the entry resolves to data that differs.
        return loc && loc->kind == Located::Kind::Data && !(*loc->data == guard.value);
      }
      if (!loc || loc->kind != Located::Kind::Data) return false;
      auto c = compare_ordered(*loc->data, guard.value);
      if (!c) return false;
      switch (guard.cmp) {
        case Guard::Cmp::Lt: return *c < 0;
        case Guard::Cmp::Le: return *c <= 0;
        case Guard::Cmp::Gt: return *c > 0;
        case Guard::Cmp::Ge: return *c >= 0;
        case Guard::Cmp::Ne: return false;  // handled above
      }
      return false;
    }
  }
  return false;
}

namespace {

// Application phases inside a bucket: creations first, deletions last.
int phase_of(const CoreUpdate& core) {
  if (std::holds_alternative<CreateEntity>(core) || std::holds_alternative<AddWorld>(core)) {
    return 0;
  }
  if (std::holds_alternative<DeleteEntity>(core) || std::holds_alternative<DeleteWorld>(core)) {
    return 2;
  }
  return 1;
}

// The property name an update claims inside its entity, if any. Data,
// transition, and process names share one namespace.
const Name* claimed_property(const CoreUpdate& core) {
  return std::visit(
      [](const auto& u) -> const Name* {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, SetData> || std::is_same_v<T, DeleteData> ||
                      std::is_same_v<T, SetTransition> || std::is_same_v<T, DeleteTransition>) {
          return &u.key;
        } else if constexpr (std::is_same_v<T, StartProcess> || std::is_same_v<T, CancelProcess> ||
                             std::is_same_v<T, RebindProcess>) {
          return &u.process;
        } else {
          return nullptr;
        }
      },
      core);
}

bool entries_conflict(const BucketEntry& a, const BucketEntry& b) {
  bool a_entity_op = std::holds_alternative<DeleteEntity>(a.core);
  bool b_entity_op = std::holds_alternative<DeleteEntity>(b.core);
  // DeleteEntity conflicts with every other update on the same entity.
  if (a_entity_op || b_entity_op) return true;
  if (std::holds_alternative<CreateEntity>(a.core) && std::holds_alternative<CreateEntity>(b.core)) {
    return true;
  }
  // World bucket: any two world-level updates on the same name conflict.
  bool a_world_op =
      std::holds_alternative<AddWorld>(a.core) || std::holds_alternative<DeleteWorld>(a.core);
  bool b_world_op =
      std::holds_alternative<AddWorld>(b.core) || std::holds_alternative<DeleteWorld>(b.core);
  if (a_world_op && b_world_op) return true;
  const Name* ka = claimed_property(a.core);
  const Name* kb = claimed_property(b.core);
  return ka && kb && *ka == *kb;
}

struct ResolvedBucket {
  // Indices into the rank-sorted entry list, in application order.
  std::vector<std::size_t> accepted;
  std::vector<BucketEntry> sorted;
  std::vector<DroppedUpdate> dropped;
  std::vector<ConflictRecord> conflicts;
};

DroppedUpdate make_drop(const BucketEntry& e, DropReason reason, std::string detail) {
  GuardedCore gc{e.guard, e.core};
  return DroppedUpdate{e.emitter, e.seq, to_text(gc), reason, std::move(detail)};
}

ResolvedBucket resolve_bucket(const UpdateBucket& bucket, const Configuration& snapshot,
                              ConflictPolicy policy) {
  ResolvedBucket out;
  out.sorted = bucket.entries;
  std::stable_sort(out.sorted.begin(), out.sorted.end(),
                   [](const BucketEntry& a, const BucketEntry& b) {
                     auto ka = std::tuple(phase_of(a.core), a.emitter, a.seq);
                     auto kb = std::tuple(phase_of(b.core), b.emitter, b.seq);
                     return ka < kb;
                   });

  // Guards decide against the closed snapshot, before conflict resolution.
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < out.sorted.size(); ++i) {
    const BucketEntry& e = out.sorted[i];
    if (e.guard && !guard_holds(*e.guard, snapshot)) {
      out.dropped.push_back(make_drop(e, DropReason::GuardFailed, e.guard->to_text()));
    } else {
      live.push_back(i);
    }
  }

  auto record_conflict = [&](std::size_t i, std::size_t j) {
    out.conflicts.push_back(
        {bucket.key, to_text(out.sorted[i].core), to_text(out.sorted[j].core)});
  };

  switch (policy) {
    case ConflictPolicy::FailTick: {
      for (std::size_t x = 0; x < live.size(); ++x) {
        for (std::size_t y = x + 1; y < live.size(); ++y) {
          if (entries_conflict(out.sorted[live[x]], out.sorted[live[y]])) {
            record_conflict(live[x], live[y]);
          }
        }
      }
      out.accepted = live;
      return out;  // caller aborts when conflicts is non-empty
    }
    case ConflictPolicy::DropConflicting: {
      std::vector<bool> bad(live.size(), false);
      for (std::size_t x = 0; x < live.size(); ++x) {
        for (std::size_t y = x + 1; y < live.size(); ++y) {
          if (entries_conflict(out.sorted[live[x]], out.sorted[live[y]])) {
            bad[x] = bad[y] = true;
          }
        }
      }
      for (std::size_t x = 0; x < live.size(); ++x) {
        if (bad[x]) {
          out.dropped.push_back(
              make_drop(out.sorted[live[x]], DropReason::Conflict, "dropped with all parties"));
        } else {
          out.accepted.push_back(live[x]);
        }
      }
      return out;
    }
    case ConflictPolicy::FirstWins:
    case ConflictPolicy::LastWriterWins: {
      // Scan in application order (FirstWins) or reverse (LastWriterWins);
      // an entry loses when it conflicts with an already-accepted one.
      std::vector<std::size_t> scan = live;
      if (policy == ConflictPolicy::LastWriterWins) {
        std::reverse(scan.begin(), scan.end());
      }
      std::vector<std::size_t> kept;
      for (std::size_t idx : scan) {
        bool beaten = false;
        for (std::size_t w : kept) {
          if (entries_conflict(out.sorted[idx], out.sorted[w])) {
            beaten = true;
            break;
          }
        }
        if (beaten) {
          out.dropped.push_back(make_drop(out.sorted[idx], DropReason::Conflict,
                                          policy == ConflictPolicy::LastWriterWins
                                              ? "a later update wins"
                                              : "an earlier update wins"));
        } else {
          kept.push_back(idx);
        }
      }
      std::sort(kept.begin(), kept.end());
      out.accepted = kept;
      return out;
    }
  }
  return out;
}

class BucketApplier {
public:
  BucketApplier(Configuration& config, const Configuration& snapshot)
      : config_(config), snapshot_(snapshot) {}

  // Applies one accepted entry; reports a drop instead when the target is
  // missing or the property namespace would be violated.
  void apply(const BucketEntry& e, ApplyResult& out) {
    std::optional<DroppedUpdate> drop = std::visit(
        [&](const auto& u) { return apply_one(u, e); }, e.core);
    if (drop) {
      out.dropped.push_back(std::move(*drop));
    } else {
      out.committed.push_back({e.emitter, e.seq, e.core});
    }
  }

private:
  using MaybeDrop = std::optional<DroppedUpdate>;

  MaybeDrop missing(const BucketEntry& e, std::string detail) {
    return make_drop(e, DropReason::TargetMissing, std::move(detail));
  }
  MaybeDrop clash(const BucketEntry& e, std::string detail) {
    return make_drop(e, DropReason::Conflict, std::move(detail));
  }

  Entity* entity_of(const Name& w, const Name& en) { return config_.find_entity(w, en); }

  MaybeDrop apply_one(const SetData& u, const BucketEntry& e) {
    Entity* ent = entity_of(u.world, u.entity);
    if (!ent) return missing(e, "entity " + u.world + "." + u.entity);
    if (ent->transitions.count(u.key) || ent->processes.count(u.key)) {
      return clash(e, "property \"" + u.key + "\" exists with another kind");
    }
    ent->data[u.key] = u.value;
    return std::nullopt;
  }

  MaybeDrop apply_one(const DeleteData& u, const BucketEntry& e) {
    Entity* ent = entity_of(u.world, u.entity);
    if (!ent || !ent->data.count(u.key)) {
      return missing(e, "data entry " + u.world + "." + u.entity + "." + u.key);
    }
    ent->data.erase(u.key);
    return std::nullopt;
  }

  MaybeDrop apply_one(const SetTransition& u, const BucketEntry& e) {
    Entity* ent = entity_of(u.world, u.entity);
    if (!ent) return missing(e, "entity " + u.world + "." + u.entity);
    if (ent->data.count(u.key) || ent->processes.count(u.key)) {
      return clash(e, "property \"" + u.key + "\" exists with another kind");
    }
    TransitionDescription td = u.transition;
    td.name = u.key;
    ent->transitions[u.key] = std::move(td);
    return std::nullopt;
  }

  MaybeDrop apply_one(const DeleteTransition& u, const BucketEntry& e) {
    Entity* ent = entity_of(u.world, u.entity);
    if (!ent || !ent->transitions.count(u.key)) {
      return missing(e, "transition " + u.world + "." + u.entity + "." + u.key);
    }
    ent->transitions.erase(u.key);
    return std::nullopt;
  }

  MaybeDrop apply_one(const StartProcess& u, const BucketEntry& e) {
    Entity* ent = entity_of(u.world, u.entity);
    if (!ent) return missing(e, "entity " + u.world + "." + u.entity);
    if (ent->processes.count(u.process)) {
      return clash(e, "process \"" + u.process + "\" is already running");
    }
    if (ent->data.count(u.process) || ent->transitions.count(u.process)) {
      return clash(e, "property \"" + u.process + "\" exists with another kind");
    }
    Process p;
    p.name = u.process;
    p.transition = u.transition;
    p.begin_tick = snapshot_.tick + 1;
    p.iteration = 0;
    p.state = ProcReady{};
    ent->processes.emplace(u.process, std::move(p));
    return std::nullopt;
  }

  MaybeDrop apply_one(const CancelProcess& u, const BucketEntry& e) {
    Entity* ent = entity_of(u.world, u.entity);
    if (!ent || !ent->processes.count(u.process)) {
      return missing(e, "process " + u.world + "." + u.entity + "." + u.process);
    }
    ent->processes.erase(u.process);
    return std::nullopt;
  }

  MaybeDrop apply_one(const RebindProcess& u, const BucketEntry& e) {
    Entity* ent = entity_of(u.world, u.entity);
    if (!ent) return missing(e, "entity " + u.world + "." + u.entity);
    auto it = ent->processes.find(u.process);
    if (it == ent->processes.end()) {
      return missing(e, "process " + u.world + "." + u.entity + "." + u.process);
    }
    Process& p = it->second;
    p.transition = u.new_transition;
    // A mid-iteration rebind abandons the in-flight continuation and starts a
    // fresh iteration of the new transition; a finished or ready process only
    // changes what the next iteration will resolve.
    if (p.suspended() || p.awaiting()) {
      p.state = ProcReady{};
      p.iteration += 1;
      p.begin_tick = snapshot_.tick + 1;
    }
    return std::nullopt;
  }

  MaybeDrop apply_one(const CreateEntity& u, const BucketEntry& e) {
    World* w = config_.find_world(u.world);
    if (!w) return missing(e, "world " + u.world);
    if (w->entities.count(u.entity)) {
      return clash(e, "entity \"" + u.entity + "\" already exists");
    }
    Entity ent;
    ent.name = u.entity;
    w->entities.emplace(u.entity, std::move(ent));
    return std::nullopt;
  }

  MaybeDrop apply_one(const DeleteEntity& u, const BucketEntry& e) {
    World* w = config_.find_world(u.world);
    if (!w || !w->entities.count(u.entity)) {
      return missing(e, "entity " + u.world + "." + u.entity);
    }
    w->entities.erase(u.entity);
    return std::nullopt;
  }

  MaybeDrop apply_one(const AddWorld& u, const BucketEntry& e) {
    if (config_.find_world(u.world)) {
      return clash(e, "world \"" + u.world + "\" already exists");
    }
    if (u.copy_from) {
      const World* src = config_.find_world(*u.copy_from);
      if (!src) return missing(e, "world " + *u.copy_from);
      config_.worlds.emplace(u.world, clone_world_body(*src, u.world, snapshot_.tick + 1));
    } else {
      World w;
      w.name = u.world;
      config_.worlds.emplace(u.world, std::move(w));
    }
    return std::nullopt;
  }

  MaybeDrop apply_one(const DeleteWorld& u, const BucketEntry& e) {
    if (!config_.worlds.count(u.world)) return missing(e, "world " + u.world);
    config_.worlds.erase(u.world);
    return std::nullopt;
  }

  MaybeDrop apply_one(const CopyProperties&, const BucketEntry&) {
    throw Error("copy_properties must be lowered before application");
  }

  Configuration& config_;
  const Configuration& snapshot_;
};

}  // namespace

ApplyResult apply_bucket(Configuration& config, const UpdateBucket& bucket,
                         const Configuration& snapshot, ConflictPolicy policy) {
  ResolvedBucket rb = resolve_bucket(bucket, snapshot, policy);
  if (policy == ConflictPolicy::FailTick && !rb.conflicts.empty()) {
    throw TickAborted(snapshot.tick, std::move(rb.conflicts));
  }
  ApplyResult out;
  out.dropped = std::move(rb.dropped);
  BucketApplier applier(config, snapshot);
  for (std::size_t idx : rb.accepted) applier.apply(rb.sorted[idx], out);
  return out;
}

ApplyAllResult apply_all(Configuration config, const std::vector<UpdateBucket>& buckets,
                         const Configuration& snapshot, ConflictPolicy policy) {
  std::vector<const UpdateBucket*> world_buckets;
  std::vector<const UpdateBucket*> entity_buckets;
  for (const UpdateBucket& b : buckets) {
    (b.key.entity ? entity_buckets : world_buckets).push_back(&b);
  }
  auto by_key = [](const UpdateBucket* a, const UpdateBucket* b) { return a->key < b->key; };
  std::sort(world_buckets.begin(), world_buckets.end(), by_key);
  std::sort(entity_buckets.begin(), entity_buckets.end(), by_key);

  ApplyAllResult out;
  out.next = std::move(config);

  // Under FailTick, collect conflicts across every bucket before any commit.
  if (policy == ConflictPolicy::FailTick) {
    std::vector<ConflictRecord> all;
    for (const UpdateBucket* b : world_buckets) {
      ResolvedBucket rb = resolve_bucket(*b, snapshot, policy);
      all.insert(all.end(), rb.conflicts.begin(), rb.conflicts.end());
    }
    for (const UpdateBucket* b : entity_buckets) {
      ResolvedBucket rb = resolve_bucket(*b, snapshot, policy);
      all.insert(all.end(), rb.conflicts.begin(), rb.conflicts.end());
    }
    if (!all.empty()) throw TickAborted(snapshot.tick, std::move(all));
  }

  auto merge = [&out](ApplyResult r) {
    out.committed.insert(out.committed.end(), r.committed.begin(), r.committed.end());
    out.dropped.insert(out.dropped.end(), r.dropped.begin(), r.dropped.end());
  };

  // Phase A: world additions; deletions of the same buckets wait for phase C.
  struct PendingDeletes {
    const UpdateBucket* bucket;
    ResolvedBucket resolved;
  };
  std::vector<PendingDeletes> pending;
  for (const UpdateBucket* b : world_buckets) {
    ResolvedBucket rb = resolve_bucket(*b, snapshot, policy);
    ApplyResult r;
    r.dropped = std::move(rb.dropped);
    rb.dropped.clear();
    BucketApplier applier(out.next, snapshot);
    std::vector<std::size_t> deletes;
    for (std::size_t idx : rb.accepted) {
      if (std::holds_alternative<DeleteWorld>(rb.sorted[idx].core)) {
        deletes.push_back(idx);
      } else {
        applier.apply(rb.sorted[idx], r);
      }
    }
    merge(std::move(r));
    if (!deletes.empty()) {
      rb.accepted = std::move(deletes);
      pending.push_back({b, std::move(rb)});
    }
  }

  // Phase B: entity buckets in (world, entity) order.
  for (const UpdateBucket* b : entity_buckets) {
    merge(apply_bucket(out.next, *b, snapshot, policy));
  }

  // Phase C: world deletions last.
  for (PendingDeletes& pd : pending) {
    ApplyResult r;
    BucketApplier applier(out.next, snapshot);
    for (std::size_t idx : pd.resolved.accepted) applier.apply(pd.resolved.sorted[idx], r);
    merge(std::move(r));
  }

  out.next.tick = snapshot.tick + 1;
  return out;
}

}  // namespace sbp
