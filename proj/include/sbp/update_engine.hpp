#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sbp/model.hpp"
#include "sbp/update.hpp"

namespace sbp {

// Read-only context handed to macro expansions: who emitted the update and
// the closed snapshot of the current tick.
struct MacroContext {
  Name emitter_world;
  Name emitter_entity;
  const Configuration* snapshot = nullptr;
};

struct ExpansionError : Error {
  using Error::Error;
};
struct UnknownMacroError : ExpansionError {
  using ExpansionError::ExpansionError;
};

using MacroFn =
    std::function<std::vector<GuardedCore>(std::span<const Value>, const MacroContext&)>;

struct MacroDef {
  std::size_t arity = 0;
  MacroFn expand;
};

class MacroRegistry {
public:
  void define(Name name, std::size_t arity, MacroFn fn) {
    macros_[std::move(name)] = MacroDef{arity, std::move(fn)};
  }
  const MacroDef* find(const Name& name) const {
    auto it = macros_.find(name);
    return it == macros_.end() ? nullptr : &it->second;
  }
  bool contains(const Name& name) const { return macros_.count(name) != 0; }
  std::map<Name, std::size_t> arities() const;

private:
  std::map<Name, MacroDef> macros_;
};

// Expands one update into guard-optional cores. Cores pass through (except
// CopyProperties, which lowers to per-key Set* reads of the snapshot); macros
// expand exactly one level. Throws ExpansionError / UnknownMacroError.
std::vector<GuardedCore> expand_update(const Update& update, const Configuration& snapshot,
                                       const MacroRegistry& macros, const MacroContext& ctx);

// Guard evaluation against the closed snapshot.
bool guard_holds(const Guard& guard, const Configuration& snapshot);

struct ConflictRecord {
  BucketKey bucket;
  std::string first;   // canonical text of one conflicting update
  std::string second;  // and the other
};

struct TickAborted : Error {
  TickAborted(Tick tick_, std::vector<ConflictRecord> conflicts_)
      : Error("tick " + std::to_string(tick_) + " aborted: " +
              std::to_string(conflicts_.size()) + " conflicting update(s)"),
        tick(tick_),
        conflicts(std::move(conflicts_)) {}
  Tick tick = 0;
  std::vector<ConflictRecord> conflicts;
};

struct ApplyResult {
  std::vector<CommittedUpdate> committed;  // in commit order
  std::vector<DroppedUpdate> dropped;
};

// Commits one fully-expanded bucket into `config` (the in-progress next
// configuration). Guards evaluate against `snapshot`; conflicts resolve per
// `policy`; destructive updates apply last. Under FailTick a conflicting
// bucket throws TickAborted before touching `config`.
ApplyResult apply_bucket(Configuration& config, const UpdateBucket& bucket,
                         const Configuration& snapshot, ConflictPolicy policy);

// Folds apply_bucket over all buckets in deterministic order: world additions
// first, then entity buckets sorted by (world, entity), then world deletions.
// Returns the configuration for tick+1 (tick incremented).
struct ApplyAllResult {
  Configuration next;
  std::vector<CommittedUpdate> committed;
  std::vector<DroppedUpdate> dropped;
};
ApplyAllResult apply_all(Configuration config, const std::vector<UpdateBucket>& buckets,
                         const Configuration& snapshot, ConflictPolicy policy);

}  // namespace sbp
