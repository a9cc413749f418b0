#pragma once

#include <compare>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sbp/types.hpp"

namespace sbp {

// How conflicting updates inside one per-entity bucket are resolved.
enum class ConflictPolicy { LastWriterWins, FirstWins, DropConflicting, FailTick };

const char* to_string(ConflictPolicy p);
std::optional<ConflictPolicy> parse_conflict_policy(std::string_view text);

// Predicate over the tick-open snapshot guarding a core update.
struct Guard {
  enum class Kind { Exists, NotExists, Equals, Compare };
  enum class Cmp { Lt, Le, Gt, Ge, Ne };

  Kind kind = Kind::Exists;
  Path path;
  Value value;        // Equals / Compare
  Cmp cmp = Cmp::Lt;  // Compare

  std::string to_text() const;
  friend bool operator==(const Guard&, const Guard&) = default;
};

struct SetData {
  Name world, entity, key;
  Value value;
  friend bool operator==(const SetData&, const SetData&) = default;
};
struct DeleteData {
  Name world, entity, key;
  friend bool operator==(const DeleteData&, const DeleteData&) = default;
};
struct SetTransition {
  Name world, entity, key;
  TransitionDescription transition;
  friend bool operator==(const SetTransition&, const SetTransition&) = default;
};
struct DeleteTransition {
  Name world, entity, key;
  friend bool operator==(const DeleteTransition&, const DeleteTransition&) = default;
};
struct StartProcess {
  Name world, entity, process, transition;
  friend bool operator==(const StartProcess&, const StartProcess&) = default;
};
struct CancelProcess {
  Name world, entity, process;
  friend bool operator==(const CancelProcess&, const CancelProcess&) = default;
};
struct RebindProcess {
  Name world, entity, process, new_transition;
  friend bool operator==(const RebindProcess&, const RebindProcess&) = default;
};
struct CreateEntity {
  Name world, entity;
  friend bool operator==(const CreateEntity&, const CreateEntity&) = default;
};
struct DeleteEntity {
  Name world, entity;
  friend bool operator==(const DeleteEntity&, const DeleteEntity&) = default;
};
struct AddWorld {
  Name world;
  std::optional<Name> copy_from;
  friend bool operator==(const AddWorld&, const AddWorld&) = default;
};
struct DeleteWorld {
  Name world;
  friend bool operator==(const DeleteWorld&, const DeleteWorld&) = default;
};
// Copies data entries and transition descriptions (never processes) between
// entities. keys empty means wildcard. Lowered to Set* cores at expansion time.
struct CopyProperties {
  Name src_world, src_entity, dst_world, dst_entity;
  std::vector<Name> keys;
  bool wildcard = false;
  friend bool operator==(const CopyProperties&, const CopyProperties&) = default;
};

using CoreUpdate =
    std::variant<SetData, DeleteData, SetTransition, DeleteTransition, StartProcess,
                 CancelProcess, RebindProcess, CreateEntity, DeleteEntity, AddWorld,
                 DeleteWorld, CopyProperties>;

struct MacroCall {
  Name name;
  std::vector<Value> args;
  friend bool operator==(const MacroCall&, const MacroCall&) = default;
};

struct GuardedUpdate {
  Guard guard;
  CoreUpdate inner;
  friend bool operator==(const GuardedUpdate&, const GuardedUpdate&) = default;
};

// Element of the update algebra as emitted by processes.
struct Update {
  std::variant<CoreUpdate, MacroCall, GuardedUpdate> node;
  friend bool operator==(const Update&, const Update&) = default;
};

inline Update core_update(CoreUpdate c) { return Update{std::move(c)}; }
inline Update macro_update(Name name, std::vector<Value> args = {}) {
  return Update{MacroCall{std::move(name), std::move(args)}};
}
inline Update guarded_update(Guard g, CoreUpdate c) {
  return Update{GuardedUpdate{std::move(g), std::move(c)}};
}

// Expansion output: a core with an optional guard, ready for bucketing.
struct GuardedCore {
  std::optional<Guard> guard;
  CoreUpdate core;
  friend bool operator==(const GuardedCore&, const GuardedCore&) = default;
};

// What a finished process hands back to the scheduler.
struct ResultStructure {
  std::vector<Update> updates;
  bool cont = true;
  friend bool operator==(const ResultStructure&, const ResultStructure&) = default;
};

// Outcome of running one segment of a process.
struct SegmentOutcome {
  enum class Kind { Suspend, Await, Finished };

  Kind kind = Kind::Finished;
  Tick resume_tick = 0;     // Suspend
  Path await_target;        // Await
  ResultStructure result;   // Finished
  Continuation continuation;  // Suspend / Await
  std::vector<Update> emitted;

  static SegmentOutcome suspend(Tick resume, Continuation c, std::vector<Update> emitted = {});
  static SegmentOutcome await_process(Path target, Continuation c, std::vector<Update> emitted = {});
  static SegmentOutcome finished(ResultStructure r, std::vector<Update> emitted = {});
};

// Buckets group expanded updates by target: (world, entity) for entity-level
// cores, (world, nullopt) for AddWorld/DeleteWorld.
struct BucketKey {
  Name world;
  std::optional<Name> entity;
  friend bool operator==(const BucketKey&, const BucketKey&) = default;
  friend auto operator<=>(const BucketKey&, const BucketKey&) = default;
};

struct BucketEntry {
  Path emitter;  // path of the emitting process
  std::uint64_t seq = 0;
  std::optional<Guard> guard;
  CoreUpdate core;
};

struct UpdateBucket {
  BucketKey key;
  std::vector<BucketEntry> entries;
};

enum class DropReason { Conflict, GuardFailed, TargetMissing, ExpansionFailed };
const char* to_string(DropReason r);

struct DroppedUpdate {
  Path emitter;
  std::uint64_t seq = 0;
  std::string text;  // canonical rendering of the dropped update
  DropReason reason = DropReason::Conflict;
  std::string detail;
};

struct CommittedUpdate {
  Path emitter;
  std::uint64_t seq = 0;
  CoreUpdate core;
};

// Canonical one-line rendering, e.g. `set_data w.ch.loc=(2,5)`. The same
// grammar is accepted back by parse_update_text; docs/formats.md has the EBNF.
std::string to_text(const CoreUpdate& u);
std::string to_text(const GuardedCore& u);
std::string to_text(const Update& u);
Update parse_update_text(std::string_view text);  // throws FormatError

BucketKey bucket_key_of(const CoreUpdate& u);

}  // namespace sbp
