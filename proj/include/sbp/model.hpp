#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sbp/types.hpp"
#include "sbp/update.hpp"

namespace sbp {

// Process lifecycle states. FinishedPending only exists inside a tick (between
// segment execution and lifecycle handling); it never appears in a snapshot.
struct ProcReady {
  friend bool operator==(const ProcReady&, const ProcReady&) = default;
};
struct ProcSuspended {
  Tick resume_tick = 0;
  Continuation continuation;
  friend bool operator==(const ProcSuspended&, const ProcSuspended&) = default;
};
struct ProcAwaiting {
  Path target;
  Continuation continuation;
  friend bool operator==(const ProcAwaiting&, const ProcAwaiting&) = default;
};
struct ProcFinishedPending {
  ResultStructure result;
  friend bool operator==(const ProcFinishedPending&, const ProcFinishedPending&) = default;
};

using ProcessState = std::variant<ProcReady, ProcSuspended, ProcAwaiting, ProcFinishedPending>;

struct Process {
  Name name;
  Name transition;  // key into the owning entity's transition map; may dangle
  Tick begin_tick = 0;
  std::uint64_t iteration = 0;
  ProcessState state = ProcReady{};

  bool is_ready() const { return std::holds_alternative<ProcReady>(state); }
  const ProcSuspended* suspended() const { return std::get_if<ProcSuspended>(&state); }
  const ProcAwaiting* awaiting() const { return std::get_if<ProcAwaiting>(&state); }
  const ProcFinishedPending* finished() const { return std::get_if<ProcFinishedPending>(&state); }

  friend bool operator==(const Process&, const Process&) = default;
};

// The three property maps share one name space per entity; update application
// keeps them disjoint.
struct Entity {
  Name name;
  std::map<Name, Value> data;
  std::map<Name, TransitionDescription> transitions;
  std::map<Name, Process> processes;

  bool has_property(const Name& key) const {
    return data.count(key) || transitions.count(key) || processes.count(key);
  }

  friend bool operator==(const Entity&, const Entity&) = default;
};

struct World {
  Name name;
  std::map<Name, Entity> entities;
  friend bool operator==(const World&, const World&) = default;
};

struct Configuration {
  std::map<Name, World> worlds;
  Tick tick = 0;

  const World* find_world(const Name& w) const;
  World* find_world(const Name& w);
  const Entity* find_entity(const Name& w, const Name& e) const;
  Entity* find_entity(const Name& w, const Name& e);
  const Process* find_process(const Path& p) const;
  std::size_t process_count() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

// Result of resolving a path: a pointer into the configuration plus enough
// context to know what was found. Pointers stay valid while the configuration
// is not mutated.
struct Located {
  enum class Kind { World, Entity, Data, Transition, Process };
  Kind kind = Kind::World;
  const World* world = nullptr;
  const Entity* entity = nullptr;
  const Value* data = nullptr;
  const TransitionDescription* transition = nullptr;
  const Process* process = nullptr;
};

struct ResolveError {
  enum class Segment { World, Entity, Property };
  Segment segment = Segment::World;
  Name name;
  std::string to_string() const;
};

using ResolveResult = std::variant<Located, ResolveError>;

// Property lookup searches data, then transitions, then processes; the three
// maps are disjoint so the order never matters.
ResolveResult resolve_path(const Configuration& config, const Path& path);

struct Violation {
  enum class Severity { Error, Warning };
  enum class Kind { DuplicateName, DanglingRef, MissingTransition, StaleSuspension, PropertyClash };

  Severity severity = Severity::Warning;
  Kind kind = Kind::DanglingRef;
  std::string subject;  // path-ish description of where
  std::string message;
};

std::vector<Violation> validate_configuration(const Configuration& config);

bool has_errors(const std::vector<Violation>& violations);

struct CloneError : Error {
  using Error::Error;
};

// Deep-copies world `source` as `target`. Copied processes restart: state
// Ready, iteration preserved, begin_tick = config.tick + 1.
Configuration clone_world(const Configuration& config, const Name& source, const Name& target);

// In-place variant used by AddWorld{copy_from}; precondition checks are the
// caller's job.
World clone_world_body(const World& source, const Name& target, Tick next_tick);

}  // namespace sbp
