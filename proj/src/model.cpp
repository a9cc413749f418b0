#include "sbp/model.hpp"

#include <algorithm>

namespace sbp {

const World* Configuration::find_world(const Name& w) const {
  auto it = worlds.find(w);
  return it == worlds.end() ? nullptr : &it->second;
}

World* Configuration::find_world(const Name& w) {
  auto it = worlds.find(w);
  return it == worlds.end() ? nullptr : &it->second;
}

const Entity* Configuration::find_entity(const Name& w, const Name& e) const {
  const World* world = find_world(w);
  if (!world) return nullptr;
  auto it = world->entities.find(e);
  return it == world->entities.end() ? nullptr : &it->second;
}

Entity* Configuration::find_entity(const Name& w, const Name& e) {
  World* world = find_world(w);
  if (!world) return nullptr;
  auto it = world->entities.find(e);
  return it == world->entities.end() ? nullptr : &it->second;
}

const Process* Configuration::find_process(const Path& p) const {
  if (!p.entity || !p.property) return nullptr;
  const Entity* e = find_entity(p.world, *p.entity);
  if (!e) return nullptr;
  auto it = e->processes.find(*p.property);
  return it == e->processes.end() ? nullptr : &it->second;
}

std::size_t Configuration::process_count() const {
  std::size_t n = 0;
  for (const auto& [wn, w] : worlds) {
    for (const auto& [en, e] : w.entities) n += e.processes.size();
  }
  return n;
}

std::string ResolveError::to_string() const {
  const char* seg = segment == Segment::World ? "world"
                    : segment == Segment::Entity ? "entity"
                                                 : "property";
  return std::string("not found: ") + seg + " \"" + name + "\"";
}

ResolveResult resolve_path(const Configuration& config, const Path& path) {
  const World* w = config.find_world(path.world);
  if (!w) return ResolveError{ResolveError::Segment::World, path.world};
  Located loc;
  loc.world = w;
  if (!path.entity) {
    loc.kind = Located::Kind::World;
    return loc;
  }
  auto eit = w->entities.find(*path.entity);
  if (eit == w->entities.end()) return ResolveError{ResolveError::Segment::Entity, *path.entity};
  loc.entity = &eit->second;
  if (!path.property) {
    loc.kind = Located::Kind::Entity;
    return loc;
  }
  const Entity& e = eit->second;
  if (auto dit = e.data.find(*path.property); dit != e.data.end()) {
    loc.kind = Located::Kind::Data;
    loc.data = &dit->second;
    return loc;
  }
  if (auto tit = e.transitions.find(*path.property); tit != e.transitions.end()) {
    loc.kind = Located::Kind::Transition;
    loc.transition = &tit->second;
    return loc;
  }
  if (auto pit = e.processes.find(*path.property); pit != e.processes.end()) {
    loc.kind = Located::Kind::Process;
    loc.process = &pit->second;
    return loc;
  }
  return ResolveError{ResolveError::Segment::Property, *path.property};
}

namespace {

void check_value_refs(const Configuration& config, const Name& wn, const Value& v,
                      const std::string& subject, std::vector<Violation>& out) {
  switch (v.tag()) {
    case Value::Tag::EntityRef: {
      const World* w = config.find_world(wn);
      if (!w || !w->entities.count(v.as_entity_ref().name)) {
        out.push_back({Violation::Severity::Warning, Violation::Kind::DanglingRef, subject,
                       "entity reference \"" + v.as_entity_ref().name +
                           "\" does not resolve in world \"" + wn + "\""});
      }
      break;
    }
    case Value::Tag::WorldRef:
      if (!config.find_world(v.as_world_ref().name)) {
        out.push_back({Violation::Severity::Warning, Violation::Kind::DanglingRef, subject,
                       "world reference \"" + v.as_world_ref().name + "\" does not resolve"});
      }
      break;
    case Value::Tag::List:
      for (const Value& item : v.as_list()) check_value_refs(config, wn, item, subject, out);
      break;
    default:
      break;
  }
}

}  // namespace

std::vector<Violation> validate_configuration(const Configuration& config) {
  std::vector<Violation> out;
  for (const auto& [wn, w] : config.worlds) {
    for (const auto& [en, e] : w.entities) {
      std::string base = wn + "." + en;
      // Property-name disjointness across the three maps.
      for (const auto& [k, t] : e.transitions) {
        if (e.data.count(k)) {
          out.push_back({Violation::Severity::Error, Violation::Kind::PropertyClash, base + "." + k,
                         "name is both a data entry and a transition description"});
        }
      }
      for (const auto& [k, p] : e.processes) {
        if (e.data.count(k) || e.transitions.count(k)) {
          out.push_back({Violation::Severity::Error, Violation::Kind::PropertyClash, base + "." + k,
                         "process name collides with another property"});
        }
      }
      for (const auto& [k, v] : e.data) check_value_refs(config, wn, v, base + "." + k, out);
      for (const auto& [pn, p] : e.processes) {
        if (!e.transitions.count(p.transition)) {
          out.push_back({Violation::Severity::Warning, Violation::Kind::MissingTransition,
                         base + "." + pn,
                         "process transition \"" + p.transition + "\" does not resolve"});
        }
        if (const auto* s = p.suspended(); s && s->resume_tick <= config.tick) {
          out.push_back({Violation::Severity::Error, Violation::Kind::StaleSuspension,
                         base + "." + pn,
                         "suspended process resume tick " + std::to_string(s->resume_tick) +
                             " is not after tick " + std::to_string(config.tick)});
        }
      }
    }
  }
  return out;
}

bool has_errors(const std::vector<Violation>& violations) {
  return std::any_of(violations.begin(), violations.end(), [](const Violation& v) {
    return v.severity == Violation::Severity::Error;
  });
}

World clone_world_body(const World& source, const Name& target, Tick next_tick) {
  World copy = source;
  copy.name = target;
  for (auto& [en, e] : copy.entities) {
    for (auto& [pn, p] : e.processes) {
      p.state = ProcReady{};
      p.begin_tick = next_tick;
    }
  }
  return copy;
}

Configuration clone_world(const Configuration& config, const Name& source, const Name& target) {
  const World* src = config.find_world(source);
  if (!src) throw CloneError("clone_world: source world \"" + source + "\" does not exist");
  if (config.find_world(target)) {
    throw CloneError("clone_world: target world \"" + target + "\" already exists");
  }
  require_valid_name(target, "world");
  Configuration next = config;
  next.worlds.emplace(target, clone_world_body(*src, target, config.tick + 1));
  return next;
}

}  // namespace sbp
