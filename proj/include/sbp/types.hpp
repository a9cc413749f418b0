#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sbp {

using Tick = std::uint64_t;

// Names are plain strings validated at the boundaries (parsers, loaders,
// fixture builders). See is_valid_name for the lexical rule.
using Name = std::string;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed canonical text (values, paths, updates, trace lines).
struct FormatError : Error {
  using Error::Error;
};

// A name is a nonempty run of printable characters excluding '.', whitespace,
// control characters, and the structural delimiters of the canonical text
// grammar: ( ) [ ] { } , : = " #
bool is_valid_name(std::string_view text);
void require_valid_name(std::string_view text, std::string_view what);

struct Coord {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

struct Unit {
  friend bool operator==(const Unit&, const Unit&) = default;
};

struct EntityRef {
  Name name;
  friend bool operator==(const EntityRef&, const EntityRef&) = default;
};

struct WorldRef {
  Name name;
  friend bool operator==(const WorldRef&, const WorldRef&) = default;
};

class Value;
using ValueList = std::vector<Value>;

// Tagged union of every value an entity data entry can hold. Equality is
// strict: values of different tags are never equal (Int 1 != Float 1.0).
class Value {
public:
  enum class Tag { Unit, Bool, Int, Float, Text, Coord, List, EntityRef, WorldRef };

  Value() : node_(sbp::Unit{}) {}

  static Value unit() { return Value(); }
  static Value boolean(bool b) { return Value(Node(b)); }
  static Value integer(std::int64_t i) { return Value(Node(i)); }
  static Value real(double d) { return Value(Node(d)); }
  static Value text(std::string s) { return Value(Node(std::move(s))); }
  static Value coord(std::int64_t x, std::int64_t y) { return Value(Node(sbp::Coord{x, y})); }
  static Value coord(sbp::Coord c) { return Value(Node(c)); }
  static Value list(ValueList items) { return Value(Node(std::move(items))); }
  static Value entity_ref(Name n) { return Value(Node(sbp::EntityRef{std::move(n)})); }
  static Value world_ref(Name n) { return Value(Node(sbp::WorldRef{std::move(n)})); }

  Tag tag() const { return static_cast<Tag>(node_.index()); }

  bool is_unit() const { return tag() == Tag::Unit; }
  bool is_bool() const { return tag() == Tag::Bool; }
  bool is_int() const { return tag() == Tag::Int; }
  bool is_float() const { return tag() == Tag::Float; }
  bool is_text() const { return tag() == Tag::Text; }
  bool is_coord() const { return tag() == Tag::Coord; }
  bool is_list() const { return tag() == Tag::List; }
  bool is_entity_ref() const { return tag() == Tag::EntityRef; }
  bool is_world_ref() const { return tag() == Tag::WorldRef; }
  bool is_numeric() const { return is_int() || is_float(); }

  bool as_bool() const { return get<bool>(); }
  std::int64_t as_int() const { return get<std::int64_t>(); }
  double as_float() const { return get<double>(); }
  const std::string& as_text() const { return get<std::string>(); }
  sbp::Coord as_coord() const { return get<sbp::Coord>(); }
  const ValueList& as_list() const { return get<ValueList>(); }
  const sbp::EntityRef& as_entity_ref() const { return get<sbp::EntityRef>(); }
  const sbp::WorldRef& as_world_ref() const { return get<sbp::WorldRef>(); }

  // Numeric reading with Int -> Float promotion.
  double numeric() const;

  // Canonical text form, e.g. (2,5) or ["corn", "wisdom"]; see docs/formats.md.
  std::string to_text() const;
  static Value parse(std::string_view text);            // throws FormatError
  static std::optional<Value> try_parse(std::string_view text);

  static const char* tag_name(Tag t);

  friend bool operator==(const Value&, const Value&) = default;

private:
  using Node = std::variant<sbp::Unit, bool, std::int64_t, double, std::string,
                            sbp::Coord, ValueList, sbp::EntityRef, sbp::WorldRef>;

  explicit Value(Node n) : node_(std::move(n)) {}

  template <class T>
  const T& get() const {
    const T* p = std::get_if<T>(&node_);
    if (!p) throw Error(std::string("value is not a ") + tag_name_of<T>());
    return *p;
  }

  template <class T>
  static const char* tag_name_of();

  Node node_;
};

// A piece of source code plus the id of the semantics that can run it.
struct TransitionDescription {
  Name name;
  Name semantics;
  std::string source;
  friend bool operator==(const TransitionDescription&, const TransitionDescription&) = default;
};

// world[.entity[.property]] reference into a configuration.
struct Path {
  Name world;
  std::optional<Name> entity;
  std::optional<Name> property;

  int segments() const { return 1 + (entity ? 1 : 0) + (property ? 1 : 0); }
  std::string to_text() const;
  static Path parse(std::string_view text);  // throws FormatError

  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path&, const Path&) = default;
};

inline Path world_path(Name w) { return Path{std::move(w), std::nullopt, std::nullopt}; }
inline Path entity_path(Name w, Name e) { return Path{std::move(w), std::move(e), std::nullopt}; }
inline Path property_path(Name w, Name e, Name p) { return Path{std::move(w), std::move(e), std::move(p)}; }

// Portable continuation for a suspended process: the statement path into the
// (possibly nested) block structure, the rng position, completed bindings, and
// the transition pinned for the rest of the in-flight iteration. Snapshots
// serialize this structure as-is.
struct Continuation {
  std::vector<std::uint32_t> stmt_path;
  std::uint64_t rng_draws = 0;
  std::map<Name, Value> bindings;
  std::map<Name, Name> binder_worlds;
  std::optional<TransitionDescription> pinned;
  friend bool operator==(const Continuation&, const Continuation&) = default;
};

}  // namespace sbp
