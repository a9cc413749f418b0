#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "sbp/types.hpp"

namespace sbp {

enum class TraceKind {
  TickOpen,
  SegmentRun,
  ProcessSuspended,
  ProcessFinished,
  ProcessCancelled,
  ProcessRespawned,
  UpdateCommitted,
  UpdateDropped,
  TickClose,
};

const char* to_string(TraceKind k);

struct TraceEvent {
  Tick tick = 0;
  TraceKind kind = TraceKind::TickOpen;
  std::string subject;  // path of the process / update target; empty for tick events
  std::string payload;  // canonical update text, drop reason, partial hash, ...

  // Tab-separated line: tick, kind, subject, payload (tabs/newlines escaped).
  std::string to_line() const;
  static TraceEvent parse_line(std::string_view line);  // throws FormatError
};

class TraceSink {
public:
  virtual ~TraceSink() = default;
  virtual void emit(const TraceEvent& event) = 0;
};

class NullTraceSink final : public TraceSink {
public:
  void emit(const TraceEvent&) override {}
};

class CollectTraceSink final : public TraceSink {
public:
  void emit(const TraceEvent& event) override { events.push_back(event); }
  std::vector<TraceEvent> events;
};

class CountTraceSink final : public TraceSink {
public:
  void emit(const TraceEvent& event) override {
    ++total;
    ++by_kind[event.kind];
  }
  std::uint64_t total = 0;
  std::map<TraceKind, std::uint64_t> by_kind;
};

class FileTraceSink final : public TraceSink {
public:
  explicit FileTraceSink(const std::string& path);
  void emit(const TraceEvent& event) override;

private:
  std::ofstream out_;
};

// Fans one event stream out to several sinks.
class TeeTraceSink final : public TraceSink {
public:
  void add(TraceSink* sink) { sinks_.push_back(sink); }
  void emit(const TraceEvent& event) override {
    for (TraceSink* s : sinks_) s->emit(event);
  }

private:
  std::vector<TraceSink*> sinks_;
};

// Running FNV-1a hash over the canonical serialization of committed updates.
// Feeding order: per tick one "tick N" record, then each committed update's
// canonical text in commit order.
class ReplayHasher {
public:
  void feed(std::string_view bytes);
  void feed_tick(Tick tick);
  std::uint64_t value() const { return h_; }
  void reset(std::uint64_t h) { h_ = h; }
  std::string hex() const;
  static std::uint64_t parse_hex(std::string_view hex);  // throws FormatError

private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

}  // namespace sbp
