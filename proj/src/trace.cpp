#include "sbp/trace.hpp"

#include <array>
#include <charconv>

namespace sbp {

const char* to_string(TraceKind k) {
  switch (k) {
    case TraceKind::TickOpen: return "tick_open";
    case TraceKind::SegmentRun: return "segment_run";
    case TraceKind::ProcessSuspended: return "process_suspended";
    case TraceKind::ProcessFinished: return "process_finished";
    case TraceKind::ProcessCancelled: return "process_cancelled";
    case TraceKind::ProcessRespawned: return "process_respawned";
    case TraceKind::UpdateCommitted: return "update_committed";
    case TraceKind::UpdateDropped: return "update_dropped";
    case TraceKind::TickClose: return "tick_close";
  }
  return "?";
}

namespace {

const std::array<TraceKind, 9> kAllKinds = {
    TraceKind::TickOpen,         TraceKind::SegmentRun,      TraceKind::ProcessSuspended,
    TraceKind::ProcessFinished,  TraceKind::ProcessCancelled, TraceKind::ProcessRespawned,
    TraceKind::UpdateCommitted,  TraceKind::UpdateDropped,   TraceKind::TickClose,
};

void append_escaped(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\\': out += "\\\\"; break;
      default: out.push_back(c);
    }
  }
}

std::string unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      ++i;
      switch (s[i]) {
        case 't': out.push_back('\t'); break;
        case 'n': out.push_back('\n'); break;
        case '\\': out.push_back('\\'); break;
        default: out.push_back(s[i]);
      }
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

}  // namespace

std::string TraceEvent::to_line() const {
  std::string out = std::to_string(tick);
  out.push_back('\t');
  out += to_string(kind);
  out.push_back('\t');
  append_escaped(out, subject);
  out.push_back('\t');
  append_escaped(out, payload);
  return out;
}

TraceEvent TraceEvent::parse_line(std::string_view line) {
  std::array<std::string_view, 4> fields;
  std::size_t start = 0, idx = 0;
  for (std::size_t i = 0; i <= line.size() && idx < 4; ++i) {
    if (i == line.size() || line[i] == '\t') {
      fields[idx++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  if (idx != 4) throw FormatError("trace line does not have 4 fields");
  TraceEvent e;
  auto res = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), e.tick);
  if (res.ec != std::errc()) throw FormatError("bad tick in trace line");
  bool found = false;
  for (TraceKind k : kAllKinds) {
    if (fields[1] == to_string(k)) {
      e.kind = k;
      found = true;
      break;
    }
  }
  if (!found) throw FormatError("unknown trace kind: " + std::string(fields[1]));
  e.subject = unescape(fields[2]);
  e.payload = unescape(fields[3]);
  return e;
}

FileTraceSink::FileTraceSink(const std::string& path) : out_(path) {
  if (!out_) throw Error("cannot open trace file: " + path);
}

void FileTraceSink::emit(const TraceEvent& event) { out_ << event.to_line() << '\n'; }

void ReplayHasher::feed(std::string_view bytes) {
  for (unsigned char b : bytes) {
    h_ ^= b;
    h_ *= 0x100000001b3ull;
  }
  h_ ^= 0x0a;  // record separator
  h_ *= 0x100000001b3ull;
}

void ReplayHasher::feed_tick(Tick tick) { feed("tick " + std::to_string(tick)); }

std::string ReplayHasher::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  std::uint64_t v = h_;
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

std::uint64_t ReplayHasher::parse_hex(std::string_view hex) {
  if (hex.size() != 16) throw FormatError("replay hash must be 16 hex digits");
  std::uint64_t v = 0;
  for (char c : hex) {
    v <<= 4;
    if (c >= '0' && c <= '9') v |= static_cast<std::uint64_t>(c - '0');
    else if (c >= 'a' && c <= 'f') v |= static_cast<std::uint64_t>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') v |= static_cast<std::uint64_t>(c - 'A' + 10);
    else throw FormatError("bad hex digit in replay hash");
  }
  return v;
}

}  // namespace sbp
