#include "sbp/types.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "text_scan.hpp"

namespace sbp {

bool is_valid_name(std::string_view text) {
  if (text.empty()) return false;
  for (char c : text) {
    if (!detail::TextScanner::is_name_char(c)) return false;
  }
  return true;
}

void require_valid_name(std::string_view text, std::string_view what) {
  if (!is_valid_name(text)) {
    throw FormatError("invalid " + std::string(what) + " name: \"" + std::string(text) + "\"");
  }
}

namespace detail {

void append_quoted(std::string& out, std::string_view s) {
  out.push_back('"');
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (u < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", u);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void append_float(std::string& out, double d) {
  if (std::isnan(d)) {
    out += "nan";
    return;
  }
  if (std::isinf(d)) {
    out += d < 0 ? "-inf" : "inf";
    return;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  std::string_view sv(buf, res.ptr - buf);
  out += sv;
  // Keep floats lexically distinct from ints.
  if (sv.find('.') == std::string_view::npos && sv.find('e') == std::string_view::npos &&
      sv.find("inf") == std::string_view::npos && sv.find("nan") == std::string_view::npos) {
    out += ".0";
  }
}

std::string TextScanner::scan_quoted() {
  skip_ws();
  if (done() || text_[pos_] != '"') fail("expected a quoted string");
  ++pos_;
  std::string out;
  while (true) {
    if (done()) fail("unterminated string");
    char c = text_[pos_++];
    if (c == '"') break;
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (done()) fail("unterminated escape");
    char e = text_[pos_++];
    switch (e) {
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      case 'u': {
        if (pos_ + 4 > text_.size()) fail("bad \\u escape");
        unsigned code = 0;
        for (int i = 0; i < 4; ++i) {
          char h = text_[pos_++];
          code <<= 4;
          if (h >= '0' && h <= '9') code |= static_cast<unsigned>(h - '0');
          else if (h >= 'a' && h <= 'f') code |= static_cast<unsigned>(h - 'a' + 10);
          else if (h >= 'A' && h <= 'F') code |= static_cast<unsigned>(h - 'A' + 10);
          else fail("bad \\u escape");
        }
        if (code > 0xFF) fail("\\u escape above 0xFF unsupported");
        out.push_back(static_cast<char>(code));
        break;
      }
      default:
        fail("unknown escape");
    }
  }
  return out;
}

namespace {

std::int64_t parse_int_token(TextScanner& sc, std::string_view tok) {
  std::int64_t v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) sc.fail("bad integer");
  return v;
}

Value parse_value_inner(TextScanner& sc) {
  sc.skip_ws();
  if (sc.done()) sc.fail("expected a value");
  char c = sc.peek();
  if (c == '"') return Value::text(sc.scan_quoted());
  if (c == '(') {
    sc.expect('(');
    auto xs = sc.scan_number_token();
    std::int64_t x = parse_int_token(sc, xs);
    sc.expect(',');
    auto ys = sc.scan_number_token();
    std::int64_t y = parse_int_token(sc, ys);
    sc.expect(')');
    return Value::coord(x, y);
  }
  if (c == '[') {
    sc.expect('[');
    ValueList items;
    sc.skip_ws();
    if (!sc.try_consume(']')) {
      while (true) {
        items.push_back(parse_value_inner(sc));
        if (sc.try_consume(']')) break;
        sc.expect(',');
      }
    }
    return Value::list(std::move(items));
  }
  if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
    auto tok = sc.scan_number_token();
    bool is_float = tok.find('.') != std::string_view::npos ||
                    tok.find('e') != std::string_view::npos ||
                    tok.find('E') != std::string_view::npos;
    if (is_float) {
      double d = 0;
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), d);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) sc.fail("bad float");
      return Value::real(d);
    }
    return Value::integer(parse_int_token(sc, tok));
  }
  if (sc.try_consume("unit")) return Value::unit();
  if (sc.try_consume("true")) return Value::boolean(true);
  if (sc.try_consume("false")) return Value::boolean(false);
  if (sc.try_consume("nan")) return Value::real(std::nan(""));
  if (sc.try_consume("-inf")) return Value::real(-INFINITY);
  if (sc.try_consume("inf")) return Value::real(INFINITY);
  if (sc.try_consume("entity(")) {
    Name n = sc.scan_name();
    sc.expect(')');
    return Value::entity_ref(std::move(n));
  }
  if (sc.try_consume("world(")) {
    Name n = sc.scan_name();
    sc.expect(')');
    return Value::world_ref(std::move(n));
  }
  sc.fail("unrecognized value");
}

}  // namespace

Value parse_value_at(TextScanner& sc) { return parse_value_inner(sc); }

}  // namespace detail

double Value::numeric() const {
  if (is_int()) return static_cast<double>(as_int());
  return as_float();
}

std::string Value::to_text() const {
  std::string out;
  switch (tag()) {
    case Tag::Unit:
      out = "unit";
      break;
    case Tag::Bool:
      out = as_bool() ? "true" : "false";
      break;
    case Tag::Int:
      out = std::to_string(as_int());
      break;
    case Tag::Float:
      detail::append_float(out, as_float());
      break;
    case Tag::Text:
      detail::append_quoted(out, as_text());
      break;
    case Tag::Coord: {
      Coord c = as_coord();
      out = "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
      break;
    }
    case Tag::List: {
      out = "[";
      const auto& items = as_list();
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i].to_text();
      }
      out += "]";
      break;
    }
    case Tag::EntityRef:
      out = "entity(" + as_entity_ref().name + ")";
      break;
    case Tag::WorldRef:
      out = "world(" + as_world_ref().name + ")";
      break;
  }
  return out;
}

Value Value::parse(std::string_view text) {
  detail::TextScanner sc(text);
  Value v = detail::parse_value_inner(sc);
  sc.skip_ws();
  if (!sc.done()) sc.fail("trailing characters after value");
  return v;
}

std::optional<Value> Value::try_parse(std::string_view text) {
  try {
    return parse(text);
  } catch (const FormatError&) {
    return std::nullopt;
  }
}

const char* Value::tag_name(Tag t) {
  switch (t) {
    case Tag::Unit: return "unit";
    case Tag::Bool: return "bool";
    case Tag::Int: return "int";
    case Tag::Float: return "float";
    case Tag::Text: return "text";
    case Tag::Coord: return "coord";
    case Tag::List: return "list";
    case Tag::EntityRef: return "entity_ref";
    case Tag::WorldRef: return "world_ref";
  }
  return "?";
}

template <> const char* Value::tag_name_of<bool>() { return "bool"; }
template <> const char* Value::tag_name_of<std::int64_t>() { return "int"; }
template <> const char* Value::tag_name_of<double>() { return "float"; }
template <> const char* Value::tag_name_of<std::string>() { return "text"; }
template <> const char* Value::tag_name_of<Coord>() { return "coord"; }
template <> const char* Value::tag_name_of<ValueList>() { return "list"; }
template <> const char* Value::tag_name_of<EntityRef>() { return "entity_ref"; }
template <> const char* Value::tag_name_of<WorldRef>() { return "world_ref"; }

std::string Path::to_text() const {
  std::string out = world;
  if (entity) {
    out += "." + *entity;
    if (property) out += "." + *property;
  }
  return out;
}

Path Path::parse(std::string_view text) {
  Path p;
  std::size_t start = 0;
  int seg = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '.') {
      std::string_view part = text.substr(start, i - start);
      if (!is_valid_name(part)) {
        throw FormatError("invalid path segment \"" + std::string(part) + "\" in \"" +
                          std::string(text) + "\"");
      }
      switch (seg) {
        case 0: p.world = std::string(part); break;
        case 1: p.entity = std::string(part); break;
        case 2: p.property = std::string(part); break;
        default: throw FormatError("path has more than 3 segments: \"" + std::string(text) + "\"");
      }
      ++seg;
      start = i + 1;
    }
  }
  return p;
}

}  // namespace sbp
