#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "sbp/types.hpp"

namespace sbp::detail {

// Minimal cursor over canonical text (values, paths, update records).
// Throws FormatError with a short context on any mismatch.
class TextScanner {
public:
  explicit TextScanner(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  std::size_t pos() const { return pos_; }

  void skip_ws() {
    while (!done() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool try_consume(char c) {
    skip_ws();
    if (!done() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool try_consume(std::string_view word) {
    skip_ws();
    if (text_.substr(pos_, word.size()) == word) {
      pos_ += word.size();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!try_consume(c)) fail(std::string("expected '") + c + "'");
  }

  void expect(std::string_view word) {
    if (!try_consume(word)) fail("expected '" + std::string(word) + "'");
  }

  // Maximal run of name characters (see is_valid_name).
  std::string scan_name() {
    skip_ws();
    std::size_t start = pos_;
    while (!done() && is_name_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a name");
    std::string n(text_.substr(start, pos_ - start));
    if (!is_valid_name(n)) fail("invalid name '" + n + "'");
    return n;
  }

  // Number token: [-]digits[.digits][e...] — caller classifies int vs float.
  std::string_view scan_number_token() {
    skip_ws();
    std::size_t start = pos_;
    if (!done() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    bool any = false;
    while (!done() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                       text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E' ||
                       ((text_[pos_] == '+' || text_[pos_] == '-') && pos_ > start &&
                        (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
      // A second '.' starting a '..' range does not belong to the number.
      if (text_[pos_] == '.' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '.') break;
      ++pos_;
      any = true;
    }
    if (!any) fail("expected a number");
    return text_.substr(start, pos_ - start);
  }

  // Double-quoted string with \" \\ \n \t \r \uXXXX escapes.
  std::string scan_quoted();

  [[noreturn]] void fail(const std::string& why) const {
    throw FormatError(why + " at offset " + std::to_string(pos_) + " in \"" +
                      std::string(text_.substr(0, 96)) + (text_.size() > 96 ? "...\"" : "\""));
  }

  static bool is_name_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u < 0x21 || u == 0x7F) return false;  // control, space
    switch (c) {
      case '.': case '(': case ')': case '[': case ']': case '{': case '}':
      case ',': case ':': case '=': case '"': case '#':
        return false;
      default:
        return true;
    }
  }

  std::string_view rest() const { return text_.substr(pos_); }
  void advance(std::size_t n) { pos_ += n; }

private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

// Canonical rendering helpers shared by the value and update writers.
void append_quoted(std::string& out, std::string_view s);
void append_float(std::string& out, double d);

// Parses one canonical value starting at the scanner position.
Value parse_value_at(TextScanner& sc);

}  // namespace sbp::detail
