#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbp/tdl/ast.hpp"
#include "sbp/types.hpp"

namespace sbp::tdl {

enum class Tok {
  Ident,
  Int,
  Float,
  String,
  // keywords
  KwWait, KwLet, KwIf, KwElse, KwSwitch, KwCase, KwSelect, KwIn, KwWhere,
  KwMinimizing, KwReturn, KwStop, KwEmit, KwAwait, KwWhen, KwTrue, KwFalse,
  KwUnit, KwAnd, KwOr, KwNot, KwMe, KwMyworld, KwWorld, KwFrom,
  // punctuation
  LBrace, RBrace, LParen, RParen, LBracket, RBracket, Comma, Colon, Dot,
  DotDot, Assign, EqEq, Ne, Le, Ge, Lt, Gt, Plus, Minus, Star, Slash,
  Percent, Arrow,
  Error,
  Eof,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;       // identifier / string payload
  std::int64_t int_val = 0;
  double float_val = 0;
  Span span;
};

// Tokenizes the whole source; malformed pieces become Tok::Error tokens with
// the message in `text`. The final token is always Eof.
std::vector<Token> lex(std::string_view source);

const char* token_name(Tok t);

}  // namespace sbp::tdl
