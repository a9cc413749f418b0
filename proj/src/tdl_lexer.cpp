#include <cctype>
#include <charconv>
#include <unordered_map>

#include "tdl_token.hpp"

namespace sbp::tdl {

namespace {

const std::unordered_map<std::string_view, Tok> kKeywords = {
    {"wait", Tok::KwWait},         {"let", Tok::KwLet},
    {"if", Tok::KwIf},             {"else", Tok::KwElse},
    {"switch", Tok::KwSwitch},     {"case", Tok::KwCase},
    {"select", Tok::KwSelect},     {"in", Tok::KwIn},
    {"where", Tok::KwWhere},       {"minimizing", Tok::KwMinimizing},
    {"return", Tok::KwReturn},     {"stop", Tok::KwStop},
    {"emit", Tok::KwEmit},         {"await", Tok::KwAwait},
    {"when", Tok::KwWhen},         {"true", Tok::KwTrue},
    {"false", Tok::KwFalse},       {"unit", Tok::KwUnit},
    {"and", Tok::KwAnd},           {"or", Tok::KwOr},
    {"not", Tok::KwNot},           {"me", Tok::KwMe},
    {"myworld", Tok::KwMyworld},   {"world", Tok::KwWorld},
    {"from", Tok::KwFrom},
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::uint32_t line = 1, col = 1;
  std::size_t i = 0;

  auto make = [&](Tok kind, std::uint32_t len) {
    Token t;
    t.kind = kind;
    t.span = Span{line, col, len};
    return t;
  };
  auto push = [&](Token t, std::size_t advance) {
    out.push_back(std::move(t));
    i += advance;
    col += static_cast<std::uint32_t>(advance);
  };
  auto error_tok = [&](std::string msg, std::size_t advance) {
    Token t = make(Tok::Error, static_cast<std::uint32_t>(advance));
    t.text = std::move(msg);
    push(std::move(t), advance);
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string_view word = src.substr(i, j - i);
      auto kw = kKeywords.find(word);
      Token t = make(kw != kKeywords.end() ? kw->second : Tok::Ident,
                     static_cast<std::uint32_t>(word.size()));
      t.text = std::string(word);
      push(std::move(t), word.size());
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      bool is_float = false;
      while (j < src.size()) {
        char d = src[j];
        if (std::isdigit(static_cast<unsigned char>(d))) {
          ++j;
        } else if (d == '.' && j + 1 < src.size() && src[j + 1] == '.') {
          break;  // range operator
        } else if (d == '.' && !is_float && j + 1 < src.size() &&
                   std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
          is_float = true;
          ++j;
        } else if ((d == 'e' || d == 'E') && is_float) {
          ++j;
          if (j < src.size() && (src[j] == '-' || src[j] == '+')) ++j;
        } else {
          break;
        }
      }
      std::string_view num = src.substr(i, j - i);
      Token t = make(is_float ? Tok::Float : Tok::Int, static_cast<std::uint32_t>(num.size()));
      if (is_float) {
        auto res = std::from_chars(num.data(), num.data() + num.size(), t.float_val);
        if (res.ec != std::errc()) {
          error_tok("malformed float literal", num.size());
          continue;
        }
      } else {
        auto res = std::from_chars(num.data(), num.data() + num.size(), t.int_val);
        if (res.ec != std::errc()) {
          error_tok("integer literal out of range", num.size());
          continue;
        }
      }
      push(std::move(t), num.size());
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      std::string text;
      bool closed = false, bad_escape = false;
      while (j < src.size()) {
        char d = src[j];
        if (d == '"') {
          closed = true;
          ++j;
          break;
        }
        if (d == '\n') break;
        if (d == '\\' && j + 1 < src.size()) {
          char e = src[j + 1];
          switch (e) {
            case '"': text.push_back('"'); break;
            case '\\': text.push_back('\\'); break;
            case 'n': text.push_back('\n'); break;
            case 't': text.push_back('\t'); break;
            case 'r': text.push_back('\r'); break;
            default: bad_escape = true; text.push_back(e); break;
          }
          j += 2;
        } else {
          text.push_back(d);
          ++j;
        }
      }
      std::size_t len = j - i;
      if (!closed) {
        error_tok("unterminated string literal", len);
        continue;
      }
      if (bad_escape) {
        error_tok("unknown escape in string literal", len);
        continue;
      }
      Token t = make(Tok::String, static_cast<std::uint32_t>(len));
      t.text = std::move(text);
      push(std::move(t), len);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "..") { push(make(Tok::DotDot, 2), 2); continue; }
    if (two == "==") { push(make(Tok::EqEq, 2), 2); continue; }
    if (two == "!=") { push(make(Tok::Ne, 2), 2); continue; }
    if (two == "<=") { push(make(Tok::Le, 2), 2); continue; }
    if (two == ">=") { push(make(Tok::Ge, 2), 2); continue; }
    if (two == "->") { push(make(Tok::Arrow, 2), 2); continue; }
    switch (c) {
      case '{': push(make(Tok::LBrace, 1), 1); continue;
      case '}': push(make(Tok::RBrace, 1), 1); continue;
      case '(': push(make(Tok::LParen, 1), 1); continue;
      case ')': push(make(Tok::RParen, 1), 1); continue;
      case '[': push(make(Tok::LBracket, 1), 1); continue;
      case ']': push(make(Tok::RBracket, 1), 1); continue;
      case ',': push(make(Tok::Comma, 1), 1); continue;
      case ':': push(make(Tok::Colon, 1), 1); continue;
      case '.': push(make(Tok::Dot, 1), 1); continue;
      case '=': push(make(Tok::Assign, 1), 1); continue;
      case '<': push(make(Tok::Lt, 1), 1); continue;
      case '>': push(make(Tok::Gt, 1), 1); continue;
      case '+': push(make(Tok::Plus, 1), 1); continue;
      case '-': push(make(Tok::Minus, 1), 1); continue;
      case '*': push(make(Tok::Star, 1), 1); continue;
      case '/': push(make(Tok::Slash, 1), 1); continue;
      case '%': push(make(Tok::Percent, 1), 1); continue;
      default:
        error_tok(std::string("unexpected character '") + c + "'", 1);
        continue;
    }
  }
  Token eof;
  eof.kind = Tok::Eof;
  eof.span = Span{line, col, 0};
  out.push_back(std::move(eof));
  return out;
}

const char* token_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Float: return "float";
    case Tok::String: return "string";
    case Tok::KwWait: return "'wait'";
    case Tok::KwLet: return "'let'";
    case Tok::KwIf: return "'if'";
    case Tok::KwElse: return "'else'";
    case Tok::KwSwitch: return "'switch'";
    case Tok::KwCase: return "'case'";
    case Tok::KwSelect: return "'select'";
    case Tok::KwIn: return "'in'";
    case Tok::KwWhere: return "'where'";
    case Tok::KwMinimizing: return "'minimizing'";
    case Tok::KwReturn: return "'return'";
    case Tok::KwStop: return "'stop'";
    case Tok::KwEmit: return "'emit'";
    case Tok::KwAwait: return "'await'";
    case Tok::KwWhen: return "'when'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwUnit: return "'unit'";
    case Tok::KwAnd: return "'and'";
    case Tok::KwOr: return "'or'";
    case Tok::KwNot: return "'not'";
    case Tok::KwMe: return "'me'";
    case Tok::KwMyworld: return "'myworld'";
    case Tok::KwWorld: return "'world'";
    case Tok::KwFrom: return "'from'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Dot: return "'.'";
    case Tok::DotDot: return "'..'";
    case Tok::Assign: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::Ne: return "'!='";
    case Tok::Le: return "'<='";
    case Tok::Ge: return "'>='";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::Arrow: return "'->'";
    case Tok::Error: return "invalid token";
    case Tok::Eof: return "end of input";
  }
  return "?";
}

}  // namespace sbp::tdl
