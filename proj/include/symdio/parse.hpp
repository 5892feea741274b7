#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "symdio/json.hpp"
#include "symdio/symfunc.hpp"

namespace symdio {

namespace detail {

struct Token {
  enum class Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, ellipsis, end };
  Kind kind;
  std::string text;
  int line = 1, column = 1;
};

inline Error syntax_error(int line, int column, const std::string& what) {
  return usage_error("SyntaxError",
                     "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    unsigned char ch = static_cast<unsigned char>(s[i]);
    if (std::isspace(ch)) {
      advance(1);
      continue;
    }
    Token t{Token::Kind::end, "", line, col};
    if (std::isdigit(ch)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Token::Kind::number;
      t.text = std::string(s.substr(i, j - i));
      advance(j - i);
    } else if (std::isalpha(ch) || ch == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.kind = Token::Kind::ident;
      t.text = std::string(s.substr(i, j - i));
      advance(j - i);
    } else if (s.substr(i, 3) == "...") {
      t.kind = Token::Kind::ellipsis;
      advance(3);
    } else if (s.substr(i, 3) == "\xE2\x80\xA6") {
      t.kind = Token::Kind::ellipsis;
      advance(3);
    } else {
      switch (ch) {
        case '+': t.kind = Token::Kind::plus; break;
        case '-': t.kind = Token::Kind::minus; break;
        case '*': t.kind = Token::Kind::star; break;
        case '/': t.kind = Token::Kind::slash; break;
        case '^': t.kind = Token::Kind::caret; break;
        case '(': t.kind = Token::Kind::lparen; break;
        case ')': t.kind = Token::Kind::rparen; break;
        default:
          throw syntax_error(line, col, "unexpected character '" + std::string(1, s[i]) + "'");
      }
      t.text = std::string(1, s[i]);
      advance(1);
    }
    out.push_back(std::move(t));
  }
  out.push_back({Token::Kind::end, "", line, col});
  return out;
}

// "x12" -> 12; anything else -> nullopt.
inline std::optional<std::size_t> form_index(const std::string& name) {
  if (name.size() < 2 || name[0] != 'x' || name[1] == '0') return std::nullopt;
  std::size_t k = 0;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    if (k > 100000) return std::nullopt;
    k = k * 10 + static_cast<std::size_t>(name[i] - '0');
  }
  return k;
}

/// Recursive descent over a token range. Variables are either looked up in
/// `names` or, when `names` is empty, read as x1, x2, ... (form mode).
class Parser {
 public:
  Parser(std::vector<Token> tokens, std::size_t nvars, const std::vector<std::string>* names)
      : toks_(std::move(tokens)), nvars_(nvars), names_(names) {}

  Poly parse_all() {
    Poly p = expr();
    if (peek().kind != Token::Kind::end) fail(peek(), "expected an operator or end of input");
    return p;
  }

 private:
  using K = Token::Kind;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  [[noreturn]] void fail(const Token& t, const std::string& what) const {
    throw syntax_error(t.line, t.column, what);
  }
  const Token& expect(K kind, const char* what) {
    if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
    return toks_[pos_++];
  }

  Poly expr() {
    Poly acc(nvars_);
    bool first = true;
    for (;;) {
      bool negate = false;
      if (!first || peek().kind == K::plus || peek().kind == K::minus) {
        if (peek().kind == K::plus) {
          ++pos_;
        } else if (peek().kind == K::minus) {
          negate = true;
          ++pos_;
        } else if (!first) {
          break;
        }
      }
      const std::size_t start = pos_;
      Poly t = term();
      const std::size_t stop = pos_;
      if (!negate && peek().kind == K::plus && peek(1).kind == K::ellipsis) {
        if (peek(2).kind != K::plus) fail(peek(2), "expected '+' after the ellipsis");
        pos_ += 3;
        const std::size_t start2 = pos_;
        term();
        t = expand_ellipsis(start, stop, start2, pos_);
      }
      acc += negate ? -t : t;
      first = false;
      if (peek().kind != K::plus && peek().kind != K::minus) break;
    }
    return acc;
  }

  Poly term() {
    Poly acc = unary();
    while (peek().kind == K::star) {
      ++pos_;
      acc *= unary();
    }
    if (peek().kind == K::slash) fail(peek(), "division is only allowed inside a rational literal");
    if (peek().kind == K::number || peek().kind == K::ident || peek().kind == K::lparen)
      fail(peek(), "implicit multiplication is not allowed; write '*'");
    return acc;
  }

  Poly unary() {
    if (peek().kind == K::minus) {
      ++pos_;
      return -unary();
    }
    if (peek().kind == K::plus) {
      ++pos_;
      return unary();
    }
    return power();
  }

  Poly power() {
    Poly base = atom();
    if (peek().kind != K::caret) return base;
    ++pos_;
    const Token& e = expect(K::number, "a non-negative integer exponent");
    if (e.text.size() > 5 || std::stoul(e.text) > 65535) fail(e, "exponent too large");
    if (peek().kind == K::caret) fail(peek(), "chained exponents need parentheses");
    return base.pow(static_cast<unsigned>(std::stoul(e.text)));
  }

  Poly atom() {
    const Token& t = peek();
    switch (t.kind) {
      case K::number: {
        ++pos_;
        std::string lit = t.text;
        if (peek().kind == K::slash) {
          ++pos_;
          lit += "/" + expect(K::number, "a denominator").text;
        }
        Rational r = parse_rational(lit);
        return Poly::constant(nvars_, r);
      }
      case K::ident:
        ++pos_;
        return Poly::variable(nvars_, variable_index(t));
      case K::lparen: {
        ++pos_;
        Poly p = expr();
        expect(K::rparen, "')'");
        return p;
      }
      default:
        fail(t, t.kind == K::end ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
  }

  std::size_t variable_index(const Token& t) const {
    if (names_ && !names_->empty()) {
      for (std::size_t i = 0; i < names_->size(); ++i)
        if ((*names_)[i] == t.text) return i;
      fail(t, "unknown variable '" + t.text + "'");
    }
    auto k = form_index(t.text);
    if (!k) fail(t, "unknown variable '" + t.text + "'; form variables are x1, x2, ...");
    if (*k > nvars_)
      throw usage_error("VariableOutOfRange", "line " + std::to_string(t.line) + ", column " +
                                                  std::to_string(t.column) + ": " + t.text +
                                                  " exceeds the declared " +
                                                  std::to_string(nvars_) + " variables");
    return *k - 1;
  }

  // Terms [a0, a1) and [b0, b1) must agree token for token except for
  // variable indices, which all advance by the same step count.
  Poly expand_ellipsis(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1) {
    const Token& at = toks_[a0];
    if (a1 - a0 != b1 - b0) fail(at, "the terms around the ellipsis have different shapes");
    std::optional<long> span;
    for (std::size_t k = 0; k < a1 - a0; ++k) {
      const Token &x = toks_[a0 + k], &y = toks_[b0 + k];
      if (x.kind != y.kind) fail(y, "the terms around the ellipsis have different shapes");
      if (x.kind != K::ident) {
        if (x.text != y.text) fail(y, "only variable indices may change across an ellipsis");
        continue;
      }
      auto i = form_index(x.text), j = form_index(y.text);
      if (!i || !j) fail(y, "ellipsis patterns need variables x1, x2, ...");
      long d = static_cast<long>(*j) - static_cast<long>(*i);
      if (d == 0) continue;
      if (span && *span != d) fail(y, "variable indices advance unevenly across the ellipsis");
      span = d;
    }
    if (!span || *span < 0) fail(at, "the ellipsis must run over increasing variable indices");
    Poly sum(nvars_);
    for (long s = 0; s <= *span; ++s) {
      std::vector<Token> copy(toks_.begin() + static_cast<long>(a0), toks_.begin() + static_cast<long>(a1));
      for (std::size_t k = 0; k < copy.size(); ++k) {
        if (copy[k].kind != K::ident) continue;
        if (*form_index(copy[k].text) != *form_index(toks_[b0 + k].text))
          copy[k].text = "x" + std::to_string(*form_index(copy[k].text) + static_cast<std::size_t>(s));
      }
      copy.push_back({K::end, "", at.line, at.column});
      sum += Parser(std::move(copy), nvars_, names_).parse_all();
    }
    return sum;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t nvars_;
  const std::vector<std::string>* names_;
};

inline std::size_t max_form_index(const std::vector<Token>& toks) {
  std::size_t n = 0;
  for (const auto& t : toks)
    if (t.kind == Token::Kind::ident)
      if (auto k = form_index(t.text)) n = std::max(n, *k);
  return n;
}

}  // namespace detail

/// Polynomial over the named variables. Literals are n or n/d; the operators
/// are + - * ^ with parentheses.
inline Poly parse_poly(std::string_view text, const std::vector<std::string>& names) {
  if (names.empty()) throw usage_error("NoVariables", "parse_poly needs at least one variable name");
  return detail::Parser(detail::tokenize(text), names.size(), &names).parse_all();
}

/// Polynomial in x1..xN. Without a declared count N is the largest index
/// used. Sums "T(x_i) + ... + T(x_j)" expand term by term.
inline Poly parse_form_poly(std::string_view text, std::optional<std::size_t> nvars = std::nullopt) {
  auto toks = detail::tokenize(text);
  std::size_t n = nvars ? *nvars : std::max<std::size_t>(detail::max_form_index(toks), 1);
  return detail::Parser(std::move(toks), n, nullptr).parse_all();
}

inline SymmetricForm parse_form(std::string_view text, std::optional<std::size_t> nvars = std::nullopt) {
  return SymmetricForm::make(parse_form_poly(text, nvars));
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) out.push_back(part);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline unsigned parse_positive(const std::string& s, const std::string& what) {
  if (s.empty() || s.size() > 6 || !std::all_of(s.begin(), s.end(), ::isdigit) || std::stoul(s) == 0)
    throw usage_error("BadBuiltin", what + " must be a positive integer, got '" + s + "'");
  return static_cast<unsigned>(std::stoul(s));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw usage_error("FileNotFound", "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Poly JSON, or PowerSumExpr JSON with an extra "nvars".
inline Poly form_from_json(const Json& j) {
  if (j.is_object() && j.contains("gens")) {
    auto e = power_sum_expr_from_json(j);
    return e.expand(as_count(member(j, "nvars"), "nvars"));
  }
  return poly_from_json(j);
}

}  // namespace detail

/// Accepts the builtins "diagonal:n:N" and "powersum-product:k1,k2,...:N",
/// files given as "@path" or "*.json", and plain expressions in x1..xN.
inline Poly load_form_poly(const std::string& src, std::optional<std::size_t> nvars = std::nullopt) {
  if (src.rfind("diagonal:", 0) == 0) {
    auto parts = detail::split(src, ':');
    if (parts.size() != 3) throw usage_error("BadBuiltin", "expected diagonal:n:N");
    return generator(GenKind::p, detail::parse_positive(parts[1], "degree"),
                     detail::parse_positive(parts[2], "variable count"));
  }
  if (src.rfind("powersum-product:", 0) == 0) {
    auto parts = detail::split(src, ':');
    if (parts.size() != 3) throw usage_error("BadBuiltin", "expected powersum-product:k1,k2,...:N");
    std::size_t N = detail::parse_positive(parts[2], "variable count");
    Poly p = Poly::constant(N, 1);
    for (const auto& k : detail::split(parts[1], ','))
      p *= generator(GenKind::p, detail::parse_positive(k, "exponent"), N);
    return p;
  }
  bool is_file = !src.empty() && src[0] == '@';
  std::string path = is_file ? src.substr(1) : src;
  if (is_file || (path.size() > 5 && path.ends_with(".json"))) {
    std::string body = detail::read_file(path);
    if (path.ends_with(".json")) {
      Json j;
      try {
        j = Json::parse(body);
      } catch (const Json::parse_error& e) {
        throw usage_error("BadJson", path + ": " + e.what());
      }
      return detail::form_from_json(j);
    }
    return parse_form_poly(body, nvars);
  }
  return parse_form_poly(src, nvars);
}

inline SymmetricForm load_form(const std::string& src, std::optional<std::size_t> nvars = std::nullopt) {
  Poly p = load_form_poly(src, nvars);
  if (nvars && p.nvars() != *nvars)
    throw usage_error("VariableOutOfRange", "form has " + std::to_string(p.nvars()) +
                                                " variables, " + std::to_string(*nvars) + " declared");
  return SymmetricForm::make(std::move(p));
}

}  // namespace symdio
