#include "formcalc/parse.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "formcalc/error.hpp"

namespace formcalc {
namespace {

enum class Tok { Number, Ident, LParen, RParen, Plus, Minus, Star, Slash, Caret, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const int tl = line, tc = col;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      bool dot = false;
      while (j < s.size() &&
             (std::isdigit(static_cast<unsigned char>(s[j])) || (s[j] == '.' && !dot))) {
        if (s[j] == '.') dot = true;
        ++j;
      }
      std::string text(s.substr(i, j - i));
      if (text == ".") throw ParseError("malformed number", tl, tc);
      advance(j - i);
      out.push_back({Tok::Number, std::move(text), tl, tc});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      std::string text(s.substr(i, j - i));
      advance(j - i);
      out.push_back({Tok::Ident, std::move(text), tl, tc});
      continue;
    }
    Tok k;
    switch (c) {
      case '(':
        k = Tok::LParen;
        break;
      case ')':
        k = Tok::RParen;
        break;
      case '+':
        k = Tok::Plus;
        break;
      case '-':
        k = Tok::Minus;
        break;
      case '*':
        k = Tok::Star;
        break;
      case '/':
        k = Tok::Slash;
        break;
      case '^':
        k = Tok::Caret;
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
    }
    advance(1);
    out.push_back({k, std::string(1, c), tl, tc});
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

Rational parse_number(const Token& t) {
  const auto dot = t.text.find('.');
  if (dot == std::string::npos) return Rational(mpz_class(t.text, 10));
  std::string digits = t.text.substr(0, dot) + t.text.substr(dot + 1);
  if (digits.empty()) throw ParseError("malformed number", t.line, t.column);
  mpz_class num(digits, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, t.text.size() - dot - 1);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::optional<Func> function_named(std::string_view name) {
  if (name == "sin") return Func::Sin;
  if (name == "cos") return Func::Cos;
  if (name == "exp") return Func::Exp;
  if (name == "log") return Func::Log;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().column);
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }

  Expr sum() {
    std::vector<Expr> terms{product()};
    while (true) {
      if (accept(Tok::Plus)) {
        terms.push_back(product());
      } else if (accept(Tok::Minus)) {
        terms.push_back(-product());
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms.front() : Expr::sum(std::move(terms));
  }

  Expr product() {
    Expr acc = unary();
    while (true) {
      if (accept(Tok::Star)) {
        acc = acc * unary();
      } else if (peek().kind == Tok::Slash) {
        const Token& slash = next();
        Expr d = unary();
        if (d.is_literal_zero())
          throw ParseError("division by literal zero", slash.line, slash.column);
        acc = acc / d;
      } else {
        break;
      }
    }
    return acc;
  }

  Expr unary() {
    if (accept(Tok::Minus)) return -unary();
    if (accept(Tok::Plus)) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (peek().kind != Tok::Caret) return base;
    const Token& caret = next();
    Expr e = simplify(unary());
    if (!e.is_const() || e.value().get_den() != 1 ||
        !e.value().get_num().fits_slong_p())
      throw ParseError("exponent must be an integer constant", caret.line,
                       caret.column);
    return Expr::power(base, e.value().get_num().get_si());
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        ++pos_;
        return Expr(parse_number(t));
      case Tok::Ident: {
        ++pos_;
        if (auto f = function_named(t.text)) {
          expect(Tok::LParen, "'(' after function name");
          Expr arg = sum();
          expect(Tok::RParen, "')'");
          return Expr::apply(*f, arg);
        }
        if (peek().kind == Tok::LParen)
          throw ParseError("unknown function '" + t.text + "'", t.line, t.column);
        return Expr::var(t.text);
      }
      case Tok::LParen: {
        ++pos_;
        Expr e = sum();
        expect(Tok::RParen, "')'");
        return e;
      }
      default:
        fail("expected an expression");
    }
  }

  // ---- forms

  /// Reads one `dIDENT` / `d IDENT` basis element; nullopt when the next
  /// token does not start one.
  std::optional<int> basis_element(const Coords& coords) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || t.text.empty() || t.text[0] != 'd')
      return std::nullopt;
    std::string name;
    if (t.text == "d") {
      ++pos_;
      if (peek().kind != Tok::Ident) fail("expected coordinate after 'd'");
      name = next().text;
    } else {
      name = t.text.substr(1);
      ++pos_;
    }
    auto it = std::find(coords.begin(), coords.end(), name);
    if (it == coords.end())
      throw ParseError("unknown coordinate '" + name + "'", t.line, t.column);
    return static_cast<int>(it - coords.begin());
  }

  Form::RawTerm form_term(const Coords& coords) {
    Expr coef(1L);
    bool have_coef = false;
    if (accept(Tok::LParen)) {
      coef = sum();
      expect(Tok::RParen, "')'");
      have_coef = true;
    } else if (peek().kind == Tok::Number) {
      coef = Expr(parse_number(next()));
      have_coef = true;
    }
    std::vector<int> idx;
    if (auto first = basis_element(coords)) {
      idx.push_back(*first);
      while (accept(Tok::Caret)) {
        auto more = basis_element(coords);
        if (!more) fail("expected basis element after '^'");
        idx.push_back(*more);
      }
    } else if (!have_coef) {
      fail("expected a coefficient '(expr)' or a basis element");
    }
    return {std::move(idx), coef};
  }

  Form form(const Coords& coords) {
    std::vector<Form::RawTerm> terms;
    bool negative = false;
    if (accept(Tok::Minus)) {
      negative = true;
    } else {
      accept(Tok::Plus);
    }
    std::optional<int> degree;
    while (true) {
      const Token start = peek();
      auto t = form_term(coords);
      if (negative) t.second = -t.second;
      const int p = static_cast<int>(t.first.size());
      if (degree && *degree != p)
        throw ParseError("term degree differs from earlier terms", start.line,
                         start.column);
      degree = p;
      terms.push_back(std::move(t));
      if (accept(Tok::Plus)) {
        negative = false;
      } else if (accept(Tok::Minus)) {
        negative = true;
      } else {
        break;
      }
    }
    if (peek().kind != Tok::End) fail("unexpected trailing input");
    return Form::from_terms(coords, *degree, std::move(terms));
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) {
  Parser p(text);
  Expr e = p.sum();
  if (p.peek().kind != Tok::End) p.fail("unexpected trailing input");
  return e;
}

Form parse_form(std::string_view text, const Coords& coords) {
  Parser p(text);
  return p.form(coords);
}

}  // namespace formcalc
