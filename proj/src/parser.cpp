// Recursive-descent parser for the expression grammar:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' integer)?
//   primary := number ['i'] | 'i' | 'z' | '(' expr ')'
//            | 'exp' '(' expr ')'
//            | 'moebius' '(' expr ';' expr ')'        first argument constant, |a| < 1
//            | 'cover_pdisc' '(' expr ')'
//            | 'cover_annulus' '(' expr ';' expr ')'  first argument real constant in (0, 1)

#include "hahn/holo_expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

namespace hahn {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  HoloExpr parse_all() {
    HoloExpr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(pos_, "unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      throw ParseError(pos_, std::string("expected '") + c + "'");
    }
  }

  HoloExpr parse_expr() {
    HoloExpr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + parse_term();
      } else if (accept('-')) {
        lhs = lhs - parse_term();
      } else {
        return lhs;
      }
    }
  }

  HoloExpr parse_term() {
    HoloExpr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * parse_unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        HoloExpr rhs = parse_unary();
        try {
          lhs = lhs / rhs;
        } catch (const Error& e) {
          throw ParseError(at, e.what());
        }
      } else {
        return lhs;
      }
    }
  }

  HoloExpr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  HoloExpr parse_power() {
    HoloExpr base = parse_primary();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) throw ParseError(start, "expected a non-negative integer exponent");
      int k = 0;
      const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, k);
      if (ec != std::errc()) throw ParseError(start, "exponent out of range");
      return expr::pow(base, k);
    }
    return base;
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  Complex constant_of(const HoloExpr& e, std::size_t at, const char* what) {
    if (!e.is_constant()) throw ParseError(at, std::string(what) + " must be a constant");
    return e.value(Complex(0));
  }

  HoloExpr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string literal(text_.substr(start, pos_ - start));
    char* end = nullptr;
    const double value = std::strtod(literal.c_str(), &end);
    if (end != literal.c_str() + literal.size()) throw ParseError(start, "malformed number '" + literal + "'");
    if (pos_ < text_.size() && text_[pos_] == 'i') {
      const std::size_t next = pos_ + 1;
      if (next < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[next])) || text_[next] == '_')) {
        throw ParseError(pos_, "malformed imaginary literal");
      }
      ++pos_;
      return HoloExpr::constant({0.0, value});
    }
    return HoloExpr::constant({value, 0.0});
  }

  HoloExpr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(pos_, "unexpected end of input");
    const char ch = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return parse_number();
    if (ch == '(') {
      ++pos_;
      HoloExpr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (!std::isalpha(static_cast<unsigned char>(ch))) {
      throw ParseError(pos_, "unexpected '" + std::string(1, ch) + "'");
    }
    const std::size_t at = pos_;
    const std::string name = identifier();
    if (name == "z") return expr::z();
    if (name == "i") return HoloExpr::constant({0.0, 1.0});
    try {
      if (name == "exp") {
        expect('(');
        HoloExpr arg = parse_expr();
        expect(')');
        return expr::exp(arg);
      }
      if (name == "cover_pdisc") {
        expect('(');
        HoloExpr arg = parse_expr();
        expect(')');
        return expr::cover_pdisc(arg);
      }
      if (name == "moebius" || name == "cover_annulus") {
        expect('(');
        skip_ws();
        const std::size_t param_at = pos_;
        const Complex param = constant_of(parse_expr(), param_at, "first argument");
        expect(';');
        HoloExpr arg = parse_expr();
        expect(')');
        if (name == "moebius") return expr::moebius(param, arg);
        if (param.imag() != 0) throw ParseError(param_at, "annulus radius must be real");
        return expr::cover_annulus(param.real(), arg);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(at, e.what());
    }
    throw ParseError(at, "unknown identifier '" + name + "'");
  }
};

}  // namespace

HoloExpr parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace hahn
