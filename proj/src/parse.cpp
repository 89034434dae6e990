// Recursive-descent parser for the Hamiltonian grammar:
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?          exponent must fold to an integer
//   atom   := number | 'pi' | var | fn '(' expr ')' | '(' expr ')'
//
// Power binds tighter than unary minus, so "-x1^2" is -(x1^2), and the
// exponent itself may be a power, which makes '^' right-associative.

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "crint/errors.hpp"
#include "crint/expr.hpp"

namespace crint {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) {
      fail(ParseError::Kind::syntax, pos_,
           std::string("unexpected character '") + text_[pos_] + "'");
    }
    return e;
  }

 private:
  [[noreturn]] void fail(ParseError::Kind kind, std::size_t at, const std::string& what) const {
    throw ParseError(kind, at, what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(ParseError::Kind::syntax, pos_,
           std::string("expected '") + c + "'" +
               (pos_ < text_.size() ? std::string(" before '") + text_[pos_] + "'"
                                    : std::string(" at end of input")));
    }
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
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

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * parse_unary();
      } else if (accept('/')) {
        lhs = lhs / parse_unary();
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t at = pos_;
    const Expr exponent = simplify(parse_unary());
    if (exponent.kind() != Expr::Kind::constant) {
      fail(ParseError::Kind::non_integer_exponent, at, "exponent is not an integer constant");
    }
    const double n = exponent.value();
    if (n != std::trunc(n) || std::fabs(n) > std::numeric_limits<int>::max()) {
      fail(ParseError::Kind::non_integer_exponent, at, "non-integer exponent");
    }
    return pow(base, static_cast<int>(n));
  }

  Expr parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail(ParseError::Kind::syntax, pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail(ParseError::Kind::syntax, pos_, std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digit_at = [&](std::size_t i) {
      return i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]));
    };
    while (digit_at(pos_)) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (digit_at(pos_)) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t i = pos_ + 1;
      if (i < text_.size() && (text_[i] == '+' || text_[i] == '-')) ++i;
      if (digit_at(i)) {
        pos_ = i;
        while (digit_at(pos_)) ++pos_;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      fail(ParseError::Kind::syntax, start, "malformed number '" + std::string(first, last) + "'");
    }
    return Expr::constant(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view id = text_.substr(start, pos_ - start);
    if (id == "pi") return Expr::constant(std::numbers::pi);
    for (Var v : kAllVars) {
      if (id == name(v)) return Expr::variable(v);
    }
    for (UnaryFn fn : {UnaryFn::sin, UnaryFn::cos, UnaryFn::exp, UnaryFn::ln, UnaryFn::sinh,
                       UnaryFn::cosh}) {
      if (id == name(fn)) {
        expect('(');
        Expr arg = parse_expr();
        expect(')');
        return Expr::unary(fn, std::move(arg));
      }
    }
    fail(ParseError::Kind::unknown_identifier, start,
         "unknown identifier '" + std::string(id) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace crint
