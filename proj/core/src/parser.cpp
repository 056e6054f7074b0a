// Recursive-descent parser for the expression grammar documented in expr.hpp.

#include <cctype>
#include <charconv>
#include <numbers>

#include "formcalc/error.hpp"
#include "formcalc/expr.hpp"

namespace formcalc {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) {
      fail("unexpected '" + std::string(1, text_[pos_]) + "'",
           {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    }
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) {
    std::string msg = "syntax error at offset " + std::to_string(pos_) + ": " + what;
    if (!expected.empty()) {
      msg += "; expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) msg += ", ";
        msg += expected[i];
      }
    }
    throw ParseError(msg, pos_, std::move(expected));
  }

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

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) return pow(base, unary());
    return base;
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= text_.size()) {
      fail("unexpected end of input", {"number", "identifier", "'('", "'-'"});
    }
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      if (!accept(')')) fail("unbalanced parenthesis", {"')'"});
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'", {"number", "identifier", "'('", "'-'"});
  }

  Expr number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("malformed number", {"digit"});
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent", {"digit"});
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("number out of range", {});
    }
    return Expr::constant(v);
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string name(text_.substr(start, pos_ - start));
    std::size_t after_name = pos_;
    if (accept('(')) {
      auto fn = func_from_name(name);
      if (!fn) {
        pos_ = start;
        fail("unknown function '" + name + "'", {"sqrt", "sin", "cos", "tan", "exp", "ln"});
      }
      Expr arg = expr();
      if (!accept(')')) fail("unbalanced parenthesis", {"')'"});
      return Expr::call(*fn, arg);
    }
    pos_ = after_name;
    if (name == "pi") return Expr::constant(std::numbers::pi);
    if (func_from_name(name)) {
      fail("function '" + name + "' requires a parenthesized argument", {"'('"});
    }
    return Expr::variable(name);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

}  // namespace formcalc
