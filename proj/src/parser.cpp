#include "vfkit/errors.hpp"
#include "vfkit/expr.hpp"

#include <cctype>
#include <string>

namespace vfkit {

namespace {

// Recursive descent over
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := base ("^" signed-integer)?
//   base   := rational | ident | "(" expr ")" | "-" factor | func "(" expr ")"
class Parser {
public:
  Parser(std::string_view text, int n) : text_(text), n_(n) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }

  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
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

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool peek_digit() const {
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  std::string digits() {
    std::size_t start = pos_;
    while (peek_digit()) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Expr expr() {
    Expr acc = term();
    for (;;) {
      if (accept('+')) acc = acc + term();
      else if (accept('-')) acc = acc - term();
      else return acc;
    }
  }

  Expr term() {
    Expr acc = factor();
    for (;;) {
      if (accept('*')) {
        acc = acc * factor();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expr d = factor();
        if (d.is_zero()) fail_at("division by zero", at);
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }

  Expr factor() {
    Expr b = base();
    if (accept('^')) {
      skip_ws();
      std::size_t at = pos_;
      bool neg = false;
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
        neg = text_[pos_] == '-';
        ++pos_;
      }
      if (!peek_digit()) fail_at("non-integer exponent", at);
      std::string d = digits();
      if (pos_ < text_.size() && text_[pos_] == '.')
        fail_at("non-integer exponent", at);
      if (d.size() > 6) fail_at("exponent too large", at);
      int k = std::stoi(d);
      if (neg) k = -k;
      if (k < 0 && b.is_zero()) fail_at("zero raised to a negative power", at);
      b = b.pow(k);
    }
    return b;
  }

  Expr number() {
    std::size_t at = pos_;
    std::string lit = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      lit += "." + digits();
    }
    try {
      return Expr::constant(parse_rational(lit));
    } catch (const std::invalid_argument&) {
      fail_at("malformed number", at);
    }
  }

  Expr base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t at = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string word(text_.substr(at, pos_ - at));
      if (word == "exp" || word == "bump" || word == "bumpp") {
        expect('(');
        Expr arg = expr();
        expect(')');
        if (word == "exp") return Expr::exp(arg);
        if (word == "bump") return Expr::bump(arg);
        return Expr::bumpp(arg);
      }
      if (word.size() >= 2 && word[0] == 'x' &&
          word.find_first_not_of("0123456789", 1) == std::string::npos && word[1] != '0') {
        if (word.size() > 7) fail_at("unknown variable '" + word + "'", at);
        int idx = std::stoi(word.substr(1));
        if (idx > n_) fail_at("unknown variable '" + word + "'", at);
        return Expr::variable(idx);
      }
      fail_at("unknown identifier '" + word + "'", at);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  int n_;
  std::size_t pos_ = 0;
};

} // namespace

Expr parse_expr(std::string_view text, int n) { return Parser(text, n).parse(); }

} // namespace vfkit
