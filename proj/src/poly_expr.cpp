#include "sphstab/poly_expr.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "sphstab/errors.hpp"

namespace sphstab {

namespace {

using Poly = std::vector<double>;

Poly add(Poly a, const Poly& b, double sign) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t k = 0; k < b.size(); ++k) a[k] += sign * b[k];
  return a;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

class Parser {
 public:
  Parser(const std::string& text, double s) : text_(text), s_(s) {}

  Poly parse() {
    Poly p = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    while (p.size() > 1 && p.back() == 0.0) p.pop_back();
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("polynomial '" + text_ + "': " + what + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly expr() {
    Poly p = term();
    while (true) {
      if (eat('+')) p = add(p, term(), 1.0);
      else if (eat('-')) p = add(p, term(), -1.0);
      else return p;
    }
  }

  Poly term() {
    Poly p = factor();
    while (eat('*')) p = mul(p, factor());
    return p;
  }

  Poly factor() {
    if (eat('-')) return add(Poly{0.0}, factor(), -1.0);
    if (eat('+')) return factor();
    Poly base = primary();
    if (eat('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected an integer exponent");
      const int e = std::atoi(text_.substr(start, pos_ - start).c_str());
      if (e > 32) fail("exponent too large");
      Poly r{1.0};
      for (int k = 0; k < e; ++k) r = mul(r, base);
      return r;
    }
    return base;
  }

  Poly primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (c == 't') {
      ++pos_;
      return {0.0, 1.0};
    }
    if (c == 's') {
      ++pos_;
      return {s_};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return {v};
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string text_;
  double s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<double> parse_polynomial(const std::string& text, double s) { return Parser(text, s).parse(); }

}  // namespace sphstab
