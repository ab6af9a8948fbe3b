#include "ktcy/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "ktcy/errors.hpp"

namespace ktcy::expression {

enum class Kind { number, variable, add, sub, mul, div, neg, sin, cos, exp, log };

struct Node {
  Kind kind;
  double value = 0.0;  // number
  int axis = 0;        // variable: 0 x, 1 y, 2 t
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::number;
  n->value = v;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr(false);
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "expression \"" << s_ << "\", position " << pos_ << ": " << what;
    throw ParseError(msg.str());
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr(bool in_trig) {
    NodePtr left = term(in_trig);
    for (;;) {
      if (accept('+'))
        left = make(Kind::add, left, term(in_trig));
      else if (accept('-'))
        left = make(Kind::sub, left, term(in_trig));
      else
        return left;
    }
  }

  NodePtr term(bool in_trig) {
    NodePtr left = unary(in_trig);
    for (;;) {
      if (accept('*'))
        left = make(Kind::mul, left, unary(in_trig));
      else if (accept('/'))
        left = make(Kind::div, left, unary(in_trig));
      else
        return left;
    }
  }

  NodePtr unary(bool in_trig) {
    if (accept('-')) return make(Kind::neg, unary(in_trig));
    if (accept('+')) return unary(in_trig);
    return primary(in_trig);
  }

  NodePtr primary(bool in_trig) {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      NodePtr e = expr(in_trig);
      expect(')');
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const auto [end, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
      if (ec != std::errc()) fail("malformed number");
      pos_ = static_cast<std::size_t>(end - s_.data());
      return number(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string word = s_.substr(start, pos_ - start);
      if (word == "pi") return number(std::numbers::pi);
      if (word == "x" || word == "y" || word == "t") {
        if (!in_trig) {
          pos_ = start;
          fail("variable " + word + " may only appear inside sin or cos");
        }
        auto n = std::make_shared<Node>();
        n->kind = Kind::variable;
        n->axis = word == "x" ? 0 : word == "y" ? 1 : 2;
        return n;
      }
      Kind k;
      if (word == "sin")
        k = Kind::sin;
      else if (word == "cos")
        k = Kind::cos;
      else if (word == "exp")
        k = Kind::exp;
      else if (word == "log")
        k = Kind::log;
      else {
        pos_ = start;
        fail("unknown name '" + word + "'");
      }
      expect('(');
      const bool trig = k == Kind::sin || k == Kind::cos;
      NodePtr arg = expr(trig);
      expect(')');
      if (trig && !affine(*arg)) fail("argument of " + word + " is not affine in x, y, t");
      return make(k, arg);
    }
    fail(std::string("unexpected '") + c + "'");
  }

 public:
  struct Affine {
    double c0 = 0.0;
    std::array<double, 3> c{};
  };

  static std::optional<Affine> affine(const Node& n) {
    switch (n.kind) {
      case Kind::number:
        return Affine{n.value, {}};
      case Kind::variable: {
        Affine a;
        a.c[n.axis] = 1.0;
        return a;
      }
      case Kind::neg: {
        auto a = affine(*n.a);
        if (!a) return std::nullopt;
        a->c0 = -a->c0;
        for (double& v : a->c) v = -v;
        return a;
      }
      case Kind::add:
      case Kind::sub: {
        auto a = affine(*n.a), b = affine(*n.b);
        if (!a || !b) return std::nullopt;
        const double sign = n.kind == Kind::add ? 1.0 : -1.0;
        a->c0 += sign * b->c0;
        for (int i = 0; i < 3; ++i) a->c[i] += sign * b->c[i];
        return a;
      }
      case Kind::mul: {
        auto a = affine(*n.a), b = affine(*n.b);
        if (!a || !b) return std::nullopt;
        const bool a_const = a->c == std::array<double, 3>{}, b_const = b->c == std::array<double, 3>{};
        if (!a_const && !b_const) return std::nullopt;
        if (a_const) std::swap(a, b);
        for (double& v : a->c) v *= b->c0;
        a->c0 *= b->c0;
        return a;
      }
      case Kind::div: {
        auto a = affine(*n.a), b = affine(*n.b);
        if (!a || !b || b->c != std::array<double, 3>{}) return std::nullopt;
        for (double& v : a->c) v /= b->c0;
        a->c0 /= b->c0;
        return a;
      }
      default: {
        // Functions of constants are constants.
        if (n.a && !contains_variable(*n.a)) return Affine{eval(n, 0, 0, 0), {}};
        return std::nullopt;
      }
    }
  }

  static bool contains_variable(const Node& n) {
    if (n.kind == Kind::variable) return true;
    return (n.a && contains_variable(*n.a)) || (n.b && contains_variable(*n.b));
  }

  static double eval(const Node& n, double x, double y, double t) {
    switch (n.kind) {
      case Kind::number: return n.value;
      case Kind::variable: return n.axis == 0 ? x : n.axis == 1 ? y : t;
      case Kind::add: return eval(*n.a, x, y, t) + eval(*n.b, x, y, t);
      case Kind::sub: return eval(*n.a, x, y, t) - eval(*n.b, x, y, t);
      case Kind::mul: return eval(*n.a, x, y, t) * eval(*n.b, x, y, t);
      case Kind::div: return eval(*n.a, x, y, t) / eval(*n.b, x, y, t);
      case Kind::neg: return -eval(*n.a, x, y, t);
      case Kind::sin: return std::sin(eval(*n.a, x, y, t));
      case Kind::cos: return std::cos(eval(*n.a, x, y, t));
      case Kind::exp: return std::exp(eval(*n.a, x, y, t));
      case Kind::log: return std::log(eval(*n.a, x, y, t));
    }
    return 0.0;
  }

  static void check_periodic(const Node& n, const GridSpec& g, const std::string& text) {
    if (n.kind == Kind::sin || n.kind == Kind::cos) {
      const Affine a = *affine(*n.a);
      for (int i = 0; i < 3; ++i) {
        const double turns = a.c[i] * g.period(static_cast<Axis>(i)) / (2.0 * std::numbers::pi);
        if (std::fabs(turns - std::round(turns)) > 1e-9 * std::max(1.0, std::fabs(turns))) {
          std::ostringstream msg;
          msg << "expression \"" << text << "\": a trig argument has " << turns << " periods along "
              << "xyt"[i] << " on " << g.describe() << "; it must be an integer";
          throw ParseError(msg.str());
        }
      }
    }
    if (n.a) check_periodic(*n.a, g, text);
    if (n.b) check_periodic(*n.b, g, text);
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

double Expression::evaluate(double x, double y, double t) const { return Parser::eval(*root_, x, y, t); }

ScalarField Expression::sample(const GridSpec& grid) const {
  Parser::check_periodic(*root_, grid, text_);
  const Node& root = *root_;
  return ktcy::sample([&root](double x, double y, double t) { return Parser::eval(root, x, y, t); }, grid);
}

}  // namespace ktcy::expression
