#include "tightlag/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace tightlag {

namespace {

enum class Op { kNumber, kPi, kU, kV, kAdd, kSub, kMul, kDiv, kPow, kNeg,
                kSin, kCos, kTan, kSqrt, kExp, kLog };

}  // namespace

struct Expression::Node {
  Op op;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_node(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->value = value;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression parse error at position " + std::to_string(pos_) +
                                " in '" + text_ + "': " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+')) lhs = make_node(Op::kAdd, lhs, term());
      else if (eat('-')) lhs = make_node(Op::kSub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (eat('*')) lhs = make_node(Op::kMul, lhs, factor());
      else if (eat('/')) lhs = make_node(Op::kDiv, lhs, factor());
      else return lhs;
    }
  }

  NodePtr factor() {
    if (eat('-')) return make_node(Op::kNeg, factor());
    if (eat('+')) return factor();
    NodePtr base = primary();
    if (eat('^')) return make_node(Op::kPow, base, factor());  // right-associative
    return base;
  }

  NodePtr primary() {
    skip_ws();
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    fail("expected number, identifier or '('");
  }

  NodePtr number() {
    const char* start = text_.c_str() + pos_;
    char* end = nullptr;
    const double value = std::strtod(start, &end);
    if (end == start) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - start);
    return make_node(Op::kNumber, nullptr, nullptr, value);
  }

  NodePtr identifier() {
    const std::size_t begin = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name = text_.substr(begin, pos_ - begin);
    if (name == "u") return make_node(Op::kU);
    if (name == "v") return make_node(Op::kV);
    if (name == "pi") return make_node(Op::kPi);
    Op op;
    if (name == "sin") op = Op::kSin;
    else if (name == "cos") op = Op::kCos;
    else if (name == "tan") op = Op::kTan;
    else if (name == "sqrt") op = Op::kSqrt;
    else if (name == "exp") op = Op::kExp;
    else if (name == "log") op = Op::kLog;
    else fail("unknown identifier '" + name + "'");
    if (!eat('(')) fail("expected '(' after function name");
    NodePtr arg = expr();
    if (!eat(')')) fail("missing ')'");
    return make_node(op, arg);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

template <typename T>
T eval_node(const Expression::Node& n, T u, T v) {
  using std::cos; using std::exp; using std::log; using std::pow;
  using std::sin; using std::sqrt; using std::tan;
  switch (n.op) {
    case Op::kNumber: return T(n.value);
    case Op::kPi: return T(3.14159265358979323846);
    case Op::kU: return u;
    case Op::kV: return v;
    case Op::kAdd: return eval_node(*n.lhs, u, v) + eval_node(*n.rhs, u, v);
    case Op::kSub: return eval_node(*n.lhs, u, v) - eval_node(*n.rhs, u, v);
    case Op::kMul: return eval_node(*n.lhs, u, v) * eval_node(*n.rhs, u, v);
    case Op::kDiv: return eval_node(*n.lhs, u, v) / eval_node(*n.rhs, u, v);
    case Op::kPow: {
      // Literal integer exponents use repeated multiplication, which keeps
      // x^n analytic for negative x (complex pow would branch-cut there).
      const T base = eval_node(*n.lhs, u, v);
      if (n.rhs->op == Op::kNumber) {
        const double e = n.rhs->value;
        const double r = std::round(e);
        if (std::abs(e - r) < 1e-12 && std::abs(r) <= 64.0) {
          long k = static_cast<long>(r);
          const bool invert = k < 0;
          if (invert) k = -k;
          T acc(1.0);
          while (k-- > 0) acc = acc * base;
          return invert ? T(1.0) / acc : acc;
        }
      }
      return pow(base, eval_node(*n.rhs, u, v));
    }
    case Op::kNeg: return -eval_node(*n.lhs, u, v);
    case Op::kSin: return sin(eval_node(*n.lhs, u, v));
    case Op::kCos: return cos(eval_node(*n.lhs, u, v));
    case Op::kTan: return tan(eval_node(*n.lhs, u, v));
    case Op::kSqrt: return sqrt(eval_node(*n.lhs, u, v));
    case Op::kExp: return exp(eval_node(*n.lhs, u, v));
    case Op::kLog: return log(eval_node(*n.lhs, u, v));
  }
  throw std::logic_error("expression: unreachable op");
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.text_ = text;
  return e;
}

double Expression::eval(double u, double v) const { return eval_node(*root_, u, v); }

std::complex<double> Expression::eval(std::complex<double> u, std::complex<double> v) const {
  return eval_node(*root_, u, v);
}

double Expression::du(double u, double v) const {
  constexpr double h = 1e-100;
  return eval(std::complex<double>(u, h), std::complex<double>(v, 0.0)).imag() / h;
}

double Expression::dv(double u, double v) const {
  constexpr double h = 1e-100;
  return eval(std::complex<double>(u, 0.0), std::complex<double>(v, h)).imag() / h;
}

}  // namespace tightlag
