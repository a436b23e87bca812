#include "stiffspec/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

namespace stiffspec {

namespace {

enum class Op {
  Const,
  Var,
  Add,
  Sub,
  Mul,
  Div,
  Pow,  // integer exponent in ipow
  Sin,
  Cos,
  Exp,
  Sqrt,
};

double ipow(double base, long long n) {
  if (n < 0) return 1.0 / ipow(base, -n);
  double acc = 1.0, b = base;
  while (n > 0) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  return acc;
}

}  // namespace

struct CoeffExpr::Node {
  Op op;
  double value = 0.0;     // Const
  long long exponent = 0; // Pow
  std::shared_ptr<const Node> lhs, rhs;

  double eval(double x) const {
    switch (op) {
      case Op::Const: return value;
      case Op::Var: return x;
      case Op::Add: return lhs->eval(x) + rhs->eval(x);
      case Op::Sub: return lhs->eval(x) - rhs->eval(x);
      case Op::Mul: return lhs->eval(x) * rhs->eval(x);
      case Op::Div: return lhs->eval(x) / rhs->eval(x);
      case Op::Pow: return ipow(lhs->eval(x), exponent);
      case Op::Sin: return std::sin(lhs->eval(x));
      case Op::Cos: return std::cos(lhs->eval(x));
      case Op::Exp: return std::exp(lhs->eval(x));
      case Op::Sqrt: return std::sqrt(lhs->eval(x));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const CoeffExpr::Node>;
using Node = CoeffExpr::Node;

NodePtr make(Op op, NodePtr l = nullptr, NodePtr r = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(pos_), pos_);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr acc = term();
    for (;;) {
      if (eat('+')) acc = make(Op::Add, acc, term());
      else if (eat('-')) acc = make(Op::Sub, acc, term());
      else return acc;
    }
  }

  NodePtr term() {
    NodePtr acc = factor();
    for (;;) {
      if (eat('*')) acc = make(Op::Mul, acc, factor());
      else if (eat('/')) acc = make(Op::Div, acc, factor());
      else return acc;
    }
  }

  NodePtr factor() {
    NodePtr b = base();
    if (eat('^')) {
      skip_ws();
      bool neg = false;
      if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
        neg = src_[pos_] == '-';
        ++pos_;
      }
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ == start) fail("expected integer exponent after '^'");
      long long e = std::strtoll(std::string(src_.substr(start, pos_ - start)).c_str(), nullptr, 10);
      auto n = std::make_shared<Node>();
      n->op = Op::Pow;
      n->exponent = neg ? -e : e;
      n->lhs = b;
      return n;
    }
    return b;
  }

  NodePtr base() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];

    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    // Unary minus is admitted as 0 - base for convenience ("-x" etc.).
    if (c == '-') {
      ++pos_;
      return make(Op::Sub, make_const(0.0), base());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make_const(v);
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string_view name = src_.substr(start, pos_ - start);
    if (name == "x") return make(Op::Var);
    if (name == "pi") return make_const(M_PI);
    if (name == "e") return make_const(M_E);

    Op op;
    if (name == "sin") op = Op::Sin;
    else if (name == "cos") op = Op::Cos;
    else if (name == "exp") op = Op::Exp;
    else if (name == "sqrt") op = Op::Sqrt;
    else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    if (!eat('(')) fail("expected '(' after function name");
    NodePtr arg = expr();
    if (!eat(')')) fail("expected ')'");
    return make(op, arg);
  }
};

std::string print_node(const Node& n) {
  char buf[40];
  switch (n.op) {
    case Op::Const:
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      return buf;
    case Op::Var: return "x";
    case Op::Add: return "(" + print_node(*n.lhs) + "+" + print_node(*n.rhs) + ")";
    case Op::Sub: return "(" + print_node(*n.lhs) + "-" + print_node(*n.rhs) + ")";
    case Op::Mul: return "(" + print_node(*n.lhs) + "*" + print_node(*n.rhs) + ")";
    case Op::Div: return "(" + print_node(*n.lhs) + "/" + print_node(*n.rhs) + ")";
    case Op::Pow:
      std::snprintf(buf, sizeof buf, "%lld", n.exponent);
      return "(" + print_node(*n.lhs) + "^" + buf + ")";
    case Op::Sin: return "sin(" + print_node(*n.lhs) + ")";
    case Op::Cos: return "cos(" + print_node(*n.lhs) + ")";
    case Op::Exp: return "exp(" + print_node(*n.lhs) + ")";
    case Op::Sqrt: return "sqrt(" + print_node(*n.lhs) + ")";
  }
  return {};
}

// Walks the tree at a fixed x and records problems with partial results.
// `grid_check` handles the sign-change screening over consecutive samples.
void collect_guards(const Node& n, std::vector<const Node*>& divisors,
                    std::vector<const Node*>& sqrt_args) {
  if (n.op == Op::Div) divisors.push_back(n.rhs.get());
  if (n.op == Op::Sqrt) sqrt_args.push_back(n.lhs.get());
  // A negative power is a division; its base gets the same screening.
  if (n.op == Op::Pow && n.exponent < 0) divisors.push_back(n.lhs.get());
  if (n.lhs) collect_guards(*n.lhs, divisors, sqrt_args);
  if (n.rhs) collect_guards(*n.rhs, divisors, sqrt_args);
}

}  // namespace

CoeffExpr CoeffExpr::parse(std::string_view source) {
  Parser p(source);
  CoeffExpr e;
  e.root_ = p.run();
  e.source_ = std::string(source);
  return e;
}

double CoeffExpr::operator()(double x) const { return root_->eval(x); }

std::string CoeffExpr::canonical() const { return print_node(*root_); }

std::optional<std::string> CoeffExpr::domain_issue(double lo, double hi,
                                                   int samples) const {
  std::vector<const Node*> divisors, sqrt_args;
  collect_guards(*root_, divisors, sqrt_args);

  auto fmt_at = [](const char* what, double x) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s near x=%.6g", what, x);
    return std::string(buf);
  };

  std::vector<double> prev_div(divisors.size(), 0.0);
  const int n = samples < 2 ? 2 : samples;
  for (int i = 0; i < n; ++i) {
    double x = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    for (std::size_t d = 0; d < divisors.size(); ++d) {
      double den = divisors[d]->eval(x);
      if (den == 0.0 || !std::isfinite(den))
        return fmt_at("division by zero", x);
      if (i > 0 && std::signbit(den) != std::signbit(prev_div[d]))
        return fmt_at("division by zero (denominator changes sign)", x);
      prev_div[d] = den;
    }
    for (const Node* s : sqrt_args) {
      if (s->eval(x) <= 0.0) return fmt_at("sqrt of a non-positive argument", x);
    }
    double v = root_->eval(x);
    if (!std::isfinite(v)) return fmt_at("non-finite value", x);
  }
  return std::nullopt;
}

}  // namespace stiffspec
