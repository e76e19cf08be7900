#include "delaykit/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace delaykit {

struct Expression::Node {
  enum class Kind { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };

  Kind kind;
  double value = 0.0;
  int var = -1;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(std::span<const double> v) const {
    switch (kind) {
      case Kind::Number:
        return value;
      case Kind::Variable:
        return v[static_cast<std::size_t>(var)];
      case Kind::Add:
        return lhs->eval(v) + rhs->eval(v);
      case Kind::Sub:
        return lhs->eval(v) - rhs->eval(v);
      case Kind::Mul:
        return lhs->eval(v) * rhs->eval(v);
      case Kind::Div:
        return lhs->eval(v) / rhs->eval(v);
      case Kind::Pow:
        return std::pow(lhs->eval(v), rhs->eval(v));
      case Kind::Neg:
        return -lhs->eval(v);
      case Kind::Sin:
        return std::sin(lhs->eval(v));
      case Kind::Cos:
        return std::cos(lhs->eval(v));
      case Kind::Exp:
        return std::exp(lhs->eval(v));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

// hand-rolled recursive descent; positions are byte offsets for diagnostics
struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  std::span<const std::string> vars;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "expression error at position " << pos << ": " << what << " in \"" << text << "\"";
    throw std::invalid_argument(msg.str());
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  static NodePtr make(Node::Kind k, NodePtr l = nullptr, NodePtr r = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  static NodePtr number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->value = v;
    return n;
  }

  NodePtr parse_expr() {
    NodePtr n = parse_term();
    while (true) {
      if (eat('+')) {
        n = make(Node::Kind::Add, n, parse_term());
      } else if (eat('-')) {
        n = make(Node::Kind::Sub, n, parse_term());
      } else {
        return n;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr n = parse_factor();
    while (true) {
      if (eat('*')) {
        n = make(Node::Kind::Mul, n, parse_factor());
      } else if (eat('/')) {
        n = make(Node::Kind::Div, n, parse_factor());
      } else {
        return n;
      }
    }
  }

  NodePtr parse_factor() {
    NodePtr base = parse_unary();
    if (eat('^')) return make(Node::Kind::Pow, base, parse_factor());
    return base;
  }

  NodePtr parse_unary() {
    if (eat('-')) return make(Node::Kind::Neg, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_primary();
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    if (eat('(')) {
      NodePtr n = parse_expr();
      if (!eat(')')) fail("missing ')'");
      return n;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const char* begin = text.data() + pos;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos += static_cast<std::size_t>(end - begin);
    return number(v);
  }

  NodePtr parse_ident() {
    const std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
    }
    const std::string name(text.substr(start, pos - start));
    if (peek() == '(') {
      eat('(');
      NodePtr arg = parse_expr();
      if (!eat(')')) fail("missing ')' after " + name);
      if (name == "sin") return make(Node::Kind::Sin, arg);
      if (name == "cos") return make(Node::Kind::Cos, arg);
      if (name == "exp") return make(Node::Kind::Exp, arg);
      pos = start;
      fail("unknown function '" + name + "'");
    }
    if (name == "pi") return number(M_PI);
    if (name == "e") return number(M_E);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] == name) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Variable;
        n->var = static_cast<int>(i);
        return n;
      }
    }
    pos = start;
    fail("unknown identifier '" + name + "'");
  }
};

}  // namespace

Expression Expression::parse(std::string_view text, std::span<const std::string> variables) {
  Parser p{text, 0, variables};
  NodePtr root = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  Expression e;
  e.root_ = std::move(root);
  e.text_ = std::string(text);
  e.n_vars_ = variables.size();
  return e;
}

double Expression::operator()(std::span<const double> values) const {
  if (!root_) throw std::logic_error("Expression: empty");
  if (values.size() != n_vars_) throw std::invalid_argument("Expression: wrong argument count");
  return root_->eval(values);
}

}  // namespace delaykit
