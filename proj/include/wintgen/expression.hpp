#pragma once

/**
 * @file expression.hpp
 * @brief Arithmetic expressions in named chart variables, evaluated on jets.
 *
 * Grammar: sums and products of numbers, variables, pi, parenthesized terms,
 * unary minus, right-associative ^ and the functions sin, cos, exp, log, sqrt.
 */

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "wintgen/errors.hpp"
#include "wintgen/jet.hpp"

namespace wintgen {

class Expression {
 public:
  Expression() = default;

  static Expression parse(const std::string& text, const std::vector<std::string>& vars) {
    Parser p{text, vars, 0};
    Expression e;
    e.root_ = p.sum();
    p.skip();
    if (p.pos != text.size()) p.error("unexpected trailing input");
    return e;
  }

  /// Evaluates on jets; every jet must share dim and order.
  Jet eval(const JetVector& x) const {
    if (!root_) fail(ErrorKind::InvalidInput, "empty expression");
    return root_->eval(x);
  }

  double eval(const std::vector<double>& x) const {
    JetVector v;
    for (double xi : x) v.push_back(Jet(0, 0, xi));
    return eval(v).value();
  }

 private:
  enum class Op { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Log, Sqrt };

  struct Node {
    Op op = Op::Num;
    double num = 0.0;
    int var = 0;
    std::shared_ptr<Node> a, b;

    Jet eval(const JetVector& x) const {
      const int dim = x.empty() ? 0 : x[0].dim();
      const int order = x.empty() ? 0 : x[0].order();
      switch (op) {
        case Op::Num: return Jet(dim, order, num);
        case Op::Var: return x.at(var);
        case Op::Add: return a->eval(x) + b->eval(x);
        case Op::Sub: return a->eval(x) - b->eval(x);
        case Op::Mul: return a->eval(x) * b->eval(x);
        case Op::Div: return a->eval(x) / b->eval(x);
        case Op::Neg: return -a->eval(x);
        case Op::Sin: return sin(a->eval(x));
        case Op::Cos: return cos(a->eval(x));
        case Op::Exp: return exp(a->eval(x));
        case Op::Log: return log(a->eval(x));
        case Op::Sqrt: return sqrt(a->eval(x));
        case Op::Pow: {
          const Jet base = a->eval(x);
          if (b->op == Op::Num) {
            const double p = b->num;
            if (p == std::round(p) && std::abs(p) <= 64) return ipow(base, static_cast<int>(p));
            return pow(base, p);
          }
          return exp(b->eval(x) * log(base));
        }
      }
      return Jet(dim, order, 0.0);
    }
  };
  using NodePtr = std::shared_ptr<Node>;

  struct Parser {
    const std::string& s;
    const std::vector<std::string>& vars;
    std::size_t pos;

    [[noreturn]] void error(const std::string& what) const {
      fail(ErrorKind::InvalidInput, "expression '" + s + "' at " + std::to_string(pos) + ": " + what);
    }
    void skip() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
      skip();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    static NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
      auto n = std::make_shared<Node>();
      n->op = op;
      n->a = std::move(a);
      n->b = std::move(b);
      return n;
    }

    NodePtr sum() {
      NodePtr left = product();
      for (;;) {
        if (eat('+')) left = make(Op::Add, left, product());
        else if (eat('-')) left = make(Op::Sub, left, product());
        else return left;
      }
    }
    NodePtr product() {
      NodePtr left = unary();
      for (;;) {
        if (eat('*')) left = make(Op::Mul, left, unary());
        else if (eat('/')) left = make(Op::Div, left, unary());
        else return left;
      }
    }
    NodePtr unary() {
      if (eat('-')) return make(Op::Neg, unary());
      if (eat('+')) return unary();
      return power();
    }
    NodePtr power() {
      NodePtr base = atom();
      if (eat('^')) {
        NodePtr ex = unary();
        // constant exponents are folded so integer powers stay polynomial
        if (ex->op == Op::Neg && ex->a->op == Op::Num) {
          ex->num = -ex->a->num;
          ex->op = Op::Num;
          ex->a = nullptr;
        }
        return make(Op::Pow, base, ex);
      }
      return base;
    }
    NodePtr atom() {
      skip();
      if (pos >= s.size()) error("unexpected end");
      const char c = s[pos];
      if (eat('(')) {
        NodePtr inner = sum();
        if (!eat(')')) error("missing ')'");
        return inner;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::size_t used = 0;
        auto n = make(Op::Num);
        try {
          n->num = std::stod(s.substr(pos), &used);
        } catch (const std::exception&) {
          error("bad number");
        }
        pos += used;
        return n;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        const std::string name = s.substr(start, pos - start);
        for (std::size_t i = 0; i < vars.size(); ++i) {
          if (vars[i] == name) {
            auto n = make(Op::Var);
            n->var = static_cast<int>(i);
            return n;
          }
        }
        if (name == "pi") {
          auto n = make(Op::Num);
          n->num = std::numbers::pi;
          return n;
        }
        static const std::pair<const char*, Op> kFunctions[] = {
            {"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp}, {"log", Op::Log}, {"sqrt", Op::Sqrt}};
        for (const auto& [fname, op] : kFunctions) {
          if (name == fname) {
            if (!eat('(')) error("expected '(' after " + name);
            NodePtr arg = sum();
            if (!eat(')')) error("missing ')'");
            return make(op, arg);
          }
        }
        error("unknown identifier '" + name + "'");
      }
      error(std::string("unexpected character '") + c + "'");
    }
  };

  NodePtr root_;
};

}  // namespace wintgen
