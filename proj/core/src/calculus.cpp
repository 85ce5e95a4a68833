#include "gtd/calculus.hpp"

namespace gtd {

namespace {

Expression derivative_node(const ExprNode& n, const std::string& var) {
  switch (n.kind) {
    case ExprKind::Rational:
    case ExprKind::Float:
      return Expression::integer(0);
    case ExprKind::Variable:
      return Expression::integer(n.name == var ? 1 : 0);
    case ExprKind::Add:
      return derivative_node(*n.lhs, var) + derivative_node(*n.rhs, var);
    case ExprKind::Sub:
      return derivative_node(*n.lhs, var) - derivative_node(*n.rhs, var);
    case ExprKind::Mul: {
      Expression a(n.lhs), b(n.rhs);
      return derivative_node(*n.lhs, var) * b + a * derivative_node(*n.rhs, var);
    }
    case ExprKind::Div: {
      Expression a(n.lhs), b(n.rhs);
      return (derivative_node(*n.lhs, var) * b -
              a * derivative_node(*n.rhs, var)) /
             (b * b);
    }
    case ExprKind::Neg:
      return -derivative_node(*n.lhs, var);
    case ExprKind::Ln:
      return derivative_node(*n.lhs, var) / Expression(n.lhs);
    case ExprKind::Pow: {
      // d/dx u^q = q u^(q-1) u'
      Expression u(n.lhs);
      return Expression::rational(n.rat) *
             Expression::pow(u, n.rat - Rational(1)) *
             derivative_node(*n.lhs, var);
    }
  }
  return Expression::integer(0);
}

}  // namespace

Expression raw_derivative(const Expression& e, const std::string& var) {
  return derivative_node(e.node(), var);
}

Expression differentiate(const Expression& e, const std::string& var,
                         const SimplifyOptions& opts) {
  return simplify(raw_derivative(e, var), opts);
}

}  // namespace gtd
