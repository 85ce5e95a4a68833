#include "gtd/expression.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <utility>

#include "gtd/errors.hpp"

namespace gtd {

namespace {

ExprPtr make_node(ExprNode node) {
  return std::make_shared<const ExprNode>(std::move(node));
}

ExprPtr binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs) {
  ExprNode n;
  n.kind = kind;
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return make_node(std::move(n));
}

}  // namespace

Expression Expression::rational(Rational r) {
  ExprNode n;
  n.kind = ExprKind::Rational;
  n.rat = r;
  return Expression(make_node(std::move(n)));
}

Expression Expression::real(double v) {
  ExprNode n;
  n.kind = ExprKind::Float;
  n.flt = v;
  return Expression(make_node(std::move(n)));
}

Expression Expression::variable(std::string name) {
  ExprNode n;
  n.kind = ExprKind::Variable;
  n.name = std::move(name);
  return Expression(make_node(std::move(n)));
}

Expression Expression::pow(Expression base, Rational exponent) {
  if (exponent.is_zero()) return integer(1);
  if (exponent.is_one()) return base;
  if (base.is_rational_constant() && exponent.is_integer()) {
    try {
      return rational(base.node().rat.pow(exponent.num()));
    } catch (const std::overflow_error&) {
      // keep the node form
    } catch (const std::domain_error&) {
      // 0 to a negative power; keep the node form
    }
  }
  ExprNode n;
  n.kind = ExprKind::Pow;
  n.rat = exponent;
  n.lhs = base.ptr();
  return Expression(make_node(std::move(n)));
}

Expression Expression::ln(Expression arg) {
  if (arg.is_one()) return integer(0);
  ExprNode n;
  n.kind = ExprKind::Ln;
  n.lhs = arg.ptr();
  return Expression(make_node(std::move(n)));
}

Expression operator+(const Expression& a, const Expression& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_rational_constant() && b.is_rational_constant()) {
    try {
      return Expression::rational(a.node().rat + b.node().rat);
    } catch (const std::overflow_error&) {
    }
  }
  return Expression(binary(ExprKind::Add, a.ptr(), b.ptr()));
}

Expression operator-(const Expression& a, const Expression& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  if (a.is_rational_constant() && b.is_rational_constant()) {
    try {
      return Expression::rational(a.node().rat - b.node().rat);
    } catch (const std::overflow_error&) {
    }
  }
  return Expression(binary(ExprKind::Sub, a.ptr(), b.ptr()));
}

Expression operator*(const Expression& a, const Expression& b) {
  if (a.is_zero() || b.is_zero()) return Expression::integer(0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_rational_constant() && b.is_rational_constant()) {
    try {
      return Expression::rational(a.node().rat * b.node().rat);
    } catch (const std::overflow_error&) {
    }
  }
  return Expression(binary(ExprKind::Mul, a.ptr(), b.ptr()));
}

Expression operator/(const Expression& a, const Expression& b) {
  if (b.is_one()) return a;
  if (a.is_zero() && !b.is_zero()) return Expression::integer(0);
  if (a.is_rational_constant() && b.is_rational_constant() && !b.is_zero()) {
    try {
      return Expression::rational(a.node().rat / b.node().rat);
    } catch (const std::overflow_error&) {
    }
  }
  return Expression(binary(ExprKind::Div, a.ptr(), b.ptr()));
}

Expression operator-(const Expression& a) {
  if (a.is_rational_constant()) {
    try {
      return Expression::rational(-a.node().rat);
    } catch (const std::overflow_error&) {
    }
  }
  if (a.kind() == ExprKind::Neg) return Expression(a.node().lhs);
  ExprNode n;
  n.kind = ExprKind::Neg;
  n.lhs = a.ptr();
  return Expression(make_node(std::move(n)));
}

namespace {

// Printing precedence levels: additive 1, multiplicative 2, unary minus 3,
// power 4, atoms 5. A node is parenthesized when its effective level is
// below the context minimum. Rational constants print as "n", "-n" or
// "n/d", so their effective level depends on the payload.
constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecNeg = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

std::string float_literal(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

int effective_prec(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::Rational:
      if (!n.rat.is_integer()) return kPrecMul;  // prints as n/d
      if (n.rat.is_negative()) return kPrecNeg;  // prints as -n
      return kPrecAtom;
    case ExprKind::Float:
      return n.flt < 0 ? kPrecNeg : kPrecAtom;
    case ExprKind::Variable:
    case ExprKind::Ln:
      return kPrecAtom;
    case ExprKind::Add:
    case ExprKind::Sub:
      return kPrecAdd;
    case ExprKind::Mul:
    case ExprKind::Div:
      return kPrecMul;
    case ExprKind::Neg:
      return kPrecNeg;
    case ExprKind::Pow:
      return kPrecPow;
  }
  return kPrecAtom;
}

void print_node(const ExprNode& n, int min_prec, std::string& out) {
  const bool parens = effective_prec(n) < min_prec;
  if (parens) out += '(';
  switch (n.kind) {
    case ExprKind::Rational:
      out += n.rat.str();
      break;
    case ExprKind::Float:
      out += float_literal(n.flt);
      break;
    case ExprKind::Variable:
      out += n.name;
      break;
    case ExprKind::Add:
      print_node(*n.lhs, kPrecAdd, out);
      out += " + ";
      print_node(*n.rhs, kPrecAdd + 1, out);
      break;
    case ExprKind::Sub:
      print_node(*n.lhs, kPrecAdd, out);
      out += " - ";
      print_node(*n.rhs, kPrecAdd + 1, out);
      break;
    case ExprKind::Mul:
      print_node(*n.lhs, kPrecMul, out);
      out += '*';
      print_node(*n.rhs, kPrecMul + 1, out);
      break;
    case ExprKind::Div:
      print_node(*n.lhs, kPrecMul, out);
      out += '/';
      print_node(*n.rhs, kPrecMul + 1, out);
      break;
    case ExprKind::Neg:
      out += '-';
      print_node(*n.lhs, kPrecNeg, out);
      break;
    case ExprKind::Ln:
      out += "ln(";
      print_node(*n.lhs, 0, out);
      out += ')';
      break;
    case ExprKind::Pow: {
      print_node(*n.lhs, kPrecAtom, out);
      out += '^';
      if (n.rat.is_integer() && !n.rat.is_negative()) {
        out += n.rat.str();
      } else if (n.rat.is_integer()) {
        out += n.rat.str();  // -k parses as a negated factor
      } else {
        out += '(';
        out += n.rat.str();
        out += ')';
      }
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace

std::string Expression::str() const {
  std::string out;
  print_node(*node_, 0, out);
  return out;
}

namespace {

void collect_variables(const ExprNode& n, std::set<std::string>& out) {
  if (n.kind == ExprKind::Variable) out.insert(n.name);
  if (n.lhs) collect_variables(*n.lhs, out);
  if (n.rhs) collect_variables(*n.rhs, out);
}

std::size_t count_nodes(const ExprNode& n) {
  std::size_t c = 1;
  if (n.lhs) c += count_nodes(*n.lhs);
  if (n.rhs) c += count_nodes(*n.rhs);
  return c;
}

}  // namespace

std::set<std::string> Expression::variables() const {
  std::set<std::string> out;
  collect_variables(*node_, out);
  return out;
}

std::size_t Expression::node_count() const { return count_nodes(*node_); }

namespace {

int compare_nodes(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind)
    return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  switch (a.kind) {
    case ExprKind::Rational: {
      auto c = a.rat <=> b.rat;
      if (c != 0) return c < 0 ? -1 : 1;
      return 0;
    }
    case ExprKind::Float:
      if (a.flt < b.flt) return -1;
      if (a.flt > b.flt) return 1;
      return 0;
    case ExprKind::Variable:
      return a.name.compare(b.name) < 0 ? -1
             : a.name == b.name         ? 0
                                        : 1;
    case ExprKind::Pow: {
      auto c = a.rat <=> b.rat;
      if (c != 0) return c < 0 ? -1 : 1;
      return compare_nodes(*a.lhs, *b.lhs);
    }
    case ExprKind::Neg:
    case ExprKind::Ln:
      return compare_nodes(*a.lhs, *b.lhs);
    default: {
      int c = compare_nodes(*a.lhs, *b.lhs);
      if (c != 0) return c;
      return compare_nodes(*a.rhs, *b.rhs);
    }
  }
}

}  // namespace

int structural_compare(const Expression& a, const Expression& b) {
  if (a.ptr() == b.ptr()) return 0;
  return compare_nodes(a.node(), b.node());
}

bool structurally_equal(const Expression& a, const Expression& b) {
  return structural_compare(a, b) == 0;
}

namespace {

double powi(double base, std::int64_t k) {
  if (k < 0) return 1.0 / powi(base, -k);
  double result = 1.0;
  double acc = base;
  while (k > 0) {
    if (k & 1) result *= acc;
    acc *= acc;
    k >>= 1;
  }
  return result;
}

double eval_node(const ExprNode& n, const Bindings& bindings) {
  switch (n.kind) {
    case ExprKind::Rational:
      return n.rat.value();
    case ExprKind::Float:
      return n.flt;
    case ExprKind::Variable: {
      auto it = bindings.find(n.name);
      if (it == bindings.end()) throw UnboundVariableError(n.name);
      return it->second;
    }
    case ExprKind::Add:
      return eval_node(*n.lhs, bindings) + eval_node(*n.rhs, bindings);
    case ExprKind::Sub:
      return eval_node(*n.lhs, bindings) - eval_node(*n.rhs, bindings);
    case ExprKind::Mul:
      return eval_node(*n.lhs, bindings) * eval_node(*n.rhs, bindings);
    case ExprKind::Div:
      return eval_node(*n.lhs, bindings) / eval_node(*n.rhs, bindings);
    case ExprKind::Neg:
      return -eval_node(*n.lhs, bindings);
    case ExprKind::Ln: {
      double arg = eval_node(*n.lhs, bindings);
      if (!(arg > 0)) {
        std::string sub;
        print_node(n, 0, sub);
        throw LnDomainError(sub, arg);
      }
      return std::log(arg);
    }
    case ExprKind::Pow: {
      double base = eval_node(*n.lhs, bindings);
      if (n.rat.is_integer()) return powi(base, n.rat.num());
      if (base < 0) {
        std::string sub;
        print_node(n, 0, sub);
        throw EvalError("fractional power of negative base in '" + sub + "'");
      }
      return std::pow(base, n.rat.value());
    }
  }
  throw EvalError("malformed expression node");
}

}  // namespace

double evaluate(const Expression& e, const Bindings& bindings) {
  return eval_node(e.node(), bindings);
}

namespace {

Expression substitute_node(const Expression& e,
                           const std::map<std::string, Expression>& map) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case ExprKind::Rational:
    case ExprKind::Float:
      return e;
    case ExprKind::Variable: {
      auto it = map.find(n.name);
      return it == map.end() ? e : it->second;
    }
    case ExprKind::Add:
      return substitute_node(Expression(n.lhs), map) +
             substitute_node(Expression(n.rhs), map);
    case ExprKind::Sub:
      return substitute_node(Expression(n.lhs), map) -
             substitute_node(Expression(n.rhs), map);
    case ExprKind::Mul:
      return substitute_node(Expression(n.lhs), map) *
             substitute_node(Expression(n.rhs), map);
    case ExprKind::Div:
      return substitute_node(Expression(n.lhs), map) /
             substitute_node(Expression(n.rhs), map);
    case ExprKind::Neg:
      return -substitute_node(Expression(n.lhs), map);
    case ExprKind::Ln:
      return Expression::ln(substitute_node(Expression(n.lhs), map));
    case ExprKind::Pow:
      return Expression::pow(substitute_node(Expression(n.lhs), map), n.rat);
  }
  return e;
}

}  // namespace

Expression substitute(const Expression& e,
                      const std::map<std::string, Expression>& map) {
  if (map.empty()) return e;
  return substitute_node(e, map);
}

Expression exact_constant(double v) {
  if (!std::isfinite(v)) return Expression::real(v);
  if (v == 0.0) return Expression::integer(0);
  const bool neg = v < 0;
  const double x = neg ? -v : v;

  // Continued-fraction convergents with denominator <= 1e6; accept one only
  // when it rounds back to exactly this double.
  {
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double y = x;
    for (int i = 0; i < 40; ++i) {
      if (y > 9e15) break;
      std::int64_t a = static_cast<std::int64_t>(y);
      std::int64_t p2 = a * p1 + p0;
      std::int64_t q2 = a * q1 + q0;
      if (q2 > 1000000 || p2 < 0 || q2 <= 0) break;
      p0 = p1, q0 = q1, p1 = p2, q1 = q2;
      if (static_cast<double>(p1) / static_cast<double>(q1) == x) {
        Rational r(p1, q1);
        return Expression::rational(neg ? -r : r);
      }
      double frac = y - static_cast<double>(a);
      if (frac < 1e-15) break;
      y = 1.0 / frac;
    }
  }

  // Every finite double is mantissa * 2^e exactly.
  int e2;
  double m = std::frexp(x, &e2);
  std::int64_t mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  e2 -= 53;
  while (mant != 0 && (mant & 1) == 0) {
    mant >>= 1;
    ++e2;
  }
  if (e2 >= 0 && e2 <= 9) {
    __int128 val = static_cast<__int128>(mant) << e2;
    if (val <= INT64_MAX) {
      Rational r(static_cast<std::int64_t>(val));
      return Expression::rational(neg ? -r : r);
    }
  } else if (e2 < 0 && e2 >= -62) {
    Rational r(mant, std::int64_t{1} << -e2);
    return Expression::rational(neg ? -r : r);
  }
  return Expression::real(v);
}

}  // namespace gtd
