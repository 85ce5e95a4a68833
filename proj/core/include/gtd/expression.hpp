#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "gtd/rational.hpp"

namespace gtd {

enum class ExprKind : std::uint8_t {
  Rational,  // exact rational constant
  Float,     // floating literal
  Variable,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Ln,
  Pow,  // base^q with constant rational exponent q
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind;
  Rational rat;      // Rational payload; for Pow, the exponent
  double flt = 0.0;  // Float payload
  std::string name;  // Variable payload
  ExprPtr lhs;
  ExprPtr rhs;  // null for unary nodes
};

using Bindings = std::map<std::string, double>;

// Immutable symbolic expression over named real variables. Copies share
// structure; all operations are pure, so values are safe to share across
// threads.
class Expression {
 public:
  Expression() : Expression(rational(Rational(0))) {}

  static Expression rational(Rational r);
  static Expression rational(std::int64_t num, std::int64_t den) {
    return rational(Rational(num, den));
  }
  static Expression integer(std::int64_t v) { return rational(Rational(v)); }
  static Expression real(double v);
  static Expression variable(std::string name);
  static Expression pow(Expression base, Rational exponent);
  static Expression ln(Expression arg);

  const ExprNode& node() const { return *node_; }
  const ExprPtr& ptr() const { return node_; }
  ExprKind kind() const { return node_->kind; }

  bool is_rational_constant() const { return node_->kind == ExprKind::Rational; }
  bool is_constant() const {
    return node_->kind == ExprKind::Rational || node_->kind == ExprKind::Float;
  }
  bool is_zero() const {
    return node_->kind == ExprKind::Rational && node_->rat.is_zero();
  }
  bool is_one() const {
    return node_->kind == ExprKind::Rational && node_->rat.is_one();
  }

  std::string str() const;
  std::set<std::string> variables() const;
  std::size_t node_count() const;

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);

  explicit Expression(ExprPtr node) : node_(std::move(node)) {}

 private:
  ExprPtr node_;
};

bool structurally_equal(const Expression& a, const Expression& b);

// Total order on expression trees; used for canonical, deterministic output.
int structural_compare(const Expression& a, const Expression& b);

// Floating evaluation with every variable bound. Throws
// UnboundVariableError / LnDomainError.
double evaluate(const Expression& e, const Bindings& bindings);

// Replace whole variables by expressions (simultaneous substitution).
Expression substitute(const Expression& e,
                      const std::map<std::string, Expression>& map);

// Best exact constant for a double: a small-denominator rational when one
// rounds to exactly this value (so 0.05 becomes 1/20), else the exact
// dyadic rational when it fits 64 bits, else a float literal.
Expression exact_constant(double v);

}  // namespace gtd
