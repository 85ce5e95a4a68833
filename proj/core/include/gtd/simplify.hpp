#pragma once

#include <cstddef>
#include <utility>

#include "gtd/expression.hpp"

namespace gtd {

struct SimplifyOptions {
  // Trees larger than this skip rational-function normalization and only
  // get local constant folding; numeric evaluation stays correct either way.
  std::size_t node_budget = 20000;
};

// Best-effort algebraic normalization: constant folding, 0/1 identities,
// and collection of rational-function terms over a common denominator with
// cancellation of matching factors. The result is algebraically equal to
// the input wherever both are defined (cancellations such as
// (V-b)*1/(V-b) -> 1 extend the domain to the removed point). Output is
// canonical: equal inputs produce structurally identical trees.
Expression simplify(const Expression& e, const SimplifyOptions& opts = {});

// Split a (simplified) expression into numerator and denominator so that
// e == first/second. The denominator is 1 when e has none.
std::pair<Expression, Expression> as_fraction(const Expression& e,
                                              const SimplifyOptions& opts = {});

}  // namespace gtd
