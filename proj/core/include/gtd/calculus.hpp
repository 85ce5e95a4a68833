#pragma once

#include <string>

#include "gtd/expression.hpp"
#include "gtd/simplify.hpp"

namespace gtd {

// Exact symbolic partial derivative, simplified. Differentiating with
// respect to a variable absent from e yields the zero constant.
Expression differentiate(const Expression& e, const std::string& var,
                         const SimplifyOptions& opts = {});

// Derivative without the final simplification pass.
Expression raw_derivative(const Expression& e, const std::string& var);

}  // namespace gtd
