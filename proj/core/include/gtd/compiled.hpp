#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gtd/expression.hpp"

namespace gtd {

// Flat postfix program compiled from an expression tree, for hot loops
// (geodesic right-hand sides, grid scans) where rebuilding shared_ptr
// traversals per call costs too much. Evaluation never throws: domain
// violations (ln of a non-positive value, division by zero, fractional
// power of a negative base) yield NaN and let the caller decide.
class CompiledExpr {
 public:
  CompiledExpr() = default;

  // `slots` fixes the variable-to-argument mapping: slot i of the argument
  // vector feeds occurrences of slots[i]. Unlisted variables in `e` throw
  // UnboundVariableError at compile time.
  CompiledExpr(const Expression& e, const std::vector<std::string>& slots);

  double operator()(const double* args) const;
  double operator()(const std::vector<double>& args) const {
    return (*this)(args.data());
  }

  std::size_t slot_count() const { return n_slots_; }

 private:
  enum class Op : std::uint8_t {
    PushConst,
    PushVar,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Ln,
    PowInt,
    PowReal,
  };
  struct Instr {
    Op op;
    std::int32_t arg = 0;  // constant index, slot index, or integer exponent
    double real = 0.0;     // real exponent for PowReal
  };

  std::vector<Instr> code_;
  std::vector<double> consts_;
  std::size_t n_slots_ = 0;
  std::size_t stack_need_ = 0;
};

}  // namespace gtd
