#include "gtd/compiled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "gtd/errors.hpp"

namespace gtd {

namespace {

double powi(double base, std::int64_t k) {
  if (k < 0) {
    double d = powi(base, -k);
    return d == 0.0 ? std::numeric_limits<double>::quiet_NaN() : 1.0 / d;
  }
  double result = 1.0;
  double acc = base;
  while (k > 0) {
    if (k & 1) result *= acc;
    acc *= acc;
    k >>= 1;
  }
  return result;
}

}  // namespace

CompiledExpr::CompiledExpr(const Expression& e,
                           const std::vector<std::string>& slots) {
  n_slots_ = slots.size();
  std::map<std::string, std::int32_t> slot_of;
  for (std::size_t i = 0; i < slots.size(); ++i)
    slot_of[slots[i]] = static_cast<std::int32_t>(i);

  std::size_t depth = 0;
  auto emit = [&](const ExprNode& n, auto&& self) -> void {
    switch (n.kind) {
      case ExprKind::Rational:
        code_.push_back({Op::PushConst,
                         static_cast<std::int32_t>(consts_.size())});
        consts_.push_back(n.rat.value());
        ++depth;
        break;
      case ExprKind::Float:
        code_.push_back({Op::PushConst,
                         static_cast<std::int32_t>(consts_.size())});
        consts_.push_back(n.flt);
        ++depth;
        break;
      case ExprKind::Variable: {
        auto it = slot_of.find(n.name);
        if (it == slot_of.end()) throw UnboundVariableError(n.name);
        code_.push_back({Op::PushVar, it->second});
        ++depth;
        break;
      }
      case ExprKind::Add:
        self(*n.lhs, self);
        self(*n.rhs, self);
        code_.push_back({Op::Add});
        --depth;
        break;
      case ExprKind::Sub:
        self(*n.lhs, self);
        self(*n.rhs, self);
        code_.push_back({Op::Sub});
        --depth;
        break;
      case ExprKind::Mul:
        self(*n.lhs, self);
        self(*n.rhs, self);
        code_.push_back({Op::Mul});
        --depth;
        break;
      case ExprKind::Div:
        self(*n.lhs, self);
        self(*n.rhs, self);
        code_.push_back({Op::Div});
        --depth;
        break;
      case ExprKind::Neg:
        self(*n.lhs, self);
        code_.push_back({Op::Neg});
        break;
      case ExprKind::Ln:
        self(*n.lhs, self);
        code_.push_back({Op::Ln});
        break;
      case ExprKind::Pow:
        self(*n.lhs, self);
        if (n.rat.is_integer() && n.rat.num() >= INT32_MIN &&
            n.rat.num() <= INT32_MAX) {
          code_.push_back({Op::PowInt, static_cast<std::int32_t>(n.rat.num())});
        } else {
          Instr ins{Op::PowReal};
          ins.real = n.rat.value();
          code_.push_back(ins);
        }
        break;
    }
    stack_need_ = std::max(stack_need_, depth);
  };
  emit(e.node(), emit);
}

double CompiledExpr::operator()(const double* args) const {
  constexpr std::size_t kLocal = 64;
  double local[kLocal];
  std::vector<double> heap;
  double* stack = local;
  if (stack_need_ > kLocal) {
    heap.resize(stack_need_);
    stack = heap.data();
  }
  std::size_t top = 0;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (const Instr& ins : code_) {
    switch (ins.op) {
      case Op::PushConst:
        stack[top++] = consts_[static_cast<std::size_t>(ins.arg)];
        break;
      case Op::PushVar:
        stack[top++] = args[static_cast<std::size_t>(ins.arg)];
        break;
      case Op::Add:
        --top;
        stack[top - 1] += stack[top];
        break;
      case Op::Sub:
        --top;
        stack[top - 1] -= stack[top];
        break;
      case Op::Mul:
        --top;
        stack[top - 1] *= stack[top];
        break;
      case Op::Div:
        --top;
        stack[top - 1] = stack[top] == 0.0 ? nan : stack[top - 1] / stack[top];
        break;
      case Op::Neg:
        stack[top - 1] = -stack[top - 1];
        break;
      case Op::Ln:
        stack[top - 1] = stack[top - 1] > 0.0 ? std::log(stack[top - 1]) : nan;
        break;
      case Op::PowInt:
        stack[top - 1] = powi(stack[top - 1], ins.arg);
        break;
      case Op::PowReal:
        stack[top - 1] =
            stack[top - 1] < 0.0 ? nan : std::pow(stack[top - 1], ins.real);
        break;
    }
  }
  return top == 1 ? stack[0] : nan;
}

}  // namespace gtd
