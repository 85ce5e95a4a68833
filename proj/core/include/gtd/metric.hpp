#pragma once

#include <vector>

#include "gtd/chart.hpp"
#include "gtd/expression.hpp"

namespace gtd {

// Symmetric metric tensor with symbolic components on a chart. Components
// are stored densely, row-major; constructors and setters keep g_{ij} and
// g_{ji} identical.
class MetricField {
 public:
  MetricField() = default;
  explicit MetricField(Chart chart);

  const Chart& chart() const { return chart_; }
  std::size_t dim() const { return chart_.dim(); }

  const Expression& at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, Expression value);

 private:
  Chart chart_;
  std::vector<Expression> comp_;  // dim*dim entries
};

// Numeric metric evaluation at a point.
struct MetricValue {
  std::vector<double> g;      // dim*dim, row-major
  double det = 0.0;
  int signature_pos = 0;      // eigenvalue counts
  int signature_neg = 0;
  bool degenerate = false;    // |det| below scale-relative threshold
};

// Evaluates the metric at p and classifies it: determinant, eigenvalue
// signature, and a degeneracy flag (|det| < 1e-13 * max(1, max|g_ij|)^n).
MetricValue metric_eval(const MetricField& g, const Point& p);

}  // namespace gtd
