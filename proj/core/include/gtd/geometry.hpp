#pragma once

#include <vector>

#include "gtd/metric.hpp"
#include "gtd/simplify.hpp"

namespace gtd {

// Christoffel symbols of the Levi-Civita connection, symbolic, indexed
// gamma(a, b, c) = Gamma^a_{bc} with the lower pair symmetric.
class ChristoffelField {
 public:
  ChristoffelField() = default;
  ChristoffelField(Chart chart, std::vector<Expression> comp);

  const Chart& chart() const { return chart_; }
  std::size_t dim() const { return chart_.dim(); }
  const Expression& at(std::size_t a, std::size_t b, std::size_t c) const;

 private:
  Chart chart_;
  std::vector<Expression> comp_;  // dim^3 entries
};

// Riemann tensor components R^a_{bcd}:
//   R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
//             + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}.
// Ricci contracts the first and third slots, R_{bd} = R^a_{bad}; the
// scalar is g^{bd} R_{bd}. With this sign the unit 2-sphere has R = +2.
class CurvatureField {
 public:
  CurvatureField() = default;
  CurvatureField(Chart chart, std::vector<Expression> riemann,
                 std::vector<Expression> ricci, Expression scalar);

  const Chart& chart() const { return chart_; }
  std::size_t dim() const { return chart_.dim(); }
  const Expression& riemann(std::size_t a, std::size_t b, std::size_t c,
                            std::size_t d) const;
  const Expression& ricci(std::size_t b, std::size_t d) const;
  const Expression& scalar() const { return scalar_; }

  // Scalar split as numerator over denominator; the denominator's zero set
  // carries the curvature singularities, so it doubles as the proximity
  // guard for evaluation.
  const Expression& scalar_numerator() const { return scalar_num_; }
  const Expression& scalar_denominator() const { return scalar_den_; }

 private:
  Chart chart_;
  std::vector<Expression> riemann_;  // dim^4
  std::vector<Expression> ricci_;    // dim^2
  Expression scalar_ = Expression::integer(0);
  Expression scalar_num_ = Expression::integer(0);
  Expression scalar_den_ = Expression::integer(1);
};

// Symbolic inverse via adjugate over determinant. Throws
// SingularMetricError when the determinant simplifies to zero.
// Supported for dim <= 3 (larger charts are not needed here).
std::vector<Expression> inverse_metric(const MetricField& g,
                                       const SimplifyOptions& opts = {});

ChristoffelField christoffel(const MetricField& g,
                             const SimplifyOptions& opts = {});

CurvatureField riemann(const MetricField& g, const SimplifyOptions& opts = {});

// Numeric scalar-curvature denominator at a point (the proximity measure).
double scalar_denominator_at(const CurvatureField& curv, const Point& p);

// Numeric scalar curvature at a point, evaluated as numerator over
// denominator. With reference_denominator > 0, throws
// SingularProximityError when |denominator(p)| falls below
// 1e-10 * reference_denominator — the caller supplies the denominator's
// magnitude at a reference regular point.
double scalar_curvature_at(const CurvatureField& curv, const Point& p,
                           double reference_denominator = 0.0);

}  // namespace gtd
