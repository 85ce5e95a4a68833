#include "gtd/geometry.hpp"

#include <cmath>
#include <utility>

#include "gtd/calculus.hpp"
#include "gtd/errors.hpp"

namespace gtd {

ChristoffelField::ChristoffelField(Chart chart, std::vector<Expression> comp)
    : chart_(std::move(chart)), comp_(std::move(comp)) {
  if (comp_.size() != chart_.dim() * chart_.dim() * chart_.dim())
    throw Error("christoffel component count does not match chart");
}

const Expression& ChristoffelField::at(std::size_t a, std::size_t b,
                                       std::size_t c) const {
  const std::size_t n = dim();
  if (a >= n || b >= n || c >= n)
    throw Error("christoffel index out of range");
  return comp_[(a * n + b) * n + c];
}

CurvatureField::CurvatureField(Chart chart, std::vector<Expression> riemann,
                               std::vector<Expression> ricci,
                               Expression scalar)
    : chart_(std::move(chart)),
      riemann_(std::move(riemann)),
      ricci_(std::move(ricci)),
      scalar_(std::move(scalar)) {
  auto frac = as_fraction(scalar_);
  scalar_num_ = std::move(frac.first);
  scalar_den_ = std::move(frac.second);
}

const Expression& CurvatureField::riemann(std::size_t a, std::size_t b,
                                          std::size_t c, std::size_t d) const {
  const std::size_t n = dim();
  if (a >= n || b >= n || c >= n || d >= n)
    throw Error("riemann index out of range");
  return riemann_[((a * n + b) * n + c) * n + d];
}

const Expression& CurvatureField::ricci(std::size_t b, std::size_t d) const {
  const std::size_t n = dim();
  if (b >= n || d >= n) throw Error("ricci index out of range");
  return ricci_[b * n + d];
}

std::vector<Expression> inverse_metric(const MetricField& g,
                                       const SimplifyOptions& opts) {
  const std::size_t n = g.dim();
  if (n == 0 || n > 3)
    throw Error("symbolic metric inversion supports 1 to 3 dimensions");

  auto a = [&](std::size_t i, std::size_t j) { return g.at(i, j); };

  Expression det;
  std::vector<Expression> adj(n * n);
  if (n == 1) {
    det = a(0, 0);
    adj[0] = Expression::integer(1);
  } else if (n == 2) {
    det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    adj[0] = a(1, 1);
    adj[1] = -a(0, 1);
    adj[2] = -a(1, 0);
    adj[3] = a(0, 0);
  } else {
    auto minor2 = [&](std::size_t r0, std::size_t r1, std::size_t c0,
                      std::size_t c1) {
      return a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0);
    };
    det = a(0, 0) * minor2(1, 2, 1, 2) - a(0, 1) * minor2(1, 2, 0, 2) +
          a(0, 2) * minor2(1, 2, 0, 1);
    // adjugate: transposed cofactors; symmetric input keeps it symmetric
    std::size_t rows[3][2] = {{1, 2}, {0, 2}, {0, 1}};
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        Expression cof = minor2(rows[j][0], rows[j][1], rows[i][0], rows[i][1]);
        if ((i + j) % 2 == 1) cof = -cof;
        adj[i * 3 + j] = cof;
      }
    }
  }

  det = simplify(det, opts);
  if (det.is_zero()) throw SingularMetricError("metric determinant is zero");

  std::vector<Expression> inv(n * n);
  for (std::size_t i = 0; i < n * n; ++i)
    inv[i] = simplify(adj[i] / det, opts);
  return inv;
}

ChristoffelField christoffel(const MetricField& g,
                             const SimplifyOptions& opts) {
  const std::size_t n = g.dim();
  const Chart& chart = g.chart();
  std::vector<Expression> inv = inverse_metric(g, opts);

  // partial[c][i][j] = d g_ij / d x^c
  std::vector<Expression> partial(n * n * n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        Expression d = differentiate(g.at(i, j), chart[c], opts);
        partial[(c * n + i) * n + j] = d;
        partial[(c * n + j) * n + i] = d;
      }
  auto dg = [&](std::size_t c, std::size_t i, std::size_t j) {
    return partial[(c * n + i) * n + j];
  };

  std::vector<Expression> gamma(n * n * n, Expression::integer(0));
  const Expression half = Expression::rational(1, 2);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = b; c < n; ++c) {
        Expression sum = Expression::integer(0);
        for (std::size_t d = 0; d < n; ++d) {
          sum = sum + inv[a * n + d] *
                          (dg(b, d, c) + dg(c, b, d) - dg(d, b, c));
        }
        Expression value = simplify(half * sum, opts);
        gamma[(a * n + b) * n + c] = value;
        gamma[(a * n + c) * n + b] = value;
      }
    }
  }
  return ChristoffelField(chart, std::move(gamma));
}

CurvatureField riemann(const MetricField& g, const SimplifyOptions& opts) {
  const std::size_t n = g.dim();
  const Chart& chart = g.chart();
  ChristoffelField gam = christoffel(g, opts);
  std::vector<Expression> inv = inverse_metric(g, opts);

  // R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb
  //         + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb
  std::vector<Expression> rie(n * n * n * n, Expression::integer(0));
  auto idx = [n](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return ((a * n + b) * n + c) * n + d;
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t d = c + 1; d < n; ++d) {
          Expression term = differentiate(gam.at(a, d, b), chart[c], opts) -
                            differentiate(gam.at(a, c, b), chart[d], opts);
          for (std::size_t e = 0; e < n; ++e) {
            term = term + gam.at(a, c, e) * gam.at(e, d, b) -
                   gam.at(a, d, e) * gam.at(e, c, b);
          }
          Expression value = simplify(term, opts);
          rie[idx(a, b, c, d)] = value;
          rie[idx(a, b, d, c)] = simplify(-value, opts);
        }
      }
    }
  }

  std::vector<Expression> ric(n * n);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t d = 0; d < n; ++d) {
      Expression sum = Expression::integer(0);
      for (std::size_t a = 0; a < n; ++a)
        sum = sum + rie[idx(a, b, a, d)];
      ric[b * n + d] = simplify(sum, opts);
    }
  }

  Expression scalar = Expression::integer(0);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t d = 0; d < n; ++d)
      scalar = scalar + inv[b * n + d] * ric[b * n + d];
  scalar = simplify(scalar, opts);

  return CurvatureField(chart, std::move(rie), std::move(ric),
                        std::move(scalar));
}

double scalar_denominator_at(const CurvatureField& curv, const Point& p) {
  return evaluate(curv.scalar_denominator(), bind(curv.chart(), p));
}

double scalar_curvature_at(const CurvatureField& curv, const Point& p,
                           double reference_denominator) {
  Bindings b = bind(curv.chart(), p);
  double den = evaluate(curv.scalar_denominator(), b);
  if (reference_denominator > 0 &&
      std::abs(den) < 1e-10 * reference_denominator) {
    throw SingularProximityError("curvature denominator below threshold", den);
  }
  double num = evaluate(curv.scalar_numerator(), b);
  return num / den;
}

}  // namespace gtd
