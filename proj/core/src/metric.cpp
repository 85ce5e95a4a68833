#include "gtd/metric.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gtd/errors.hpp"

namespace gtd {

MetricField::MetricField(Chart chart) : chart_(std::move(chart)) {
  comp_.assign(chart_.dim() * chart_.dim(), Expression::integer(0));
}

const Expression& MetricField::at(std::size_t i, std::size_t j) const {
  if (i >= dim() || j >= dim()) throw Error("metric component index out of range");
  return comp_[i * dim() + j];
}

void MetricField::set(std::size_t i, std::size_t j, Expression value) {
  if (i >= dim() || j >= dim()) throw Error("metric component index out of range");
  comp_[i * dim() + j] = value;
  comp_[j * dim() + i] = std::move(value);
}

namespace {

double lu_determinant(std::vector<double> m, std::size_t n) {
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r * n + col]) > std::abs(m[pivot * n + col])) pivot = r;
    if (m[pivot * n + col] == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c)
        std::swap(m[pivot * n + c], m[col * n + c]);
      det = -det;
    }
    det *= m[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = m[r * n + col] / m[col * n + col];
      for (std::size_t c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
    }
  }
  return det;
}

// Cyclic Jacobi rotations; enough accuracy to count eigenvalue signs.
std::vector<double> jacobi_eigenvalues(std::vector<double> m, std::size_t n) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += m[i * n + j] * m[i * n + j];
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = m[p * n + q];
        if (apq == 0.0) continue;
        double theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double mkp = m[k * n + p], mkq = m[k * n + q];
          m[k * n + p] = c * mkp - s * mkq;
          m[k * n + q] = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double mpk = m[p * n + k], mqk = m[q * n + k];
          m[p * n + k] = c * mpk - s * mqk;
          m[q * n + k] = s * mpk + c * mqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = m[i * n + i];
  return eig;
}

}  // namespace

MetricValue metric_eval(const MetricField& g, const Point& p) {
  const std::size_t n = g.dim();
  if (p.size() != n) throw Error("point dimension does not match chart");
  Bindings b = bind(g.chart(), p);

  MetricValue out;
  out.g.assign(n * n, 0.0);
  double max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double v = evaluate(g.at(i, j), b);
      out.g[i * n + j] = v;
      out.g[j * n + i] = v;
      max_abs = std::max(max_abs, std::abs(v));
    }
  }
  out.det = lu_determinant(out.g, n);
  double scale = std::pow(std::max(1.0, max_abs), static_cast<double>(n));
  out.degenerate = std::abs(out.det) < 1e-13 * scale;
  for (double ev : jacobi_eigenvalues(out.g, n)) {
    if (ev > 0)
      ++out.signature_pos;
    else if (ev < 0)
      ++out.signature_neg;
  }
  return out;
}

}  // namespace gtd
