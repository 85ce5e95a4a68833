#include "gtd/contact.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <utility>

#include "gtd/calculus.hpp"
#include "gtd/errors.hpp"
#include "gtd/simplify.hpp"

namespace gtd {

std::string intensive_name(const std::string& extensive_name) {
  return "I_" + extensive_name;
}

Chart phase_chart(const std::string& potential_name,
                  const Chart& equilibrium) {
  Chart out;
  out.coords.reserve(2 * equilibrium.dim() + 1);
  out.coords.push_back(potential_name);
  for (const auto& e : equilibrium.coords) out.coords.push_back(e);
  for (const auto& e : equilibrium.coords)
    out.coords.push_back(intensive_name(e));
  return out;
}

std::vector<double> intensive_of(const FundamentalSystem& sys,
                                 const Point& p) {
  Bindings b = bind(sys.chart, p);
  std::vector<double> out(sys.n());
  for (std::size_t a = 0; a < sys.n(); ++a)
    out[a] = evaluate(differentiate(sys.potential, sys.chart[a]), b);
  return out;
}

PhasePoint embed(const FundamentalSystem& sys, const Point& p) {
  PhasePoint z;
  z.potential = evaluate(sys.potential, bind(sys.chart, p));
  z.extensive = p;
  z.intensive = intensive_of(sys, p);
  return z;
}

double theta_residual(const FundamentalSystem& sys, const Point& p,
                      const std::vector<double>& v) {
  if (v.size() != sys.n()) throw Error("tangent dimension mismatch");
  Bindings b = bind(sys.chart, p);
  std::vector<double> in = intensive_of(sys, p);
  double dphi = 0.0;
  for (std::size_t a = 0; a < sys.n(); ++a)
    dphi += evaluate(raw_derivative(sys.potential, sys.chart[a]), b) * v[a];
  double ie = 0.0;
  for (std::size_t a = 0; a < sys.n(); ++a) ie += in[a] * v[a];
  return dphi - ie;
}

double theta_residual(const PhasePoint& z, double dphi,
                      const std::vector<double>& de,
                      const std::vector<double>& di) {
  if (de.size() != z.n() || di.size() != z.n())
    throw Error("tangent dimension mismatch");
  double ie = 0.0;
  for (std::size_t a = 0; a < z.n(); ++a) ie += z.intensive[a] * de[a];
  return dphi - ie;
}

namespace {

// Exterior forms over <= 31 coordinates: basis element = index bitmask,
// coefficients numeric.
using Form = std::map<std::uint32_t, double>;

int merge_sign(std::uint32_t a, std::uint32_t b) {
  int inversions = 0;
  for (std::uint32_t bits = b; bits;) {
    std::uint32_t j = bits & (~bits + 1);
    inversions += std::popcount(a & ~(j | (j - 1)) & ~j);
    bits &= bits - 1;
  }
  return (inversions & 1) ? -1 : 1;
}

Form wedge(const Form& x, const Form& y) {
  Form out;
  for (const auto& [ma, ca] : x) {
    for (const auto& [mb, cb] : y) {
      if (ma & mb) continue;
      out[ma | mb] += merge_sign(ma, mb) * ca * cb;
    }
  }
  return out;
}

}  // namespace

double contact_nondegeneracy(const PhasePoint& z) {
  const std::size_t n = z.n();
  if (n == 0 || 2 * n + 1 > 31) throw Error("unsupported phase dimension");
  // index 0 = potential, 1..n = extensive, n+1..2n = intensive
  Form theta;
  theta[1u << 0] = 1.0;
  for (std::size_t a = 0; a < n; ++a)
    theta[1u << (1 + a)] = -z.intensive[a];
  Form dtheta;
  for (std::size_t a = 0; a < n; ++a)
    dtheta[(1u << (1 + a)) | (1u << (1 + n + a))] = 1.0;  // dE^a ^ dI^a

  Form w = theta;
  double factorial = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    w = wedge(w, dtheta);
    factorial *= static_cast<double>(k);
  }
  const std::uint32_t full = (1u << (2 * n + 1)) - 1;
  auto it = w.find(full);
  double coeff = it == w.end() ? 0.0 : it->second / factorial;
  // Reported on the volume element dPhi ^ dI^1..dI^n ^ dE^1..dE^n: moving
  // the E block past the I block contributes n*n transpositions.
  if (n % 2 == 1) coeff = -coeff;
  return coeff;
}

PhasePoint total_legendre(const PhasePoint& z) {
  PhasePoint out;
  const std::size_t n = z.n();
  out.extensive = z.intensive;
  out.intensive.resize(n);
  double dot = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    out.intensive[a] = -z.extensive[a];
    dot += z.intensive[a] * z.extensive[a];
  }
  out.potential = z.potential - dot;
  return out;
}

PhasePoint partial_legendre(const PhasePoint& z,
                            const std::vector<std::size_t>& subset) {
  PhasePoint out = z;
  for (std::size_t k : subset) {
    if (k < 1 || k > z.n()) throw Error("legendre index out of range");
    const std::size_t a = k - 1;  // subset indices are 1-based
    out.extensive[a] = z.intensive[a];
    out.intensive[a] = -z.extensive[a];
    out.potential -= z.intensive[a] * z.extensive[a];
  }
  return out;
}

namespace {

Chart generic_equilibrium_chart(std::size_t n) {
  Chart c;
  for (std::size_t a = 1; a <= n; ++a)
    c.coords.push_back("E" + std::to_string(a));
  return c;
}

}  // namespace

MetricField gtd_metric(const GtdMetricSpec& spec, const Chart& equilibrium,
                       const std::string& potential_name) {
  if (spec.lambda == 0.0) throw Error("metric constant must be nonzero");
  const std::size_t n = equilibrium.dim();
  Chart chart = phase_chart(potential_name, equilibrium);
  MetricField G(chart);

  std::vector<Expression> E(n), I(n);
  for (std::size_t a = 0; a < n; ++a) {
    E[a] = Expression::variable(chart[1 + a]);
    I[a] = Expression::variable(chart[1 + n + a]);
  }

  // Theta^2 with Theta = dPhi - I_a dE^a
  G.set(0, 0, Expression::integer(1));
  for (std::size_t a = 0; a < n; ++a) {
    G.set(0, 1 + a, -I[a]);
    for (std::size_t b = a; b < n; ++b) G.set(1 + a, 1 + b, I[a] * I[b]);
  }

  // L (E.I) chi_c dE^c dI^c, symmetrized
  Expression dot = Expression::integer(0);
  for (std::size_t a = 0; a < n; ++a) dot = dot + E[a] * I[a];
  Expression lam = exact_constant(spec.lambda);
  for (std::size_t c = 0; c < n; ++c) {
    Expression chi = Expression::integer(
        spec.chi == ChiKind::Lorentzian && c == 0 ? -1 : 1);
    G.set(1 + c, 1 + n + c, lam * dot * chi * Expression::rational(1, 2));
  }
  return G;
}

MetricField gtd_metric(const GtdMetricSpec& spec, std::size_t n,
                       const std::string& potential_name) {
  return gtd_metric(spec, generic_equilibrium_chart(n), potential_name);
}

MetricField hessian_phase_metric(const Chart& equilibrium,
                                 const std::string& potential_name) {
  const std::size_t n = equilibrium.dim();
  Chart chart = phase_chart(potential_name, equilibrium);
  MetricField G(chart);
  std::vector<Expression> E(n), I(n);
  for (std::size_t a = 0; a < n; ++a) {
    E[a] = Expression::variable(chart[1 + a]);
    I[a] = Expression::variable(chart[1 + n + a]);
  }
  G.set(0, 0, Expression::integer(1));
  for (std::size_t a = 0; a < n; ++a) {
    G.set(0, 1 + a, -I[a]);
    for (std::size_t b = a; b < n; ++b) G.set(1 + a, 1 + b, I[a] * I[b]);
    G.set(1 + a, 1 + n + a, Expression::rational(1, 2));
  }
  return G;
}

MetricField hessian_phase_metric(std::size_t n,
                                 const std::string& potential_name) {
  return hessian_phase_metric(generic_equilibrium_chart(n), potential_name);
}

MetricField flat_phase_metric(const Chart& equilibrium,
                              const std::string& potential_name) {
  Chart chart = phase_chart(potential_name, equilibrium);
  MetricField G(chart);
  for (std::size_t i = 0; i < chart.dim(); ++i)
    G.set(i, i, Expression::integer(1));
  return G;
}

MetricField flat_phase_metric(std::size_t n,
                              const std::string& potential_name) {
  return flat_phase_metric(generic_equilibrium_chart(n), potential_name);
}

MetricField pull_back(const MetricField& G, const FundamentalSystem& sys) {
  const std::size_t n = sys.n();
  Chart expected = phase_chart(sys.potential_name, sys.chart);
  if (G.chart() != expected)
    throw Error("phase metric chart does not match the system's embedding");

  // Embedding Z(E) = (Phi(E), E, I(E)) and its Jacobian rows.
  std::vector<Expression> I(n);
  for (std::size_t a = 0; a < n; ++a)
    I[a] = differentiate(sys.potential, sys.chart[a]);

  std::map<std::string, Expression> onto;
  onto[sys.potential_name] = sys.potential;
  for (std::size_t a = 0; a < n; ++a)
    onto[intensive_name(sys.chart[a])] = I[a];

  const std::size_t N = 2 * n + 1;
  // J[A][b] = dZ^A/dE^b
  std::vector<Expression> J(N * n, Expression::integer(0));
  for (std::size_t b = 0; b < n; ++b) {
    J[0 * n + b] = I[b];
    J[(1 + b) * n + b] = Expression::integer(1);
    for (std::size_t a = 0; a < n; ++a)
      J[(1 + n + a) * n + b] = differentiate(I[a], sys.chart[b]);
  }

  MetricField g(sys.chart);
  for (std::size_t bq = 0; bq < n; ++bq) {
    for (std::size_t cq = bq; cq < n; ++cq) {
      Expression sum = Expression::integer(0);
      for (std::size_t A = 0; A < N; ++A) {
        for (std::size_t B = 0; B < N; ++B) {
          const Expression& comp = G.at(A, B);
          if (comp.is_zero()) continue;
          sum = sum + J[A * n + bq] * J[B * n + cq] * substitute(comp, onto);
        }
      }
      g.set(bq, cq, simplify(sum));
    }
  }
  return g;
}

MetricField induce_metric(const FundamentalSystem& sys,
                          const GtdMetricSpec& spec) {
  MetricField G = gtd_metric(spec, sys.chart, sys.potential_name);
  MetricField g = pull_back(G, sys);
  bool all_zero = true;
  for (std::size_t i = 0; i < g.dim() && all_zero; ++i)
    for (std::size_t j = i; j < g.dim() && all_zero; ++j)
      if (!g.at(i, j).is_zero()) all_zero = false;
  if (all_zero)
    throw DegenerateMetricError("induced metric vanishes identically");
  return g;
}

MetricField hessian_metric(const FundamentalSystem& sys) {
  const std::size_t n = sys.n();
  MetricField g(sys.chart);
  for (std::size_t a = 0; a < n; ++a) {
    Expression da = differentiate(sys.potential, sys.chart[a]);
    for (std::size_t b = a; b < n; ++b)
      g.set(a, b, differentiate(da, sys.chart[b]));
  }
  if (n <= 3) {
    Expression det;
    if (n == 1) {
      det = g.at(0, 0);
    } else if (n == 2) {
      det = g.at(0, 0) * g.at(1, 1) - g.at(0, 1) * g.at(0, 1);
    } else {
      det = g.at(0, 0) * (g.at(1, 1) * g.at(2, 2) - g.at(1, 2) * g.at(2, 1)) -
            g.at(0, 1) * (g.at(1, 0) * g.at(2, 2) - g.at(1, 2) * g.at(2, 0)) +
            g.at(0, 2) * (g.at(1, 0) * g.at(2, 1) - g.at(1, 1) * g.at(2, 0));
    }
    if (simplify(det).is_zero())
      throw DegenerateMetricError("hessian metric is identically singular");
  }
  return g;
}

InvarianceReport legendre_invariance_check(const MetricField& G,
                                           std::size_t n, std::size_t trials,
                                           std::uint64_t seed) {
  if (trials < 1) throw Error("at least one trial required");
  if (G.dim() != 2 * n + 1)
    throw Error("phase metric dimension does not match n");
  const Chart& chart = G.chart();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> upot(-1.0, 1.0);
  std::uniform_real_distribution<double> urange(0.5, 2.0);
  std::uniform_real_distribution<double> utan(-1.0, 1.0);

  auto quad = [&](const PhasePoint& z, const std::vector<double>& w) {
    Bindings b;
    b[chart[0]] = z.potential;
    for (std::size_t a = 0; a < n; ++a) {
      b[chart[1 + a]] = z.extensive[a];
      b[chart[1 + n + a]] = z.intensive[a];
    }
    const std::size_t N = 2 * n + 1;
    double q = 0.0;
    for (std::size_t A = 0; A < N; ++A) {
      for (std::size_t B = 0; B < N; ++B) {
        const Expression& comp = G.at(A, B);
        if (comp.is_zero()) continue;
        q += w[A] * w[B] * evaluate(comp, b);
      }
    }
    return q;
  };

  InvarianceReport report;
  report.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    for (int redraw = 0; redraw <= 10; ++redraw) {
      PhasePoint z;
      z.potential = upot(rng);
      z.extensive.resize(n);
      z.intensive.resize(n);
      for (std::size_t a = 0; a < n; ++a) z.extensive[a] = urange(rng);
      for (std::size_t a = 0; a < n; ++a) z.intensive[a] = urange(rng);
      std::vector<double> w(2 * n + 1);
      for (auto& wi : w) wi = utan(rng);

      double q = quad(z, w);
      PhasePoint zt = total_legendre(z);
      std::vector<double> wt(2 * n + 1);
      wt[0] = w[0];
      for (std::size_t a = 0; a < n; ++a) {
        wt[0] -= z.intensive[a] * w[1 + a] + z.extensive[a] * w[1 + n + a];
        wt[1 + a] = w[1 + n + a];
        wt[1 + n + a] = -w[1 + a];
      }
      double qt = quad(zt, wt);

      double scale = std::max(std::abs(q), std::abs(qt));
      if (scale < 1e-12) continue;  // degenerate draw, re-sample
      double dev = std::abs(q - qt) / scale;
      report.max_rel_deviation = std::max(report.max_rel_deviation, dev);
      break;
    }
  }
  report.pass = report.max_rel_deviation < 1e-9;
  return report;
}

}  // namespace gtd
