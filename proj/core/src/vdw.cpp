#include "gtd/vdw.hpp"

#include <algorithm>
#include <cmath>

#include "gtd/errors.hpp"
#include "gtd/simplify.hpp"

namespace gtd {

void VdwParams::validate() const {
  if (a < 0.0 || b < 0.0)
    throw Error("interaction parameters must be nonnegative");
  if (lambda == 0.0) throw Error("metric constant must be nonzero");
}

bool state_valid(const VdwParams& params, const StatePoint& p) {
  return p.V > params.b && p.V > 0.0 && p.U + params.a / p.V > 0.0;
}

FundamentalSystem vdw_system(const VdwParams& params) {
  params.validate();
  FundamentalSystem sys;
  sys.chart.coords = {"U", "V"};
  sys.potential_name = "S";
  Expression U = Expression::variable("U");
  Expression V = Expression::variable("V");
  Expression ea = exact_constant(params.a);
  Expression eb = exact_constant(params.b);
  sys.potential = Expression::rational(3, 2) * Expression::ln(U + ea / V) +
                  Expression::ln(V - eb);
  return sys;
}

std::pair<double, double> temperature_pressure(const VdwParams& params,
                                               const StatePoint& p) {
  params.validate();
  if (!state_valid(params, p)) throw Error("state outside physical domain");
  const double a = params.a, b = params.b, U = p.U, V = p.V;
  double T = (2.0 / 3.0) * (U + a / V);
  double P = (2.0 * U * V * V - a * V + 3.0 * a * b) /
             (3.0 * V * V * (V - b));
  return {T, P};
}

MetricField vdw_metric_closed(const VdwParams& params) {
  params.validate();
  Chart chart;
  chart.coords = {"U", "V"};
  Expression U = Expression::variable("U");
  Expression V = Expression::variable("V");
  Expression ea = exact_constant(params.a);
  Expression eb = exact_constant(params.b);
  Expression lam = exact_constant(params.lambda);

  Expression D2 = Expression::integer(5) * U * V * V -
                  Expression::integer(3) * U * V * eb - ea * V +
                  Expression::integer(3) * ea * eb;
  Expression W =
      Expression::integer(2) * V * V * V * V * U * U -
      Expression::integer(2) * V * V * V * U * ea - ea * ea * V * V +
      Expression::integer(12) * ea * V * V * eb * U +
      Expression::integer(6) * V * eb * ea * ea -
      Expression::integer(6) * ea * eb * eb * U * V -
      Expression::integer(3) * eb * eb * ea * ea;
  Expression pref =
      lam * Expression::rational(1, 2) * D2 /
      (Expression::pow(U * V + ea, Rational(3)) * (V - eb));

  MetricField g(chart);
  g.set(0, 0, simplify(pref * Expression::rational(-3, 2) * V * V));
  g.set(0, 1, simplify(pref * Expression::rational(3, 2) * ea));
  g.set(1, 1,
        simplify(pref * -(W / (Expression::integer(2) * V * V *
                               Expression::pow(V - eb, Rational(2))))));
  return g;
}

SingularLocusReport singular_locus(double P, const VdwParams& params) {
  params.validate();
  if (!(P > 0.0)) throw Error("pressure must be positive");
  const double a = params.a, b = params.b;

  SingularLocusReport report;
  report.pressure = P;
  report.params = params;

  auto f = [&](double V) { return P * V * V * V - a * V + 2.0 * a * b; };

  if (a == 0.0) return report;  // f = P V^3 > 0 for all V > b

  // f' = 3 P V^2 - a vanishes at the single stationary point V* > 0.
  const double Vstar = std::sqrt(a / (3.0 * P));
  if (Vstar <= b) return report;  // minimum outside the domain, f > 0 on it

  const double fstar = f(Vstar);
  const double scale = std::max(1.0, P * Vstar * Vstar * Vstar);
  if (std::abs(fstar) <= 1e-12 * scale) {
    report.roots.push_back({Vstar, Vstar, Vstar, std::abs(fstar), 2});
    return report;
  }
  if (fstar > 0.0) return report;

  auto bisect = [&](double lo, double hi) {
    // invariant: f(lo) and f(hi) have opposite signs
    const bool rising = f(hi) > 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      double mid = 0.5 * (lo + hi);
      if ((f(mid) > 0.0) == rising)
        hi = mid;
      else
        lo = mid;
    }
    double V = 0.5 * (lo + hi);
    return LocusRoot{V, lo, hi, std::abs(f(V)), 1};
  };

  double lo = b + (Vstar - b) * 1e-12;
  if (f(lo) > 0.0) report.roots.push_back(bisect(lo, Vstar));
  double hi = std::max(3.0 * b, 2.0 * Vstar);
  while (f(hi) <= 0.0) hi *= 10.0;
  report.roots.push_back(bisect(Vstar, hi));
  std::sort(report.roots.begin(), report.roots.end(),
            [](const LocusRoot& x, const LocusRoot& y) { return x.V < y.V; });
  return report;
}

FactorCheck denominator_factor_check(const VdwParams& params,
                                     const StatePoint& p) {
  params.validate();
  if (!state_valid(params, p)) throw Error("state outside physical domain");
  const double a = params.a, b = params.b, U = p.U, V = p.V;
  auto [T, P] = temperature_pressure(params, p);
  (void)T;
  FactorCheck c;
  c.lhs1 = V * V * V * U - 2.0 * V * V * a + 6.0 * V * b * a - 3.0 * b * b * a;
  c.rhs1 = 1.5 * (V - b) * (P * V * V * V - a * V + 2.0 * a * b);
  c.lhs2 = 5.0 * U * V * V - 3.0 * U * V * b - a * V + 3.0 * a * b;
  c.rhs2 = 3.0 * V * (V - b) * (U + P * V);
  return c;
}

double phase_boundary_energy(double V, const VdwParams& params) {
  params.validate();
  if (!(V > params.b) || !(V > 0.0))
    throw Error("volume outside physical domain");
  const double a = params.a, b = params.b;
  return (2.0 * V * V * a - 6.0 * V * b * a + 3.0 * b * b * a) / (V * V * V);
}

double locus_polynomial(double U, double V, const VdwParams& params) {
  const double a = params.a, b = params.b;
  return V * V * V * U - 2.0 * V * V * a + 6.0 * V * b * a - 3.0 * b * b * a;
}

double curvature_denominator(double U, double V, const VdwParams& params) {
  const double a = params.a, b = params.b;
  const double d1 = locus_polynomial(U, V, params);
  const double d2 =
      5.0 * U * V * V - 3.0 * U * V * b - a * V + 3.0 * a * b;
  return d1 * d1 * d2 * d2 * d2;
}

double critical_pressure(const VdwParams& params) {
  params.validate();
  if (params.b == 0.0) throw Error("no critical point without excluded volume");
  return params.a / (27.0 * params.b * params.b);
}

double critical_volume(const VdwParams& params) {
  params.validate();
  return 3.0 * params.b;
}

}  // namespace gtd
