#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "gtd/calculus.hpp"
#include "gtd/contact.hpp"
#include "gtd/errors.hpp"
#include "gtd/geometry.hpp"
#include "gtd/parse.hpp"
#include "gtd/vdw.hpp"
#include "support/oracles.hpp"

using namespace gtd;

namespace {

FundamentalSystem vdw11() { return vdw_system(VdwParams{1.0, 1.0, 1.0}); }

bool phase_points_close(const PhasePoint& a, const PhasePoint& b,
                        double tol = 1e-14) {
  if (a.n() != b.n()) return false;
  if (std::fabs(a.potential - b.potential) > tol) return false;
  for (std::size_t i = 0; i < a.n(); ++i) {
    if (std::fabs(a.extensive[i] - b.extensive[i]) > tol) return false;
    if (std::fabs(a.intensive[i] - b.intensive[i]) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("intensive_of: inverse temperature and P/T for van der Waals") {
  const FundamentalSystem sys = vdw11();
  const std::vector<double> I = intensive_of(sys, {1.0, 2.0});
  CHECK(I[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(I[1] == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("intensive_of: constant potential has zero intensives") {
  FundamentalSystem sys{Chart{{"x", "y"}}, "Phi", Expression::integer(5)};
  const std::vector<double> I = intensive_of(sys, {0.3, -2.0});
  CHECK(I[0] == 0.0);
  CHECK(I[1] == 0.0);
}

TEST_CASE("embed: van der Waals lift at (1,2)") {
  const PhasePoint z = embed(vdw11(), {1.0, 2.0});
  CHECK(z.potential == doctest::Approx(1.5 * std::log(1.5)).epsilon(1e-14));
  CHECK(z.potential == doctest::Approx(0.60820).epsilon(1e-4));
  CHECK(z.extensive == std::vector<double>{1.0, 2.0});
  CHECK(z.intensive[0] == doctest::Approx(1.0));
  CHECK(z.intensive[1] == doctest::Approx(0.75));
}

TEST_CASE("embed: ideal gas at the unit point has zero potential") {
  const PhasePoint z = embed(vdw_system(VdwParams{0.0, 0.0, 1.0}), {1.0, 1.0});
  CHECK(z.potential == doctest::Approx(0.0));
  CHECK(z.intensive[0] == doctest::Approx(1.5));
  CHECK(z.intensive[1] == doctest::Approx(1.0));
}

TEST_CASE("theta_residual: first law holds along the embedding") {
  const FundamentalSystem sys = vdw11();
  CHECK(std::fabs(theta_residual(sys, {2.0, 3.0}, {1.0, 0.0})) < 1e-12);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> du(0.5, 4.0);
  std::uniform_real_distribution<double> dv(1.5, 5.0);
  std::uniform_real_distribution<double> dw(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const Point p{du(rng), dv(rng)};
    CHECK(std::fabs(theta_residual(sys, p, {dw(rng), dw(rng)})) < 1e-12);
  }
}

TEST_CASE("theta_residual: a perturbed intensive shows up linearly") {
  const FundamentalSystem sys = vdw11();
  const Point p{2.0, 3.0};
  PhasePoint z = embed(sys, p);
  const std::vector<double> v{0.7, -0.4};
  // dPhi on v as the embedding produces it
  double dphi = 0.0;
  for (std::size_t a = 0; a < 2; ++a) dphi += z.intensive[a] * v[a];
  z.intensive[0] += 0.1;
  CHECK(std::fabs(theta_residual(z, dphi, v, {0.0, 0.0})) ==
        doctest::Approx(0.1 * std::fabs(v[0])).epsilon(1e-12));
}

TEST_CASE("contact_nondegeneracy: unit volume coefficient, point-independent") {
  const PhasePoint z1{0.7, {1.0}, {2.0}};
  const double c1 = contact_nondegeneracy(z1);
  CHECK(std::fabs(c1) == doctest::Approx(1.0));
  const PhasePoint z2{5.0, {1.0, 2.0}, {3.0, 4.0}};
  const PhasePoint z3{-1.0, {0.2, 9.0}, {-3.0, 0.1}};
  const double c2 = contact_nondegeneracy(z2);
  CHECK(std::fabs(c2) == doctest::Approx(1.0));
  CHECK(contact_nondegeneracy(z3) == doctest::Approx(c2));
}

TEST_CASE("total_legendre: worked example and involution structure") {
  const PhasePoint z{5.0, {1.0, 2.0}, {3.0, 4.0}};
  const PhasePoint t = total_legendre(z);
  CHECK(t.potential == doctest::Approx(-6.0));
  CHECK(t.extensive == std::vector<double>{3.0, 4.0});
  CHECK(t.intensive == std::vector<double>{-1.0, -2.0});

  const PhasePoint twice = total_legendre(t);
  CHECK(twice.potential == doctest::Approx(z.potential));
  CHECK(twice.extensive[0] == doctest::Approx(-z.extensive[0]));
  CHECK(twice.intensive[1] == doctest::Approx(-z.intensive[1]));

  PhasePoint four = z;
  for (int i = 0; i < 4; ++i) four = total_legendre(four);
  CHECK(phase_points_close(four, z));

  const PhasePoint origin{0.0, {0.0, 0.0}, {0.0, 0.0}};
  CHECK(phase_points_close(total_legendre(origin), origin));
}

TEST_CASE("partial_legendre: empty set is the identity") {
  const PhasePoint z{5.0, {1.0, 2.0}, {3.0, 4.0}};
  CHECK(phase_points_close(partial_legendre(z, {}), z));
}

TEST_CASE("partial_legendre: full set equals the total transformation") {
  const PhasePoint z{5.0, {1.0, 2.0}, {3.0, 4.0}};
  CHECK(phase_points_close(partial_legendre(z, {1, 2}), total_legendre(z)));
}

TEST_CASE("partial_legendre: first-pair exchange on a two-variable point") {
  const PhasePoint z{5.0, {1.0, 2.0}, {3.0, 4.0}};
  const PhasePoint t = partial_legendre(z, {1});
  CHECK(t.potential == doctest::Approx(2.0));
  CHECK(t.extensive == std::vector<double>{3.0, 2.0});
  CHECK(t.intensive == std::vector<double>{-1.0, 4.0});
}

TEST_CASE("partial_legendre: indices are 1-based and range-checked") {
  const PhasePoint z{5.0, {1.0, 2.0}, {3.0, 4.0}};
  CHECK_THROWS_AS(partial_legendre(z, {0}), Error);
  CHECK_THROWS_AS(partial_legendre(z, {3}), Error);
}

TEST_CASE("partial_legendre: disjoint applications compose") {
  const PhasePoint z{1.25, {1.0, 2.0, -0.5}, {3.0, -4.0, 2.0}};
  const PhasePoint step = partial_legendre(partial_legendre(z, {1}), {3});
  const PhasePoint once = partial_legendre(z, {1, 3});
  CHECK(phase_points_close(step, once, 0.0));  // exact, same arithmetic
}

TEST_CASE("gtd_metric: one-dimensional system components") {
  const MetricField G = gtd_metric(GtdMetricSpec{1.0, ChiKind::Identity}, 1);
  // chart (Phi, E1, I_E1); G = (dPhi - I dE)^2 + (E I) dE dI
  const Bindings at{{"Phi", 0.0}, {"E1", 2.0}, {"I_E1", 3.0}};
  CHECK(G.at(0, 0).is_one());
  CHECK(evaluate(G.at(0, 1), at) == doctest::Approx(-3.0));
  CHECK(evaluate(G.at(1, 1), at) == doctest::Approx(9.0));
  CHECK(evaluate(G.at(1, 2), at) == doctest::Approx(3.0));  // E I / 2
  CHECK(G.at(0, 2).is_zero());
  CHECK(G.at(2, 2).is_zero());
  CHECK(structurally_equal(G.at(1, 2), G.at(2, 1)));
}

TEST_CASE("gtd_metric: Lorentzian coupling flips the single cross term") {
  const MetricField G = gtd_metric(GtdMetricSpec{1.0, ChiKind::Lorentzian}, 1);
  const Bindings at{{"Phi", 0.0}, {"E1", 2.0}, {"I_E1", 3.0}};
  CHECK(evaluate(G.at(1, 2), at) == doctest::Approx(-3.0));
  // second axis of a 2-dimensional system keeps the + sign
  const MetricField G2 = gtd_metric(GtdMetricSpec{1.0, ChiKind::Lorentzian}, 2);
  const Bindings at2{{"Phi", 0.0}, {"E1", 1.0}, {"E2", 1.0},
                     {"I_E1", 1.0}, {"I_E2", 1.0}};
  CHECK(evaluate(G2.at(1, 3), at2) < 0.0);
  CHECK(evaluate(G2.at(2, 4), at2) > 0.0);
}

TEST_CASE("gtd_metric: zero metric constant is rejected") {
  CHECK_THROWS_AS(gtd_metric(GtdMetricSpec{0.0, ChiKind::Identity}, 2), Error);
}

TEST_CASE("induce_metric: ideal gas closed form with a non-unit constant") {
  const MetricField g =
      induce_metric(vdw_system(VdwParams{0.0, 0.0, 2.0}),
                    GtdMetricSpec{2.0, ChiKind::Identity});
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(0.5, 4.0);
  for (int i = 0; i < 20; ++i) {
    const double U = d(rng), V = d(rng);
    const Bindings at{{"U", U}, {"V", V}};
    CHECK(oracle::rel_err(evaluate(g.at(0, 0), at),
                          -2.0 * 5.0 / 2.0 * 1.5 / (U * U)) < 1e-12);
    CHECK(oracle::rel_err(evaluate(g.at(1, 1), at),
                          -2.0 * 5.0 / 2.0 / (V * V)) < 1e-12);
    CHECK(evaluate(g.at(0, 1), at) == doctest::Approx(0.0));
  }
}

TEST_CASE("induce_metric: equals the scalar-times-Hessian closed form") {
  // g_bc = L (sum_a E^a dPhi/dE^a) d2Phi/dE^b dE^c, for an asymmetric
  // potential exercising cross terms.
  FundamentalSystem sys{Chart{{"x", "y"}}, "Phi",
                        parse("x^2*y + ln(x) - y^3/3")};
  const double lambda = 1.5;
  const MetricField g =
      induce_metric(sys, GtdMetricSpec{lambda, ChiKind::Identity});
  const Expression dot = Expression::variable("x") * differentiate(sys.potential, "x") +
                         Expression::variable("y") * differentiate(sys.potential, "y");
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(0.6, 2.0);
  const std::array<std::string, 2> names{"x", "y"};
  for (int i = 0; i < 30; ++i) {
    const Bindings at{{"x", d(rng)}, {"y", d(rng)}};
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 2; ++c) {
        const Expression hess = differentiate(
            differentiate(sys.potential, names[b]), names[c]);
        const double want = lambda * evaluate(dot, at) * evaluate(hess, at);
        CHECK(oracle::scaled_err(evaluate(g.at(b, c), at), want) < 1e-10);
      }
  }
}

TEST_CASE("induce_metric: linear potential degenerates") {
  FundamentalSystem sys{Chart{{"x", "y"}}, "Phi", parse("2*x + 3*y")};
  CHECK_THROWS_AS(induce_metric(sys, GtdMetricSpec{1.0, ChiKind::Identity}),
                  DegenerateMetricError);
}

TEST_CASE("hessian_metric: quadratic potential gives the identity") {
  FundamentalSystem sys{Chart{{"x", "y"}}, "Phi", parse("x^2/2 + y^2/2")};
  const MetricField g = hessian_metric(sys);
  CHECK(g.at(0, 0).is_one());
  CHECK(g.at(1, 1).is_one());
  CHECK(g.at(0, 1).is_zero());
}

TEST_CASE("hessian_metric: van der Waals energy component") {
  const MetricField g = hessian_metric(vdw11());
  // d2S/dU2 = -(3/2)/(U + a/V)^2
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> d(0.8, 3.0);
  for (int i = 0; i < 20; ++i) {
    const double U = d(rng), V = d(rng) + 1.0;
    const Bindings at{{"U", U}, {"V", V}};
    CHECK(oracle::rel_err(evaluate(g.at(0, 0), at),
                          -1.5 / ((U + 1.0 / V) * (U + 1.0 / V))) < 1e-12);
  }
}

TEST_CASE("hessian_metric: matches the pullback of its phase-space generator") {
  for (const FundamentalSystem& sys :
       {vdw11(), FundamentalSystem{Chart{{"x", "y"}}, "Phi",
                                   parse("x^2*y + ln(x) - y^3/3")}}) {
    const MetricField direct = hessian_metric(sys);
    const MetricField pulled =
        pull_back(hessian_phase_metric(sys.chart, sys.potential_name), sys);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> d(0.8, 2.5);
    for (int i = 0; i < 25; ++i) {
      Point p{d(rng), d(rng)};
      if (sys.chart[0] == "U") p[1] += 1.0;  // keep V - b positive
      const Bindings at = gtd::bind(sys.chart, p);
      for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t c = 0; c < 2; ++c)
          CHECK(oracle::scaled_err(evaluate(direct.at(b, c), at),
                                   evaluate(pulled.at(b, c), at)) < 1e-10);
    }
  }
}

TEST_CASE("pull_back rejects a metric on a foreign chart") {
  MetricField wrong(Chart{{"alpha", "beta"}});
  wrong.set(0, 0, Expression::integer(1));
  wrong.set(1, 1, Expression::integer(1));
  wrong.set(0, 1, Expression::integer(0));
  CHECK_THROWS_AS(pull_back(wrong, vdw11()), Error);
}

TEST_CASE("legendre_invariance_check: metric family passes, references fail") {
  const MetricField G = gtd_metric(GtdMetricSpec{1.0, ChiKind::Identity}, 2);
  const InvarianceReport pass = legendre_invariance_check(G, 2, 100);
  CHECK(pass.pass);
  CHECK(pass.max_rel_deviation < 1e-9);
  CHECK(pass.trials == 100);

  const InvarianceReport hess =
      legendre_invariance_check(hessian_phase_metric(2), 2, 100);
  CHECK(!hess.pass);
  CHECK(hess.max_rel_deviation > 1e-3);

  const InvarianceReport flat =
      legendre_invariance_check(flat_phase_metric(2), 2, 100);
  CHECK(!flat.pass);
  CHECK(flat.max_rel_deviation > 1e-3);
}

TEST_CASE("legendre_invariance_check: verdicts are seed-stable") {
  const MetricField G = gtd_metric(GtdMetricSpec{1.0, ChiKind::Identity}, 2);
  const InvarianceReport r1 = legendre_invariance_check(G, 2, 50, 99);
  const InvarianceReport r2 = legendre_invariance_check(G, 2, 50, 99);
  CHECK(r1.max_rel_deviation == r2.max_rel_deviation);
}

TEST_CASE("scalar curvature is representation-invariant under total Legendre") {
  // The transformed representation uses E~ = I(E) as coordinates; its
  // induced metric is the coordinate image of g under the intensive map.
  // The scalar curvature at corresponding points must agree. The tilde
  // metric is only available numerically (the intensive map is inverted by
  // Newton iteration), so the curvature on that side comes from the
  // wide-stencil finite-difference oracle.
  const FundamentalSystem sys = vdw11();
  const MetricField g = induce_metric(sys, GtdMetricSpec{1.0, ChiKind::Identity});
  const CurvatureField curv = riemann(g);

  const Expression IU = differentiate(sys.potential, "U");
  const Expression IV = differentiate(sys.potential, "V");
  const std::array<Expression, 4> hess{
      differentiate(IU, "U"), differentiate(IU, "V"),
      differentiate(IV, "U"), differentiate(IV, "V")};

  auto intensive = [&](const Point& E) {
    const Bindings at{{"U", E[0]}, {"V", E[1]}};
    return Point{evaluate(IU, at), evaluate(IV, at)};
  };
  auto jacobian = [&](const Point& E) {
    const Bindings at{{"U", E[0]}, {"V", E[1]}};
    return std::array<double, 4>{evaluate(hess[0], at), evaluate(hess[1], at),
                                 evaluate(hess[2], at), evaluate(hess[3], at)};
  };
  auto invert = [&](const Point& tilde, Point guess) {
    for (int it = 0; it < 60; ++it) {
      const Point f = intensive(guess);
      const double r0 = f[0] - tilde[0], r1 = f[1] - tilde[1];
      if (std::fabs(r0) + std::fabs(r1) < 1e-15) break;
      const std::array<double, 4> J = jacobian(guess);
      const double det = J[0] * J[3] - J[1] * J[2];
      guess[0] -= (J[3] * r0 - J[1] * r1) / det;
      guess[1] -= (-J[2] * r0 + J[0] * r1) / det;
    }
    return guess;
  };

  const Point E0{2.0, 3.0};
  const Point T0 = intensive(E0);
  const oracle::MetricFn g_fn = oracle::metric_fn(g);
  const oracle::MetricFn tilde_fn = [&](const Point& tilde) {
    const Point E = invert(tilde, E0);
    const std::array<double, 4> J = jacobian(E);  // dI/dE
    const double det = J[0] * J[3] - J[1] * J[2];
    // dE/dI~ = J^{-1}
    const std::array<double, 4> Jin{J[3] / det, -J[1] / det, -J[2] / det,
                                    J[0] / det};
    const std::vector<double> gE = g_fn(E);
    std::vector<double> out(4, 0.0);
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d) {
        double s = 0.0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            s += Jin[a * 2 + c] * Jin[b * 2 + d] * gE[a * 2 + b];
        out[c * 2 + d] = s;
      }
    return out;
  };

  const double R_direct = scalar_curvature_at(curv, E0);
  // one Richardson step over the fourth-order stencil cancels the leading
  // truncation term; the Newton noise floor is far below the tolerance
  const double Rh = oracle::fd_scalar_curvature4(tilde_fn, 2, T0, 5e-3, 5e-3);
  const double Rh2 =
      oracle::fd_scalar_curvature4(tilde_fn, 2, T0, 2.5e-3, 2.5e-3);
  const double R_tilde = (16.0 * Rh2 - Rh) / 15.0;
  CHECK(oracle::rel_err(R_tilde, R_direct) < 1e-6);
}
