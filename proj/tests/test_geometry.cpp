#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "gtd/errors.hpp"
#include "gtd/geometry.hpp"
#include "gtd/metric.hpp"
#include "gtd/parse.hpp"
#include "gtd/vdw.hpp"
#include "support/oracles.hpp"

using namespace gtd;

namespace {

MetricField euclidean2() {
  MetricField g(Chart{{"x", "y"}});
  g.set(0, 0, Expression::integer(1));
  g.set(1, 1, Expression::integer(1));
  g.set(0, 1, Expression::integer(0));
  return g;
}

// Unit 2-sphere in the (z, p) chart, z the height coordinate and p the
// azimuth: g = diag(1/(1-z^2), 1-z^2). Same geometry as the polar-angle
// chart diag(1, sin^2 theta) under z = cos(theta), which keeps every
// component inside the rational-logarithmic expression language.
MetricField sphere2() {
  MetricField g(Chart{{"z", "p"}});
  g.set(0, 0, parse("1/(1 - z^2)"));
  g.set(1, 1, parse("1 - z^2"));
  g.set(0, 1, Expression::integer(0));
  return g;
}

MetricField ideal_gas_metric() {
  return vdw_metric_closed(VdwParams{0.0, 0.0, 1.0});
}

MetricField vdw_metric() { return vdw_metric_closed(VdwParams{1.0, 1.0, 1.0}); }

Point random_vdw_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> du(0.5, 5.0);
  std::uniform_real_distribution<double> dv(1.5, 5.0);
  const VdwParams params{1.0, 1.0, 1.0};
  for (;;) {
    Point p{du(rng), dv(rng)};
    if (!state_valid(params, {p[0], p[1]})) continue;
    // keep clear of the curvature locus so oracles stay accurate
    if (std::fabs(locus_polynomial(p[0], p[1], params)) > 5.0) return p;
  }
}

}  // namespace

TEST_CASE("christoffel: flat Euclidean metric vanishes symbolically") {
  const ChristoffelField c = christoffel(euclidean2());
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t d = 0; d < 2; ++d) CHECK(c.at(a, b, d).is_zero());
}

TEST_CASE("christoffel: unit 2-sphere closed forms") {
  const ChristoffelField c = christoffel(sphere2());
  // z/(1-z^2), z(1-z^2), -z/(1-z^2): the height-chart images of the
  // polar-angle symbols -sin(t)cos(t) and cot(t).
  const Bindings at{{"z", 0.4}, {"p", 1.0}};
  CHECK(evaluate(c.at(0, 0, 0), at) ==
        doctest::Approx(0.4 / 0.84).epsilon(1e-12));
  CHECK(evaluate(c.at(0, 1, 1), at) ==
        doctest::Approx(0.4 * 0.84).epsilon(1e-12));
  CHECK(evaluate(c.at(1, 0, 1), at) ==
        doctest::Approx(-0.4 / 0.84).epsilon(1e-12));
  CHECK(c.at(0, 0, 1).is_zero());
  CHECK(c.at(1, 0, 0).is_zero());
  CHECK(c.at(1, 1, 1).is_zero());
}

TEST_CASE("christoffel: lower-pair symmetry is structural") {
  for (const MetricField& g : {sphere2(), vdw_metric()}) {
    const ChristoffelField c = christoffel(g);
    for (std::size_t a = 0; a < 2; ++a)
      CHECK(structurally_equal(c.at(a, 0, 1), c.at(a, 1, 0)));
  }
}

TEST_CASE("christoffel: metric compatibility at random points") {
  // d_c g_ab - Gamma^d_ca g_db - Gamma^d_cb g_ad = 0
  std::mt19937_64 rng(23);
  for (const MetricField& g : {sphere2(), vdw_metric()}) {
    const ChristoffelField gam = christoffel(g);
    const oracle::MetricFn gfn = oracle::metric_fn(g);
    const std::size_t n = g.dim();
    for (int trial = 0; trial < 10; ++trial) {
      Point p;
      if (n == 2 && g.chart()[0] == "z") {
        std::uniform_real_distribution<double> dz(-0.8, 0.8);
        p = {dz(rng), 1.0};
      } else {
        p = random_vdw_point(rng);
      }
      const Bindings at = gtd::bind(g.chart(), p);
      const std::vector<double> gv = gfn(p);
      for (std::size_t c = 0; c < n; ++c) {
        const std::vector<double> dg = oracle::fd_metric_deriv(gfn, n, p, c, 1e-6);
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) {
            double resid = dg[a * n + b];
            for (std::size_t d = 0; d < n; ++d)
              resid -= evaluate(gam.at(d, c, a), at) * gv[d * n + b] +
                       evaluate(gam.at(d, c, b), at) * gv[a * n + d];
            CHECK(std::fabs(resid) <
                  1e-8 * std::max(1.0, std::fabs(gv[a * n + b])));
          }
      }
    }
  }
}

TEST_CASE("christoffel: identically singular metric is rejected") {
  MetricField g(Chart{{"x", "y"}});
  g.set(0, 0, Expression::integer(1));
  g.set(0, 1, Expression::integer(1));
  g.set(1, 1, Expression::integer(1));
  CHECK_THROWS_AS(christoffel(g), SingularMetricError);
}

TEST_CASE("inverse_metric: diagonal and banded cases") {
  const std::vector<Expression> inv = inverse_metric(sphere2());
  const Bindings at{{"z", 0.3}, {"p", 0.0}};
  CHECK(evaluate(inv[0], at) == doctest::Approx(1.0 - 0.09).epsilon(1e-13));
  CHECK(evaluate(inv[3], at) == doctest::Approx(1.0 / 0.91).epsilon(1e-13));
  CHECK(evaluate(inv[1], at) == 0.0);

  MetricField t(Chart{{"x", "y", "w"}});
  t.set(0, 0, Expression::integer(2));
  t.set(1, 1, Expression::integer(2));
  t.set(2, 2, Expression::integer(2));
  t.set(0, 1, Expression::integer(1));
  t.set(1, 2, Expression::integer(1));
  t.set(0, 2, Expression::integer(0));
  const std::vector<Expression> tinv = inverse_metric(t);
  const std::vector<double> want =
      oracle::mat_inverse({2, 1, 0, 1, 2, 1, 0, 1, 2}, 3);
  for (std::size_t i = 0; i < 9; ++i)
    CHECK(evaluate(tinv[i], {}) == doctest::Approx(want[i]).epsilon(1e-13));
}

TEST_CASE("riemann: flat space is identically zero") {
  const CurvatureField f = riemann(euclidean2());
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t d = 0; d < 2; ++d)
          CHECK(f.riemann(a, b, c, d).is_zero());
  CHECK(f.scalar().is_zero());
}

TEST_CASE("riemann: unit 2-sphere scalar is +2") {
  const CurvatureField f = riemann(sphere2());
  CHECK(f.scalar().str() == "2");
  for (double z : {-0.9, -0.3, 0.0, 0.5, 0.95})
    CHECK(scalar_curvature_at(f, {z, 1.0}) ==
          doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("riemann: antisymmetry in the last index pair") {
  std::mt19937_64 rng(31);
  for (const MetricField& g : {sphere2(), vdw_metric()}) {
    const CurvatureField f = riemann(g);
    for (int trial = 0; trial < 10; ++trial) {
      const Point p = g.chart()[0] == "z"
                          ? Point{std::uniform_real_distribution<double>(
                                      -0.8, 0.8)(rng),
                                  1.0}
                          : random_vdw_point(rng);
      const Bindings at = gtd::bind(g.chart(), p);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t d = 0; d < 2; ++d) {
              const double fwd = evaluate(f.riemann(a, b, c, d), at);
              const double rev = evaluate(f.riemann(a, b, d, c), at);
              CHECK(std::fabs(fwd + rev) < 1e-8 * std::max(1.0, std::fabs(fwd)));
            }
    }
  }
}

TEST_CASE("riemann: two-dimensional Einstein identity Ricci = (R/2) g") {
  std::mt19937_64 rng(37);
  for (const MetricField& g : {sphere2(), vdw_metric()}) {
    const CurvatureField f = riemann(g);
    for (int trial = 0; trial < 10; ++trial) {
      const Point p = g.chart()[0] == "z"
                          ? Point{std::uniform_real_distribution<double>(
                                      -0.8, 0.8)(rng),
                                  1.0}
                          : random_vdw_point(rng);
      const Bindings at = gtd::bind(g.chart(), p);
      const double R = evaluate(f.scalar(), at);
      double scale = 1.0;
      for (std::size_t i = 0; i < 4; ++i)
        scale = std::max(scale, std::fabs(evaluate(g.at(i / 2, i % 2), at)));
      for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t d = 0; d < 2; ++d) {
          const double lhs = evaluate(f.ricci(b, d), at);
          const double rhs = 0.5 * R * evaluate(g.at(b, d), at);
          CHECK(std::fabs(lhs - rhs) < 1e-8 * scale);
        }
    }
  }
}

TEST_CASE("riemann: inverse-square diagonal families are flat") {
  // Sum of c_a (dE^a)^2 / (E^a)^2 with constant coefficients; includes the
  // induced ideal-gas metric as the 2-dimensional case.
  MetricField g2(Chart{{"U", "V"}});
  g2.set(0, 0, parse("-15/4 / U^2"));
  g2.set(1, 1, parse("-5/2 / V^2"));
  g2.set(0, 1, Expression::integer(0));
  MetricField g3(Chart{{"x", "y", "w"}});
  g3.set(0, 0, parse("2/x^2"));
  g3.set(1, 1, parse("7/y^2"));
  g3.set(2, 2, parse("1/w^2"));
  g3.set(0, 1, Expression::integer(0));
  g3.set(0, 2, Expression::integer(0));
  g3.set(1, 2, Expression::integer(0));
  for (const MetricField& g : {g2, g3}) {
    const CurvatureField f = riemann(g);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> d(0.5, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
      Point p(g.dim());
      for (auto& x : p) x = d(rng);
      CHECK(std::fabs(scalar_curvature_at(f, p)) < 1e-9);
    }
  }
}

TEST_CASE("metric_eval: induced ideal-gas metric at the unit point") {
  const MetricValue v = metric_eval(ideal_gas_metric(), {1.0, 1.0});
  CHECK(v.g[0] == doctest::Approx(-15.0 / 4.0).epsilon(1e-13));
  CHECK(v.g[3] == doctest::Approx(-5.0 / 2.0).epsilon(1e-13));
  CHECK(v.g[1] == doctest::Approx(0.0));
  CHECK(v.signature_neg == 2);
  CHECK(v.signature_pos == 0);
  CHECK(!v.degenerate);
}

TEST_CASE("metric_eval: Euclidean signature and determinant") {
  const MetricValue v = metric_eval(euclidean2(), {3.0, -7.0});
  CHECK(v.det == doctest::Approx(1.0));
  CHECK(v.signature_pos == 2);
  CHECK(v.signature_neg == 0);
}

TEST_CASE("metric_eval: van der Waals components at (2,3), unit parameters") {
  // prefactor (1/2) * 72 / (7^3 * 2) = 18/343 against the bracket
  // [-(3/2) * 9, (3/2) * 1, -726/72].
  const MetricValue v = metric_eval(vdw_metric(), {2.0, 3.0});
  CHECK(oracle::rel_err(v.g[0], -243.0 / 343.0) < 1e-12);
  CHECK(oracle::rel_err(v.g[1], 27.0 / 343.0) < 1e-12);
  CHECK(oracle::rel_err(v.g[3], -363.0 / 686.0) < 1e-12);
  CHECK(oracle::rel_err(v.det, 347004.0 / 941192.0) < 1e-12);
  CHECK(v.signature_neg == 2);
}

TEST_CASE("metric_eval: near-zero determinant sets the degeneracy flag") {
  MetricField h(Chart{{"x", "y"}});
  h.set(0, 0, Expression::integer(1));
  h.set(1, 1, Expression::variable("x"));
  h.set(0, 1, Expression::integer(0));
  CHECK(metric_eval(h, {1e-15, 0.0}).degenerate);
  CHECK(!metric_eval(h, {1.0, 0.0}).degenerate);
}

TEST_CASE("scalar_curvature_at: proximity guard throws with the denominator") {
  const CurvatureField f = riemann(vdw_metric());
  const VdwParams params{1.0, 1.0, 1.0};
  const double ref = std::fabs(scalar_denominator_at(f, {2.0, 3.0}));
  REQUIRE(ref > 0.0);
  // regular point fine with the guard armed
  CHECK(std::isfinite(scalar_curvature_at(f, {2.0, 3.0}, ref)));
  // on the singular locus the denominator underflows the threshold
  const double Ustar = phase_boundary_energy(3.0, params);
  const Point near{Ustar + 1e-9, 3.0};
  CHECK_THROWS_AS((void)scalar_curvature_at(f, near, ref),
                  SingularProximityError);
  try {
    (void)scalar_curvature_at(f, near, ref);
  } catch (const SingularProximityError& e) {
    CHECK(std::fabs(e.denominator_value()) < 1e-10 * ref);
  }
}

TEST_CASE("scalar curvature scales inversely with a constant metric factor") {
  std::mt19937_64 rng(43);
  const CurvatureField base = riemann(vdw_metric());
  const CurvatureField scaled =
      riemann(vdw_metric_closed(VdwParams{1.0, 1.0, 2.5}));
  for (int trial = 0; trial < 10; ++trial) {
    const Point p = random_vdw_point(rng);
    const double r1 = scalar_curvature_at(base, p);
    const double r2 = scalar_curvature_at(scaled, p);
    CHECK(oracle::rel_err(r2, r1 / 2.5) < 1e-10);
  }
  // sphere of radius 2: metric 4x, scalar 1/4 of the unit value
  MetricField s4(Chart{{"z", "p"}});
  s4.set(0, 0, parse("4/(1 - z^2)"));
  s4.set(1, 1, parse("4*(1 - z^2)"));
  s4.set(0, 1, Expression::integer(0));
  CHECK(scalar_curvature_at(riemann(s4), {0.2, 0.0}) ==
        doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("finite-difference oracles confirm symbolic Christoffel and R") {
  std::mt19937_64 rng(47);
  const std::vector<MetricField> metrics = {euclidean2(), sphere2(),
                                            ideal_gas_metric(), vdw_metric()};
  for (const MetricField& g : metrics) {
    const ChristoffelField gam = christoffel(g);
    const CurvatureField curv = riemann(g);
    const oracle::MetricFn gfn = oracle::metric_fn(g);
    for (int trial = 0; trial < 10; ++trial) {
      Point p;
      if (g.chart()[0] == "z") {
        p = {std::uniform_real_distribution<double>(-0.8, 0.8)(rng), 1.0};
      } else if (g.chart()[0] == "x") {
        std::uniform_real_distribution<double> d(-3.0, 3.0);
        p = {d(rng), d(rng)};
      } else {
        p = random_vdw_point(rng);
      }
      const Bindings at = gtd::bind(g.chart(), p);
      const std::vector<double> fdg = oracle::fd_christoffel(gfn, 2, p);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          for (std::size_t c = 0; c < 2; ++c)
            CHECK(oracle::scaled_err(evaluate(gam.at(a, b, c), at),
                                     fdg[a * 4 + b * 2 + c]) < 1e-4);
      const double fdR = oracle::fd_scalar_curvature(gfn, 2, p);
      CHECK(oracle::scaled_err(evaluate(curv.scalar(), at), fdR) < 1e-4);
    }
  }
}
