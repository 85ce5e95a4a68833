#include "gtd/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gtd/errors.hpp"

namespace gtd {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::ReachedMaxTau: return "reached-max-tau";
    case Termination::SingularBoundary: return "singular-boundary";
    case Termination::DomainExit: return "domain-exit";
    case Termination::StepUnderflow: return "step-underflow";
    case Termination::MaxStepsExceeded: return "max-steps-exceeded";
  }
  return "unknown";
}

std::string to_string(Completeness c) {
  switch (c) {
    case Completeness::IncompleteAtPhaseBoundary:
      return "incomplete-at-phase-boundary";
    case Completeness::Complete: return "complete";
    case Completeness::OtherTermination: return "other-termination";
  }
  return "unknown";
}

GeodesicRhs::GeodesicRhs(const MetricField& metric,
                         const SimplifyOptions& opts)
    : chart_(metric.chart()) {
  if (chart_.dim() != 2)
    throw Error("geodesic integration requires a 2-dimensional chart");
  ChristoffelField gam = christoffel(metric, opts);
  for (std::size_t a = 0; a < 2; ++a) {
    std::size_t p = 0;
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = b; c < 2; ++c)
        gamma_[a * 3 + p++] = CompiledExpr(gam.at(a, b, c), chart_.coords);
  }
}

std::array<double, 4> GeodesicRhs::operator()(const GeoState& y) const {
  const double args[2] = {y[0], y[1]};
  const double v0 = y[2], v1 = y[3];
  std::array<double, 4> out;
  out[0] = v0;
  out[1] = v1;
  for (std::size_t a = 0; a < 2; ++a) {
    const double g00 = gamma_[a * 3 + 0](args);
    const double g01 = gamma_[a * 3 + 1](args);
    const double g11 = gamma_[a * 3 + 2](args);
    out[2 + a] = g00 * v0 * v0 + 2.0 * g01 * v0 * v1 + g11 * v1 * v1;
  }
  return out;
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0,
                 kA74 = 125.0 / 192.0, kA75 = -2187.0 / 6784.0,
                 kA76 = 11.0 / 84.0;
// Fifth-minus-fourth-order error weights.
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0,
                 kE4 = 71.0 / 1920.0, kE5 = -17253.0 / 339200.0,
                 kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
// Fourth-degree dense-output weights.
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

constexpr double kMinStep = 1e-12;

bool finite(const GeoState& y) {
  for (double v : y)
    if (!std::isfinite(v)) return false;
  return true;
}

struct DenseSegment {
  // Quartic interpolant over one accepted step [t, t+h].
  std::array<GeoState, 5> rc{};
  GeoState at(double theta) const {
    const double th1 = 1.0 - theta;
    GeoState out;
    for (std::size_t i = 0; i < 4; ++i)
      out[i] = rc[0][i] +
               theta * (rc[1][i] +
                        th1 * (rc[2][i] +
                               theta * (rc[3][i] + th1 * rc[4][i])));
    return out;
  }
};

}  // namespace

GeodesicTrajectory integrate(const GeodesicRhs& rhs,
                             const GeodesicProblem& problem) {
  const GeodesicOptions& opt = problem.options;
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0))
    throw Error("tolerances must be positive");
  if (!(opt.tau_max > 0.0)) throw Error("tau_max must be positive");

  GeodesicTrajectory traj;
  GeoState y = problem.initial;
  double t = 0.0;

  if (problem.domain && !problem.domain(y[0], y[1]))
    throw Error("initial state outside the validity domain");
  GeoState k1 = rhs(y);
  if (!finite(k1))
    throw Error("right-hand side not finite at the initial state");

  const bool have_guard = static_cast<bool>(problem.guard);
  double gsign = 1.0, gthresh = 0.0;
  if (have_guard) {
    const double g0 = problem.guard(y[0], y[1]);
    gsign = g0 >= 0.0 ? 1.0 : -1.0;
    gthresh = opt.guard_fraction * std::abs(g0);
    traj.guard_value_end = g0;
  }
  auto guard_tripped = [&](const GeoState& s) {
    return gsign * problem.guard(s[0], s[1]) <= gthresh;
  };
  auto domain_violated = [&](const GeoState& s) {
    return problem.domain && !problem.domain(s[0], s[1]);
  };

  traj.samples.push_back({t, y});
  traj.tau_end = t;

  double h = opt.initial_step;
  if (h <= 0.0) {
    // Scaled norms of state and slope pick a first step small enough to
    // resolve the local time scale; fully deterministic.
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      const double sc = opt.atol + opt.rtol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / 4.0);
    d1 = std::sqrt(d1 / 4.0);
    h = (d1 > 1e-10) ? 0.01 * std::max(1e-6, d0 / d1) : 1e-6;
    h = std::min(h, opt.tau_max / 10.0);
  }
  h = std::min(h, opt.tau_max);
  if (!(h > 0.0) || !std::isfinite(h)) h = 1e-6;

  double errold = 1e-4;

  while (true) {
    if (traj.steps_accepted + traj.steps_rejected >= opt.max_steps) {
      traj.termination = Termination::MaxStepsExceeded;
      break;
    }
    if (h < kMinStep) {
      traj.termination = Termination::StepUnderflow;
      break;
    }
    bool last = false;
    if (t + h >= opt.tau_max) {
      h = opt.tau_max - t;
      last = true;
    }

    GeoState y2, y3, y4, y5, y6, ynew;
    for (std::size_t i = 0; i < 4; ++i)
      y2[i] = y[i] + h * kA21 * k1[i];
    GeoState k2 = rhs(y2);
    for (std::size_t i = 0; i < 4; ++i)
      y3[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
    GeoState k3 = rhs(y3);
    for (std::size_t i = 0; i < 4; ++i)
      y4[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    GeoState k4 = rhs(y4);
    for (std::size_t i = 0; i < 4; ++i)
      y5[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] +
                          kA54 * k4[i]);
    GeoState k5 = rhs(y5);
    for (std::size_t i = 0; i < 4; ++i)
      y6[i] = y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] +
                          kA64 * k4[i] + kA65 * k5[i]);
    GeoState k6 = rhs(y6);
    for (std::size_t i = 0; i < 4; ++i)
      ynew[i] = y[i] + h * (kA71 * k1[i] + kA73 * k3[i] + kA74 * k4[i] +
                            kA75 * k5[i] + kA76 * k6[i]);
    GeoState k7 = rhs(ynew);

    double err = 0.0;
    bool bad = !finite(ynew) || !finite(k7);
    if (!bad) {
      for (std::size_t i = 0; i < 4; ++i) {
        const double ei = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] +
                               kE5 * k5[i] + kE6 * k6[i] + kE7 * k7[i]);
        const double sc =
            opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        err += (ei / sc) * (ei / sc);
      }
      err = std::sqrt(err / 4.0);
      if (!std::isfinite(err)) bad = true;
    }

    if (bad) {
      ++traj.steps_rejected;
      h *= 0.5;
      continue;
    }
    if (err > 1.0) {
      ++traj.steps_rejected;
      const double fac =
          std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      h *= fac;
      continue;
    }

    ++traj.steps_accepted;
    const double t_new = last ? opt.tau_max : t + h;

    const bool trip_guard = have_guard && guard_tripped(ynew);
    const bool trip_domain = domain_violated(ynew);
    if (trip_guard || trip_domain) {
      DenseSegment seg;
      for (std::size_t i = 0; i < 4; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        seg.rc[0][i] = y[i];
        seg.rc[1][i] = ydiff;
        seg.rc[2][i] = bspl;
        seg.rc[3][i] = ydiff - h * k7[i] - bspl;
        seg.rc[4][i] = h * (kD1 * k1[i] + kD3 * k3[i] + kD4 * k4[i] +
                            kD5 * k5[i] + kD6 * k6[i] + kD7 * k7[i]);
      }
      auto tripped = [&](const GeoState& s) {
        return (have_guard && guard_tripped(s)) || domain_violated(s);
      };
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 200 && (hi - lo) * h > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (tripped(seg.at(mid)))
          hi = mid;
        else
          lo = mid;
      }
      GeoState y_hi = seg.at(hi);
      if (have_guard && guard_tripped(y_hi)) {
        // Stop on the tripped side: the endpoint sits at the boundary.
        traj.termination = Termination::SingularBoundary;
        traj.tau_end = t + hi * h;
        traj.samples.push_back({traj.tau_end, y_hi});
        if (have_guard)
          traj.guard_value_end = problem.guard(y_hi[0], y_hi[1]);
      } else {
        // Domain exits keep the last valid state.
        GeoState y_lo = seg.at(lo);
        traj.termination = Termination::DomainExit;
        traj.tau_end = t + lo * h;
        if (traj.tau_end > traj.samples.back().tau)
          traj.samples.push_back({traj.tau_end, y_lo});
        if (have_guard)
          traj.guard_value_end = problem.guard(y_lo[0], y_lo[1]);
      }
      break;
    }

    t = t_new;
    y = ynew;
    k1 = k7;  // first-same-as-last
    traj.samples.push_back({t, y});
    traj.tau_end = t;
    if (have_guard) traj.guard_value_end = problem.guard(y[0], y[1]);

    if (last) {
      traj.termination = Termination::ReachedMaxTau;
      break;
    }

    const double fac = std::clamp(
        0.9 * std::pow(std::max(err, 1e-10), -0.17) * std::pow(errold, 0.04),
        0.2, 10.0);
    h *= fac;
    errold = std::max(err, 1e-4);
  }

  return traj;
}

GeodesicTrajectory integrate(const GeodesicProblem& problem) {
  GeodesicRhs rhs(problem.metric);
  return integrate(rhs, problem);
}

IncompletenessReport incompleteness_report(const GeodesicTrajectory& traj,
                                           const VdwParams& params,
                                           double endpoint_tol) {
  if (traj.samples.empty()) throw Error("trajectory holds no samples");
  IncompletenessReport r;
  const GeoState& y = traj.samples.back().y;
  r.U_end = y[0];
  r.V_end = y[1];
  const double d1 = locus_polynomial(r.U_end, r.V_end, params);
  r.residual = std::abs(d1) /
               std::max(1.0, std::abs(r.V_end * r.V_end * r.V_end * r.U_end));
  r.termination = traj.termination;
  if (traj.termination == Termination::SingularBoundary &&
      r.residual < endpoint_tol)
    r.classification = Completeness::IncompleteAtPhaseBoundary;
  else if (traj.termination == Termination::ReachedMaxTau)
    r.classification = Completeness::Complete;
  else
    r.classification = Completeness::OtherTermination;
  return r;
}

std::vector<ShotResult> shoot_batch(const ShootConfig& config,
                                    const std::vector<double>& U0_values) {
  config.params.validate();
  MetricField metric = vdw_metric_closed(config.params);
  GeodesicRhs rhs(metric);
  const double a = config.params.a;
  const double b = config.params.b;
  const VdwParams params = config.params;

  std::vector<ShotResult> out;
  out.reserve(U0_values.size());
  for (double U0 : U0_values) {
    ShotResult res;
    try {
      GeodesicProblem prob;
      prob.metric = metric;
      prob.initial = {U0, config.V0, config.dU0, config.dV0};
      prob.options = config.options;
      prob.domain = [a, b](double U, double V) {
        return V > b && U + a / V > 0.0;
      };
      prob.guard = [params](double U, double V) {
        return curvature_denominator(U, V, params);
      };
      res.trajectory = integrate(rhs, prob);
      res.report =
          incompleteness_report(res.trajectory, params, config.endpoint_tol);
    } catch (const std::exception& ex) {
      res.error = ex.what();
    }
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace gtd
