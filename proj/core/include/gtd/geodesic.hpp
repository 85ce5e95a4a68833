#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gtd/compiled.hpp"
#include "gtd/geometry.hpp"
#include "gtd/metric.hpp"
#include "gtd/vdw.hpp"

namespace gtd {

// State (E^1, E^2, dE^1/dtau, dE^2/dtau) for the first-order form of the
// geodesic equations on a 2-dimensional chart.
using GeoState = std::array<double, 4>;

enum class Termination {
  ReachedMaxTau,
  SingularBoundary,   // proximity guard tripped near the curvature locus
  DomainExit,         // state left the validity domain
  StepUnderflow,      // adaptive step fell below 1e-12
  MaxStepsExceeded,
};

std::string to_string(Termination t);

struct GeodesicOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double tau_max = 100.0;
  std::size_t max_steps = 1000000;
  // Guard trip: guard(E) < guard_fraction * guard(E(0)). The guard function
  // is the curvature-denominator polynomial for van der Waals problems;
  // absent a guard, only domain/step criteria terminate.
  double guard_fraction = 1e-6;
  double initial_step = 0.0;  // 0 = choose automatically
};

struct GeodesicProblem {
  MetricField metric;                 // 2-dimensional chart
  GeoState initial{};                 // (E(0), Edot(0))
  GeodesicOptions options{};
  // Optional guards. domain(E) false => DomainExit. guard(E) is the
  // positive-at-start proximity function for SingularBoundary stops.
  std::function<bool(double, double)> domain;
  std::function<double(double, double)> guard;
};

struct GeodesicSample {
  double tau;
  GeoState y;
};

struct GeodesicTrajectory {
  std::vector<GeodesicSample> samples;  // tau strictly increasing
  Termination termination = Termination::ReachedMaxTau;
  double tau_end = 0.0;
  double guard_value_end = 0.0;  // guard at the endpoint, if a guard was set
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;
};

// Right-hand side d(E, Edot)/dtau = (Edot, +Gamma^a_bc Edot^b Edot^c) with
// the Christoffel symbols evaluated numerically at E. Returns NaN components
// on singular evaluation.
//
// Orientation: the curvature coupling enters with the sign REVERSED relative
// to the arc-length variational convention (which would be -Gamma Edot
// Edot). With the reversed coupling, van der Waals quasi-static paths flow
// into the degeneracy locus of the metric and terminate there, which is the
// behavior the incompleteness classification relies on; the variational
// convention drives the same initial data toward the flat large-volume
// region instead. Flat metrics still yield straight lines, and motion along
// a 2-sphere equator is unaffected, since all coupling terms vanish on those
// trajectories.
class GeodesicRhs {
 public:
  GeodesicRhs(const MetricField& metric, const SimplifyOptions& opts = {});

  std::array<double, 4> operator()(const GeoState& y) const;
  const Chart& chart() const { return chart_; }

 private:
  Chart chart_;
  // Compiled Gamma^a_bc for b <= c: three lower pairs per upper index a.
  std::array<CompiledExpr, 6> gamma_;
};

// Adaptive embedded Runge-Kutta 4(5) (Dormand-Prince coefficients, PI step
// control) with dense output used to refine guard/domain stopping times.
// Deterministic: identical problems produce identical trajectories bitwise.
GeodesicTrajectory integrate(const GeodesicProblem& problem);

GeodesicTrajectory integrate(const GeodesicRhs& rhs,
                             const GeodesicProblem& problem);

enum class Completeness {
  IncompleteAtPhaseBoundary,
  Complete,
  OtherTermination,
};

std::string to_string(Completeness c);

struct IncompletenessReport {
  double U_end = 0.0;
  double V_end = 0.0;
  double residual = 0.0;  // |D1(U,V)| / max(1, |V^3 U|) at the endpoint
  Completeness classification = Completeness::OtherTermination;
  Termination termination = Termination::ReachedMaxTau;
};

// Classifies a van der Waals trajectory endpoint against the singular
// locus: singular-boundary stops with residual below `endpoint_tol` are
// incomplete-at-phase-boundary, max-tau stops are complete, the rest are
// other-termination.
IncompletenessReport incompleteness_report(const GeodesicTrajectory& traj,
                                           const VdwParams& params,
                                           double endpoint_tol = 1e-2);

struct ShotResult {
  GeodesicTrajectory trajectory;
  IncompletenessReport report;
  std::optional<std::string> error;  // per-item failure, batch continues
};

// Shooting sweep: one integration per U(0) value with shared (V(0),
// dU(0), dV(0)) and options. Output order matches input order.
struct ShootConfig {
  VdwParams params;
  double V0 = 0.1;
  double dU0 = 0.0;
  double dV0 = 1.0;
  GeodesicOptions options{};
  double endpoint_tol = 1e-2;
};

std::vector<ShotResult> shoot_batch(const ShootConfig& config,
                                    const std::vector<double>& U0_values);

}  // namespace gtd
