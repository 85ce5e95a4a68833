#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gtd/contact.hpp"
#include "gtd/metric.hpp"

namespace gtd {

// Interaction constant a, covolume b, metric constant lambda. a = b = 0 is
// the ideal-gas limit.
struct VdwParams {
  double a = 1.0;
  double b = 1.0;
  double lambda = 1.0;

  void validate() const;  // throws Error on a<0, b<0, or lambda==0
};

// (U, V) state. Valid iff V > b and U + a/V > 0 (the logarithm arguments
// of the fundamental relation).
struct StatePoint {
  double U = 0.0;
  double V = 0.0;
};

bool state_valid(const VdwParams& params, const StatePoint& p);

// Fundamental relation S(U,V) = (3/2) ln(U + a/V) + ln(V - b) on chart
// (U, V), parameters substituted as exact rationals when possible.
FundamentalSystem vdw_system(const VdwParams& params);

// Closed forms T = (2/3)(U + a/V), P = (2UV^2 - aV + 3ab)/(3V^2(V-b)).
// These agree with the derivatives of the fundamental relation:
// T = 1/I_U, P = I_V/I_U.
std::pair<double, double> temperature_pressure(const VdwParams& params,
                                               const StatePoint& p);

// Direct transcription of the induced-metric closed form:
//   g = (L/2) D/( (UV+a)^3 (V-b) ) [ -(3/2)V^2 dU^2 + 3a dU dV
//                                    - W/(2V^2(V-b)^2) dV^2 ],
//   D = 5UV^2 - 3UVb - aV + 3ab,
//   W = 2V^4U^2 - 2V^3Ua - a^2V^2 + 12aV^2bU + 6Vba^2 - 6ab^2UV - 3b^2a^2.
// Built independently of induce_metric so the two can cross-check.
MetricField vdw_metric_closed(const VdwParams& params);

// Root of the phase-transition cubic P V^3 - a V + 2 a b with V > b.
struct LocusRoot {
  double V = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;  // |P V^3 - a V + 2 a b|
  int multiplicity = 1;   // 2 at the critical pressure (tangential root)
};

struct SingularLocusReport {
  double pressure = 0.0;
  VdwParams params;
  std::vector<LocusRoot> roots;  // ascending in V
};

// All real roots V > b of the cubic at pressure P, by monotone-piece
// bracketing and bisection to abs. 1e-13. Tangential (double) roots at the
// critical pressure are caught by splitting the scan at the cubic's
// stationary point. Requires P > 0; an empty root list is a valid outcome.
SingularLocusReport singular_locus(double P, const VdwParams& params);

// Both sides of the two denominator factorizations, evaluated with P from
// the closed form:
//   V^3 U - 2V^2 a + 6V b a - 3b^2 a   =  (3/2)(V-b)(P V^3 - aV + 2ab)
//   5U V^2 - 3U V b - aV + 3ab         =  3V(V-b)(U + PV)
struct FactorCheck {
  double lhs1 = 0.0, rhs1 = 0.0;
  double lhs2 = 0.0, rhs2 = 0.0;
};

FactorCheck denominator_factor_check(const VdwParams& params,
                                     const StatePoint& p);

// Energy on the curvature-singular locus at volume V:
//   U = (2V^2 a - 6V b a + 3 b^2 a) / V^3,
// the root of the first factorization's left side in U.
double phase_boundary_energy(double V, const VdwParams& params);

// The locus polynomial itself, D1(U,V) = V^3 U - 2V^2 a + 6V b a - 3b^2 a.
// Endpoint residuals of incompleteness reports are measured against it.
double locus_polynomial(double U, double V, const VdwParams& params);

// Denominator of the scalar curvature in closed form, D1^2 * D2^3 with
// D2 = 5UV^2 - 3UVb - aV + 3ab. The singular-proximity guard for shooting:
// it vanishes on every curve where the metric degenerates, including the
// U < 0 branch where D2 itself has zeros.
double curvature_denominator(double U, double V, const VdwParams& params);

double critical_pressure(const VdwParams& params);  // a/(27 b^2), b > 0
double critical_volume(const VdwParams& params);    // 3 b

}  // namespace gtd
