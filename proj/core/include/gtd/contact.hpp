#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gtd/chart.hpp"
#include "gtd/expression.hpp"
#include "gtd/metric.hpp"

namespace gtd {

// Point on the (2n+1)-dimensional phase manifold with coordinates
// (potential, extensive variables, intensive variables).
struct PhasePoint {
  double potential = 0.0;
  std::vector<double> extensive;
  std::vector<double> intensive;

  std::size_t n() const { return extensive.size(); }
};

// A thermodynamic system given by a fundamental relation: the potential as
// a symbolic expression over the equilibrium chart, with numeric parameter
// values (interaction constants etc.) already substituted in.
struct FundamentalSystem {
  Chart chart;                 // extensive coordinates E^a
  std::string potential_name;  // name of the potential coordinate on the
                               // phase manifold, e.g. "S"
  Expression potential;        // Phi(E), parameters bound

  std::size_t n() const { return chart.dim(); }
};

// Configuration of the metric family G = Theta^2 + L (xi_ab E^a I^b)
// (chi_cd dE^c dI^d) on the phase manifold. Only diagonal constant xi and
// chi are supported: xi is the identity pairing; chi is either the
// identity (first-order-transition variant) or the Lorentzian diag(-1,1,..)
// (second-order variant).
enum class ChiKind { Identity, Lorentzian };

struct GtdMetricSpec {
  double lambda = 1.0;
  ChiKind chi = ChiKind::Identity;
};

// Chart (Phi, E^1..E^n, I^1..I^n) for the phase manifold built over an
// equilibrium chart. Intensive coordinate names are derived from the
// extensive ones ("U" -> "I_U").
Chart phase_chart(const std::string& potential_name, const Chart& equilibrium);
std::string intensive_name(const std::string& extensive_name);

// I_a = dPhi/dE^a evaluated at p (chart order).
std::vector<double> intensive_of(const FundamentalSystem& sys, const Point& p);

// Lift of an equilibrium point to the phase manifold: (Phi(p), p, I(p)).
PhasePoint embed(const FundamentalSystem& sys, const Point& p);

// Value of the contact form Theta = dPhi - I_a dE^a on the pushforward of
// the equilibrium tangent vector v at p. Identically zero along the
// embedding; exposed so the first-law identity is checkable numerically.
double theta_residual(const FundamentalSystem& sys, const Point& p,
                      const std::vector<double>& v);

// Same residual for an explicit phase-space tangent (dPhi, dE, dI) at z,
// without reference to any embedding.
double theta_residual(const PhasePoint& z, double dphi,
                      const std::vector<double>& de,
                      const std::vector<double>& di);

// Coefficient of Theta ^ (dTheta)^n / n! on the volume element
// dPhi ^ dI^1 ^ .. ^ dI^n ^ dE^1 ^ .. ^ dE^n, computed by brute-force
// exterior-algebra expansion. A nonzero constant (+-1) independent of z;
// returning it makes maximal non-integrability checkable.
double contact_nondegeneracy(const PhasePoint& z);

// Total Legendre transformation (forward orientation):
//   E~ = I,  I~ = -E,  Phi~ = Phi - I.E.
// Applying it twice negates (E, I); four times is the identity.
PhasePoint total_legendre(const PhasePoint& z);

// Partial transformation over a 1-based index subset: exchanged pairs as in
// the total map, untouched indices pass through, and the potential drops
// only the exchanged products. Throws Error on an out-of-range index.
PhasePoint partial_legendre(const PhasePoint& z,
                            const std::vector<std::size_t>& subset);

// Symbolic metric G on the phase manifold for an n-dimensional system:
//   G = (dPhi - I_a dE^a)^2 + L (E.I) chi_cd dE^c dI^d,
// symmetrized, over the chart (Phi, E^a, I^a). The n-ary forms use generic
// coordinate names E1..En; the chart forms build over a named equilibrium
// chart so the result can be pulled back along a system's embedding.
MetricField gtd_metric(const GtdMetricSpec& spec, std::size_t n,
                       const std::string& potential_name = "Phi");
MetricField gtd_metric(const GtdMetricSpec& spec, const Chart& equilibrium,
                       const std::string& potential_name);

// The Hessian-generated phase metric Theta^2 + delta_ab dE^a dI^b, and the
// flat metric delta_AB dZ^A dZ^B, both over the same chart. These are the
// reference non-invariant metrics for the invariance check.
MetricField hessian_phase_metric(std::size_t n,
                                 const std::string& potential_name = "Phi");
MetricField hessian_phase_metric(const Chart& equilibrium,
                                 const std::string& potential_name);
MetricField flat_phase_metric(std::size_t n,
                              const std::string& potential_name = "Phi");
MetricField flat_phase_metric(const Chart& equilibrium,
                              const std::string& potential_name);

// Pullback of a phase-manifold metric along the embedding of sys: substitute
// Phi(E), I(E) and contract with the embedding Jacobian. For the
// first-order-variant spec this equals
//   g_bc = L (sum_a E^a dPhi/dE^a) d2Phi/dE^b dE^c.
MetricField induce_metric(const FundamentalSystem& sys,
                          const GtdMetricSpec& spec);

// Pullback of an arbitrary phase metric along the embedding (used to
// cross-check hessian_metric against the Theta^2 + dE dI generator).
MetricField pull_back(const MetricField& G, const FundamentalSystem& sys);

// Plain Hessian metric g^H_ab = d2Phi/dE^a dE^b on the equilibrium chart.
MetricField hessian_metric(const FundamentalSystem& sys);

// Numerical Legendre-invariance verdict for a phase metric: over `trials`
// random draws of a phase point z and tangent w, compares G(z)(w,w) with
// the same component formula in tilde coordinates at the transformed point
// and pushed-forward tangent. PASS iff the max relative deviation < 1e-9.
struct InvarianceReport {
  bool pass = false;
  double max_rel_deviation = 0.0;
  std::size_t trials = 0;
};

InvarianceReport legendre_invariance_check(const MetricField& G, std::size_t n,
                                           std::size_t trials,
                                           std::uint64_t seed = 2026);

}  // namespace gtd
