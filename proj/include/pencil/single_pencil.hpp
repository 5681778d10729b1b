#pragma once

#include "pencil/certificates.hpp"
#include "pencil/oracle.hpp"

namespace pencil {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = true;
  double midpoint() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

// The set {lambda : A + lambda B >= 0} for indefinite B is a closed (possibly
// empty, possibly degenerate) interval because lambda -> min_eig(A + lambda B)
// is concave and -> -inf in both directions.  Computed by golden-section
// maximization plus bisection for the crossings of g + tol * s, where
// s = ||A|| + max(|lo|, |hi|) * ||B||.  Throws NOT_INDEFINITE for
// (semi)definite B and UNBOUNDED_BRACKET if no interior maximum is bracketed
// within 60 doublings.
Interval feasible_interval(const HermitianMatrix& a, const HermitianMatrix& b, double tol = 1e-9);

struct RatioBounds {
  double lo = 0.0;  // -inf over q_B > 0 of q_A/q_B
  double hi = 0.0;  // -sup over q_B < 0 of q_A/q_B
};

// Sampled estimates of the interval endpoints through the variational
// characterization; agreement with feasible_interval is a cross-check, not a
// guarantee (sampling can overshoot inward on hard instances).
RatioBounds ratio_bounds(const HermitianMatrix& a, const HermitianMatrix& b,
                         const SamplerBudget& budget);

// Certifies q_A >= 0 on the neutral set {q_B = 0} by sampled refutation
// search.  CONFIRMED with vacuous = true when no unit vector reaches the
// constraint variety at this resolution (B close to definite).  REFUTED comes
// with a recomputable witness vector.
CertReport neutral_positivity(const HermitianMatrix& a, const HermitianMatrix& b,
                              const SamplerBudget& budget);

}  // namespace pencil
