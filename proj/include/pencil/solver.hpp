#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pencil/certificates.hpp"
#include "pencil/single_pencil.hpp"

namespace pencil {

enum class EliminationOrder { NORM_DESC, NORM_ASC, INDEX };

// One elimination level of the solver: the member fixed at this level, the
// estimated feasible window for its coefficient, and the value chosen.  The
// final two-member level additionally carries the sign-change segment witness
// for the first of the two forms (the constructive core of the reduction).
struct LevelTrace {
  std::size_t member = 0;  // original member index
  double lo = 0.0;
  double hi = 0.0;
  double lambda = 0.0;
  std::optional<ConeWitness> witness;
  double t_minus = 0.0;  // companion root on the sign-flipped segment
};

struct FeasiblePoint {
  std::vector<double> lambda;  // in original member order
  double min_eig = 0.0;        // of A + sum lambda_i B_i
  std::vector<LevelTrace> trace;
};

struct VerifyResult {
  bool feasible = false;
  double min_eig = 0.0;
  double scale = 0.0;  // ||A|| + sum |lambda_i| ||B_i||
};

// Checks A + sum lambda_i B_i >= -tol * scale by full eigendecomposition.
VerifyResult verify_feasible(const HermitianMatrix& a, const PencilFamily& f,
                             const std::vector<double>& lambda, double tol = 1e-7);

// Certifies q_A >= 0 on the common neutral set of the family (the
// multi-parameter positivity hypothesis).  CONFIRMED with vacuous = true when
// the sampled intersection is empty at resolution; REFUTED carries a
// recomputable witness vector.
CertReport neutral_cone_positivity(const HermitianMatrix& a, const PencilFamily& f,
                                   const SamplerBudget& budget);

// Two-parameter solver: pins lambda_1 from the variational window of B_1
// constrained to the neutral set of B_2, then closes with the exact
// one-parameter interval for B_2.  Retries with re-centered window fractions
// and doubled restarts before giving up.  Throws NOT_FEASIBLE when no
// verified point is found (a search failure, not an infeasibility proof).
FeasiblePoint solve_feasible_m2(const HermitianMatrix& a, const HermitianMatrix& b1,
                                const HermitianMatrix& b2, const SamplerBudget& budget,
                                double tol = 1e-7);

// General solver: eliminates members one at a time (largest norm first by
// default), pinning each coefficient at a fraction of its estimated feasible
// window, and recursing on the absorbed pencil; the last two members are
// closed by solve_feasible_m2.  Verified before returning.
FeasiblePoint solve_feasible(const HermitianMatrix& a, const PencilFamily& f,
                             const SamplerBudget& budget, double tol = 1e-7,
                             EliminationOrder order = EliminationOrder::NORM_DESC);

// Segment-root identity: with a = t_plus/(1-t_plus) and b = t_minus/(1-t_minus)
// the product a*b equals -q_B(z_phased)/q_B(y) exactly.  Returns (a*b, rhs);
// throws BAD_ROOT for roots outside (0, 1) and BAD_SIGNS for wrong endpoint
// signs.
std::pair<double, double> ab_identity_check(const HermitianMatrix& b, const CVec& y,
                                            const CVec& z_phased, double t_plus, double t_minus);

}  // namespace pencil
