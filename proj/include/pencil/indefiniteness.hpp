#pragma once

#include <vector>

#include "pencil/budgets.hpp"
#include "pencil/certificates.hpp"
#include "pencil/family.hpp"
#include "pencil/oracle.hpp"
#include "pencil/plane.hpp"

namespace pencil {

// Weak indefiniteness: every nonzero real combination sum mu_i B_i has both a
// negative and a positive eigenvalue.  REFUTED with a witness mu whose
// combination is semidefinite within 1e-9 relative margin; CONFIRMED
// otherwise, at grid + simplex-refinement resolution (never INCONCLUSIVE).
CertReport is_weakly_indefinite(const PencilFamily& f, const CertBudget& budget);

// Sufficient criterion for weak indefiniteness: a common neutral unit vector
// x (q_{B_i}(x) = 0 for all i) at which the real differential stack
// [Re(B_i x); Im(B_i x)] in R^{2n x m} has full column rank.  CONFIRMED is
// sound; INCONCLUSIVE means no qualifying x was found at this budget.
CertReport sufficient_weak_check(const PencilFamily& f, const CertBudget& budget);

// Externally supplied signed witness: claims sign * q_{B_member}(x) > 0 while
// q_{B_i}(x) = 0 for every other member i.
struct SignedWitnessHint {
  std::size_t member = 0;  // 0-based
  int sign = +1;           // +1 or -1
  CVec x;
};

// Indefinite set: every member attains both signs on the common neutral set
// of the other members.  Hints are validated (membership |q_i| <= 1e-9
// relative, sign margin >= 1e-3 relative) before being trusted; failed hints
// fall back to search.  CONFIRMED or INCONCLUSIVE only.
CertReport is_indefinite_set(const PencilFamily& f, const CertBudget& budget,
                             const std::vector<SignedWitnessHint>& hints = {});

// Strong indefiniteness: for every member index i and pair {j, k} of other
// members, all harvested sign-witness pairs x+ in P_i^+ and x- in P_i^- on
// Q_j cap Q_k must have aligned cross terms c_j = <B_j x+, x->,
// c_k = <B_k x+, x->, i.e. Im(c_j conj(c_k)) = 0.  REFUTED on a decisive
// violation (relative misalignment >= 1e-3, recomputable from the witness
// pair); CONFIRMED when all pairs align within 1e-9; INCONCLUSIVE when a trio
// starves or only in-between misalignments appear.  Families of two members
// are CONFIRMED outright once weakly indefinite (no trios exist).
CertReport is_strongly_indefinite(const PencilFamily& f, const CertBudget& budget);

// Plane-section criterion (m >= 3): on every sampled real 2-plane S and every
// member trio whose common neutral sets meet S only at 0, some nonzero
// combination of the three restricted 2x2 forms must be psd.  Planes are half
// uniform, half biased through harvested sign-witness pairs with the phase
// rotated to null one cross term (the adversarial construction).  REFUTED
// with the plane and trio; CONFIRMED is resolution-bounded by design.
CertReport hm_check(const PencilFamily& f, const CertBudget& budget);

}  // namespace pencil
