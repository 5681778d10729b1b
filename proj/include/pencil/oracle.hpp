#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pencil/budgets.hpp"
#include "pencil/family.hpp"
#include "pencil/forms.hpp"

namespace pencil {

// Stable stream tags so that every sampling context draws from its own
// deterministic substream of the master seed.
namespace oracle_tags {
inline constexpr std::uint64_t kMinSphere = 1;
inline constexpr std::uint64_t kNeutral = 2;
inline constexpr std::uint64_t kRatioPos = 3;
inline constexpr std::uint64_t kRatioNeg = 4;
inline constexpr std::uint64_t kIndefSet = 5;
inline constexpr std::uint64_t kStrongHarvest = 6;
inline constexpr std::uint64_t kHmPlanes = 7;
inline constexpr std::uint64_t kWeakGrid = 8;
}  // namespace oracle_tags

struct SphereMin {
  double value = 0.0;    // objective at argmin (0 when searching feasibility only)
  CVec argmin;
  double residual2 = 0.0;  // sum_i q_{C_i}(x)^2, unnormalized
  bool feasible = false;   // residual2 <= (1e-8 * max_i ||C_i||)^2
  int from_restart = -1;
};

// Multi-start minimization of q_objective over the unit sphere intersected
// with {q_{C_i} = 0}.  Pass objective = nullptr for pure feasibility search.
// Returns one entry per restart (index = restart id); deterministic for fixed
// budget/seed regardless of PENCIL_THREADS.
std::vector<SphereMin> sphere_search_all(const HermitianMatrix* objective,
                                         const std::vector<const HermitianMatrix*>& constraints,
                                         std::size_t dim, const SamplerBudget& budget,
                                         std::uint64_t purpose_tag,
                                         const std::vector<CVec>* extra_starts = nullptr);

// Best feasible candidate (by objective value, ties to the lowest restart
// index); if no restart reaches the constraint tolerance, the entry with the
// smallest residual is returned with feasible = false.
SphereMin min_on_sphere(const HermitianMatrix& objective,
                        const std::vector<const HermitianMatrix*>& constraints,
                        const SamplerBudget& budget);

// Unit x with q_{B_i}(x) = 0 for all members except `exclude` (pass
// std::nullopt to keep all).  With `avoid` non-null, prefers the feasible
// candidate farthest (phase-invariantly) from the avoid list, enabling
// harvesting of distinct witnesses.  std::nullopt result = sampler starved.
std::optional<CVec> find_common_neutral(const PencilFamily& f, std::optional<std::size_t> exclude,
                                        const SamplerBudget& budget,
                                        const std::vector<CVec>* avoid = nullptr);

struct RatioWitness {
  CVec x;
  double ratio = 0.0;
  double q_b = 0.0;
};

// sign = +1: inf of q_A/q_B over unit x with q_B(x) > 0 and q_{C_i}(x) = 0;
// sign = -1: sup of q_A/q_B over q_B(x) < 0.  Throws SAMPLER_STARVED when no
// start with the requested sign survives the constraint projection.
double ratio_extremum(const HermitianMatrix& a, const HermitianMatrix& b,
                      const std::vector<const HermitianMatrix*>& constraints, int sign,
                      const SamplerBudget& budget, RatioWitness* witness = nullptr);

struct GridResult {
  std::vector<std::vector<double>> feasible_points;
  std::size_t total_points = 0;
};

// Brute-force scan of A + sum lambda_i B_i >= 0 over a rectangular lambda
// grid (lexicographic order, axis 0 slowest).  Feasible means min_eig >=
// -tol * (||A|| + sum |lambda_i| ||B_i||).  GRID_TOO_LARGE for m > 4.
GridResult grid_feasibility(const HermitianMatrix& a, const PencilFamily& f, const GridSpec& spec);

// Threshold used by the engine for "x lies on the constraint variety":
// residual2 <= (1e-8 * max_norm)^2.
double feasibility_threshold2(double max_constraint_norm);

}  // namespace pencil
