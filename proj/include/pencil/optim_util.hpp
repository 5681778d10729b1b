#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace pencil {

// Plain Nelder-Mead simplex minimization in R^d (reflection 1, expansion 2,
// contraction 0.5, shrink 0.5).  Deterministic; no restarts.
std::pair<std::vector<double>, double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    double scale, int iters);

}  // namespace pencil
