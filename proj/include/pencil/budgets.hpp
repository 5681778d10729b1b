#pragma once

#include <cstdint>
#include <vector>

namespace pencil {

// Budget for sphere-search based oracles (multi-start first-order descent).
struct SamplerBudget {
  int restarts = 64;
  int iters = 500;
  std::uint64_t seed = 0;

  SamplerBudget with_seed(std::uint64_t s) const {
    SamplerBudget b = *this;
    b.seed = s;
    return b;
  }
  SamplerBudget scaled_restarts(int factor) const {
    SamplerBudget b = *this;
    b.restarts *= factor;
    return b;
  }
};

// Budget for the indefiniteness certifiers.
struct CertBudget {
  int grid = 4096;         // mu-directions tested by the weak certifier
  int pairs = 16;          // witness pairs tested per trio by the strong certifier
  int planes = 256;        // two-dim subspaces tested by the hm certifier
  int sphere_grid = 20000; // coefficient-sphere samples in the 2x2 psd search
  std::uint64_t seed = 0;
  SamplerBudget sampler;   // inherits seed via derive_seed at call sites
};

// Rectangular grid specification for brute-force feasibility scans.
struct GridSpec {
  std::vector<double> lo;  // per-axis lower bounds
  std::vector<double> hi;  // per-axis upper bounds
  int points_per_axis = 21;
  double tol = 1e-9;
};

}  // namespace pencil
