#pragma once

#include <vector>

#include "pencil/complexmat.hpp"

namespace pencil {

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ColumnMatrix vectors;        // vectors[k] pairs with values[k]
};

// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps with
// unitary 2x2 rotations.  Deterministic for identical input bits.  Throws
// EIG_NO_CONVERGENCE if the off-diagonal mass fails to vanish in 100 sweeps
// (not observed in practice for n <= a few hundred).
EigenDecomposition eig(const HermitianMatrix& m);

double min_eig(const HermitianMatrix& m);
double max_eig(const HermitianMatrix& m);

// Operator 2-norm: max |eigenvalue|.
double spectral_norm(const HermitianMatrix& m);

enum class DefinitenessKind { ZERO, POSITIVE_DEFINITE, NEGATIVE_DEFINITE, POSITIVE_SEMIDEFINITE, NEGATIVE_SEMIDEFINITE, INDEFINITE };

inline const char* definiteness_name(DefinitenessKind k) {
  switch (k) {
    case DefinitenessKind::ZERO: return "ZERO";
    case DefinitenessKind::POSITIVE_DEFINITE: return "POSITIVE_DEFINITE";
    case DefinitenessKind::NEGATIVE_DEFINITE: return "NEGATIVE_DEFINITE";
    case DefinitenessKind::POSITIVE_SEMIDEFINITE: return "POSITIVE_SEMIDEFINITE";
    case DefinitenessKind::NEGATIVE_SEMIDEFINITE: return "NEGATIVE_SEMIDEFINITE";
    case DefinitenessKind::INDEFINITE: return "INDEFINITE";
  }
  return "UNKNOWN";
}

struct Classification {
  DefinitenessKind kind;
  double min_eigenvalue;
  double max_eigenvalue;
};

// Sign pattern of the spectrum at absolute tolerance `tol`; if tol < 0 (the
// default) it is taken as 1e-9 * spectral_norm(m).
Classification classify(const HermitianMatrix& m, double tol = -1.0);

}  // namespace pencil
